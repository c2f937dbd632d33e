#include "valdetect/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

namespace valdetect {

namespace {

constexpr std::uint32_t kMaxQ = 1u << 22;
constexpr std::uint32_t kAddTableQ = 256;

std::vector<std::uint32_t> digits(std::uint32_t a, std::uint32_t p, std::uint32_t k) {
  std::vector<std::uint32_t> d(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    d[i] = a % p;
    a /= p;
  }
  return d;
}

std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
  return a;
}

// Product of codes in GF(p)[z]/(modulus) without tables; used to build them.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p,
                       const std::vector<std::uint32_t>& m) {
  const std::uint32_t k = static_cast<std::uint32_t>(m.size() - 1);
  auto da = digits(a, p, k), db = digits(b, p, k);
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(da[i]) * db[j]) % p;
  for (std::uint32_t i = 2 * k; i-- > k;) {
    std::uint64_t c = prod[i];
    if (c == 0) continue;
    for (std::uint32_t j = 0; j <= k; ++j)
      prod[i - k + j] = (prod[i - k + j] + (p - c) * m[j]) % p;
  }
  std::vector<std::uint32_t> r(k);
  for (std::uint32_t i = 0; i < k; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
  return undigits(r, p);
}

bool is_prime32(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

GF::GF(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), modulus_(std::move(modulus)) {
  k_ = static_cast<std::uint32_t>(modulus_.size() - 1);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k_; ++i) q *= p_;
  if (q > kMaxQ) throw Error(Errc::UnsupportedField, "field too large for tables");
  q_ = static_cast<std::uint32_t>(q);

  neg_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    auto d = digits(a, p_, k_);
    for (auto& x : d) x = (p_ - x) % p_;
    neg_[a] = undigits(d, p_);
  }

  log_.assign(q_, 0);
  exp_.assign(q_ - 1 + 1, 0);
  for (std::uint32_t g = 1; g < q_ || q_ == 2; ++g) {
    if (q_ == 2) {
      gen_ = 1;
      exp_[0] = 1;
      log_[1] = 0;
      break;
    }
    std::uint32_t x = 1, ord = 0;
    do {
      x = slow_mul(x, g, p_, modulus_);
      ++ord;
    } while (x != 1);
    if (ord != q_ - 1) continue;
    gen_ = g;
    x = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = x;
      log_[x] = i;
      x = slow_mul(x, g, p_, modulus_);
    }
    break;
  }

  if (q_ <= kAddTableQ) {
    addtab_.resize(std::size_t(q_) * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        auto da = digits(a, p_, k_), db = digits(b, p_, k_);
        for (std::uint32_t i = 0; i < k_; ++i) da[i] = (da[i] + db[i]) % p_;
        addtab_[std::size_t(a) * q_ + b] = undigits(da, p_);
      }
  }
}

std::shared_ptr<const GF> GF::make(std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const GF>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  auto made = build(q);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(q, made).first->second;
}

std::shared_ptr<const GF> GF::build(std::uint32_t q) {
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) throw Error(Errc::UnsupportedField, "field size must be a prime power");
  std::uint32_t k = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw Error(Errc::UnsupportedField, "field size must be a prime power");
  if (k == 1) return std::shared_ptr<const GF>(new GF(p, {0, 1}));
  auto fp = make(p);
  // Walk monic polynomials of degree k with c0 the most significant key.
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly m(k + 1);
    std::uint64_t x = idx;
    for (std::uint32_t i = k; i-- > 0;) {
      m[i] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
    m[k] = 1;
    if (poly::is_irreducible(*fp, m)) return std::shared_ptr<const GF>(new GF(p, m));
  }
  throw Error(Errc::UnsupportedField, "no irreducible polynomial found");
}

std::shared_ptr<const GF> GF::make_ext(std::uint32_t p,
                                       const std::vector<std::uint32_t>& modulus) {
  if (!is_prime32(p)) throw Error(Errc::UnsupportedField, "characteristic must be prime");
  if (modulus.size() < 2 || modulus.back() != 1)
    throw Error(Errc::UnsupportedField, "modulus must be monic of positive degree");
  if (modulus.size() == 2) return make(p);
  auto fp = make(p);
  if (!poly::is_irreducible(*fp, modulus))
    throw Error(Errc::UnsupportedField, "modulus is reducible");
  return std::shared_ptr<const GF>(new GF(p, modulus));
}

std::uint32_t GF::add(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  if (!addtab_.empty()) return addtab_[std::size_t(a) * q_ + b];
  if (p_ == 2) return a ^ b;
  std::uint32_t r = 0, m = 1;
  while (a || b) {
    std::uint32_t d = a % p_ + b % p_;
    if (d >= p_) d -= p_;
    r += d * m;
    m *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

std::uint32_t GF::neg(std::uint32_t a) const { return neg_[a]; }

std::uint32_t GF::inv(std::uint32_t a) const {
  if (a == 0) throw Error(Errc::ZeroElement, "inverse of zero");
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

std::uint32_t GF::pow(std::uint32_t a, const Int& e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw Error(Errc::ZeroElement, "negative power of zero");
    return 0;
  }
  Int r = mod_floor(Int(log_[a]) * mod_floor(e, Int(q_ - 1)), Int(q_ - 1));
  return exp_[static_cast<std::uint32_t>(r)];
}

std::uint32_t GF::log(std::uint32_t a) const {
  if (a == 0) throw Error(Errc::ZeroElement, "logarithm of zero");
  return log_[a];
}

std::uint32_t GF::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint32_t>(r);
}

std::string GF::to_string(std::uint32_t a) const {
  if (k_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  auto d = digits(a, p_, k_);
  std::string out;
  for (std::uint32_t i = k_; i-- > 0;) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
      continue;
    }
    if (d[i] != 1) out += std::to_string(d[i]) + "*";
    out += "z";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace poly {

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly add(const GF& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

Poly sub(const GF& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

Poly mul(const GF& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

Poly scale(const GF& f, const Poly& a, std::uint32_t c) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const GF& f, const Poly& a, const Poly& b) {
  if (b.empty()) throw Error(Errc::ZeroElement, "polynomial division by zero");
  Poly r = a;
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, 0);
  const std::uint32_t inv_lc = f.inv(b.back());
  for (std::size_t i = r.size(); i-- >= b.size();) {
    std::uint32_t c = f.mul(r[i], inv_lc);
    const std::size_t s = i - (b.size() - 1);
    q[s] = c;
    if (c != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[s + j] = f.sub(r[s + j], f.mul(c, b[j]));
    if (i == 0) break;
  }
  trim(q);
  trim(r);
  return {q, r};
}

Poly mod(const GF& f, const Poly& a, const Poly& b) { return divmod(f, a, b).second; }

std::uint32_t lc(const Poly& a) { return a.empty() ? 0 : a.back(); }

Poly monic(const GF& f, const Poly& a) {
  if (a.empty()) return a;
  return scale(f, a, f.inv(a.back()));
}

Poly gcd(const GF& f, const Poly& a0, const Poly& b0) {
  Poly a = a0, b = b0;
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

Poly powmod(const GF& f, const Poly& a, const Int& e, const Poly& m) {
  Poly r = mod(f, Poly{1}, m), b = mod(f, a, m);
  Int x = e;
  while (x > 0) {
    if ((x & 1) != 0) r = mod(f, mul(f, r, b), m);
    x >>= 1;
    if (x > 0) b = mod(f, mul(f, b, b), m);
  }
  return r;
}

Poly deriv(const GF& f, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = f.mul(f.from_int(static_cast<std::int64_t>(i % f.p())), a[i]);
  trim(r);
  return r;
}

std::uint32_t eval(const GF& f, const Poly& a, std::uint32_t x) {
  std::uint32_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
  return r;
}

namespace {

const Poly kX{0, 1};

Poly frob_pow(const GF& f, const Poly& base, std::uint64_t times, const Poly& m) {
  Poly h = base;
  for (std::uint64_t i = 0; i < times; ++i) h = powmod(f, h, Int(f.q()), m);
  return h;
}

// p-th root of a polynomial all of whose exponents are multiples of p.
Poly pth_root(const GF& f, const Poly& a) {
  Poly r;
  Int e = Int(f.q()) / f.p();
  for (std::size_t i = 0; i < a.size(); i += f.p()) r.push_back(f.pow(a[i], e));
  trim(r);
  return r;
}

std::vector<std::pair<Poly, int>> squarefree(const GF& f, const Poly& a) {
  std::vector<std::pair<Poly, int>> out;
  Poly c = gcd(f, a, deriv(f, a));
  Poly w = divmod(f, a, c).first;
  int i = 1;
  while (deg(w) > 0) {
    Poly y = gcd(f, w, c);
    Poly fac = divmod(f, w, y).first;
    if (deg(fac) > 0) out.push_back({monic(f, fac), i});
    w = y;
    c = divmod(f, c, y).first;
    ++i;
  }
  if (deg(c) > 0) {
    for (auto& [g, m] : squarefree(f, pth_root(f, c)))
      out.push_back({g, m * static_cast<int>(f.p())});
  }
  return out;
}

std::vector<std::pair<Poly, int>> distinct_degree(const GF& f, Poly a) {
  std::vector<std::pair<Poly, int>> out;
  Poly h = kX;
  for (int d = 1; 2 * d <= deg(a); ++d) {
    h = powmod(f, h, Int(f.q()), a);
    Poly g = gcd(f, a, sub(f, h, kX));
    if (deg(g) > 0) {
      out.push_back({g, d});
      a = divmod(f, a, g).first;
      h = mod(f, h, a);
    }
  }
  if (deg(a) > 0) out.push_back({monic(f, a), deg(a)});
  return out;
}

void equal_degree(const GF& f, const Poly& a, int d, std::mt19937_64& rng,
                  std::vector<Poly>& out) {
  if (deg(a) == d) {
    out.push_back(monic(f, a));
    return;
  }
  const int n = deg(a);
  while (true) {
    Poly r(n);
    for (auto& c : r) c = static_cast<std::uint32_t>(rng() % f.q());
    trim(r);
    if (deg(r) < 1) continue;
    Poly b;
    if (f.p() == 2) {
      Poly t = r, s = r;
      for (std::uint64_t i = 1; i < std::uint64_t(f.k()) * d; ++i) {
        s = mod(f, mul(f, s, s), a);
        t = add(f, t, s);
      }
      b = t;
    } else {
      Int e = (ipow(Int(f.q()), d) - 1) / 2;
      b = sub(f, powmod(f, r, e, a), Poly{1});
    }
    Poly g = gcd(f, a, b);
    if (deg(g) > 0 && deg(g) < n) {
      equal_degree(f, g, d, rng, out);
      equal_degree(f, divmod(f, a, g).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

bool canonical_less(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool is_irreducible(const GF& f, const Poly& a0) {
  if (deg(a0) < 1) return false;
  Poly a = monic(f, a0);
  const int n = deg(a);
  if (n == 1) return true;
  if (!sub(f, frob_pow(f, kX, n, a), kX).empty()) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool prime = true;
    for (int s = 2; s * s <= r; ++s)
      if (r % s == 0) prime = false;
    if (!prime) continue;
    Poly h = frob_pow(f, kX, n / r, a);
    if (deg(gcd(f, a, sub(f, h, kX))) > 0) return false;
  }
  return true;
}

std::int64_t valuation(const GF& f, Poly a, const Poly& p) {
  if (a.empty()) throw Error(Errc::ZeroElement, "valuation of zero");
  std::int64_t v = 0;
  while (true) {
    auto [q, r] = divmod(f, a, p);
    if (!r.empty()) return v;
    a = std::move(q);
    ++v;
  }
}

std::vector<std::pair<Poly, int>> factor(const GF& f, const Poly& a) {
  if (a.empty()) throw Error(Errc::ZeroElement, "factorization of zero");
  std::vector<std::pair<Poly, int>> out;
  std::mt19937_64 rng(0x76616c64u);
  for (auto& [sf, m] : squarefree(f, monic(f, a)))
    for (auto& [g, d] : distinct_degree(f, sf)) {
      std::vector<Poly> parts;
      equal_degree(f, g, d, rng, parts);
      for (auto& pp : parts) out.push_back({pp, m});
    }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return canonical_less(x.first, y.first); });
  return out;
}

}  // namespace poly

}  // namespace valdetect
