#include "valdetect/coeffmod.hpp"

#include <algorithm>

namespace valdetect {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::UnsupportedField: return "UnsupportedField";
    case Errc::UnsupportedValuation: return "UnsupportedValuation";
    case Errc::InvalidWindow: return "InvalidWindow";
    case Errc::NotInDecomposition: return "NotInDecomposition";
    case Errc::RankNotTwo: return "RankNotTwo";
    case Errc::NotQuasiIndependent: return "NotQuasiIndependent";
    case Errc::NotValuative: return "NotValuative";
    case Errc::MainClaimViolated: return "MainClaimViolated";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::FrameMismatch: return "FrameMismatch";
    case Errc::NoRootsOfUnity: return "NoRootsOfUnity";
    case Errc::WrongLevel: return "WrongLevel";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Int ipow(const Int& base, std::uint64_t e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

Int mod_floor(const Int& x, const Int& m) {
  Int r = x % m;
  if (r < 0) r += m;
  return r;
}

std::string to_dec(const Int& x) { return x.str(); }

namespace {

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Level::Level(std::uint64_t ell, std::uint64_t n) : ell_(ell), n_(n) {
  if (!is_prime_u64(ell))
    throw Error(Errc::PreconditionViolated,
                "ell must be prime, got " + std::to_string(ell));
  if (n < 1) throw Error(Errc::PreconditionViolated, "level n must be >= 1");
  mod_ = ipow(Int(ell), n);
}

std::uint64_t Level::val(const Int& x) const {
  Int y = reduce(x);
  if (y == 0) return n_;
  std::uint64_t v = 0;
  const Int l(ell_);
  while (y % l == 0) {
    y /= l;
    ++v;
  }
  return v;
}

Int Level::unit_inverse(const Int& u) const {
  // Extended Euclid on (u, l^n).
  Int a = reduce(u), b = mod_, x0 = 1, x1 = 0;
  while (b != 0) {
    Int q = a / b;
    Int t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw Error(Errc::PreconditionViolated, "not a unit mod l^n");
  return reduce(x0);
}

Coeff Coeff::operator+(const Coeff& o) const {
  if (lv_ != o.lv_) throw Error(Errc::LevelMismatch, "coefficient levels differ");
  return Coeff(v_ + o.v_, lv_);
}

Coeff Coeff::operator-(const Coeff& o) const {
  if (lv_ != o.lv_) throw Error(Errc::LevelMismatch, "coefficient levels differ");
  return Coeff(v_ - o.v_, lv_);
}

Coeff Coeff::operator*(const Coeff& o) const {
  if (lv_ != o.lv_) throw Error(Errc::LevelMismatch, "coefficient levels differ");
  return Coeff(v_ * o.v_, lv_);
}

Coeff Coeff::reduce_to(std::uint64_t n) const {
  if (n > lv_.n()) throw Error(Errc::LevelMismatch, "cannot lift a coefficient");
  return Coeff(v_, Level(lv_.ell(), n));
}

Int index_M(std::uint64_t r, const Int& n) {
  if (r < 1 || n < 1)
    throw Error(Errc::PreconditionViolated, "index_M needs r, n >= 1");
  return Int(r + 1) * n - Int(r);
}

IndexN index_N(std::uint64_t ell, std::uint64_t n) {
  if (n < 1) throw Error(Errc::PreconditionViolated, "index_N needs n >= 1");
  Int lp = ipow(Int(ell), 3 * n - 2);
  Int np = (6 * lp - 7) * Int(n - 1) + Int(3 * n - 2);
  return {np, index_M(1, np)};
}

bool cancellation_holds(const Coeff& a, const Coeff& b,
                        const std::vector<Coeff>& cs, std::uint64_t n,
                        bool check) {
  const Level& lv = a.level();
  if (b.level() != lv) throw Error(Errc::LevelMismatch, "a and b at different levels");
  for (const auto& c : cs)
    if (c.level() != lv) throw Error(Errc::LevelMismatch, "c_i at a different level");
  if (n > lv.n()) throw Error(Errc::LevelMismatch, "n exceeds the working level");
  if (check) {
    const std::uint64_t r = cs.size();
    if (r >= 1 && Int(lv.n()) < index_M(r, Int(n)))
      throw Error(Errc::PreconditionViolated, "working level below M_r(n)");
    const Int ln = ipow(Int(lv.ell()), n);
    for (const auto& c : cs)
      if (c.value() % ln == 0)
        throw Error(Errc::PreconditionViolated, "some c_i vanishes mod l^n");
    Coeff pa = a, pb = b;
    for (const auto& c : cs) {
      pa = pa * c;
      pb = pb * c;
    }
    if (!(pa == pb))
      throw Error(Errc::PreconditionViolated, "a*prod(c) != b*prod(c)");
  }
  return a.reduce_to(n) == b.reduce_to(n);
}

namespace {

bool row_is_zero(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
}

void axpy_mod(Row& y, const Int& q, const Row& x, const Int& m) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i] != 0) y[i] = mod_floor(y[i] - q * x[i], m);
}

}  // namespace

HowellForm howell(const std::vector<Row>& gens, std::size_t ncols,
                  const Level& lv) {
  const Int& m = lv.modulus();
  std::vector<Row> pool;
  pool.reserve(gens.size());
  for (const auto& g : gens) {
    if (g.size() != ncols) throw Error(Errc::LevelMismatch, "row width mismatch");
    Row r(ncols);
    for (std::size_t i = 0; i < ncols; ++i) r[i] = mod_floor(g[i], m);
    if (!row_is_zero(r)) pool.push_back(std::move(r));
  }
  HowellForm h{lv, ncols, {}, {}, {}};
  for (std::size_t c = 0; c < ncols && !pool.empty(); ++c) {
    std::size_t best = pool.size();
    std::uint64_t bv = lv.n();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i][c] == 0) continue;
      std::uint64_t v = lv.val(pool[i][c]);
      if (v < bv) {
        bv = v;
        best = i;
      }
    }
    if (best == pool.size()) continue;
    Row piv = std::move(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    const Int pw = lv.power(bv);
    const Int inv = lv.unit_inverse(piv[c] / pw);
    for (auto& e : piv) e = mod_floor(e * inv, m);
    for (auto& r : pool)
      if (r[c] != 0) axpy_mod(r, r[c] / pw, piv, m);
    pool.erase(std::remove_if(pool.begin(), pool.end(), row_is_zero), pool.end());
    Row t(ncols);
    const Int kill = lv.power(lv.n() - bv);
    for (std::size_t i = 0; i < ncols; ++i) t[i] = mod_floor(piv[i] * kill, m);
    if (!row_is_zero(t)) pool.push_back(std::move(t));
    h.rows.push_back(std::move(piv));
    h.pivot_col.push_back(c);
    h.pivot_val.push_back(bv);
  }
  for (std::size_t i = 0; i < h.rows.size(); ++i) {
    const Int pw = lv.power(h.pivot_val[i]);
    const std::size_t c = h.pivot_col[i];
    for (std::size_t j = 0; j < i; ++j) {
      const Int q = h.rows[j][c] / pw;
      if (q != 0) axpy_mod(h.rows[j], q, h.rows[i], m);
    }
  }
  return h;
}

std::vector<Int> HowellForm::coordinates(const Row& x0) const {
  if (x0.size() != ncols) throw Error(Errc::LevelMismatch, "row width mismatch");
  const Int& m = level.modulus();
  Row x(ncols);
  for (std::size_t i = 0; i < ncols; ++i) x[i] = mod_floor(x0[i], m);
  std::vector<Int> coords(rows.size());
  std::size_t j = 0;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (j < rows.size() && pivot_col[j] == c) {
      const Int pw = level.power(pivot_val[j]);
      if (x[c] % pw != 0) return {};
      coords[j] = x[c] / pw;
      if (coords[j] != 0) axpy_mod(x, coords[j], rows[j], m);
      ++j;
    } else if (x[c] != 0) {
      return {};
    }
  }
  if (coords.empty()) coords.push_back(0);  // marks success for the zero module
  return coords;
}

bool HowellForm::contains(const Row& x) const { return !coordinates(x).empty(); }

std::uint64_t HowellForm::log_size() const {
  std::uint64_t s = 0;
  for (auto v : pivot_val) s += level.n() - v;
  return s;
}

std::vector<Row> left_kernel(const std::vector<Row>& a, std::size_t m,
                             const Level& lv) {
  const std::size_t k = a.size();
  std::vector<Row> aug;
  aug.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i].size() != m) throw Error(Errc::LevelMismatch, "row width mismatch");
    Row r(a[i]);
    r.resize(m + k);
    r[m + i] = 1;
    aug.push_back(std::move(r));
  }
  HowellForm h = howell(aug, m + k, lv);
  std::vector<Row> out;
  for (std::size_t j = 0; j < h.rows.size(); ++j) {
    if (h.pivot_col[j] < m) continue;
    out.emplace_back(h.rows[j].begin() + static_cast<std::ptrdiff_t>(m),
                     h.rows[j].end());
  }
  return out;
}

std::vector<QuasiBasisElem> quasi_basis(const FinMod& fm) {
  const Level& lv = fm.level;
  const Int& mod = lv.modulus();
  const std::size_t k = fm.gens.size();
  std::vector<Row> mat;
  for (const auto& r : fm.relations) {
    if (r.size() != k) throw Error(Errc::LevelMismatch, "relation width mismatch");
    Row x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = mod_floor(r[i], mod);
    if (!row_is_zero(x)) mat.push_back(std::move(x));
  }
  std::vector<Row> qinv(k, Row(k));
  for (std::size_t i = 0; i < k; ++i) qinv[i][i] = 1;
  std::vector<std::uint64_t> diag(k, lv.n());

  for (std::size_t t = 0; t < k && t < mat.size(); ++t) {
    // Smallest valuation in the trailing block; ties go to the lowest
    // generator (column) index, then the lowest row.
    std::size_t bi = 0, bj = k;
    std::uint64_t bv = lv.n();
    for (std::size_t j = t; j < k; ++j)
      for (std::size_t i = t; i < mat.size(); ++i) {
        if (mat[i][j] == 0) continue;
        std::uint64_t v = lv.val(mat[i][j]);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bj == k) break;
    std::swap(mat[bi], mat[t]);
    if (bj != t) {
      for (auto& r : mat) std::swap(r[bj], r[t]);
      std::swap(qinv[bj], qinv[t]);
    }
    const Int pw = lv.power(bv);
    const Int inv = lv.unit_inverse(mat[t][t] / pw);
    for (auto& e : mat[t]) e = mod_floor(e * inv, mod);
    for (std::size_t i = 0; i < mat.size(); ++i)
      if (i != t && mat[i][t] != 0) axpy_mod(mat[i], mat[i][t] / pw, mat[t], mod);
    for (std::size_t c = t + 1; c < k; ++c) {
      if (mat[t][c] == 0) continue;
      const Int q = mat[t][c] / pw;
      for (auto& r : mat) r[c] = mod_floor(r[c] - q * r[t], mod);
      for (std::size_t i = 0; i < k; ++i)
        qinv[t][i] = mod_floor(qinv[t][i] + q * qinv[c][i], mod);
    }
    diag[t] = bv;
  }

  std::vector<QuasiBasisElem> out;
  for (std::size_t t = 0; t < k; ++t)
    if (diag[t] > 0) out.push_back({qinv[t], lv.power(diag[t])});
  std::stable_sort(out.begin(), out.end(),
                   [](const QuasiBasisElem& a, const QuasiBasisElem& b) {
                     return a.order > b.order;
                   });
  return out;
}

bool submodule_contains(const FinMod& m, const std::vector<Row>& gens,
                        const Row& x) {
  const std::size_t k = m.gens.size();
  if (x.size() != k) throw Error(Errc::LevelMismatch, "vector width mismatch");
  std::vector<Row> all(gens);
  for (const auto& g : all)
    if (g.size() != k) throw Error(Errc::LevelMismatch, "vector width mismatch");
  all.insert(all.end(), m.relations.begin(), m.relations.end());
  return howell(all, k, m.level).contains(x);
}

std::size_t dim_mod_ell(const FinMod& m) { return quasi_basis(m).size(); }

}  // namespace valdetect
