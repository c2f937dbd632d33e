#include "valdetect/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>

namespace valdetect {

namespace {

using SlotMap = std::map<ClassVec, std::uint64_t>;
constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

void keep_min(SlotMap& m, const ClassVec& k, std::uint64_t slot) {
  auto [it, inserted] = m.emplace(k, slot);
  if (!inserted && slot < it->second) it->second = slot;
}

std::vector<std::pair<ClassVec, std::uint64_t>> by_slot(const SlotMap& m) {
  std::vector<std::pair<ClassVec, std::uint64_t>> v(m.begin(), m.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return v;
}

ClassVec concat(const ClassVec& a, const ClassVec& b) {
  ClassVec r(a);
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

bool stream_complete(const Window& w, const Height& h) {
  const Field& f = *w.field();
  switch (f.kind()) {
    case FieldKind::Finite: return true;
    case FieldKind::RatFunc: return false;
    case FieldKind::Laurent: {
      const bool t_listed = std::any_of(w.gens().begin(), w.gens().end(), [](const WindowGen& g) {
        return g.kind == GenKind::Series && g.layer == 0;
      });
      if (t_listed && Int(h.at(0)) < w.level().modulus()) return false;
      return stream_complete(w.sub_window(1), h.inner());
    }
  }
  return false;
}

Profile finish(const Window& w, const Height& h, const SlotMap& pairs, const SlotMap& first,
               std::uint64_t slots) {
  Profile p;
  p.rank = w.rank();
  p.pairs = by_slot(pairs);
  p.first_class = by_slot(first);
  p.slots = slots;
  p.complete = stream_complete(w, h);
  return p;
}

// ---------------------------------------------------------------- series

Profile laurent_profile(const Window& w, const Height& h, int lambda) {
  const Field& f = *w.field();
  const Window bw = w.sub_window(1);
  const std::vector<std::size_t> map = w.sub_window_map(1);
  int tidx = -1;
  for (std::size_t i = 0; i < w.rank(); ++i)
    if (w.gens()[i].kind == GenKind::Series && w.gens()[i].layer == 0) tidx = static_cast<int>(i);
  const auto base = profile(bw, h.inner(), lambda, ScanMode::Fast);
  const std::uint64_t b = base->slots;
  const std::uint64_t p = h.at(0);
  const std::size_t r = w.rank(), br = bw.rank();
  const bool char2 = f.characteristic() == 2;

  auto lift = [&](const ClassVec& bc, std::size_t off, std::int64_t e) {
    ClassVec full(r, 0);
    for (std::size_t i = 0; i < br; ++i) full[map[i]] = bc[off + i];
    if (tidx >= 0) full[static_cast<std::size_t>(tidx)] = e;
    return w.canonical(std::move(full));
  };
  const ClassVec zero(r, 0);
  SlotMap pairs, first;
  for (const auto& [k, s] : base->pairs) keep_min(pairs, concat(lift(k, 0, 0), lift(k, br, 0)), s);
  for (const auto& [k, s] : base->first_class) keep_min(first, lift(k, 0, 0), s);
  std::uint64_t least_nonzero = kNone;
  for (const auto& [k, s] : base->first_class) least_nonzero = std::min(least_nonzero, s);
  ClassVec two;
  if (!char2) two = lift(bw.class_of(f.base()->from_int(2)), 0, 0);
  for (std::uint64_t blk = 0; blk < 4 * p; ++blk) {
    const std::uint64_t start = b + blk * b;
    const std::int64_t j = laurent_shell(blk);
    const int kind = laurent_kind(blk);
    if (kind < 2) {
      const std::int64_t e = kind == 0 ? j : -j;
      for (const auto& [k, s] : base->first_class) {
        ClassVec c = lift(k, 0, e);
        keep_min(first, c, start + s);
        // lambda - c t^e leads with lambda for e > 0 and with -c t^e for e < 0.
        keep_min(pairs, concat(c, e > 0 ? zero : c), start + s);
      }
      continue;
    }
    const int eps = kind == 2 ? 1 : -1;
    if (eps == -1 && char2) continue;
    if (least_nonzero != kNone) keep_min(first, zero, start + least_nonzero);
    if (eps == lambda || char2) {
      // lambda - (lambda + c t^j) = -c t^j.
      for (const auto& [k, s] : base->first_class) keep_min(pairs, concat(zero, lift(k, 0, j)), start + s);
    } else if (least_nonzero != kNone) {
      // lambda - (-lambda + c t^j) leads with 2 lambda.
      keep_min(pairs, concat(zero, two), start + least_nonzero);
    }
  }
  return finish(w, h, pairs, first, b * (1 + 4 * p));
}

// ---------------------------------------------------------------- rational

struct RatKernel {
  const Window& w;
  const GF& gf;
  std::uint64_t q, hh;
  std::size_t r;
  std::vector<std::int64_t> ord;
  std::uint64_t radix = 1;
  std::vector<std::uint64_t> place_radix;
  std::vector<std::uint32_t> cidx;      // packed class per polynomial code
  std::vector<std::uint32_t> diff;      // packed a - b
  std::vector<std::uint64_t> num_code;  // numerator rank -> code
  std::uint64_t split = 1, split_pow = 0;
  std::vector<std::uint32_t> sub_lo, sub_hi;
  std::map<Poly, std::vector<std::uint64_t>> divisible;

  RatKernel(const Window& win, std::uint64_t height)
      : w(win), gf(*win.field()->base()->gf()), q(gf.q()), hh(height), r(win.rank()) {}

  static std::uint64_t code_of(const Poly& p, std::uint64_t q) {
    std::uint64_t c = 0;
    for (std::size_t i = p.size(); i-- > 0;) c = c * q + p[i];
    return c;
  }
  Poly poly_of(std::uint64_t c) const {
    Poly p;
    while (c) {
      p.push_back(static_cast<std::uint32_t>(c % q));
      c /= q;
    }
    return p;
  }
  std::uint32_t pack(const ClassVec& v) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < r; ++i) idx += static_cast<std::uint64_t>(v[i]) * place_radix[i];
    return static_cast<std::uint32_t>(idx);
  }
  ClassVec unpack(std::uint64_t idx) const {
    ClassVec v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = static_cast<std::int64_t>((idx / place_radix[i]) % ord[i]);
    return v;
  }
  std::uint64_t sub_code(std::uint64_t a, std::uint64_t b) const {
    return sub_lo[(a % split) * split + (b % split)] +
           static_cast<std::uint64_t>(sub_hi[(a / split) * (sub_hi_width) + (b / split)]) * split;
  }
  std::uint64_t sub_hi_width = 1;

  bool prepare() {
    for (const Int& o : w.orders()) {
      if (o > 1024) return false;
      ord.push_back(static_cast<std::int64_t>(o));
    }
    place_radix.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
      place_radix[i] = radix;
      radix *= static_cast<std::uint64_t>(ord[i]);
    }
    if (radix > 1024) return false;
    const std::uint64_t ncodes = ratenum::ipow64(q, hh + 1);
    if (ncodes > (1u << 24)) return false;
    split_pow = (hh + 2) / 2;
    split = ratenum::ipow64(q, split_pow);
    sub_hi_width = ratenum::ipow64(q, hh + 1 - split_pow);
    if (split * split > (1u << 22)) return false;

    // Packed class of every polynomial code.
    cidx.assign(ncodes, 0);
    for (std::uint64_t c = 1; c < ncodes; ++c) {
      Poly p = poly_of(c);
      ClassVec v(r, 0);
      for (std::size_t i = 0; i < r; ++i) {
        const WindowGen& g = w.gens()[i];
        if (g.kind == GenKind::Place) v[i] = poly::valuation(gf, p, g.place);
        if (g.kind == GenKind::Constant) v[i] = w.constant_class(p.back());
      }
      cidx[c] = pack(w.canonical(v));
    }
    diff.assign(radix * radix, 0);
    for (std::uint64_t a = 0; a < radix; ++a)
      for (std::uint64_t b = 0; b < radix; ++b) {
        ClassVec va = unpack(a), vb = unpack(b);
        for (std::size_t i = 0; i < r; ++i) va[i] -= vb[i];
        diff[a * radix + b] = pack(w.canonical(va));
      }
    num_code.resize(ncodes);
    for (std::uint64_t rk = 0; rk < ncodes; ++rk)
      num_code[rk] = code_of(ratenum::num_from_rank(rk, static_cast<std::uint32_t>(q)), q);
    auto digitwise = [&](std::uint64_t width, std::vector<std::uint32_t>& tab) {
      tab.assign(width * width, 0);
      for (std::uint64_t a = 0; a < width; ++a)
        for (std::uint64_t b = 0; b < width; ++b) {
          std::uint64_t x = a, y = b, m = 1, out = 0;
          while (x || y) {
            out += gf.sub(static_cast<std::uint32_t>(x % q), static_cast<std::uint32_t>(y % q)) * m;
            m *= q;
            x /= q;
            y /= q;
          }
          tab[a * width + b] = static_cast<std::uint32_t>(out);
        }
    };
    digitwise(split, sub_lo);
    digitwise(sub_hi_width, sub_hi);
    return true;
  }

  const std::vector<std::uint64_t>& bits_for(const Poly& p) {
    auto it = divisible.find(p);
    if (it != divisible.end()) return it->second;
    const std::uint64_t ncodes = ratenum::ipow64(q, hh + 1);
    std::vector<std::uint64_t> bits((ncodes + 63) / 64, 0);
    bits[0] = 1;  // zero is divisible by everything
    const std::uint64_t cofactors = ratenum::ipow64(q, hh + 1 - (p.size() - 1));
    for (std::uint64_t g = 1; g < cofactors; ++g) {
      std::uint64_t c = code_of(poly::mul(gf, poly_of(g), p), q);
      bits[c / 64] |= std::uint64_t{1} << (c % 64);
    }
    return divisible.emplace(p, std::move(bits)).first->second;
  }
};

Profile ratfunc_profile(const Window& w, const Height& h, int lambda) {
  RatKernel K(w, h.at(0));
  if (!K.prepare()) return profile_serial(w, h, lambda);
  const GF& gf = K.gf;
  const std::uint64_t q = K.q, hh = K.hh, radix = K.radix;
  const std::uint32_t lam = gf.from_int(lambda);

  struct Task {
    std::uint64_t k, drank, slot0, n0, n1;
    std::uint64_t dcode, lamd;
    std::vector<const std::vector<std::uint64_t>*> bits;
  };
  std::vector<Task> tasks;
  std::uint64_t layer_start = q;
  for (std::uint64_t k = 1; k <= hh; ++k) {
    const std::uint64_t qk = ratenum::ipow64(q, k);
    const std::uint64_t monics = (qk * q - 1) / (q - 1);
    const std::uint64_t lower_monics = (qk - 1) / (q - 1);
    for (std::uint64_t dr = 0; dr < monics; ++dr) {
      Task t;
      t.k = k;
      t.drank = dr;
      Poly d = ratenum::monic_from_rank(dr, static_cast<std::uint32_t>(q));
      if (dr < lower_monics) {
        t.slot0 = layer_start + dr * (q - 1) * qk;
        t.n0 = qk;
      } else {
        t.slot0 = layer_start + (qk - 1) * qk + (dr - lower_monics) * qk * q;
        t.n0 = 0;
      }
      t.n1 = qk * q;
      t.dcode = RatKernel::code_of(d, q);
      t.lamd = RatKernel::code_of(poly::scale(gf, d, lam), q);
      if (d.size() > 1)
        for (const auto& [pf, m] : poly::factor(gf, d)) t.bits.push_back(&K.bits_for(pf));
      tasks.push_back(std::move(t));
    }
    layer_start += (qk - 1) * qk + qk * qk * q;
  }
  const std::uint64_t total_slots = layer_start;

  std::vector<std::uint64_t> best_pair(radix * radix, kNone), best_first(radix, kNone);
  // Constants fill layer 0.
  for (std::uint32_t c = 1; c < q; ++c) {
    const std::uint32_t a = K.cidx[c];
    best_first[a] = std::min<std::uint64_t>(best_first[a], c);
    const std::uint32_t m = gf.sub(lam, c);
    if (m == 0) continue;
    best_pair[a * radix + K.cidx[m]] = std::min<std::uint64_t>(best_pair[a * radix + K.cidx[m]], c);
  }

#pragma omp parallel
  {
    std::vector<std::uint64_t> lp(radix * radix, kNone), lf(radix, kNone);
#pragma omp for schedule(dynamic, 8) nowait
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      const Task& t = tasks[ti];
      const std::uint32_t cd = K.cidx[t.dcode];
      const std::uint32_t* drow = &K.diff[0];
      for (std::uint64_t rk = t.n0; rk < t.n1; ++rk) {
        const std::uint64_t n = K.num_code[rk];
        bool coprime = true;
        for (const auto* b : t.bits)
          if (((*b)[n / 64] >> (n % 64)) & 1) {
            coprime = false;
            break;
          }
        if (!coprime) continue;
        const std::uint64_t slot = t.slot0 + (rk - t.n0);
        const std::uint32_t a = drow[K.cidx[n] * radix + cd];
        const std::uint64_t m = K.sub_code(t.lamd, n);
        const std::uint32_t bb = drow[K.cidx[m] * radix + cd];
        const std::uint64_t key = a * radix + bb;
        if (slot < lp[key]) lp[key] = slot;
        if (slot < lf[a]) lf[a] = slot;
      }
    }
#pragma omp critical
    {
      for (std::size_t i = 0; i < lp.size(); ++i) best_pair[i] = std::min(best_pair[i], lp[i]);
      for (std::size_t i = 0; i < lf.size(); ++i) best_first[i] = std::min(best_first[i], lf[i]);
    }
  }

  SlotMap pairs, first;
  for (std::uint64_t key = 0; key < best_pair.size(); ++key)
    if (best_pair[key] != kNone)
      pairs.emplace(concat(K.unpack(key / radix), K.unpack(key % radix)), best_pair[key]);
  for (std::uint64_t a = 0; a < radix; ++a)
    if (best_first[a] != kNone) first.emplace(K.unpack(a), best_first[a]);
  return finish(w, h, pairs, first, total_slots);
}

}  // namespace

Profile profile_serial(const Window& w, const Height& h, int lambda) {
  const Field& f = *w.field();
  Stream s(w.field(), h);
  const Elem lam = f.from_int(lambda);
  SlotMap pairs, first;
  for (std::uint64_t slot = 0; slot < s.size(); ++slot) {
    if (!s.valid(slot)) continue;
    const Elem x = s.at(slot);
    if (f.is_zero(x)) continue;
    const ClassVec cx = w.class_of(x);
    keep_min(first, cx, slot);
    const Elem y = f.sub(lam, x);
    if (f.is_zero(y)) continue;
    keep_min(pairs, concat(cx, w.class_of(y)), slot);
  }
  return finish(w, h, pairs, first, s.size());
}

Profile profile_fast(const Window& w, const Height& h, int lambda) {
  switch (w.field()->kind()) {
    case FieldKind::Finite: return profile_serial(w, h, lambda);
    case FieldKind::RatFunc: return ratfunc_profile(w, h, lambda);
    case FieldKind::Laurent: return laurent_profile(w, h, lambda);
  }
  return profile_serial(w, h, lambda);
}

std::shared_ptr<const Profile> profile(const Window& w, const Height& h, int lambda, ScanMode mode) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Profile>> cache;
  const std::string key = w.field()->spec() + "|" + w.spec() + "|" + h.to_string() + "|" +
                          std::to_string(lambda) + (mode == ScanMode::Fast ? "|fast" : "|serial");
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto made = std::make_shared<const Profile>(mode == ScanMode::Fast ? profile_fast(w, h, lambda)
                                                                      : profile_serial(w, h, lambda));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, made).first->second;
}

void set_jobs(int jobs) { omp_set_num_threads(jobs > 0 ? jobs : omp_get_num_procs()); }

}  // namespace valdetect
