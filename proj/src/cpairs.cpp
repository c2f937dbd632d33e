#include "valdetect/cpairs.hpp"

#include <algorithm>

#include "valdetect/scan.hpp"

namespace valdetect {

namespace {

using Split = std::pair<ClassVec, ClassVec>;

Split split(const ClassVec& key, std::size_t r) {
  return {ClassVec(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(r)),
          ClassVec(key.begin() + static_cast<std::ptrdiff_t>(r), key.end())};
}

// Values of a character on both halves of every profile pair.
std::vector<std::pair<Int, Int>> profile_values(const Character& f, const Profile& p) {
  std::vector<std::pair<Int, Int>> out;
  out.reserve(p.pairs.size());
  const std::size_t r = f.window().rank();
  for (const auto& [key, slot] : p.pairs) {
    const auto [a, b] = split(key, r);
    out.emplace_back(evaluate_class(f, a).value(), evaluate_class(f, b).value());
  }
  return out;
}

// Index of the first profile pair violating the C-pair equation, or npos.
std::size_t first_violation(const std::vector<std::pair<Int, Int>>& fv, const std::vector<std::pair<Int, Int>>& gv,
                            const Int& mod) {
  for (std::size_t k = 0; k < fv.size(); ++k)
    if (mod_floor(fv[k].second * gv[k].first - fv[k].first * gv[k].second, mod) != 0) return k;
  return std::string::npos;
}

}  // namespace

const char* cresult_name(CResult r) {
  switch (r) {
    case CResult::CPair: return "CPair";
    case CResult::NotCPair: return "NotCPair";
    case CResult::CPairUpToBound: return "CPairUpToBound";
  }
  return "?";
}

bool c_condition(const Character& f, const Character& g, const ClassVec& x, const ClassVec& y) {
  return evaluate_class(f, y) * evaluate_class(g, x) == evaluate_class(f, x) * evaluate_class(g, y);
}

CPairVerdict c_pair_direct(const Character& f, const Character& g, const Height& h) {
  if (!(f.window().spec() == g.window().spec()) || !(f.level() == g.level()))
    throw Error(Errc::LevelMismatch, "characters live on different windows");
  const auto prof = profile(f.window(), h, 1);
  CPairVerdict v;
  v.method = CMethod::Direct;
  v.height = h;
  const std::size_t k = first_violation(profile_values(f, *prof), profile_values(g, *prof), f.level().modulus());
  if (k != std::string::npos) {
    v.result = CResult::NotCPair;
    v.witness_slot = prof->pairs[k].second;
    Stream s(f.window().field(), h);
    v.witness = f.window().field()->to_string(s.at(v.witness_slot));
    return v;
  }
  v.result = prof->complete ? CResult::CPair : CResult::CPairUpToBound;
  return v;
}

CPairVerdict c_pair_ktheory(const Character& f, const Character& g, const SymbolPresentation& sp) {
  const Window& w = sp.window();
  if (f.window().spec() != w.spec() || g.window().spec() != w.spec())
    throw Error(Errc::LevelMismatch, "characters and presentation live on different windows");
  const CharacterGroup fg = CharacterGroup::generated(w, {f, g});
  const Level& lv = w.level();
  auto log_l = [&](Int x) {
    std::uint64_t e = 0;
    while (x > 1) {
      x /= lv.ell();
      ++e;
    }
    return e;
  };
  const std::uint64_t lf = log_l(f.order()), lg = log_l(g.order());
  if (fg.log_size() != lf + lg || lf == 0 || lg == 0)
    throw Error(Errc::NotQuasiIndependent, "f and g are not quasi-independent nonzero characters");
  const SymbolPresentation restricted = sp.with_kernel(fg.perp());
  const K2Order k2 = k2_cyclic_order(restricted);
  CPairVerdict v;
  v.method = CMethod::KTheory;
  v.height = sp.height();
  v.a = lv.n() - lf;
  v.b = lv.n() - lg;
  v.c = k2.c;
  if (v.c <= v.a + v.b) {
    v.result = sp.complete() ? CResult::CPair : CResult::CPairUpToBound;
    return v;
  }
  v.result = CResult::NotCPair;
  for (const auto& s : sp.witnesses())
    if (!c_condition(f, g, s.z_class, s.one_minus_z_class)) {
      v.witness = s.z;
      v.witness_slot = s.slot;
      break;
    }
  return v;
}

CGroupVerdict c_group(const CharacterGroup& a, const Height& h) {
  const auto qb = a.quasi_basis();
  CGroupVerdict out;
  out.height = h;
  bool complete = true;
  for (std::size_t i = 0; i < qb.size(); ++i)
    for (std::size_t j = i + 1; j < qb.size(); ++j) {
      const CPairVerdict v = c_pair_direct(qb[i], qb[j], h);
      if (v.result == CResult::NotCPair) {
        out.result = CResult::NotCPair;
        out.f = qb[i].to_string();
        out.g = qb[j].to_string();
        out.witness = v.witness;
        return out;
      }
      complete = complete && v.result == CResult::CPair;
    }
  if (!complete) out.result = CResult::CPairUpToBound;
  return out;
}

CCenter c_center(const CharacterGroup& a, const Height& h) {
  const auto prof = profile(a.window(), h, 1);
  const auto elems = a.elements();
  std::vector<std::vector<std::pair<Int, Int>>> vals;
  vals.reserve(elems.size());
  for (const auto& e : elems) vals.push_back(profile_values(e, *prof));
  const Int& mod = a.window().level().modulus();
  CCenter out{CharacterGroup(a.window()), {}, true, prof->complete};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    bool central = true;
    for (std::size_t j = 0; j < elems.size() && central; ++j)
      central = first_violation(vals[i], vals[j], mod) == std::string::npos;
    if (central) out.members.push_back(elems[i]);
  }
  out.group = CharacterGroup::generated(a.window(), out.members);
  out.closed = Int(out.members.size()) == ipow(Int(a.window().level().ell()), out.group.log_size());
  out.group.certificate = prof->complete ? Certificate::Exact : Certificate::Bounded;
  return out;
}

bool pair_span_cyclic(const std::vector<Coeff>& u, const std::vector<Coeff>& v) {
  if (u.size() != v.size() || u.empty()) throw Error(Errc::LevelMismatch, "vector width mismatch");
  const Level& lv = u[0].level();
  Row ru, rv;
  for (const auto& c : u) ru.push_back(c.value());
  for (const auto& c : v) rv.push_back(c.value());
  FinMod m{{"u", "v"}, left_kernel({ru, rv}, ru.size(), lv), lv};
  return dim_mod_ell(m) <= 1;
}

bool cyclic_pair_transfer(const Character& f1, const Character& g1, std::uint64_t n, const Elem& x) {
  if (Int(f1.level().n()) != index_M(1, n) || !(f1.level() == g1.level()))
    throw Error(Errc::LevelMismatch, "characters must live at level M_1(n)");
  const Character f = reduce_level(f1, n), g = reduce_level(g1, n);
  const Field& K = *f.window().field();
  const Elem y = K.sub(K.one(), x);
  return pair_span_cyclic({evaluate(f, y), evaluate(g, y)}, {evaluate(f, x), evaluate(g, x)});
}

}  // namespace valdetect
