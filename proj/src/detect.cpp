#include "valdetect/detect.hpp"

#include <algorithm>

namespace valdetect {

namespace {

std::uint64_t small(const Int& x) { return static_cast<std::uint64_t>(x); }

Int bound_n(std::uint64_t ell, std::uint64_t n) { return index_N(ell, n).n_big; }

void check_level(DetectionReport& r, std::uint64_t level, std::uint64_t n, const Int& required, bool aggressive) {
  if (n == 0 || n > level) throw Error(Errc::LevelMismatch, "target level must lie in [1, N]");
  r.n = n;
  r.lift_level = level;
  r.required_level = required;
  r.aggressive = aggressive;
  if (Int(level) >= required) return;
  if (!aggressive)
    throw Error(Errc::PreconditionViolated,
                "lift level " + std::to_string(level) + " is below the required " + to_dec(required));
  r.notes.push_back("aggressive mode: lift level below the required " + to_dec(required));
}

Check group_check(std::string name, const CharacterGroup& big, const CharacterGroup& sub, Certificate cert) {
  return {std::move(name), big.contains(sub), certificate_name(cert), ""};
}

// All chains reachable from the trivial valuation, coarsest first.
std::vector<Valuation> all_chains(const Window& w) {
  std::vector<Valuation> out{Valuation(w.field())};
  const auto more = all_refinements(out.front(), w);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

void attach_canonical(DetectionReport& r, const CharacterGroup& a, const DetectOptions& opt) {
  try {
    const UnitGroupApprox u = canonical_valuation(a, opt.x_height);
    r.canonical = u.native();
    r.canonical_candidates = u.candidates();
  } catch (const Error& e) {
    if (e.code() != Errc::NotValuative) throw;
    r.notes.push_back(std::string("canonical valuation unavailable: ") + e.what());
  }
}

}  // namespace

bool DetectionReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

std::vector<Valuation> all_refinements(const Valuation& v, const Window& w) {
  std::vector<Valuation> out, frontier{v};
  while (!frontier.empty()) {
    std::vector<Valuation> next;
    for (const auto& u : frontier)
      for (auto& r : u.refinements(w)) next.push_back(std::move(r));
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

DetectionReport detect_from_cpair(const Character& f2, const Character& g2, std::uint64_t n, const DetectOptions& opt) {
  DetectionReport r;
  r.mode = "cpair";
  r.height = opt.height;
  r.input = {f2.to_string(), g2.to_string()};
  const Level& top = f2.level();
  check_level(r, top.n(), n, bound_n(top.ell(), n), opt.aggressive);

  const CPairVerdict cp = c_pair_direct(f2, g2, opt.height);
  if (cp.result == CResult::NotCPair)
    throw Error(Errc::HypothesisFailed, "input is not a C-pair; witness " + cp.witness);
  r.checks.push_back({"input C-pair at the lift level", true, cp.result == CResult::CPair ? "exact" : "scan", ""});

  const Character f = reduce_level(f2, n), g = reduce_level(g2, n);
  const Window& w = f.window();
  const RigidComplement rc = rigid_complement(f, g, opt.height);
  r.h_equals_t = rc.h_equals_t;
  r.rigid_witnesses = rc.witnesses;
  r.checks.push_back({"H/T cyclic", true, rc.complete ? "exact" : "scan", ""});
  attach_canonical(r, rc.annihilator, opt);

  // H = T: 1 + m_v <= T with O_v^x T / T of order at most 2. H != T:
  // 1 + m_v <= T with O_v^x T = H.
  const CharacterGroup fg = CharacterGroup::generated(w, {f, g});
  const std::uint64_t slack = rc.h_equals_t && w.level().ell() == 2 ? 1 : 0;
  for (const auto& v : all_chains(w)) {
    const CharacterGroup dv = decomp_chars(v, w, opt.decomp_bound);
    if (!dv.contains(fg)) continue;
    const CharacterGroup iv = fg.intersect(inertia_chars(v, w));
    const bool fits = rc.h_equals_t ? fg.log_size() - iv.log_size() <= slack : iv == rc.annihilator;
    if (!fits) continue;
    r.valuation = v;
    r.inertia = iv;
    r.decomp = fg;
    r.checks.push_back({"f in D_v(n)", dv.contains(f), certificate_name(dv.certificate), v.spec()});
    r.checks.push_back({"g in D_v(n)", dv.contains(g), certificate_name(dv.certificate), v.spec()});
    r.quotient_cyclic = fg.quotient_cyclic(iv);
    r.checks.push_back({"<f,g>/(<f,g> cap I_v(n)) cyclic", r.quotient_cyclic, "exact", ""});
    break;
  }
  if (!r.valuation) r.checks.push_back({"valuation found among native chains", false, "scan", ""});
  return r;
}

DetectionReport detect_from_cgroup(const CharacterGroup& d2, std::uint64_t n, const DetectOptions& opt) {
  DetectionReport r;
  r.mode = "cgroup";
  r.height = opt.height;
  r.input = {d2.to_string()};
  const Level& top = d2.window().level();
  const std::uint64_t m = small(index_M(1, n));
  check_level(r, top.n(), n, bound_n(top.ell(), m), opt.aggressive);
  if (m > top.n()) throw Error(Errc::PreconditionViolated, "lift level is below M_1(n)");

  const CGroupVerdict cg = c_group(d2, opt.height);
  if (cg.result == CResult::NotCPair)
    throw Error(Errc::HypothesisFailed, "input is not a C-group: " + cg.f + ", " + cg.g + " fail at " + cg.witness);
  r.checks.push_back({"input C-group at the lift level", true, cg.result == CResult::CPair ? "exact" : "scan", ""});

  const CharacterGroup d1 = d2.reduced(m);
  std::vector<Character> valuative;
  for (const auto& f : d1.elements())
    if (!f.is_zero() && valuative_test(CharacterGroup::generated(d1.window(), {f}), opt.height).valuative())
      valuative.push_back(f);
  const CharacterGroup i1 = CharacterGroup::generated(d1.window(), valuative);
  r.notes.push_back(std::to_string(valuative.size()) + " valuative elements at level M_1(n)");
  r.checks.push_back({"D'/I' cyclic", d1.quotient_cyclic(i1), "exact", ""});
  r.checks.push_back({"I' valuative", valuative_test(i1, opt.height).valuative(), "scan", ""});
  const auto qb = i1.quasi_basis();
  bool comparable_all = true;
  for (std::size_t a = 0; a < qb.size(); ++a)
    for (std::size_t b = a + 1; b < qb.size(); ++b) {
      try {
        const ComparableVerdict cv = comparable(qb[a], qb[b], opt.height);
        comparable_all = comparable_all && cv.comparable && cv.agree;
      } catch (const Error& e) {
        if (e.code() != Errc::NotValuative) throw;
        comparable_all = false;
      }
    }
  r.checks.push_back({"quasi-basis of I' pairwise comparable", comparable_all, "scan", ""});

  const CharacterGroup i = i1.reduced(n), d = d2.reduced(n);
  r.inertia = i;
  r.decomp = d;
  r.quotient_cyclic = d.quotient_cyclic(i);
  r.checks.push_back({"D/I cyclic", r.quotient_cyclic, "exact", ""});
  attach_canonical(r, i, opt);
  if (!r.canonical) {
    r.checks.push_back({"v_I found", false, "scan", ""});
    return r;
  }
  r.valuation = r.canonical;
  const CharacterGroup dv = decomp_chars(*r.valuation, d.window(), opt.decomp_bound);
  r.checks.push_back(group_check("I <= I_{v_I}(n)", inertia_chars(*r.valuation, d.window()), i, Certificate::Exact));
  r.checks.push_back(group_check("D <= D_{v_I}(n)", dv, d, dv.certificate));
  return r;
}

DetectionReport detect_inertia(const CharacterGroup& i2, const CharacterGroup& d2, std::uint64_t n,
                               const DetectOptions& opt) {
  DetectionReport r;
  r.mode = "inertia";
  r.height = opt.height;
  r.input = {i2.to_string(), d2.to_string()};
  const Level& top = d2.window().level();
  const std::uint64_t m1 = small(index_M(1, n));
  const std::uint64_t m2 = small(index_M(2, m1));
  check_level(r, top.n(), n, bound_n(top.ell(), m2), opt.aggressive);
  if (m1 > top.n()) throw Error(Errc::PreconditionViolated, "lift level is below M_1(n)");
  if (!d2.contains(i2)) throw Error(Errc::HypothesisFailed, "I'' is not contained in D''");

  const CCenter cc = c_center(d2, opt.height);
  if (!cc.group.contains(i2)) throw Error(Errc::HypothesisFailed, "I'' is not in the C-center of D''");
  r.checks.push_back({"I'' <= C-center(D'')", true, cc.complete ? "exact" : "scan", ""});

  const CharacterGroup d = d2.reduced(n), i = i2.reduced(n);
  const CGroupVerdict cg = c_group(d, opt.height);
  if (cg.is_c()) throw Error(Errc::HypothesisFailed, "D is a C-group; the theorem does not apply");
  r.checks.push_back({"D not a C-group", true, "exact", cg.f + ", " + cg.g + " fail at " + cg.witness});

  const CharacterGroup i1 = i2.reduced(m1);
  bool all_valuative = true;
  for (const auto& f : i1.elements())
    all_valuative = all_valuative && valuative_test(CharacterGroup::generated(i1.window(), {f}), opt.height).valuative();
  r.checks.push_back({"every element of I' valuative", all_valuative, "scan", ""});
  r.checks.push_back({"I valuative", valuative_test(i, opt.height).valuative(), "scan", ""});

  r.inertia = i;
  r.decomp = d;
  r.quotient_cyclic = d.quotient_cyclic(i);
  attach_canonical(r, i, opt);
  if (!r.canonical) {
    r.checks.push_back({"v_I found", false, "scan", ""});
    return r;
  }
  r.valuation = r.canonical;
  const CharacterGroup dv = decomp_chars(*r.valuation, d.window(), opt.decomp_bound);
  r.checks.push_back(group_check("I <= I_{v_I}(n)", inertia_chars(*r.valuation, d.window()), i, Certificate::Exact));
  r.checks.push_back(group_check("D <= D_{v_I}(n)", dv, d, dv.certificate));
  return r;
}

namespace {

struct WResult {
  bool in_w = true, in_v = false;
  std::size_t residue_rank = 0;
  std::vector<RefinementRow> rows;
};

WResult w_membership(const Valuation& v, const Window& w, std::uint64_t bound) {
  WResult out;
  const CharacterGroup iv = inertia_chars(v, w), dv = decomp_chars(v, w, bound);
  for (const auto& u : all_refinements(v, w)) {
    RefinementRow row{u.spec(), decomp_chars(u, w, bound) == dv, inertia_chars(u, w) == iv};
    if (row.same_decomp && !row.same_inertia) out.in_w = false;
    out.rows.push_back(std::move(row));
  }
  out.residue_rank = CharacterGroup::full(residue_window(v, w)).quasi_basis().size();
  out.in_v = out.in_w && out.residue_rank >= 2;
  return out;
}

}  // namespace

MembershipReport class_membership(const Valuation& v, const Window& w0, std::uint64_t n, const DetectOptions& opt) {
  if (!v.field()->same(*w0.field())) throw Error(Errc::UnsupportedValuation, "valuation lives on another field");
  const Window w = w0.level().n() == n ? w0 : w0.at_level(n);
  MembershipReport r{v.spec(), n, inertia_chars(v, w), decomp_chars(v, w, opt.decomp_bound), false, false, 0,
                     false, false, {}, {}};
  r.notes.push_back("value group Z^k with the lexicographic order has no nontrivial l-divisible convex subgroup");
  const WResult wr = w_membership(v, w, opt.decomp_bound);
  r.in_w = wr.in_w;
  r.in_v = wr.in_v;
  r.residue_rank = wr.residue_rank;
  r.refinements = wr.rows;

  const Window w1 = w.level().n() == 1 ? w : w.at_level(1);
  const CharacterGroup i1 = inertia_chars(v, w1), d1 = decomp_chars(v, w1, opt.decomp_bound);
  const CCenter cc = c_center(d1, opt.height);
  r.alt_v = i1 == cc.group && !(i1 == d1);
  const bool in_v1 = n == 1 ? r.in_v : w_membership(v, w1, opt.decomp_bound).in_v;
  r.alt_v_agrees = r.alt_v == in_v1;
  return r;
}

}  // namespace valdetect
