#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "sample.hpp"
#include "valdetect/cpairs.hpp"
#include "valdetect/detect.hpp"
#include "valdetect/rigid.hpp"

using namespace valdetect;

namespace {

CharacterGroup gen(const Window& w, const std::vector<std::string>& texts) {
  std::vector<Character> cs;
  for (const auto& t : texts) cs.push_back(Character::parse(w, t));
  return CharacterGroup::generated(w, cs);
}

bool psi_zero(const std::vector<Character>& gens, const ClassVec& c) {
  for (const auto& g : gens)
    if (evaluate_class(g, c).value() != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("valuative verdicts on the pinned subgroups") {
  const FieldPtr L = Field::parse("laurent(gf:7,t,prec=8)");
  const Window wl(L, Level(3, 1), {"t", "c3"});
  const ValuativeVerdict vt = valuative_test(gen(wl, {"t"}), Height{{8}});
  CHECK(vt.valuative());
  CHECK(vt.exhaustive);

  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const Window w(K, Level(3, 1), {"u", "u-3"});
  CHECK(valuative_test(gen(w, {"u"}), Height{{4}}).valuative());
  const ValuativeVerdict bad = valuative_test(gen(w, {"u+[u-3]"}), Height{{4}});
  REQUIRE_FALSE(bad.valuative());
  CHECK(bad.condition == "one_plus_x");
  // Replay: x outside H with 1 + x in neither H nor xH.
  const Character f = Character::parse(w, "u+[u-3]");
  const Elem x = K->parse_elem(bad.witness_x);
  const Elem y = K->add(K->one(), x);
  CHECK(evaluate(f, x).value() != 0);
  CHECK(evaluate(f, y).value() != 0);
  CHECK(evaluate(f, y) != evaluate(f, x));
  CHECK_THROWS_AS(canonical_valuation(gen(w, {"u+[u-3]"}), Height{{4}}), Error);
}

TEST_CASE("native inertia groups are valuative") {
  struct Case {
    const char* field;
    std::uint64_t ell;
    std::vector<std::string> gens;
    Height h;
  };
  const std::vector<Case> cs{{"laurent(gf:7,t,prec=8)", 3, {"t", "c3"}, Height{{8}}},
                             {"laurent(ratfunc(gf:7,u),t,prec=8)", 3, {"t", "u", "u-3"}, Height{{3, 3}}},
                             {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", 3, {"t", "s", "c3"}, Height{{4}}},
                             {"ratfunc(gf:7,u)", 3, {"u", "u-3", "c3"}, Height{{3}}},
                             {"laurent(gf:9,t,prec=8)", 2, {"t", "c"}, Height{{6}}},
                             {"laurent(ratfunc(gf:9,u),t,prec=8)", 2, {"t", "u", "u-1"}, Height{{2, 2}}}};
  for (const auto& c : cs) {
    const FieldPtr K = Field::parse(c.field);
    const Window w(K, Level(c.ell, 1), c.gens);
    std::vector<Valuation> vs{Valuation(K)};
    for (auto& v : all_refinements(Valuation(K), w)) vs.push_back(v);
    for (const auto& v : vs) {
      INFO(c.field << " v = " << v.spec());
      const ValuativeVerdict vt = valuative_test(inertia_chars(v, w), c.h, true);
      CHECK(vt.valuative());
      CHECK(std::find(vt.checked.begin(), vt.checked.end(), "one_plus_x_one_plus_y") != vt.checked.end());
    }
  }
}

TEST_CASE("the pair clause always runs at l = 2") {
  const FieldPtr K = Field::parse("laurent(gf:9,t,prec=8)");
  const Window w(K, Level(2, 1), {"t", "c"});
  const ValuativeVerdict vt = valuative_test(gen(w, {"t"}), Height{{4}});
  CHECK(vt.checked.back() == "one_plus_x_one_plus_y");
  CHECK(vt.clause_elements <= vt.clause_cap);
  CHECK(vt.valuative());
}

TEST_CASE("canonical unit predicates") {
  SUBCASE("units times cubes on F7((t)) give the t-adic units") {
    const FieldPtr K = Field::parse("laurent(gf:7,t,prec=8)");
    const Window w(K, Level(3, 1), {"t", "c3"});
    const UnitGroupApprox u = canonical_valuation(gen(w, {"t"}), Height{{8}});
    REQUIRE(u.native().has_value());
    CHECK(u.native()->spec() == "t");
    const Agreement a = u.agreement(Valuation::parse(K, "t"), Height{{8}});
    CHECK(a.checked > 0);
    CHECK(a.disagreements == 0);
  }
  SUBCASE("H = K^x gives the trivial valuation") {
    const FieldPtr K = Field::parse("laurent(gf:7,t,prec=8)");
    const Window w(K, Level(3, 1), {"t", "c3"});
    const UnitGroupApprox u = canonical_valuation(CharacterGroup(w), Height{{4}});
    REQUIRE(u.native().has_value());
    CHECK(u.native()->trivial());
    for (const auto& x : sample::all_valid(Stream(K, Height{{4}})))
      if (!K->is_zero(x)) CHECK(u.is_unit(x));
  }
  SUBCASE("two series duals give the composite units") {
    const FieldPtr K = Field::parse("laurent(laurent(gf:7,s,prec=8),t,prec=8)");
    const Window w(K, Level(3, 1), {"t", "s", "c3"});
    const UnitGroupApprox u = canonical_valuation(gen(w, {"t", "s"}), Height{{2}});
    REQUIRE(u.native().has_value());
    CHECK(u.native()->spec() == "t,s");
    CHECK(u.agreement(Valuation::parse(K, "t,s"), Height{{4}}).disagreements == 0);
  }
}

TEST_CASE("canonical units lie in H and contain the principal units of the native valuation") {
  const FieldPtr K = Field::parse("laurent(ratfunc(gf:7,u),t,prec=8)");
  const Window w(K, Level(3, 1), {"t", "u", "u-3"});
  for (const char* chain : {"t", "t,u", "t,u-3", "t,u-1"}) {
    const Valuation v = Valuation::parse(K, chain);
    const CharacterGroup a = inertia_chars(v, w);
    const UnitGroupApprox u(a, Height{{1, 1}});
    const auto gens = a.generators();
    for (const auto& x : sample::all_valid(Stream(K, Height{{1, 1}}))) {
      if (K->is_zero(x)) continue;
      if (u.is_unit(x)) CHECK(psi_zero(gens, w.class_of(x)));
      const Elem y = K->add(K->one(), x);
      if (K->is_zero(y)) continue;
      // x in m_v: value lexicographically positive.
      const auto val = v.value_of(x);
      if (val > std::vector<std::int64_t>(val.size(), 0)) CHECK_MESSAGE(u.is_unit(y), v.spec() << " " << K->to_string(y));
    }
  }
}

TEST_CASE("rigid complements match a literal qualifying scan") {
  const FieldPtr K = Field::parse("laurent(gf:7,t,prec=8)");
  const Window w(K, Level(3, 1), {"t", "c3"});
  const Character f = Character::parse(w, "t"), g = Character::parse(w, "c3");
  const Height h{{8}};
  const RigidComplement rc = rigid_complement(f, g, h);
  // Qualifying x: Psi(x), Psi(1 + x) nonzero and different.
  std::vector<ClassVec> qual;
  std::set<std::pair<std::int64_t, std::int64_t>> images;
  for (const auto& x : sample::all_valid(Stream(K, h))) {
    const Elem y = K->add(K->one(), x);
    if (K->is_zero(x) || K->is_zero(y)) continue;
    const auto px = std::make_pair(static_cast<std::int64_t>(evaluate(f, x).value()), static_cast<std::int64_t>(evaluate(g, x).value()));
    const auto py = std::make_pair(static_cast<std::int64_t>(evaluate(f, y).value()), static_cast<std::int64_t>(evaluate(g, y).value()));
    if (px == std::make_pair<std::int64_t, std::int64_t>(0, 0) || py == std::make_pair<std::int64_t, std::int64_t>(0, 0) || px == py) continue;
    qual.push_back(w.class_of(x));
    images.insert(px);
  }
  CHECK(rc.h_equals_t == qual.empty());
  CHECK(rc.images.size() == images.size());
  // The constant 2 qualifies: Psi(2) = (0, 2) and Psi(3) = (0, 1).
  CHECK_FALSE(rc.h_equals_t);
  CHECK(rc.witnesses.front() == "2");
  CHECK(rc.annihilator == gen(w, {"t"}));
  for (const auto& cl : qual)
    for (const auto& a : rc.annihilator.generators()) CHECK(evaluate_class(a, cl).value() == 0);
  // H/T is cyclic on the generator.
  std::vector<oracle::Vec> rows;
  for (const auto& [a, b] : images) rows.push_back({a, b});
  const auto span = oracle::span(rows, 2, 3);
  const oracle::Vec gvec{static_cast<std::int64_t>(rc.generator[0].value()), static_cast<std::int64_t>(rc.generator[1].value())};
  CHECK(oracle::span({gvec}, 2, 3) == span);
}

TEST_CASE("rigid complements of trivial and one-sided pairs") {
  const FieldPtr K = Field::parse("laurent(ratfunc(gf:7,u),t,prec=8)");
  const Window w(K, Level(3, 1), {"t", "u", "u-3"});
  const Height h{{3, 3}};
  CHECK(rigid_complement(Character::zero(w), Character::zero(w), h).h_equals_t);
  for (const char* f : {"t", "u", "u-3"}) {
    const RigidComplement rc = rigid_complement(Character::parse(w, f), Character::zero(w), h);
    CHECK(rc.images.size() <= 2);
  }
}

TEST_CASE("Main Claim: complements of inertia-decomposition pairs are cyclic") {
  struct Case {
    const char* field;
    std::vector<std::string> gens;
    Height h;
  };
  const std::vector<Case> cs{{"laurent(gf:7,t,prec=8)", {"t", "c3"}, Height{{8}}},
                             {"laurent(ratfunc(gf:7,u),t,prec=8)", {"t", "u", "u-3"}, Height{{3, 3}}},
                             {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", {"t", "s", "c3"}, Height{{4}}}};
  for (const auto& c : cs) {
    const FieldPtr K = Field::parse(c.field);
    const Window w(K, Level(3, 1), c.gens);
    for (const auto& v : all_refinements(Valuation(K), w))
      for (const auto& i : inertia_chars(v, w).elements())
        for (const auto& d : decomp_chars(v, w).elements()) CHECK_NOTHROW(rigid_complement(i, d, c.h));
  }
}

TEST_CASE("C-partners of valuative characters lie in the decomposition group") {
  struct Case {
    const char* field;
    std::uint64_t ell;
    std::vector<std::string> gens;
    Height h;
  };
  const std::vector<Case> cs{{"laurent(gf:7,t,prec=8)", 3, {"t", "c3"}, Height{{8}}},
                             {"laurent(ratfunc(gf:7,u),t,prec=8)", 3, {"t", "u", "u-3"}, Height{{3, 3}}},
                             {"laurent(gf:9,t,prec=8)", 2, {"t", "c"}, Height{{6}}}};
  for (const auto& c : cs) {
    const FieldPtr K = Field::parse(c.field);
    const Window w(K, Level(c.ell, 1), c.gens);
    const auto all = CharacterGroup::full(w).elements();
    int checked = 0;
    for (const auto& f : all) {
      if (f.is_zero()) continue;
      const CharacterGroup ff = CharacterGroup::generated(w, {f});
      if (!valuative_test(ff, c.h).valuative()) continue;
      const UnitGroupApprox u(ff, Height{{2}});
      if (!u.native()) continue;
      const auto classes = one_plus_m_classes(*u.native(), w, 2);
      for (const auto& g : all) {
        if (!c_pair_direct(f, g, c.h).is_c()) continue;
        ++checked;
        for (const auto& cl : classes) CHECK_MESSAGE(evaluate_class(g, cl).value() == 0, f.to_string() << " " << g.to_string());
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("comparability of valuative characters") {
  {
    const FieldPtr K = Field::parse("laurent(laurent(gf:7,s,prec=8),t,prec=8)");
    const Window w(K, Level(3, 1), {"t", "s", "c3"});
    const ComparableVerdict cv = comparable(Character::parse(w, "t"), Character::parse(w, "s"), Height{{4}});
    CHECK(cv.comparable);
    CHECK(cv.pair_valuative);
    CHECK(cv.agree);
    CHECK(comparable(Character::parse(w, "t"), Character::parse(w, "t"), Height{{4}}).comparable);
  }
  {
    const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
    const Window w(K, Level(3, 1), {"u", "u-3"});
    const ComparableVerdict cv = comparable(Character::parse(w, "u"), Character::parse(w, "u-3"), Height{{4}});
    CHECK_FALSE(cv.comparable);
    CHECK(cv.witness == "5*u");
    CHECK_FALSE(cv.pair_valuative);
    CHECK(cv.agree);
    CHECK_THROWS_AS(comparable(Character::parse(w, "u+[u-3]"), Character::parse(w, "u"), Height{{4}}), Error);
  }
}
