#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sample.hpp"
#include "valdetect/characters.hpp"
#include "valdetect/detect.hpp"

using namespace valdetect;

namespace {

struct WCase {
  const char* field;
  std::uint64_t ell, n;
  std::vector<std::string> gens;
};

const std::vector<WCase>& cases() {
  static const std::vector<WCase> c{{"ratfunc(gf:7,u)", 3, 1, {"u", "u-3", "c3"}},
                                    {"laurent(gf:7,t,prec=8)", 3, 1, {"t", "c3"}},
                                    {"laurent(ratfunc(gf:7,u),t,prec=8)", 3, 1, {"t", "u", "u-3"}},
                                    {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", 3, 1, {"t", "s", "c3"}},
                                    {"laurent(gf:17,t,prec=8)", 2, 2, {"t", "c"}}};
  return c;
}

Character random_char(const Window& w, std::mt19937_64& rng) {
  Character f = Character::zero(w);
  const std::int64_t m = static_cast<std::int64_t>(w.level().modulus());
  for (std::size_t i = 0; i < w.rank(); ++i) f = f + Character::dual(w, i).scaled(Int(static_cast<std::int64_t>(rng() % m)));
  return f;
}

std::set<Row> value_set(const std::vector<Character>& cs) {
  std::set<Row> out;
  for (const auto& c : cs) out.insert(c.values());
  return out;
}

}  // namespace

TEST_CASE("the pairing is bilinear and vanishes on -1") {
  for (const auto& c : cases()) {
    const FieldPtr K = Field::parse(c.field);
    const Window w(K, Level(c.ell, c.n), c.gens);
    const Stream s(K, Height{{2}});
    std::mt19937_64 rng(37);
    for (int i = 0; i < 1000; ++i) {
      const Character f = random_char(w, rng), g = random_char(w, rng);
      const Elem x = sample::nonzero(s, rng, true), y = sample::nonzero(s, rng, true);
      CHECK(evaluate(f, K->mul(x, y)) == evaluate(f, x) + evaluate(f, y));
      CHECK(evaluate(f + g, x) == evaluate(f, x) + evaluate(g, x));
      CHECK(evaluate(f, K->neg(K->one())).value() == 0);
    }
  }
}

TEST_CASE("character text round-trips and duals have the window orders") {
  for (const auto& c : cases()) {
    const Window w(Field::parse(c.field), Level(c.ell, c.n), c.gens);
    for (std::size_t i = 0; i < w.rank(); ++i) CHECK(Character::dual(w, i).order() == w.orders()[i]);
    for (const auto& f : CharacterGroup::full(w).elements()) CHECK(Character::parse(w, f.to_string()) == f);
  }
}

TEST_CASE("subgroups match brute-force spans and double annihilators") {
  for (const auto& c : cases()) {
    const Window w(Field::parse(c.field), Level(c.ell, c.n), c.gens);
    const CharacterGroup full = CharacterGroup::full(w);
    const auto all = full.elements();
    Int expect = 1;
    for (const auto& o : w.orders()) expect *= o;
    CHECK(Int(all.size()) == expect);
    CHECK(value_set(all).size() == all.size());
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Character> gens;
      for (std::size_t k = rng() % 3; k > 0; --k) gens.push_back(random_char(w, rng));
      const CharacterGroup a = CharacterGroup::generated(w, gens);
      // Closure of the generators under addition.
      std::set<Row> span{Character::zero(w).values()};
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& r : std::vector<Row>(span.begin(), span.end()))
          for (const auto& g : gens) {
            const Character x = Character(w, r) + g;
            grew = span.insert(x.values()).second || grew;
          }
      }
      CHECK(value_set(a.elements()) == span);
      CHECK(oracle::ipow(static_cast<std::int64_t>(c.ell), static_cast<std::int64_t>(a.log_size())) ==
            static_cast<std::int64_t>(span.size()));
      for (const auto& f : all) CHECK(a.contains(f) == (span.count(f.values()) > 0));
      CHECK(CharacterGroup::vanishing_on(w, a.perp()) == a);
      // perp is exactly the common kernel on classes.
      for (const auto& cl : a.perp())
        for (const auto& f : a.generators()) CHECK(evaluate_class(f, cl).value() == 0);
      const CharacterGroup b = CharacterGroup::generated(w, {random_char(w, rng)});
      std::set<Row> inter;
      for (const auto& f : all)
        if (a.contains(f) && b.contains(f)) inter.insert(f.values());
      CHECK(value_set(a.intersect(b).elements()) == inter);
      CHECK(a.sum(b).contains(a));
      CHECK(a.sum(b).contains(b));
    }
  }
}

TEST_CASE("inertia lies in decomposition for every visible chain") {
  for (const auto& c : cases()) {
    const FieldPtr K = Field::parse(c.field);
    const Window w(K, Level(c.ell, c.n), c.gens);
    for (const auto& v : all_refinements(Valuation(K), w)) {
      const CharacterGroup i = inertia_chars(v, w), d = decomp_chars(v, w);
      CHECK_MESSAGE(d.contains(i), c.field << " " << v.spec());
      // Witness replay: I vanishes on unit classes, D on the scanned 1 + m.
      for (const auto& cl : one_plus_m_classes(v, w, 2))
        for (const auto& f : d.generators()) CHECK(evaluate_class(f, cl).value() == 0);
    }
  }
}

TEST_CASE("inertia, decomposition and residue characters form an exact sequence on series towers") {
  struct Ex {
    const char* field;
    std::vector<std::string> gens;
    const char* chain;
  };
  const std::vector<Ex> exs{{"laurent(ratfunc(gf:7,u),t,prec=8)", {"t", "u", "u-3"}, "t"},
                            {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", {"t", "s", "c3"}, "t"},
                            {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", {"t", "s", "c3"}, "t,s"},
                            {"laurent(gf:7,t,prec=8)", {"t", "c3"}, "t"}};
  for (const auto& e : exs) {
    const FieldPtr K = Field::parse(e.field);
    const Window w(K, Level(3, 1), e.gens);
    const Valuation v = Valuation::parse(K, e.chain);
    const CharacterGroup i = inertia_chars(v, w), d = decomp_chars(v, w);
    const Window rw = residue_window(v, w);
    const CharacterGroup rfull = CharacterGroup::full(rw);
    CHECK(i.log_size() + rfull.log_size() == d.log_size());
    std::vector<Character> images;
    for (const auto& f : d.generators()) images.push_back(residue_char(f, v, w));
    CHECK(CharacterGroup::generated(rw, images) == rfull);
    for (const auto& f : i.generators()) CHECK(residue_char(f, v, w).is_zero());
  }
}

TEST_CASE("reduction of inertia groups commutes with the level change") {
  // 2 * 3^2 divides 19 - 1.
  const FieldPtr K = Field::parse("laurent(ratfunc(gf:19,u),t,prec=8)");
  const Window w2(K, Level(3, 2), {"t", "u", "u-1", "c"});
  const Window w1 = w2.at_level(1);
  for (const auto& v : all_refinements(Valuation(K), w2)) {
    CHECK(inertia_chars(v, w2).reduced(1) == inertia_chars(v, w1));
    CHECK(decomp_chars(v, w2, 2).reduced(1) == decomp_chars(v, w1, 2));
  }
  // Equality transfers between levels.
  const auto vs = all_refinements(Valuation(K), w2);
  for (const auto& a : vs)
    for (const auto& b : vs)
      CHECK((inertia_chars(a, w2) == inertia_chars(b, w2)) == (inertia_chars(a, w1) == inertia_chars(b, w1)));
}

TEST_CASE("bounded decomposition groups report their certificate") {
  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const Window w(K, Level(3, 1), {"u", "u-3", "c3"});
  const CharacterGroup d = decomp_chars(Valuation::parse(K, "u"), w);
  CHECK(d.certificate != Certificate::Exact);
  CHECK(d.stable_height <= d.height);
  const FieldPtr L = Field::parse("laurent(gf:7,t,prec=8)");
  CHECK(decomp_chars(Valuation::parse(L, "t"), Window(L, Level(3, 1), {"t", "c3"})).certificate == Certificate::Exact);
}
