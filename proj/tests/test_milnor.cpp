#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sample.hpp"
#include "valdetect/milnor.hpp"

using namespace valdetect;

namespace {

// Tame symbol at u - a over a prime field by synthetic division and
// evaluation, independent of the library's polynomial code.
struct Split {
  std::int64_t val;
  std::int64_t unit;  // value at a of the part prime to u - a
};

Split split_poly(std::vector<std::int64_t> c, std::int64_t a, std::int64_t p) {
  std::int64_t val = 0;
  for (;;) {
    // Horner: remainder of division by u - a.
    std::vector<std::int64_t> q(c.size() > 1 ? c.size() - 1 : 0);
    std::int64_t r = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      r = oracle::mod(r * a + c[i], p);
      if (i > 0) q[i - 1] = r;
    }
    if (r != 0 || c.size() <= 1) {
      std::int64_t ev = 0;
      for (std::size_t i = c.size(); i-- > 0;) ev = oracle::mod(ev * a + c[i], p);
      return {val, ev};
    }
    c = q;
    ++val;
  }
}

std::int64_t inv_mod(std::int64_t x, std::int64_t p) {
  std::int64_t r = 1;
  for (std::int64_t e = p - 2; e > 0; --e) r = oracle::mod(r * x, p);
  return r;
}

std::int64_t pow_mod(std::int64_t x, std::int64_t e, std::int64_t p) {
  if (e < 0) return pow_mod(inv_mod(x, p), -e, p);
  std::int64_t r = 1;
  while (e-- > 0) r = oracle::mod(r * x, p);
  return r;
}

Split split_rat(const Elem& x, std::int64_t a, std::int64_t p) {
  const auto& r = std::get<RatVal>(x);
  const Split n = split_poly({r.num.begin(), r.num.end()}, a, p), d = split_poly({r.den.begin(), r.den.end()}, a, p);
  return {n.val - d.val, oracle::mod(n.unit * inv_mod(d.unit, p), p)};
}

std::int64_t tame_oracle(const Elem& f, const Elem& g, std::int64_t a, std::int64_t p) {
  const Split sf = split_rat(f, a, p), sg = split_rat(g, a, p);
  std::int64_t v = oracle::mod(pow_mod(sf.unit, sg.val, p) * pow_mod(sg.unit, -sf.val, p), p);
  if ((sf.val * sg.val) % 2 != 0) v = oracle::mod(-v, p);
  return v;
}

}  // namespace

TEST_CASE("pinned tame symbol at u of {u, u-3}") {
  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const TameSymbol t = tame_symbol(K->parse_elem("u"), K->parse_elem("u-3"), Valuation::parse(K, "u"), Level(3, 1));
  REQUIRE(t.finite);
  CHECK(t.residue_field->to_string(t.value) == "2");
  CHECK(t.modulus == 3);
  CHECK_FALSE(t.trivial);  // 2 is not a cube mod 7
}

TEST_CASE("tame symbols agree with synthetic division at degree one places") {
  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const Stream s(K, Height{{3}});
  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const Elem f = sample::nonzero(s, rng, true), g = sample::nonzero(s, rng, true);
    const std::int64_t a = static_cast<std::int64_t>(rng() % 7);
    const Valuation v(K, {{false, "u-" + std::to_string(a), Poly{static_cast<std::uint32_t>((7 - a) % 7), 1}}});
    const TameSymbol t = tame_symbol(f, g, v, Level(3, 1));
    CHECK(std::get<std::uint32_t>(t.value) == static_cast<std::uint32_t>(tame_oracle(f, g, a, 7)));
  }
}

TEST_CASE("tame symbols kill Steinberg elements and are bimultiplicative") {
  struct Case {
    const char* field;
    std::vector<const char*> places;
  };
  const std::vector<Case> cs{{"ratfunc(gf:7,u)", {"u", "u-3", "u^2+1"}},
                             {"ratfunc(gf:9,u)", {"u", "u-1"}},
                             {"laurent(gf:7,t,prec=8)", {"t"}},
                             {"laurent(ratfunc(gf:7,u),t,prec=8)", {"t"}}};
  for (const auto& c : cs) {
    const FieldPtr K = Field::parse(c.field);
    const Stream s(K, Height{{2}});
    for (const char* place : c.places) {
      INFO(c.field << " at " << place);
      const Valuation v = Valuation::parse(K, place);
      std::mt19937_64 rng(47);
      int steinberg = 0;
      while (steinberg < 100) {
        const Elem f = sample::nonzero(s, rng, true);
        const Elem g = K->sub(K->one(), f);
        if (K->is_zero(g) || !K->is_exact(g)) continue;
        const TameSymbol t = tame_symbol(f, g, v, Level(3, 1));
        CHECK(t.residue_field->equal(t.value, t.residue_field->one()));
        CHECK(tame_symbol(f, K->neg(f), v, Level(3, 1)).trivial);
        ++steinberg;
      }
      for (int i = 0; i < 1000; ++i) {
        const Elem f1 = sample::nonzero(s, rng, true), f2 = sample::nonzero(s, rng, true),
                   g = sample::nonzero(s, rng, true);
        const TameSymbol a = tame_symbol(f1, g, v, Level(3, 1)), b = tame_symbol(f2, g, v, Level(3, 1)),
                         ab = tame_symbol(K->mul(f1, f2), g, v, Level(3, 1)),
                         ba = tame_symbol(g, K->mul(f1, f2), v, Level(3, 1));
        const Field& k = *a.residue_field;
        CHECK(k.equal(ab.value, k.mul(a.value, b.value)));
        // Antisymmetry: {g, f} = {f, g}^-1.
        CHECK(k.equal(k.mul(ab.value, ba.value), k.one()));
      }
    }
  }
}

TEST_CASE("Steinberg presentations replay and shrink with height") {
  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const Window w(K, Level(3, 1), {"u", "u-3"});
  Int last = -1;
  for (std::uint64_t h = 1; h <= 4; ++h) {
    const SymbolPresentation sp = steinberg_scan(w, Height{{h}});
    for (const auto& wit : sp.witnesses()) {
      const Elem z = K->parse_elem(wit.z);
      CHECK(w.class_of(z) == wit.z_class);
      CHECK(w.class_of(K->sub(K->one(), z)) == wit.one_minus_z_class);
      CHECK(sp.vanishes(sp.wedge(wit.z_class, wit.one_minus_z_class)));
    }
    const K2Order o = k2_cyclic_order(sp);
    if (last >= 0) CHECK(o.order <= last);
    last = o.order;
    // {x, -1} = {x, x} = 0 since -1 lies in T.
    for (std::size_t i = 0; i < w.rank(); ++i) {
      ClassVec e(w.rank(), 0);
      e[i] = 1;
      CHECK(sp.vanishes(sp.wedge(e, e)));
      CHECK(sp.vanishes(sp.wedge(e, w.class_of(K->neg(K->one())))));
    }
  }
  // Constants lie in T, so the Steinberg relations kill {u, u-3}.
  CHECK(last == 1);
}

TEST_CASE("tame certificates are one-directional") {
  const FieldPtr K = Field::parse("ratfunc(gf:7,u)");
  const Level lv(3, 1);
  std::vector<Valuation> places;
  for (const char* p : {"u", "u-1", "u-2", "u-3", "u-4", "u-5", "u-6", "u^2+1"}) places.push_back(Valuation::parse(K, p));
  // {u, u-3} is nonzero in K_2/3 yet vanishes modulo T.
  const Elem u = K->parse_elem("u"), u3 = K->parse_elem("u-3");
  CHECK(tame_certificate(u, u3, places, lv) == std::optional<std::string>("u"));
  const Window w(K, lv, {"u", "u-3", "c3"});
  const SymbolPresentation sp = steinberg_scan(w, Height{{3}});
  CHECK(sp.vanishes(sp.wedge(w.class_of(u), w.class_of(u3))));
  CHECK(k2_cyclic_order(steinberg_scan(Window(K, lv, {"u", "u-3"}), Height{{3}})).order == 1);
  // Symbols that vanish in K_2 are never obstructed.
  const Stream s(K, Height{{3}});
  std::mt19937_64 rng(53);
  for (int i = 0; i < 300; ++i) {
    const Elem z = sample::nonzero(s, rng, true);
    const Elem y = K->sub(K->one(), z);
    if (K->is_zero(y)) continue;
    CHECK_FALSE(tame_certificate(z, y, places, lv).has_value());
    CHECK_FALSE(tame_certificate(z, K->neg(z), places, lv).has_value());
    // Cubes pair trivially with everything.
    CHECK_FALSE(tame_certificate(K->pow(z, 3), sample::nonzero(s, rng), places, lv).has_value());
  }
}
