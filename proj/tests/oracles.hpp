#pragma once

// Brute-force references shared by the test suites. Nothing here calls the
// library routine it is used to check.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "valdetect/coeffmod.hpp"

namespace oracle {

using Vec = std::vector<std::int64_t>;

inline std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

// Every R-linear combination of rows over Z/m, by closure under addition
// (Z/m is cyclic, so additive closure is the submodule).
inline std::set<Vec> span(const std::vector<Vec>& rows, std::size_t width, std::int64_t m) {
  std::set<Vec> out{Vec(width, 0)};
  std::vector<Vec> frontier{Vec(width, 0)};
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& v : frontier)
      for (const auto& r : rows) {
        Vec s(width);
        for (std::size_t i = 0; i < width; ++i) s[i] = mod(v[i] + r[i], m);
        if (out.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return out;
}

// All vectors of Z/m^width.
inline std::vector<Vec> all_vectors(std::size_t width, std::int64_t m) {
  std::vector<Vec> out{Vec{}};
  for (std::size_t i = 0; i < width; ++i) {
    std::vector<Vec> next;
    for (const auto& v : out)
      for (std::int64_t x = 0; x < m; ++x) {
        Vec w = v;
        w.push_back(x);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

inline valdetect::Row to_row(const Vec& v) { return valdetect::Row(v.begin(), v.end()); }

inline std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Heisenberg group over Z/m: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
struct Heis {
  std::int64_t a, b, c;
  bool operator==(const Heis& o) const { return a == o.a && b == o.b && c == o.c; }
};

inline Heis hmul(const Heis& x, const Heis& y, std::int64_t m) {
  return {mod(x.a + y.a, m), mod(x.b + y.b, m), mod(x.c + y.c + x.a * y.b, m)};
}

inline Heis hinv(const Heis& x, std::int64_t m) {
  // (a,b,c)^-1 = (-a, -b, -c + ab)
  return {mod(-x.a, m), mod(-x.b, m), mod(-x.c + x.a * x.b, m)};
}

inline Heis hpow(Heis x, std::int64_t e, std::int64_t m) {
  Heis r{0, 0, 0};
  for (std::int64_t i = 0; i < e; ++i) r = hmul(r, x, m);
  return r;
}

// [x, y] = x^-1 y^-1 x y.
inline Heis hcomm(const Heis& x, const Heis& y, std::int64_t m) {
  return hmul(hmul(hinv(x, m), hinv(y, m), m), hmul(x, y, m), m);
}


// Free class-two quotient on k generators modulo m: v in (Z/m^2)^k and c in
// (Z/m)^{k choose 2}, with (v,c)(v',c') = (v+v', c+c'+ v_i v'_j on i<j).
// Here e_i^m = (m e_i, 0), so the pi_i coordinate of a central element is v_i / m.
struct Nil2 {
  Vec v, c;
  bool operator==(const Nil2& o) const { return v == o.v && c == o.c; }
};

inline std::size_t pair_slot(std::size_t i, std::size_t j, std::size_t k) {
  std::size_t p = 0;
  for (std::size_t a = 0; a < i; ++a) p += k - a - 1;
  return p + (j - i - 1);
}

inline Nil2 nmul(const Nil2& x, const Nil2& y, std::int64_t m) {
  const std::size_t k = x.v.size();
  Nil2 r{Vec(k), x.c};
  for (std::size_t i = 0; i < k; ++i) r.v[i] = mod(x.v[i] + y.v[i], m * m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      auto& z = r.c[pair_slot(i, j, k)];
      z = mod(z + y.c[pair_slot(i, j, k)] + x.v[i] * y.v[j], m);
    }
  return r;
}

inline Nil2 nunit(std::size_t k) { return {Vec(k, 0), Vec(k * (k - 1) / 2, 0)}; }

inline Nil2 npow(const Nil2& x, std::int64_t e, std::int64_t m) {
  Nil2 r = nunit(x.v.size());
  for (std::int64_t i = 0; i < e; ++i) r = nmul(r, x, m);
  return r;
}

// prod_i e_i^(s_i) in index order.
inline Nil2 nlift(const Vec& s, std::int64_t m) {
  Nil2 r = nunit(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Nil2 e = nunit(s.size());
    e.v[i] = 1;
    r = nmul(r, npow(e, s[i], m), m);
  }
  return r;
}

// Inverse by exhausting the order: x^(m^2 - 1) since x^(m^2) = 1.
inline Nil2 ninv(const Nil2& x, std::int64_t m) { return npow(x, m * m - 1, m); }

}  // namespace oracle
