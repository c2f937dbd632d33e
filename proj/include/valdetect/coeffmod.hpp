#pragma once

// Arithmetic over R_n = Z/l^n and finitely generated R_n-modules.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "valdetect/errors.hpp"

namespace valdetect {

using Int = boost::multiprecision::cpp_int;
using Row = std::vector<Int>;

Int ipow(const Int& base, std::uint64_t e);
Int mod_floor(const Int& x, const Int& m);
std::string to_dec(const Int& x);

class Level {
 public:
  Level(std::uint64_t ell, std::uint64_t n);

  std::uint64_t ell() const { return ell_; }
  std::uint64_t n() const { return n_; }
  const Int& modulus() const { return mod_; }
  // l^k for k <= n.
  Int power(std::uint64_t k) const { return ipow(Int(ell_), k); }
  // l-adic valuation of x mod l^n, capped at n (so val(0) = n).
  std::uint64_t val(const Int& x) const;
  // Inverse of a unit mod l^n.
  Int unit_inverse(const Int& u) const;
  Int reduce(const Int& x) const { return mod_floor(x, mod_); }

  bool operator==(const Level& o) const { return ell_ == o.ell_ && n_ == o.n_; }
  bool operator!=(const Level& o) const { return !(*this == o); }

 private:
  std::uint64_t ell_;
  std::uint64_t n_;
  Int mod_;
};

class Coeff {
 public:
  Coeff(const Int& v, const Level& lv) : v_(lv.reduce(v)), lv_(lv) {}

  const Int& value() const { return v_; }
  const Level& level() const { return lv_; }

  Coeff operator+(const Coeff& o) const;
  Coeff operator-(const Coeff& o) const;
  Coeff operator*(const Coeff& o) const;
  bool operator==(const Coeff& o) const { return lv_ == o.lv_ && v_ == o.v_; }
  // Image under R_N -> R_n.
  Coeff reduce_to(std::uint64_t n) const;

 private:
  Int v_;
  Level lv_;
};

Int index_M(std::uint64_t r, const Int& n);
struct IndexN {
  Int nprime;
  Int n_big;
};
IndexN index_N(std::uint64_t ell, std::uint64_t n);

// All of cs live at one level R. When check is false the preconditions are
// skipped so that the conclusion can be probed on invalid instances.
bool cancellation_holds(const Coeff& a, const Coeff& b,
                        const std::vector<Coeff>& cs, std::uint64_t n,
                        bool check = true);

// Echelon form with the Howell property over Z/l^n. Pivots are powers of l,
// entries above a pivot are reduced below it, and the rows whose first c
// entries vanish span every element of the row module with that property.
struct HowellForm {
  Level level;
  std::size_t ncols = 0;
  std::vector<Row> rows;
  std::vector<std::size_t> pivot_col;
  std::vector<std::uint64_t> pivot_val;

  bool contains(const Row& x) const;
  // log_l of the size of the row module.
  std::uint64_t log_size() const;
  // Coordinates c with x = sum c_j rows[j], 0 <= c_j < l^(n - pivot_val[j]).
  std::vector<Int> coordinates(const Row& x) const;
};

HowellForm howell(const std::vector<Row>& gens, std::size_t ncols,
                  const Level& lv);

// Solutions x in R^k of x*A = 0, where A is given by its k rows of width m.
std::vector<Row> left_kernel(const std::vector<Row>& a, std::size_t m,
                             const Level& lv);

struct FinMod {
  std::vector<std::string> gens;
  std::vector<Row> relations;
  Level level;
};

struct QuasiBasisElem {
  Row expr;  // coordinates over FinMod::gens
  Int order;
};

std::vector<QuasiBasisElem> quasi_basis(const FinMod& m);
bool submodule_contains(const FinMod& m, const std::vector<Row>& gens,
                        const Row& x);
// dim over Z/l of m/l.
std::size_t dim_mod_ell(const FinMod& m);

}  // namespace valdetect
