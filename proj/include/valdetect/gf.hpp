#pragma once

// Finite fields GF(p^k) by log/exp tables, and dense polynomials over them.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "valdetect/coeffmod.hpp"

namespace valdetect {

// Elements are codes sum d_i p^i standing for sum d_i z^i mod the defining
// polynomial of z over GF(p).
class GF {
 public:
  // Least monic irreducible of degree k (coefficients compared from the
  // constant term upward) defines GF(p^k).
  static std::shared_ptr<const GF> make(std::uint32_t q);
  // GF(p)[z]/(modulus) for a monic irreducible modulus over GF(p).
  static std::shared_ptr<const GF> make_ext(std::uint32_t p,
                                            const std::vector<std::uint32_t>& modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, const Int& e) const;
  // Discrete logarithm to the base gen(); a must be nonzero.
  std::uint32_t log(std::uint32_t a) const;
  std::uint32_t exp(std::uint64_t i) const { return exp_[i % (q_ - 1)]; }
  // Least code of multiplicative order q - 1.
  std::uint32_t gen() const { return gen_; }
  std::uint32_t from_int(std::int64_t v) const;
  std::string to_string(std::uint32_t a) const;

  bool same(const GF& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

 private:
  GF(std::uint32_t p, std::vector<std::uint32_t> modulus);
  static std::shared_ptr<const GF> build(std::uint32_t q);

  std::uint32_t p_, k_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_, exp_, neg_;
  std::vector<std::uint32_t> addtab_;  // filled when q is small
  std::uint32_t gen_ = 0;
};

using GFPtr = std::shared_ptr<const GF>;

// Dense polynomials, low degree first, no trailing zeros (zero is empty).
using Poly = std::vector<std::uint32_t>;

namespace poly {

int deg(const Poly& a);
void trim(Poly& a);
Poly add(const GF& f, const Poly& a, const Poly& b);
Poly sub(const GF& f, const Poly& a, const Poly& b);
Poly mul(const GF& f, const Poly& a, const Poly& b);
Poly scale(const GF& f, const Poly& a, std::uint32_t c);
// Quotient and remainder; b nonzero.
std::pair<Poly, Poly> divmod(const GF& f, const Poly& a, const Poly& b);
Poly mod(const GF& f, const Poly& a, const Poly& b);
Poly monic(const GF& f, const Poly& a);
std::uint32_t lc(const Poly& a);
// Monic gcd (zero only for gcd(0, 0)).
Poly gcd(const GF& f, const Poly& a, const Poly& b);
Poly powmod(const GF& f, const Poly& a, const Int& e, const Poly& m);
Poly deriv(const GF& f, const Poly& a);
std::uint32_t eval(const GF& f, const Poly& a, std::uint32_t x);
bool is_irreducible(const GF& f, const Poly& a);
// Multiplicity of the monic irreducible P in a; a nonzero.
std::int64_t valuation(const GF& f, Poly a, const Poly& p);
// Monic irreducible factors with multiplicities, ordered by degree and then
// by coefficients from the constant term upward. The unit is dropped.
std::vector<std::pair<Poly, int>> factor(const GF& f, const Poly& a);
// Ordering used for canonical factor lists.
bool canonical_less(const Poly& a, const Poly& b);

}  // namespace poly

}  // namespace valdetect
