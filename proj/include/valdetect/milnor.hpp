#pragma once

// K_2^M(K)/T presented as the exterior square of the window module modulo
// the Steinberg relations class(z) ^ class(1 - z) of the enumerated z.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valdetect/coeffmod.hpp"
#include "valdetect/field.hpp"
#include "valdetect/valuation.hpp"
#include "valdetect/window.hpp"

namespace valdetect {

struct SteinbergWitness {
  std::uint64_t slot;
  std::string z;
  ClassVec z_class, one_minus_z_class;
};

class SymbolPresentation {
 public:
  SymbolPresentation(Window w, Height h, std::vector<SteinbergWitness> witnesses, bool complete);

  const Window& window() const { return w_; }
  const Height& height() const { return h_; }
  // Witnesses whose wedge is nonzero, in enumeration order.
  const std::vector<SteinbergWitness>& witnesses() const { return witnesses_; }
  // The stream realizes every class pair of the field.
  bool complete() const { return complete_; }
  // Extra classes killed on top of T, so that the presentation describes
  // K_2^M(K)/T' for the larger T'.
  const std::vector<ClassVec>& extra_kernel() const { return extra_; }
  SymbolPresentation with_kernel(const std::vector<ClassVec>& classes) const;

  // Index of e_ij (i < j) in the wedge basis.
  std::size_t wedge_index(std::size_t i, std::size_t j) const;
  std::size_t wedge_rank() const { return w_.rank() * (w_.rank() - (w_.rank() ? 1 : 0)) / 2; }
  Row wedge(const ClassVec& a, const ClassVec& b) const;
  // The presented quotient; generator e_ij is labeled "i^j".
  FinMod module() const;
  // Window module K^x/T' with the extra kernel.
  FinMod class_module() const;
  // Order of a wedge vector in the quotient.
  Int order_of(const Row& wedge) const;
  bool vanishes(const Row& wedge) const;

 private:
  Window w_;
  Height h_;
  std::vector<SteinbergWitness> witnesses_;
  bool complete_;
  std::vector<ClassVec> extra_;
};

SymbolPresentation steinberg_scan(const Window& w, const Height& h);

struct K2Order {
  Int order;        // l^(n - c)
  std::uint64_t c;
};
// For K^x/T' of rank 2 the quotient is cyclic, generated by {x, y}_T'.
K2Order k2_cyclic_order(const SymbolPresentation& sp);

struct TameSymbol {
  FieldPtr residue_field;
  Elem value;                 // in residue_field
  // For a finite residue field: discrete log modulo d = gcd(l^n, |k^x|),
  // zero exactly when the value is an l^n-th power.
  bool finite = false;
  std::uint64_t log_class = 0;
  std::uint64_t modulus = 1;
  bool trivial = false;       // l^n-th power (finite) or equal to 1
};

// Tame symbol (-1)^(v(f)v(g)) f^v(g) g^(-v(f)) reduced at the rank one place
// v; the class is taken modulo l^n-th powers.
TameSymbol tame_symbol(const Elem& f, const Elem& g, const Valuation& v, const Level& level);

// First place whose tame symbol of {f, g} is not an l^n-th power: a proof that
// {f, g} is nonzero in K_2(K)/l^n. Residues do not descend to K_2(K)/T when T
// holds constants or unlisted places, so this certifies nothing about the
// presented quotient.
std::optional<std::string> tame_certificate(const Elem& f, const Elem& g, const std::vector<Valuation>& places,
                                            const Level& level);

}  // namespace valdetect
