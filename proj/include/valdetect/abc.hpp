#pragma once

// Abelian-by-central fragments G^a -> G^c at level n. A frame fixes
// generators gamma_i (dual to the window generators) and a relation module R
// inside the free central module with basis [i,j] (i < j) followed by pi_r.

#include <cstdint>
#include <string>
#include <vector>

#include "valdetect/characters.hpp"
#include "valdetect/coeffmod.hpp"
#include "valdetect/milnor.hpp"
#include "valdetect/valuation.hpp"

namespace valdetect {

struct CentralFrame {
  Level level;
  std::vector<std::string> labels;
  std::vector<Row> relations;  // generators of R
  std::string id;              // window spec and omega; equal ids share a basis
  std::string omega;           // element syntax, empty for free frames
  ClassVec omega_class;
  bool field_derived = false;

  std::size_t rank() const { return labels.size(); }
  std::size_t wedge_rank() const { return rank() * (rank() - (rank() ? 1 : 0)) / 2; }
  std::size_t width() const { return wedge_rank() + rank(); }
  std::size_t wedge_index(std::size_t i, std::size_t j) const;
  // Frame with R = 0.
  static CentralFrame free(const Level& level, std::vector<std::string> labels);
};

struct AbelianElement {
  std::string frame;
  Row s;
};

// a_ij on the [i,j] coordinates, then b_r on the pi_r coordinates.
struct CentralElement {
  std::string frame;
  Row coords;
};

AbelianElement abelian(const CentralFrame& fr, const Row& s);
AbelianElement abelian(const CentralFrame& fr, const Character& f);
AbelianElement operator+(const AbelianElement& a, const AbelianElement& b);

// Binomial coefficient C(m, 2) for m = l^n, reduced mod l^n.
Int power_correction(const Level& lv);

CentralElement commutator(const AbelianElement& sigma, const AbelianElement& tau, const CentralFrame& fr);
// m-th power of the lift prod gamma_i^(s_i), m = l^n, using
// (xy)^m = x^m y^m [y,x]^C(m,2) in class two.
CentralElement pi_power(const AbelianElement& sigma, const CentralFrame& fr);
CentralElement beta_power(const AbelianElement& sigma, const CentralFrame& fr);

// [sigma, tau] in <sigma^beta, tau^beta> + R.
bool cl_pair(const AbelianElement& sigma, const AbelianElement& tau, const CentralFrame& fr);
// Membership of a central element in span(gens) + R.
bool in_relations(const CentralElement& x, const std::vector<CentralElement>& gens, const CentralFrame& fr);

// Least constant (by code) of multiplicative order exactly l^n; throws
// NoRootsOfUnity when l^n does not divide q - 1.
Elem default_omega(const Window& w);

// R = annihilator of the formal classes sum c_ij x_i u x_j + sum d_r beta x_r
// whose image sum c_ij {g_i, g_j} + sum d_r {g_r, omega} vanishes in sp.
CentralFrame frame_from_k2(const SymbolPresentation& sp, const Elem& omega);
CentralFrame frame_from_k2(const SymbolPresentation& sp);

struct CLCenter {
  std::vector<AbelianElement> members;
  bool closed = true;  // members form a subgroup
};
CLCenter cl_center(const std::vector<AbelianElement>& a, const CentralFrame& fr);
// Elements of a character group as frame elements.
std::vector<AbelianElement> frame_elements(const CharacterGroup& a, const CentralFrame& fr);

// Level one: CL-center equals {sigma : [sigma, tau] in A^beta + R for all tau}.
bool ibcl_alt_check(const std::vector<AbelianElement>& a, const CentralFrame& fr);

// [sigma, tau] + tau(omega) sigma^pi in R for sigma in I_v(n), tau in D_v(n).
bool minimized_identity_check(const Valuation& v, const Window& w, const CentralFrame& fr,
                              std::uint64_t decomp_bound = 4);

}  // namespace valdetect
