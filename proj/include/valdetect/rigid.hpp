#pragma once

// Rigid-element tests on subgroups H = A^perp of K^x for a window character
// group A: valuative subgroups, the canonical valuation v_H, comparability of
// valuative characters and the subgroup H/T built from a pair (f, g).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valdetect/characters.hpp"
#include "valdetect/valuation.hpp"

namespace valdetect {

enum class VResult { Violation, NoViolationUpTo };
const char* vresult_name(VResult r);

struct ValuativeVerdict {
  VResult result = VResult::NoViolationUpTo;
  // Failed condition: "minus_one", "one_plus_x" or "one_plus_x_one_plus_y".
  std::string condition;
  std::string witness_x, witness_y;
  Height height;
  std::vector<std::string> checked;
  // Every class pair (x, 1 + x) of the field occurs in the scan, so the
  // one_plus_x condition is decided rather than bounded.
  bool exhaustive = false;
  // Elements used for the one_plus_x_one_plus_y clause, and its cap.
  std::size_t clause_elements = 0;
  std::size_t clause_cap = 0;

  bool valuative() const { return result == VResult::NoViolationUpTo; }
};

// The pair clause runs when l = 2 or when `full` is set; for odd l the
// one_plus_x condition alone suffices because l^n-th powers lie in T <= H.
ValuativeVerdict valuative_test(const CharacterGroup& a, const Height& h, bool full = false,
                                std::size_t clause_cap = 64);

struct Agreement {
  std::uint64_t checked = 0;
  std::uint64_t disagreements = 0;
  std::string first_disagreement;
};

// Units of v_H: h in H such that h + x = 1 + x mod H for every scanned x
// outside H.
class UnitGroupApprox {
 public:
  UnitGroupApprox(CharacterGroup a, Height x_height);

  const CharacterGroup& group() const { return a_; }
  const Height& x_height() const { return x_height_; }
  std::size_t scanned() const { return xs_.size(); }
  bool in_h(const Elem& x) const;
  bool is_unit(const Elem& h) const;

  // Coarsest chain v reachable by refinements from the trivial valuation with
  // A <= I_v(n), if any; ties are broken by agreement with is_unit.
  const std::optional<Valuation>& native() const { return native_; }
  const std::vector<std::string>& candidates() const { return candidates_; }
  // is_unit against value zero under v on every element of stream(h).
  Agreement agreement(const Valuation& v, const Height& h) const;

 private:
  bool psi_zero(const ClassVec& c) const;
  void match_native();

  CharacterGroup a_;
  Height x_height_;
  std::vector<Character> gens_;
  std::vector<Elem> xs_;
  std::vector<ClassVec> one_plus_xs_;
  std::optional<Valuation> native_;
  std::vector<std::string> candidates_;
};

// Throws NotValuative when valuative_test at x_height finds a violation.
UnitGroupApprox canonical_valuation(const CharacterGroup& a, const Height& x_height);

struct RigidComplement {
  // H = annihilator^perp; T = <f, g>^perp <= H.
  CharacterGroup annihilator;
  bool h_equals_t = true;
  // Psi-image of the qualifying classes and a generator of H/T = Psi(H).
  std::vector<std::vector<Coeff>> images;
  std::vector<Coeff> generator;
  std::vector<std::string> witnesses;  // qualifying x, least slot first
  Height height;
  bool complete = false;
};

// Qualifying x: Psi(x) != 0, Psi(1 + x) != 0 and Psi(1 + x) != Psi(x), with
// Psi = (f, g). H/T must be cyclic; MainClaimViolated otherwise.
RigidComplement rigid_complement(const Character& f, const Character& g, const Height& h);

struct ComparableVerdict {
  bool comparable = true;          // <Psi(1 - x), Psi(x)> cyclic on the scan
  std::string witness;             // first x where it is not
  bool pair_valuative = true;      // valuative_test on <f, g>
  bool agree = true;
  Height height;
};

// Throws NotValuative unless f and g are each valuative on the scan.
ComparableVerdict comparable(const Character& f, const Character& g, const Height& h);

}  // namespace valdetect
