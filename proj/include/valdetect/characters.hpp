#pragma once

// Characters Hom(K^x/T, R_n) of a window and their subgroups. A character is
// stored by its values on the window generators; the value on a generator of
// order o lies in (l^n / o) R_n.

#include <cstdint>
#include <string>
#include <vector>

#include "valdetect/coeffmod.hpp"
#include "valdetect/field.hpp"
#include "valdetect/valuation.hpp"
#include "valdetect/window.hpp"

namespace valdetect {

class Character {
 public:
  Character(Window w, Row values);
  static Character zero(const Window& w);
  // Generator of the characters supported on generator i: value l^n / o_i.
  static Character dual(const Window& w, std::size_t i);
  // Combination of duals, e.g. "t", "2*u+[u-3]", "u-3", "0". Labels match
  // longest first; brackets disambiguate.
  static Character parse(const Window& w, const std::string& text);

  const Window& window() const { return w_; }
  const Level& level() const { return w_.level(); }
  const Row& values() const { return values_; }
  bool is_zero() const;
  // Order as an element of the character group.
  Int order() const;
  // Coefficients on the duals; inverse of parse.
  Row dual_coords() const;
  std::string to_string() const;

  Character operator+(const Character& o) const;
  Character operator-(const Character& o) const;
  Character scaled(const Int& k) const;
  bool operator==(const Character& o) const { return values_ == o.values_; }
  bool operator!=(const Character& o) const { return !(*this == o); }

 private:
  Window w_;
  Row values_;
};

Coeff evaluate(const Character& f, const Elem& x);
Coeff evaluate_class(const Character& f, const ClassVec& c);
// Image under R_N -> R_n on the same generators.
Character reduce_level(const Character& f, std::uint64_t n);

enum class Certificate { Exact, BoundedCertified, Bounded };
const char* certificate_name(Certificate c);

class CharacterGroup {
 public:
  explicit CharacterGroup(Window w);  // zero subgroup
  static CharacterGroup full(const Window& w);
  static CharacterGroup generated(const Window& w, const std::vector<Character>& gens);
  // Characters vanishing on the given classes.
  static CharacterGroup vanishing_on(const Window& w, const std::vector<ClassVec>& classes);

  const Window& window() const { return w_; }
  const HowellForm& form() const { return form_; }
  std::vector<Character> generators() const;
  std::vector<Character> quasi_basis() const;
  // Every element, in a fixed order starting with zero.
  std::vector<Character> elements() const;
  // log_l of the group order.
  std::uint64_t log_size() const { return form_.log_size(); }
  bool contains(const Character& f) const;
  bool contains(const CharacterGroup& o) const;
  bool operator==(const CharacterGroup& o) const { return contains(o) && o.contains(*this); }
  CharacterGroup intersect(const CharacterGroup& o) const;
  CharacterGroup sum(const CharacterGroup& o) const;
  // Generators of the classes killed by every member.
  std::vector<ClassVec> perp() const;
  CharacterGroup reduced(std::uint64_t n) const;
  // The quotient this / sub is cyclic; sub must be contained in this.
  bool quotient_cyclic(const CharacterGroup& sub) const;
  std::string to_string() const;

  // Provenance of subgroups computed from bounded enumerations.
  Certificate certificate = Certificate::Exact;
  std::uint64_t stable_height = 0;  // height from which the result stopped changing
  std::uint64_t height = 0;         // largest height scanned

 private:
  Window w_;
  HowellForm form_;
};

// I_v(n): characters vanishing on the classes of units. A generator is a unit
// exactly when v gives it value zero, and unit classes are spanned by those.
CharacterGroup inertia_chars(const Valuation& v, const Window& w);
// D_v(n): characters vanishing on the classes of 1 + m_v. Chains ending in a
// series step are exact; a final place step P scans polynomials congruent to
// 1 mod P up to degree `bound`.
CharacterGroup decomp_chars(const Valuation& v, const Window& w, std::uint64_t bound = 4);
// Classes of the scanned 1 + m_v elements at one degree bound.
std::vector<ClassVec> one_plus_m_classes(const Valuation& v, const Window& w, std::uint64_t degree);

// Window on the residue field: the generators below the last series step,
// or the constant generator of a finite residue field.
Window residue_window(const Valuation& v, const Window& w);
// f_v(reduce(u)) = f(u) on units u; throws NotInDecomposition unless f lies in
// decomp_chars(v, w, bound).
Character residue_char(const Character& f, const Valuation& v, const Window& w, std::uint64_t bound = 4);

}  // namespace valdetect
