#pragma once

// C-pairs: f(1 - x) g(x) = f(x) g(1 - x) for every x other than 0 and 1.
// Decided on the class profile of the enumerated stream, or through the
// order of K_2^M(K)/(ker f ∩ ker g).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valdetect/characters.hpp"
#include "valdetect/milnor.hpp"

namespace valdetect {

enum class CResult { CPair, NotCPair, CPairUpToBound };
enum class CMethod { Direct, KTheory };
const char* cresult_name(CResult r);

struct CPairVerdict {
  CResult result = CResult::CPair;
  CMethod method = CMethod::Direct;
  std::string witness;             // z in the element syntax, NotCPair only
  std::uint64_t witness_slot = 0;
  Height height;
  // K-theory method only.
  std::uint64_t a = 0, b = 0, c = 0;

  bool is_c() const { return result != CResult::NotCPair; }
};

// Does (class(x), class(1 - x)) satisfy the C-pair equation for (f, g)?
bool c_condition(const Character& f, const Character& g, const ClassVec& x, const ClassVec& one_minus_x);

CPairVerdict c_pair_direct(const Character& f, const Character& g, const Height& h);
CPairVerdict c_pair_ktheory(const Character& f, const Character& g, const SymbolPresentation& sp);

struct CGroupVerdict {
  CResult result = CResult::CPair;  // CPair reads as "C-group"
  std::string f, g;                 // failing quasi-basis pair
  std::string witness;
  Height height;
  bool is_c() const { return result != CResult::NotCPair; }
};
CGroupVerdict c_group(const CharacterGroup& a, const Height& h);

// {f in A : f and g form a C-pair for every g in A}, tested against every
// element of A. `closed` reports whether that set is a subgroup.
struct CCenter {
  CharacterGroup group;
  std::vector<Character> members;
  bool closed = true;
  bool complete = false;  // every verdict came from a complete enumeration
};
CCenter c_center(const CharacterGroup& a, const Height& h);

// With Psi = (f'_n, g'_n) for characters at level M_1(n): is
// <Psi(1 - x), Psi(x)> cyclic?
bool cyclic_pair_transfer(const Character& f1, const Character& g1, std::uint64_t n, const Elem& x);
// <u, v> in R_n^2 is cyclic.
bool pair_span_cyclic(const std::vector<Coeff>& u, const std::vector<Coeff>& v);

}  // namespace valdetect
