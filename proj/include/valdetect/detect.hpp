#pragma once

// Detection pipelines: from a C-pair, a C-group, or an inertia/decomposition
// pair of character groups to a valuation, plus the W/V classification of
// native valuations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valdetect/characters.hpp"
#include "valdetect/cpairs.hpp"
#include "valdetect/rigid.hpp"

namespace valdetect {

struct DetectOptions {
  Height height{{4}};    // profile scans
  Height x_height{{2}};  // x-scan of the unit predicate
  std::uint64_t decomp_bound = 4;
  // Run with N below the required level; experimental.
  bool aggressive = false;
};

struct Check {
  std::string name;
  bool holds = false;
  std::string certificate;  // "exact", "bounded-certified", "bounded" or "scan"
  std::string detail;
};

struct DetectionReport {
  std::string mode;
  std::uint64_t n = 1, lift_level = 1;
  Int required_level = 1;
  bool aggressive = false;
  std::vector<std::string> input;
  std::optional<CharacterGroup> inertia;    // I at level n
  std::optional<CharacterGroup> decomp;     // D at level n
  std::optional<Valuation> valuation;       // detected v
  std::optional<Valuation> canonical;       // native match of v_H or v_I
  std::vector<std::string> canonical_candidates;
  bool quotient_cyclic = false;
  // detect_from_cpair only.
  std::optional<bool> h_equals_t;
  std::vector<std::string> rigid_witnesses;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  Height height;

  bool ok() const;
};

// f'', g'' at level N >= N(n) forming a C-pair.
DetectionReport detect_from_cpair(const Character& f2, const Character& g2, std::uint64_t n,
                                  const DetectOptions& opt = {});
// D'' at level N >= N(M_1(n)), a C-group.
DetectionReport detect_from_cgroup(const CharacterGroup& d2, std::uint64_t n, const DetectOptions& opt = {});
// I'' <= D'' at level N >= N(M_2(M_1(n))) with I'' in the C-center of D''
// and D''_n not a C-group; HypothesisFailed otherwise.
DetectionReport detect_inertia(const CharacterGroup& i2, const CharacterGroup& d2, std::uint64_t n,
                               const DetectOptions& opt = {});

struct RefinementRow {
  std::string valuation;
  bool same_decomp = false;
  bool same_inertia = false;
};

struct MembershipReport {
  std::string valuation;
  std::uint64_t n = 1;
  CharacterGroup inertia, decomp;
  bool in_w = false, in_v = false;
  std::size_t residue_rank = 0;  // dim mod l of the residue window characters
  // I_v(1) = C-center of D_v(1) != D_v(1), and whether it matches in_v.
  bool alt_v = false, alt_v_agrees = false;
  std::vector<RefinementRow> refinements;
  std::vector<std::string> notes;
};

MembershipReport class_membership(const Valuation& v, const Window& w, std::uint64_t n,
                                  const DetectOptions& opt = {});

// Every chain reachable from v by refinements visible to w, v excluded,
// coarsest first.
std::vector<Valuation> all_refinements(const Valuation& v, const Window& w);

}  // namespace valdetect
