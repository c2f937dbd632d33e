#pragma once

// Valuations given as chains of native places over consecutive layers,
// starting at the outermost layer: t-adic on a series layer, P-adic on the
// rational function layer. The value group is Z^k ordered lexicographically,
// which has no nontrivial l-divisible convex subgroups.

#include <cstdint>
#include <string>
#include <vector>

#include "valdetect/field.hpp"
#include "valdetect/window.hpp"

namespace valdetect {

struct PlaceStep {
  bool series;      // t-adic on a series layer, otherwise P-adic
  std::string label;
  Poly place;       // P-adic only
};

class Valuation {
 public:
  // Trivial valuation.
  explicit Valuation(FieldPtr field) : field_(std::move(field)) {}
  Valuation(FieldPtr field, std::vector<PlaceStep> steps);
  // Comma separated labels, outermost first: "t", "t,s", "u-3"; "" is trivial.
  static Valuation parse(FieldPtr field, const std::string& chain);

  const FieldPtr& field() const { return field_; }
  const std::vector<PlaceStep>& steps() const { return steps_; }
  std::size_t rank() const { return steps_.size(); }
  bool trivial() const { return steps_.empty(); }
  std::string spec() const;

  std::vector<std::int64_t> value_of(const Elem& x) const;
  // Residue field. A final P-adic step of degree > 1 needs a prime base.
  FieldPtr residue_model() const;
  // Unit of the residue field as an element of field(); residue is any
  // element of residue_model().
  Elem lift_residue(const Elem& residue) const;
  // Image in the residue field of an element of valuation zero.
  Elem reduce(const Elem& unit) const;
  // Chain extended by a valuation of the residue field.
  Valuation compose(const Valuation& w) const;
  // Immediate refinements visible to a window: the next series variable, or
  // on a rational function layer the listed places and all degree one places.
  std::vector<Valuation> refinements(const Window& w) const;

  bool operator==(const Valuation& o) const;

 private:
  FieldPtr field_;
  std::vector<PlaceStep> steps_;
};

}  // namespace valdetect
