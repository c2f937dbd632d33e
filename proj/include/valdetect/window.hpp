#pragma once

// Windows: finite quotients K^x/T presented by labeled generators. T holds -1,
// all l^n-th powers, every unlisted place class and every unlisted series
// variable, so class computations only read leading terms and valuations at
// the listed places.

#include <cstdint>
#include <string>
#include <vector>

#include "valdetect/coeffmod.hpp"
#include "valdetect/field.hpp"

namespace valdetect {

enum class GenKind { Series, Place, Constant };

struct WindowGen {
  GenKind kind;
  std::string label;
  std::size_t layer;  // 0 is the outermost layer; constants sit at depth()
  Poly place;         // monic irreducible, Place only
};

// Exponent vector on the window generators. Entries are reduced into
// [0, order) when the order fits in 64 bits and are raw otherwise.
using ClassVec = std::vector<std::int64_t>;

class Window {
 public:
  Window(FieldPtr field, Level level, const std::vector<std::string>& labels);
  // {ell=L,n=N,gens=[...]} or window{level=N,ell=L,gens=[...]}.
  static Window parse(FieldPtr field, const std::string& spec);

  const FieldPtr& field() const { return field_; }
  const Level& level() const { return level_; }
  const std::vector<WindowGen>& gens() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }
  const std::vector<Int>& orders() const { return orders_; }
  // Index of a label, or -1.
  int index_of(const std::string& label) const;
  std::string spec() const;
  std::vector<std::string> labels() const;

  ClassVec class_of(const Elem& x) const;
  // Reduce a raw exponent vector into canonical form.
  ClassVec canonical(ClassVec v) const;
  Row class_row(const Elem& x) const;
  Row to_row(const ClassVec& v) const;

  Window at_level(std::uint64_t n) const;
  // Window on the field at `layer` keeping the generators that live there or
  // below, with layers renumbered.
  Window sub_window(std::size_t layer) const;
  // Index in this window of each generator of sub_window(layer).
  std::vector<std::size_t> sub_window_map(std::size_t layer) const;
  // The element a generator stands for, in the field of this window.
  Elem gen_element(std::size_t i) const;

  // Constant class of a nonzero element of the constant field.
  std::int64_t constant_class(std::uint32_t c) const;
  std::int64_t constant_order() const { return const_order_; }
  int constant_index() const { return const_idx_; }

  // Field of a layer, 0 being field() itself.
  const Field& layer_field(std::size_t layer) const;
  FieldPtr layer_field_ptr(std::size_t layer) const;

 private:
  void walk(const Field& f, std::size_t layer, const Elem& x, ClassVec& out) const;

  FieldPtr field_;
  Level level_;
  std::vector<WindowGen> gens_;
  std::vector<Int> orders_;
  std::vector<std::int64_t> small_orders_;  // 0 when the order exceeds int64
  std::int64_t const_order_ = 0;
  int const_idx_ = -1;
  std::vector<int> series_idx_;             // per layer, -1 when unlisted
  std::vector<std::size_t> place_idx_;      // indices of Place generators
};

}  // namespace valdetect
