#pragma once

// Field backends: finite fields, rational function fields over a finite
// field, and truncated Laurent series over any backend.

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "valdetect/gf.hpp"

namespace valdetect {

enum class FieldKind { Finite, RatFunc, Laurent };

// Absolute precision of an exact Laurent element.
inline constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

// num/den with den monic and coprime to num; zero is {} / {1}.
struct RatVal {
  Poly num;
  Poly den;
  bool operator==(const RatVal& o) const { return num == o.num && den == o.den; }
};

struct Elem;

// sum coeffs[i] * t^exps[i] + O(t^prec), exponents strictly increasing and
// below prec. A coefficient is never exactly zero.
struct LaurentVal {
  std::vector<std::int64_t> exps;
  std::vector<Elem> coeffs;
  std::int64_t prec = kExact;
  bool operator==(const LaurentVal& o) const;
};

struct Elem : std::variant<std::uint32_t, RatVal, LaurentVal> {
  using variant::variant;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field : public std::enable_shared_from_this<Field> {
 public:
  static FieldPtr finite(std::uint32_t q);
  static FieldPtr finite(GFPtr gf);
  static FieldPtr ratfunc(FieldPtr base, std::string var);
  static FieldPtr laurent(FieldPtr base, std::string var, std::int64_t prec = 24);
  // Field DSL: gf:Q | ratfunc(BASE,VAR) | laurent(BASE,VAR[,prec=P]).
  static FieldPtr parse(const std::string& spec);

  FieldKind kind() const { return kind_; }
  const GFPtr& gf() const { return gf_; }  // finite layer only
  const FieldPtr& base() const { return base_; }
  const std::string& var() const { return var_; }
  std::int64_t prec() const { return prec_; }
  std::uint32_t characteristic() const { return const_field().p(); }
  // The finite field at the bottom of the tower.
  const GF& const_field() const;
  GFPtr const_field_ptr() const;
  // Number of non-finite layers.
  std::size_t depth() const;
  std::string spec() const;
  bool same(const Field& o) const { return spec() == o.spec(); }

  Elem zero() const;
  Elem one() const;
  Elem from_int(std::int64_t v) const;
  // The variable of this layer, or of a lower layer named var, or z for the
  // generator of the constant field over its prime field.
  Elem variable(const std::string& var) const;
  // Lift an element of the layer `sub` (which must occur in this tower).
  Elem embed(const Field& sub, const Elem& x) const;

  bool is_zero(const Elem& x) const;
  bool is_exact(const Elem& x) const;
  bool equal(const Elem& a, const Elem& b) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(const Elem& a, std::int64_t e) const;

  Elem parse_elem(const std::string& text) const;
  std::string to_string(const Elem& x) const;

  // Laurent helpers: leading exponent and coefficient of a nonzero element.
  std::int64_t lead_exp(const Elem& x) const;
  Elem lead_coeff(const Elem& x) const;

  // Ratfunc helpers.
  Elem from_poly(const Poly& num, const Poly& den) const;

 private:
  Field() = default;
  Elem normalize_laurent(LaurentVal v) const;
  Elem inv_laurent(const LaurentVal& a) const;

  FieldKind kind_ = FieldKind::Finite;
  GFPtr gf_;
  FieldPtr base_;
  std::string var_;
  std::int64_t prec_ = 0;
  std::string spec_;
};

// Per non-finite layer bound on enumeration, outermost first; the last value
// repeats for deeper layers.
struct Height {
  std::vector<std::uint64_t> per_layer;
  std::uint64_t at(std::size_t layer) const;
  Height inner() const;  // bounds for the base field
  static Height parse(const std::string& s);
  std::string to_string() const;
};

// Deterministic, stateless enumeration. Slots index elements; some slots are
// empty (non-reduced fractions, duplicates). stream(h) is contained in
// stream(h') whenever h <= h' layerwise, and is a prefix of it when the base
// stream is unchanged (one-layer towers, or only the outer bound growing).
class Stream {
 public:
  Stream(FieldPtr field, Height h);
  std::uint64_t size() const { return size_; }
  bool valid(std::uint64_t slot) const;
  Elem at(std::uint64_t slot) const;  // slot must be valid
  const FieldPtr& field() const { return field_; }
  const Height& height() const { return height_; }

  // Ratfunc layout helpers, shared with the scan kernels.
  struct RatSlot {
    Poly num;
    Poly den;
  };
  RatSlot rat_decode(std::uint64_t slot) const;

 private:
  FieldPtr field_;
  Height height_;
  std::uint64_t size_ = 0;
  std::shared_ptr<const Stream> inner_;
};

// Laurent layout: the base stream, then for e = 1..p four blocks of
// base-stream size holding c t^e, c t^-e, 1 + c t^e and -1 + c t^e.
inline std::int64_t laurent_shell(std::uint64_t block) { return static_cast<std::int64_t>(block / 4 + 1); }
inline int laurent_kind(std::uint64_t block) { return static_cast<int>(block % 4); }

namespace ratenum {

// Numerator ranks: 0 for zero, degree j polynomials at q^j + lexrank*(q-1) +
// (c_j - 1) where lexrank reads c_0..c_{j-1} with c_0 most significant.
Poly num_from_rank(std::uint64_t rank, std::uint32_t q);
std::uint64_t num_rank(const Poly& p, std::uint32_t q);
// Monic ranks: (q^j - 1)/(q - 1) + lexrank for degree j.
Poly monic_from_rank(std::uint64_t rank, std::uint32_t q);
std::uint64_t monic_rank(const Poly& p, std::uint32_t q);
std::uint64_t ipow64(std::uint64_t b, std::uint64_t e);

}  // namespace ratenum

}  // namespace valdetect
