#include "valdetect/characters.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace valdetect {

namespace {

Int step(const Window& w, std::size_t i) { return w.level().modulus() / w.orders()[i]; }

void same_window(const Window& a, const Window& b) {
  if (!(a.level() == b.level()) || a.spec() != b.spec() || !a.field()->same(*b.field()))
    throw Error(Errc::LevelMismatch, "characters live on different windows");
}

}  // namespace

Character::Character(Window w, Row values) : w_(std::move(w)), values_(std::move(values)) {
  if (values_.size() != w_.rank()) throw Error(Errc::LevelMismatch, "value vector has the wrong length");
  const Int& m = w_.level().modulus();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] = mod_floor(values_[i], m);
    if (values_[i] % step(w_, i) != 0)
      throw Error(Errc::PreconditionViolated, "value on '" + w_.gens()[i].label + "' does not kill its order");
  }
}

Character Character::zero(const Window& w) { return Character(w, Row(w.rank(), 0)); }

Character Character::dual(const Window& w, std::size_t i) {
  Row v(w.rank(), 0);
  v.at(i) = step(w, i);
  return Character(w, std::move(v));
}

Character Character::parse(const Window& w, const std::string& text) {
  Row acc(w.rank(), 0);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (text.substr(pos) == "0") return zero(w);
  bool first = true;
  while (true) {
    skip();
    if (pos >= text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      throw ParseError(pos, "expected '+' or '-'");
    }
    first = false;
    Int coef = 1;
    const std::size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos > digits && pos < text.size() && text[pos] == '*') {
      coef = Int(text.substr(digits, pos - digits));
      ++pos;
      skip();
    } else {
      pos = digits;
    }
    int idx = -1;
    if (pos < text.size() && text[pos] == '[') {
      const std::size_t close = text.find(']', pos);
      if (close == std::string::npos) throw ParseError(pos, "unclosed '['");
      idx = w.index_of(text.substr(pos + 1, close - pos - 1));
      if (idx < 0) throw ParseError(pos, "unknown generator '" + text.substr(pos + 1, close - pos - 1) + "'");
      pos = close + 1;
    } else {
      std::size_t best = 0;
      for (std::size_t i = 0; i < w.rank(); ++i) {
        const std::string& l = w.gens()[i].label;
        if (l.size() > best && text.compare(pos, l.size(), l) == 0) {
          best = l.size();
          idx = static_cast<int>(i);
        }
      }
      if (idx < 0) throw ParseError(pos, "expected a generator label");
      pos += best;
    }
    const auto i = static_cast<std::size_t>(idx);
    acc[i] += sign * coef * step(w, i);
  }
  if (first) throw ParseError(0, "empty character");
  return Character(w, std::move(acc));
}

bool Character::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Int& x) { return x == 0; });
}

Int Character::order() const {
  std::uint64_t v = level().n();
  for (const Int& x : values_) v = std::min(v, level().val(x));
  return level().power(level().n() - v);
}

Row Character::dual_coords() const {
  Row c(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) c[i] = values_[i] / step(w_, i);
  return c;
}

std::string Character::to_string() const {
  const Row c = dual_coords();
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (c[i] != 1) out += to_dec(c[i]) + "*";
    const std::string& l = w_.gens()[i].label;
    const bool bracket = l.find_first_of("+-*") != std::string::npos;
    out += bracket ? "[" + l + "]" : l;
  }
  return out.empty() ? "0" : out;
}

Character Character::operator+(const Character& o) const {
  same_window(w_, o.w_);
  Row v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
  return Character(w_, std::move(v));
}

Character Character::operator-(const Character& o) const {
  same_window(w_, o.w_);
  Row v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
  return Character(w_, std::move(v));
}

Character Character::scaled(const Int& k) const {
  Row v(values_);
  for (auto& x : v) x *= k;
  return Character(w_, std::move(v));
}

Coeff evaluate_class(const Character& f, const ClassVec& c) {
  if (c.size() != f.values().size()) throw Error(Errc::LevelMismatch, "class vector has the wrong length");
  Int s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += f.values()[i] * c[i];
  return Coeff(s, f.level());
}

Coeff evaluate(const Character& f, const Elem& x) { return evaluate_class(f, f.window().class_of(x)); }

Character reduce_level(const Character& f, std::uint64_t n) {
  if (n > f.level().n() || n == 0) throw Error(Errc::LevelMismatch, "target level must lie in [1, N]");
  Window w = f.window().at_level(n);
  return Character(w, f.values());
}

const char* certificate_name(Certificate c) {
  switch (c) {
    case Certificate::Exact: return "exact";
    case Certificate::BoundedCertified: return "bounded-certified";
    case Certificate::Bounded: return "bounded";
  }
  return "?";
}

// ---------------------------------------------------------------- groups

CharacterGroup::CharacterGroup(Window w) : w_(std::move(w)), form_(howell({}, w_.rank(), w_.level())) {}

CharacterGroup CharacterGroup::full(const Window& w) {
  std::vector<Character> g;
  for (std::size_t i = 0; i < w.rank(); ++i) g.push_back(Character::dual(w, i));
  return generated(w, g);
}

CharacterGroup CharacterGroup::generated(const Window& w, const std::vector<Character>& gens) {
  CharacterGroup out(w);
  std::vector<Row> rows;
  for (const auto& g : gens) {
    same_window(w, g.window());
    rows.push_back(g.values());
  }
  out.form_ = howell(rows, w.rank(), w.level());
  return out;
}

CharacterGroup CharacterGroup::vanishing_on(const Window& w, const std::vector<ClassVec>& classes) {
  // f = (step_i g_i) kills c iff sum_i g_i step_i c_i = 0 mod l^n.
  const std::size_t r = w.rank();
  std::vector<Row> a(r, Row(classes.size()));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < classes.size(); ++j) a[i][j] = step(w, i) * classes[j].at(i);
  std::vector<Character> gens;
  if (classes.empty()) return full(w);
  for (const Row& g : left_kernel(a, classes.size(), w.level())) {
    Row v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = g[i] * step(w, i);
    gens.emplace_back(w, std::move(v));
  }
  return generated(w, gens);
}

std::vector<Character> CharacterGroup::generators() const {
  std::vector<Character> out;
  for (const Row& r : form_.rows) out.emplace_back(w_, r);
  return out;
}

std::vector<Character> CharacterGroup::quasi_basis() const {
  FinMod m{{}, left_kernel(form_.rows, w_.rank(), w_.level()), w_.level()};
  m.gens.resize(form_.rows.size());
  std::vector<Character> out;
  for (const auto& q : valdetect::quasi_basis(m)) {
    Row v(w_.rank(), 0);
    for (std::size_t j = 0; j < form_.rows.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += q.expr[j] * form_.rows[j][i];
    out.emplace_back(w_, std::move(v));
  }
  return out;
}

std::vector<Character> CharacterGroup::elements() const {
  std::vector<Character> out{Character::zero(w_)};
  for (std::size_t j = form_.rows.size(); j-- > 0;) {
    const Int ord = w_.level().power(w_.level().n() - form_.pivot_val[j]);
    const Character g(w_, form_.rows[j]);
    std::vector<Character> next;
    for (Int k = 0; k < ord; ++k)
      for (const auto& e : out) next.push_back(e + g.scaled(k));
    out = std::move(next);
  }
  return out;
}

bool CharacterGroup::contains(const Character& f) const {
  same_window(w_, f.window());
  return form_.contains(f.values());
}

bool CharacterGroup::contains(const CharacterGroup& o) const {
  for (const Row& r : o.form_.rows)
    if (!form_.contains(r)) return false;
  return true;
}

CharacterGroup CharacterGroup::intersect(const CharacterGroup& o) const {
  same_window(w_, o.w_);
  // x a = y b: kernel of [a; -b] read on the a part.
  std::vector<Row> stack(form_.rows);
  for (const Row& r : o.form_.rows) {
    Row n(r);
    for (auto& x : n) x = -x;
    stack.push_back(std::move(n));
  }
  std::vector<Character> gens;
  for (const Row& k : left_kernel(stack, w_.rank(), w_.level())) {
    Row v(w_.rank(), 0);
    for (std::size_t j = 0; j < form_.rows.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += k[j] * form_.rows[j][i];
    gens.emplace_back(w_, std::move(v));
  }
  return generated(w_, gens);
}

CharacterGroup CharacterGroup::sum(const CharacterGroup& o) const {
  std::vector<Character> g = generators();
  for (auto& c : o.generators()) g.push_back(c);
  return generated(w_, g);
}

std::vector<ClassVec> CharacterGroup::perp() const {
  const std::size_t r = w_.rank();
  std::vector<ClassVec> out;
  if (form_.rows.empty()) {
    for (std::size_t i = 0; i < r; ++i) {
      ClassVec e(r, 0);
      e[i] = 1;
      out.push_back(e);
    }
    return out;
  }
  std::vector<Row> a(r, Row(form_.rows.size()));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < form_.rows.size(); ++j) a[i][j] = form_.rows[j][i];
  for (const Row& k : left_kernel(a, form_.rows.size(), w_.level())) {
    ClassVec c(r);
    for (std::size_t i = 0; i < r; ++i) c[i] = static_cast<std::int64_t>(mod_floor(k[i], w_.orders()[i]));
    c = w_.canonical(std::move(c));
    if (std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x != 0; })) out.push_back(std::move(c));
  }
  return out;
}

CharacterGroup CharacterGroup::reduced(std::uint64_t n) const {
  std::vector<Character> g;
  for (const auto& c : generators()) g.push_back(reduce_level(c, n));
  return generated(w_.at_level(n), g);
}

bool CharacterGroup::quotient_cyclic(const CharacterGroup& sub) const {
  same_window(w_, sub.w_);
  std::vector<Row> stack(form_.rows);
  stack.insert(stack.end(), sub.form_.rows.begin(), sub.form_.rows.end());
  FinMod m{{}, {}, w_.level()};
  m.gens.resize(form_.rows.size());
  for (const Row& k : left_kernel(stack, w_.rank(), w_.level()))
    m.relations.emplace_back(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(form_.rows.size()));
  return dim_mod_ell(m) <= 1;
}

std::string CharacterGroup::to_string() const {
  std::string out = "<";
  const auto g = generators();
  for (std::size_t i = 0; i < g.size(); ++i) out += (i ? ", " : "") + g[i].to_string();
  return out + ">";
}

// ---------------------------------------------------------------- I_v, D_v

CharacterGroup inertia_chars(const Valuation& v, const Window& w) {
  if (!v.field()->same(*w.field())) throw Error(Errc::UnsupportedValuation, "valuation lives on another field");
  std::vector<ClassVec> units;
  for (std::size_t i = 0; i < w.rank(); ++i) {
    const auto val = v.value_of(w.gen_element(i));
    if (std::all_of(val.begin(), val.end(), [](std::int64_t x) { return x == 0; })) {
      ClassVec e(w.rank(), 0);
      e[i] = 1;
      units.push_back(w.canonical(std::move(e)));
    }
  }
  return CharacterGroup::vanishing_on(w, units);
}

std::vector<ClassVec> one_plus_m_classes(const Valuation& v, const Window& w, std::uint64_t degree) {
  if (!v.field()->same(*w.field())) throw Error(Errc::UnsupportedValuation, "valuation lives on another field");
  // Along series steps 1 + m reduces to the leading coefficient, so only a
  // final place step contributes: its classes are those of 1 + P g.
  if (v.trivial() || v.steps().back().series) return {};
  const std::size_t layer = v.rank() - 1;
  const Field& rf = w.layer_field(layer);
  const GF& gf = *rf.base()->gf();
  const Poly& P = v.steps().back().place;
  const std::uint64_t dp = P.size() - 1;
  std::set<ClassVec> seen;
  if (degree < dp) return {};
  const std::uint64_t count = ratenum::ipow64(gf.q(), degree - dp + 1);
  for (std::uint64_t code = 1; code < count; ++code) {
    Poly g;
    for (std::uint64_t c = code; c; c /= gf.q()) g.push_back(static_cast<std::uint32_t>(c % gf.q()));
    Poly f = poly::add(gf, Poly{1}, poly::mul(gf, P, g));
    if (f.empty()) continue;
    ClassVec c = w.class_of(w.field()->embed(rf, rf.from_poly(f, {1})));
    if (std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x != 0; })) seen.insert(std::move(c));
  }
  return {seen.begin(), seen.end()};
}

CharacterGroup decomp_chars(const Valuation& v, const Window& w, std::uint64_t bound) {
  if (v.trivial() || v.steps().back().series) {
    CharacterGroup g = CharacterGroup::full(w);
    g.certificate = Certificate::Exact;
    return g;
  }
  if (bound == 0) throw Error(Errc::PreconditionViolated, "bound must be positive");
  std::vector<CharacterGroup> by_height;
  for (std::uint64_t h = 1; h <= bound; ++h)
    by_height.push_back(CharacterGroup::vanishing_on(w, one_plus_m_classes(v, w, h)));
  CharacterGroup out = by_height.back();
  std::uint64_t stable = bound;
  while (stable > 1 && by_height[stable - 2] == out) --stable;
  out.stable_height = stable;
  out.height = bound;
  out.certificate = bound - stable + 1 >= 3 ? Certificate::BoundedCertified : Certificate::Bounded;
  return out;
}

Window residue_window(const Valuation& v, const Window& w) {
  if (v.trivial()) return w;
  if (v.steps().back().series) return w.sub_window(v.rank());
  FieldPtr res = v.residue_model();
  try {
    return Window(res, w.level(), {"c"});
  } catch (const Error& e) {
    if (e.code() != Errc::InvalidWindow) throw;
    return Window(res, w.level(), {});
  }
}

Character residue_char(const Character& f, const Valuation& v, const Window& w, std::uint64_t bound) {
  same_window(f.window(), w);
  if (!decomp_chars(v, w, bound).contains(f))
    throw Error(Errc::NotInDecomposition, "character " + f.to_string() + " is not in D_v");
  const Window rw = residue_window(v, w);
  Row vals(rw.rank());
  for (std::size_t j = 0; j < rw.rank(); ++j) vals[j] = evaluate(f, v.lift_residue(rw.gen_element(j))).value();
  return Character(rw, std::move(vals));
}

}  // namespace valdetect
