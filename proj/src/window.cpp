#include "valdetect/window.hpp"

#include <cctype>
#include <limits>
#include <numeric>

namespace valdetect {

namespace {

bool is_constant_label(const std::string& s) {
  if (s.empty() || s[0] != 'c') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Window::Window(FieldPtr field, Level level, const std::vector<std::string>& labels)
    : field_(std::move(field)), level_(std::move(level)) {
  const std::size_t depth = field_->depth();
  series_idx_.assign(depth + 1, -1);
  const GF& cf = field_->const_field();
  for (const auto& label : labels) {
    if (index_of(label) >= 0) throw Error(Errc::InvalidWindow, "duplicate generator '" + label + "'");
    const std::size_t idx = gens_.size();
    if (is_constant_label(label)) {
      if (const_idx_ >= 0) throw Error(Errc::InvalidWindow, "two constant generators");
      const_idx_ = static_cast<int>(idx);
      gens_.push_back({GenKind::Constant, label, depth, {}});
      continue;
    }
    bool found = false;
    std::size_t layer = 0;
    for (const Field* f = field_.get(); f->kind() != FieldKind::Finite; f = f->base().get(), ++layer) {
      if (f->kind() == FieldKind::Laurent && f->var() == label) {
        series_idx_[layer] = static_cast<int>(idx);
        gens_.push_back({GenKind::Series, label, layer, {}});
        found = true;
        break;
      }
      if (f->kind() == FieldKind::RatFunc) {
        Elem e;
        try {
          e = f->parse_elem(label);
        } catch (const Error&) {
          break;
        }
        const auto& r = std::get<RatVal>(e);
        if (r.den != Poly{1} || r.num.size() < 2 || r.num.back() != 1 ||
            !poly::is_irreducible(*f->base()->gf(), r.num))
          throw Error(Errc::InvalidWindow, "'" + label + "' is not a monic irreducible polynomial");
        for (const auto& g : gens_)
          if (g.kind == GenKind::Place && g.place == r.num)
            throw Error(Errc::InvalidWindow, "place '" + label + "' listed twice");
        place_idx_.push_back(idx);
        gens_.push_back({GenKind::Place, label, layer, r.num});
        found = true;
        break;
      }
    }
    if (!found) throw Error(Errc::InvalidWindow, "unknown generator '" + label + "'");
  }

  const Int ln = level_.modulus();
  if (const_idx_ >= 0) {
    const std::uint64_t qm1 = cf.q() - 1;
    Int d = boost::multiprecision::gcd(Int(qm1), ln);
    std::uint64_t dd = static_cast<std::uint64_t>(d);
    // -1 must die in the quotient, so halve when it does not.
    if (cf.p() != 2 && (qm1 / 2) % dd != 0) dd /= 2;
    if (dd <= 1)
      throw Error(Errc::InvalidWindow, "constant generator has trivial class at this level");
    const_order_ = static_cast<std::int64_t>(dd);
  }
  for (const auto& g : gens_) {
    Int ord = g.kind == GenKind::Constant ? Int(const_order_) : ln;
    orders_.push_back(ord);
    small_orders_.push_back(ord <= std::numeric_limits<std::int64_t>::max()
                                ? static_cast<std::int64_t>(ord)
                                : 0);
  }
}

Window Window::parse(FieldPtr field, const std::string& spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  std::size_t pos = 0;
  if (s.compare(0, 6, "window") == 0) pos = 6;
  if (pos >= s.size() || s[pos] != '{') throw ParseError(pos, "expected '{'");
  ++pos;
  std::uint64_t ell = 0, n = 0;
  std::vector<std::string> labels;
  bool have_gens = false;
  while (pos < s.size() && s[pos] != '}') {
    std::size_t eq = s.find('=', pos);
    if (eq == std::string::npos) throw ParseError(pos, "expected key=value");
    std::string key = s.substr(pos, eq - pos);
    std::size_t vstart = eq + 1;
    if (key == "gens") {
      if (vstart >= s.size() || s[vstart] != '[') throw ParseError(vstart, "expected '['");
      std::size_t i = vstart + 1;
      int depth = 0;
      std::string cur;
      while (i < s.size() && !(s[i] == ']' && depth == 0)) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == ',' && depth == 0) {
          if (cur.empty()) throw ParseError(i, "empty generator");
          labels.push_back(cur);
          cur.clear();
        } else {
          cur += s[i];
        }
        ++i;
      }
      if (i >= s.size()) throw ParseError(i, "expected ']'");
      if (!cur.empty()) labels.push_back(cur);
      have_gens = true;
      pos = i + 1;
    } else if (key == "ell" || key == "n" || key == "level") {
      std::size_t i = vstart;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == vstart) throw ParseError(vstart, "expected a number");
      std::uint64_t v = std::stoull(s.substr(vstart, i - vstart));
      (key == "ell" ? ell : n) = v;
      pos = i;
    } else {
      throw ParseError(pos, "unknown window key '" + key + "'");
    }
    if (pos < s.size() && s[pos] == ',') ++pos;
  }
  if (pos >= s.size()) throw ParseError(pos, "expected '}'");
  if (pos + 1 != s.size()) throw ParseError(pos + 1, "trailing characters in window spec");
  if (ell == 0 || n == 0 || !have_gens) throw ParseError(0, "window needs ell, n and gens");
  return Window(std::move(field), Level(ell, n), labels);
}

int Window::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].label == label) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> Window::labels() const {
  std::vector<std::string> out;
  for (const auto& g : gens_) out.push_back(g.label);
  return out;
}

std::string Window::spec() const {
  std::string out = "{ell=" + std::to_string(level_.ell()) + ",n=" + std::to_string(level_.n()) + ",gens=[";
  for (std::size_t i = 0; i < gens_.size(); ++i) out += (i ? "," : "") + gens_[i].label;
  return out + "]}";
}

std::int64_t Window::constant_class(std::uint32_t c) const {
  if (const_idx_ < 0) return 0;
  return static_cast<std::int64_t>(field_->const_field().log(c)) % const_order_;
}

void Window::walk(const Field& f, std::size_t layer, const Elem& x, ClassVec& out) const {
  switch (f.kind()) {
    case FieldKind::Laurent: {
      const std::int64_t e = f.lead_exp(x);
      if (series_idx_[layer] >= 0) out[static_cast<std::size_t>(series_idx_[layer])] += e;
      walk(*f.base(), layer + 1, f.lead_coeff(x), out);
      return;
    }
    case FieldKind::RatFunc: {
      const auto& r = std::get<RatVal>(x);
      if (r.num.empty()) throw Error(Errc::ZeroElement, "class of zero");
      const GF& gf = *f.base()->gf();
      for (std::size_t idx : place_idx_)
        out[idx] += poly::valuation(gf, r.num, gens_[idx].place) -
                    poly::valuation(gf, r.den, gens_[idx].place);
      if (const_idx_ >= 0) out[static_cast<std::size_t>(const_idx_)] += constant_class(r.num.back());
      return;
    }
    case FieldKind::Finite: {
      const std::uint32_t c = std::get<std::uint32_t>(x);
      if (c == 0) throw Error(Errc::ZeroElement, "class of zero");
      if (const_idx_ >= 0) out[static_cast<std::size_t>(const_idx_)] += constant_class(c);
      return;
    }
  }
}

ClassVec Window::class_of(const Elem& x) const {
  ClassVec out(gens_.size(), 0);
  walk(*field_, 0, x, out);
  return canonical(std::move(out));
}

ClassVec Window::canonical(ClassVec v) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::int64_t o = small_orders_[i];
    if (o == 0) continue;
    v[i] %= o;
    if (v[i] < 0) v[i] += o;
  }
  return v;
}

Row Window::to_row(const ClassVec& v) const {
  Row r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = mod_floor(Int(v[i]), level_.modulus());
  return r;
}

Row Window::class_row(const Elem& x) const { return to_row(class_of(x)); }

Window Window::at_level(std::uint64_t n) const { return Window(field_, Level(level_.ell(), n), labels()); }

const Field& Window::layer_field(std::size_t layer) const { return *layer_field_ptr(layer); }

FieldPtr Window::layer_field_ptr(std::size_t layer) const {
  FieldPtr f = field_;
  for (std::size_t i = 0; i < layer; ++i) {
    if (f->kind() == FieldKind::Finite) throw Error(Errc::UnsupportedValuation, "layer out of range");
    f = f->base();
  }
  return f;
}

Window Window::sub_window(std::size_t layer) const {
  std::vector<std::string> labels;
  for (const auto& g : gens_)
    if (g.layer >= layer) labels.push_back(g.label);
  return Window(layer_field_ptr(layer), level_, labels);
}

std::vector<std::size_t> Window::sub_window_map(std::size_t layer) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].layer >= layer) out.push_back(i);
  return out;
}

Elem Window::gen_element(std::size_t i) const {
  const WindowGen& g = gens_.at(i);
  switch (g.kind) {
    case GenKind::Series: return field_->variable(g.label);
    case GenKind::Place: {
      const Field& rf = layer_field(g.layer);
      return field_->embed(rf, rf.from_poly(g.place, {1}));
    }
    case GenKind::Constant: {
      const Field& cf = layer_field(g.layer);
      return field_->embed(cf, Elem(field_->const_field().gen()));
    }
  }
  return field_->one();
}

}  // namespace valdetect
