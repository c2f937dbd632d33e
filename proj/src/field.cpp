#include "valdetect/field.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace valdetect {

bool LaurentVal::operator==(const LaurentVal& o) const {
  if (exps != o.exps || prec != o.prec || coeffs.size() != o.coeffs.size()) return false;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!(static_cast<const Elem::variant&>(coeffs[i]) ==
          static_cast<const Elem::variant&>(o.coeffs[i])))
      return false;
  return true;
}

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kExact || b == kExact) return kExact;
  return a + b;
}

bool valid_var(const std::string& v) {
  if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_')) return false;
  for (char ch : v)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return v != "z" && v != "O" && v != "c";
}

}  // namespace

// ---------------------------------------------------------------- builders

FieldPtr Field::finite(std::uint32_t q) { return finite(GF::make(q)); }

FieldPtr Field::finite(GFPtr gf) {
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Finite;
  f->spec_ = "gf:" + std::to_string(gf->q());
  if (gf->k() > 1 && !GF::make(gf->q())->same(*gf)) {
    // Residue fields with a non-default modulus carry it in the spec.
    std::string m;
    for (std::size_t i = 0; i < gf->modulus().size(); ++i)
      m += (i ? "," : "") + std::to_string(gf->modulus()[i]);
    f->spec_ += "[" + m + "]";
  }
  f->gf_ = std::move(gf);
  return f;
}

FieldPtr Field::ratfunc(FieldPtr base, std::string var) {
  if (base->kind() != FieldKind::Finite)
    throw Error(Errc::UnsupportedField, "rational function fields need a finite base");
  if (!valid_var(var)) throw Error(Errc::UnsupportedField, "invalid variable name '" + var + "'");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::RatFunc;
  f->spec_ = "ratfunc(" + base->spec() + "," + var + ")";
  f->base_ = std::move(base);
  f->var_ = std::move(var);
  return f;
}

FieldPtr Field::laurent(FieldPtr base, std::string var, std::int64_t prec) {
  if (!valid_var(var)) throw Error(Errc::UnsupportedField, "invalid variable name '" + var + "'");
  if (prec < 1) throw Error(Errc::UnsupportedField, "precision must be positive");
  for (const Field* b = base.get(); b; b = b->base_.get())
    if (b->kind_ != FieldKind::Finite && b->var_ == var)
      throw Error(Errc::UnsupportedField, "variable '" + var + "' used twice");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Laurent;
  f->spec_ = "laurent(" + base->spec() + "," + var + ",prec=" + std::to_string(prec) + ")";
  f->base_ = std::move(base);
  f->var_ = std::move(var);
  f->prec_ = prec;
  return f;
}

namespace {

struct SpecParser {
  const std::string& s;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(const std::string& tok) {
    ws();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) throw ParseError(pos, "expected '" + tok + "'");
  }
  std::uint64_t number() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw ParseError(pos, "expected a number");
    try {
      return std::stoull(s.substr(start, pos - start));
    } catch (const std::exception&) {
      throw ParseError(start, "number out of range");
    }
  }
  std::string ident() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (start == pos) throw ParseError(pos, "expected a variable name");
    return s.substr(start, pos - start);
  }
  FieldPtr field() {
    ws();
    std::size_t at = pos;
    try {
      if (eat("gf:")) {
        std::uint64_t q = number();
        if (q < 2 || q > (1u << 22)) throw ParseError(at, "unsupported field size");
        return Field::finite(static_cast<std::uint32_t>(q));
      }
      if (eat("ratfunc")) {
        expect("(");
        FieldPtr b = field();
        expect(",");
        std::string v = ident();
        expect(")");
        return Field::ratfunc(b, v);
      }
      if (eat("laurent")) {
        expect("(");
        FieldPtr b = field();
        expect(",");
        std::string v = ident();
        std::int64_t prec = 24;
        if (eat(",")) {
          expect("prec");
          expect("=");
          prec = static_cast<std::int64_t>(number());
        }
        expect(")");
        return Field::laurent(b, v, prec);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(at, e.what());
    }
    throw ParseError(pos, "expected gf:, ratfunc( or laurent(");
  }
};

}  // namespace

FieldPtr Field::parse(const std::string& spec) {
  SpecParser p{spec};
  FieldPtr f = p.field();
  p.ws();
  if (p.pos != spec.size()) throw ParseError(p.pos, "trailing characters in field spec");
  return f;
}

const GF& Field::const_field() const {
  const Field* f = this;
  while (f->kind_ != FieldKind::Finite) f = f->base_.get();
  return *f->gf_;
}

GFPtr Field::const_field_ptr() const {
  const Field* f = this;
  while (f->kind_ != FieldKind::Finite) f = f->base_.get();
  return f->gf_;
}

std::size_t Field::depth() const {
  std::size_t d = 0;
  for (const Field* f = this; f->kind_ != FieldKind::Finite; f = f->base_.get()) ++d;
  return d;
}

std::string Field::spec() const { return spec_; }

// ---------------------------------------------------------------- elements

Elem Field::zero() const {
  switch (kind_) {
    case FieldKind::Finite: return Elem(std::uint32_t{0});
    case FieldKind::RatFunc: return Elem(RatVal{{}, {1}});
    case FieldKind::Laurent: return Elem(LaurentVal{});
  }
  return Elem(std::uint32_t{0});
}

Elem Field::one() const { return from_int(1); }

Elem Field::from_int(std::int64_t v) const {
  switch (kind_) {
    case FieldKind::Finite: return Elem(gf_->from_int(v));
    case FieldKind::RatFunc: {
      std::uint32_t c = base_->gf()->from_int(v);
      return Elem(RatVal{c ? Poly{c} : Poly{}, {1}});
    }
    case FieldKind::Laurent: return embed(*base_, base_->from_int(v));
  }
  return zero();
}

Elem Field::variable(const std::string& v) const {
  switch (kind_) {
    case FieldKind::Finite:
      if (v == "z" && gf_->k() > 1) return Elem(gf_->p());
      throw Error(Errc::ParseError, "unknown variable '" + v + "'");
    case FieldKind::RatFunc:
      if (v == var_) return Elem(RatVal{{0, 1}, {1}});
      return embed(*base_, base_->variable(v));
    case FieldKind::Laurent:
      if (v == var_) return Elem(LaurentVal{{1}, {base_->one()}, kExact});
      return embed(*base_, base_->variable(v));
  }
  return zero();
}

Elem Field::embed(const Field& sub, const Elem& x) const {
  if (&sub == this || sub.spec_ == spec_) return x;
  switch (kind_) {
    case FieldKind::Finite:
      throw Error(Errc::UnsupportedField, "cannot embed into " + spec_);
    case FieldKind::RatFunc: {
      Elem c = base_->embed(sub, x);
      std::uint32_t v = std::get<std::uint32_t>(c);
      return Elem(RatVal{v ? Poly{v} : Poly{}, {1}});
    }
    case FieldKind::Laurent: {
      Elem c = base_->embed(sub, x);
      if (base_->is_zero(c)) return zero();
      return Elem(LaurentVal{{0}, {c}, kExact});
    }
  }
  return x;
}

bool Field::is_zero(const Elem& x) const {
  switch (kind_) {
    case FieldKind::Finite: return std::get<std::uint32_t>(x) == 0;
    case FieldKind::RatFunc: return std::get<RatVal>(x).num.empty();
    case FieldKind::Laurent: {
      const auto& l = std::get<LaurentVal>(x);
      return l.exps.empty() && l.prec == kExact;
    }
  }
  return false;
}

bool Field::is_exact(const Elem& x) const {
  if (kind_ != FieldKind::Laurent) return true;
  const auto& l = std::get<LaurentVal>(x);
  if (l.prec != kExact) return false;
  for (const auto& c : l.coeffs)
    if (!base_->is_exact(c)) return false;
  return true;
}

bool Field::equal(const Elem& a, const Elem& b) const {
  if (kind_ != FieldKind::Laurent)
    return static_cast<const Elem::variant&>(a) == static_cast<const Elem::variant&>(b);
  const auto& x = std::get<LaurentVal>(a);
  const auto& y = std::get<LaurentVal>(b);
  if (x.exps != y.exps || x.prec != y.prec) return false;
  for (std::size_t i = 0; i < x.coeffs.size(); ++i)
    if (!base_->equal(x.coeffs[i], y.coeffs[i])) return false;
  return true;
}

Elem Field::from_poly(const Poly& num0, const Poly& den0) const {
  const GF& f = *base_->gf();
  if (den0.empty()) throw Error(Errc::ZeroElement, "zero denominator");
  if (num0.empty()) return Elem(RatVal{{}, {1}});
  Poly g = poly::gcd(f, num0, den0);
  Poly num = poly::divmod(f, num0, g).first;
  Poly den = poly::divmod(f, den0, g).first;
  std::uint32_t c = f.inv(poly::lc(den));
  return Elem(RatVal{poly::scale(f, num, c), poly::scale(f, den, c)});
}

Elem Field::normalize_laurent(LaurentVal v) const {
  LaurentVal out;
  out.prec = v.prec;
  for (std::size_t i = 0; i < v.exps.size(); ++i) {
    if (v.exps[i] >= v.prec) continue;
    if (base_->is_zero(v.coeffs[i])) continue;
    out.exps.push_back(v.exps[i]);
    out.coeffs.push_back(std::move(v.coeffs[i]));
  }
  return Elem(std::move(out));
}

Elem Field::add(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case FieldKind::Finite:
      return Elem(gf_->add(std::get<std::uint32_t>(a), std::get<std::uint32_t>(b)));
    case FieldKind::RatFunc: {
      const GF& f = *base_->gf();
      const auto& x = std::get<RatVal>(a);
      const auto& y = std::get<RatVal>(b);
      if (x.den == y.den) return from_poly(poly::add(f, x.num, y.num), x.den);
      return from_poly(poly::add(f, poly::mul(f, x.num, y.den), poly::mul(f, y.num, x.den)),
                       poly::mul(f, x.den, y.den));
    }
    case FieldKind::Laurent: {
      const auto& x = std::get<LaurentVal>(a);
      const auto& y = std::get<LaurentVal>(b);
      LaurentVal r;
      r.prec = std::min(x.prec, y.prec);
      std::size_t i = 0, j = 0;
      while (i < x.exps.size() || j < y.exps.size()) {
        if (j == y.exps.size() || (i < x.exps.size() && x.exps[i] < y.exps[j])) {
          r.exps.push_back(x.exps[i]);
          r.coeffs.push_back(x.coeffs[i++]);
        } else if (i == x.exps.size() || y.exps[j] < x.exps[i]) {
          r.exps.push_back(y.exps[j]);
          r.coeffs.push_back(y.coeffs[j++]);
        } else {
          r.exps.push_back(x.exps[i]);
          r.coeffs.push_back(base_->add(x.coeffs[i++], y.coeffs[j++]));
        }
      }
      return normalize_laurent(std::move(r));
    }
  }
  return a;
}

Elem Field::neg(const Elem& a) const {
  switch (kind_) {
    case FieldKind::Finite: return Elem(gf_->neg(std::get<std::uint32_t>(a)));
    case FieldKind::RatFunc: {
      const GF& f = *base_->gf();
      const auto& x = std::get<RatVal>(a);
      return Elem(RatVal{poly::scale(f, x.num, f.neg(1)), x.den});
    }
    case FieldKind::Laurent: {
      LaurentVal r = std::get<LaurentVal>(a);
      for (auto& c : r.coeffs) c = base_->neg(c);
      return Elem(std::move(r));
    }
  }
  return a;
}

Elem Field::mul(const Elem& a, const Elem& b) const {
  switch (kind_) {
    case FieldKind::Finite:
      return Elem(gf_->mul(std::get<std::uint32_t>(a), std::get<std::uint32_t>(b)));
    case FieldKind::RatFunc: {
      const GF& f = *base_->gf();
      const auto& x = std::get<RatVal>(a);
      const auto& y = std::get<RatVal>(b);
      return from_poly(poly::mul(f, x.num, y.num), poly::mul(f, x.den, y.den));
    }
    case FieldKind::Laurent: {
      if (is_zero(a) || is_zero(b)) return zero();
      const auto& x = std::get<LaurentVal>(a);
      const auto& y = std::get<LaurentVal>(b);
      const std::int64_t vx = x.exps.empty() ? x.prec : x.exps[0];
      const std::int64_t vy = y.exps.empty() ? y.prec : y.exps[0];
      const std::int64_t prec = std::min(sat_add(x.prec, vy), sat_add(y.prec, vx));
      std::map<std::int64_t, Elem> acc;
      for (std::size_t i = 0; i < x.exps.size(); ++i)
        for (std::size_t j = 0; j < y.exps.size(); ++j) {
          std::int64_t e = x.exps[i] + y.exps[j];
          if (e >= prec) continue;
          Elem t = base_->mul(x.coeffs[i], y.coeffs[j]);
          auto it = acc.find(e);
          if (it == acc.end())
            acc.emplace(e, std::move(t));
          else
            it->second = base_->add(it->second, t);
        }
      LaurentVal r;
      r.prec = prec;
      for (auto& [e, c] : acc) {
        r.exps.push_back(e);
        r.coeffs.push_back(std::move(c));
      }
      return normalize_laurent(std::move(r));
    }
  }
  return a;
}

Elem Field::inv_laurent(const LaurentVal& a) const {
  if (a.exps.empty()) {
    if (a.prec == kExact) throw Error(Errc::ZeroElement, "inverse of zero");
    throw Error(Errc::PrecisionExhausted, "leading term unknown");
  }
  const std::int64_t v = a.exps[0];
  const Elem cinv = base_->inv(a.coeffs[0]);
  if (a.exps.size() == 1 && a.prec == kExact)
    return Elem(LaurentVal{{-v}, {cinv}, kExact});
  const std::int64_t rel = a.prec == kExact ? prec_ : a.prec - v;
  std::vector<Elem> ac(static_cast<std::size_t>(rel), base_->zero());
  for (std::size_t i = 0; i < a.exps.size(); ++i) {
    std::int64_t j = a.exps[i] - v;
    if (j < rel) ac[static_cast<std::size_t>(j)] = a.coeffs[i];
  }
  std::vector<Elem> b;
  b.reserve(static_cast<std::size_t>(rel));
  b.push_back(cinv);
  for (std::int64_t i = 1; i < rel; ++i) {
    Elem s = base_->zero();
    for (std::int64_t j = 1; j <= i; ++j)
      if (!base_->is_zero(ac[static_cast<std::size_t>(j)]))
        s = base_->add(s, base_->mul(ac[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(i - j)]));
    b.push_back(base_->neg(base_->mul(cinv, s)));
  }
  LaurentVal r;
  r.prec = -v + rel;
  for (std::int64_t i = 0; i < rel; ++i) {
    r.exps.push_back(-v + i);
    r.coeffs.push_back(b[static_cast<std::size_t>(i)]);
  }
  return normalize_laurent(std::move(r));
}

Elem Field::inv(const Elem& a) const {
  switch (kind_) {
    case FieldKind::Finite: return Elem(gf_->inv(std::get<std::uint32_t>(a)));
    case FieldKind::RatFunc: {
      const auto& x = std::get<RatVal>(a);
      if (x.num.empty()) throw Error(Errc::ZeroElement, "inverse of zero");
      return from_poly(x.den, x.num);
    }
    case FieldKind::Laurent: return inv_laurent(std::get<LaurentVal>(a));
  }
  return a;
}

Elem Field::pow(const Elem& a, std::int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  Elem r = one(), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e > 0) b = mul(b, b);
  }
  return r;
}

std::int64_t Field::lead_exp(const Elem& x) const {
  const auto& l = std::get<LaurentVal>(x);
  if (l.exps.empty()) {
    if (l.prec == kExact) throw Error(Errc::ZeroElement, "valuation of zero");
    throw Error(Errc::PrecisionExhausted, "leading term unknown");
  }
  return l.exps[0];
}

Elem Field::lead_coeff(const Elem& x) const {
  lead_exp(x);
  return std::get<LaurentVal>(x).coeffs[0];
}

// ---------------------------------------------------------------- DSL

namespace {

struct ElemParser {
  const Field& f;
  const std::string& s;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char ch) {
    ws();
    return pos < s.size() && s[pos] == ch;
  }
  std::string digits() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw ParseError(pos, "expected a number");
    return s.substr(start, pos - start);
  }
  std::int64_t small_int() {
    std::size_t at = pos;
    std::string d = digits();
    if (d.size() > 15) throw ParseError(at, "exponent too large");
    return std::stoll(d);
  }
  Elem expr() {
    Elem acc = term();
    while (true) {
      if (peek('+')) {
        ++pos;
        acc = f.add(acc, term());
      } else if (peek('-')) {
        ++pos;
        acc = f.sub(acc, term());
      } else {
        return acc;
      }
    }
  }
  Elem term() {
    Elem acc = unary();
    while (true) {
      if (peek('*')) {
        ++pos;
        acc = f.mul(acc, unary());
      } else if (peek('/')) {
        ++pos;
        std::size_t at = pos;
        Elem d = unary();
        if (f.is_zero(d)) throw ParseError(at, "division by zero");
        acc = f.div(acc, d);
      } else {
        return acc;
      }
    }
  }
  Elem unary() {
    if (peek('-')) {
      ++pos;
      return f.neg(unary());
    }
    return power();
  }
  Elem power() {
    Elem b = atom();
    if (!peek('^')) return b;
    ++pos;
    bool negative = false;
    if (peek('-')) {
      ++pos;
      negative = true;
    }
    std::size_t at = pos;
    std::int64_t e = small_int();
    if (negative && f.is_zero(b)) throw ParseError(at, "negative power of zero");
    return f.pow(b, negative ? -e : e);
  }
  Elem atom() {
    ws();
    if (pos >= s.size()) throw ParseError(pos, "unexpected end of input");
    const char ch = s[pos];
    if (ch == '(') {
      ++pos;
      Elem e = expr();
      if (!peek(')')) throw ParseError(pos, "expected ')'");
      ++pos;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string d = digits();
      std::int64_t p = f.characteristic(), r = 0;
      for (char c : d) r = (r * 10 + (c - '0')) % p;
      return f.from_int(r);
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "O" && peek('(')) return big_o(start);
      try {
        return f.variable(name);
      } catch (const Error&) {
        throw ParseError(start, "unknown variable '" + name + "'");
      }
    }
    throw ParseError(pos, std::string("unexpected character '") + ch + "'");
  }
  // O(t^N) for the variable of some Laurent layer.
  Elem big_o(std::size_t start) {
    ++pos;
    ws();
    std::size_t vs = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    std::string name = s.substr(vs, pos - vs);
    std::int64_t e = 1;
    if (peek('^')) {
      ++pos;
      bool negative = false;
      if (peek('-')) {
        ++pos;
        negative = true;
      }
      e = small_int();
      if (negative) e = -e;
    }
    if (!peek(')')) throw ParseError(pos, "expected ')'");
    ++pos;
    const Field* layer = &f;
    while (layer->kind() != FieldKind::Finite && !(layer->kind() == FieldKind::Laurent && layer->var() == name))
      layer = layer->base().get();
    if (layer->kind() != FieldKind::Laurent) throw ParseError(start, "O() needs a series variable");
    LaurentVal o;
    o.prec = e;
    return f.embed(*layer, Elem(std::move(o)));
  }
};

bool needs_parens(const std::string& s) {
  return s.find('+') != std::string::npos || s.find('/') != std::string::npos;
}

}  // namespace

Elem Field::parse_elem(const std::string& text) const {
  ElemParser p{*this, text};
  Elem e = p.expr();
  p.ws();
  if (p.pos != text.size()) throw ParseError(p.pos, "trailing characters in element");
  return e;
}

std::string Field::to_string(const Elem& x) const {
  switch (kind_) {
    case FieldKind::Finite: return gf_->to_string(std::get<std::uint32_t>(x));
    case FieldKind::RatFunc: {
      const GF& f = *base_->gf();
      auto pstr = [&](const Poly& p) {
        if (p.empty()) return std::string("0");
        std::string out;
        for (std::size_t i = p.size(); i-- > 0;) {
          if (p[i] == 0) continue;
          std::string c = f.to_string(p[i]);
          if (c.find('+') != std::string::npos) c = "(" + c + ")";
          std::string t;
          if (i == 0) {
            t = c;
          } else {
            t = (p[i] == 1 ? "" : c + "*") + var_;
            if (i > 1) t += "^" + std::to_string(i);
          }
          out += (out.empty() ? "" : "+") + t;
        }
        return out;
      };
      const auto& r = std::get<RatVal>(x);
      if (r.den == Poly{1}) return pstr(r.num);
      auto wrap = [](const std::string& s) {
        return s.find('+') != std::string::npos ? "(" + s + ")" : s;
      };
      return wrap(pstr(r.num)) + "/" + wrap(pstr(r.den));
    }
    case FieldKind::Laurent: {
      const auto& l = std::get<LaurentVal>(x);
      std::string out;
      for (std::size_t i = 0; i < l.exps.size(); ++i) {
        const std::int64_t e = l.exps[i];
        std::string c = base_->to_string(l.coeffs[i]);
        std::string t;
        if (e == 0) {
          t = c;
        } else {
          std::string tv = var_ + (e == 1 ? "" : "^" + std::to_string(e));
          if (c == "1")
            t = tv;
          else
            t = (needs_parens(c) ? "(" + c + ")" : c) + "*" + tv;
        }
        out += (out.empty() ? "" : "+") + t;
      }
      if (l.prec != kExact)
        out += (out.empty() ? "" : "+") + std::string("O(") + var_ + "^" + std::to_string(l.prec) + ")";
      return out.empty() ? "0" : out;
    }
  }
  return "";
}

// ---------------------------------------------------------------- height

std::uint64_t Height::at(std::size_t layer) const {
  if (per_layer.empty()) throw Error(Errc::PreconditionViolated, "empty height");
  return per_layer[std::min(layer, per_layer.size() - 1)];
}

Height Height::inner() const {
  if (per_layer.size() <= 1) return *this;
  return Height{{per_layer.begin() + 1, per_layer.end()}};
}

Height Height::parse(const std::string& s) {
  Height h;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw ParseError(pos, "expected a height");
    std::uint64_t v = std::stoull(s.substr(start, pos - start));
    if (v < 1) throw ParseError(start, "heights must be positive");
    h.per_layer.push_back(v);
    if (pos == s.size()) break;
    if (s[pos] != ',') throw ParseError(pos, "expected ','");
    ++pos;
  }
  return h;
}

std::string Height::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < per_layer.size(); ++i)
    out += (i ? "," : "") + std::to_string(per_layer[i]);
  return out;
}

// ---------------------------------------------------------------- stream

namespace ratenum {

std::uint64_t ipow64(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Poly num_from_rank(std::uint64_t rank, std::uint32_t q) {
  if (rank == 0) return {};
  std::uint64_t j = 0, qj = 1;
  while (qj * q <= rank) {
    qj *= q;
    ++j;
  }
  std::uint64_t t = rank - qj;
  std::uint64_t lex = t / (q - 1);
  Poly p(j + 1);
  p[j] = static_cast<std::uint32_t>(t % (q - 1) + 1);
  for (std::uint64_t i = j; i-- > 0;) {
    p[i] = static_cast<std::uint32_t>(lex % q);
    lex /= q;
  }
  return p;
}

std::uint64_t num_rank(const Poly& p, std::uint32_t q) {
  if (p.empty()) return 0;
  const std::uint64_t j = p.size() - 1;
  std::uint64_t lex = 0;
  for (std::uint64_t i = 0; i < j; ++i) lex = lex * q + p[i];
  return ipow64(q, j) + lex * (q - 1) + (p[j] - 1);
}

Poly monic_from_rank(std::uint64_t rank, std::uint32_t q) {
  std::uint64_t j = 0, qj = 1, start = 0;
  while (start + qj <= rank) {
    start += qj;
    qj *= q;
    ++j;
  }
  std::uint64_t lex = rank - start;
  Poly p(j + 1);
  p[j] = 1;
  for (std::uint64_t i = j; i-- > 0;) {
    p[i] = static_cast<std::uint32_t>(lex % q);
    lex /= q;
  }
  return p;
}

std::uint64_t monic_rank(const Poly& p, std::uint32_t q) {
  const std::uint64_t j = p.size() - 1;
  std::uint64_t lex = 0;
  for (std::uint64_t i = 0; i < j; ++i) lex = lex * q + p[i];
  return (ipow64(q, j) - 1) / (q - 1) + lex;
}

}  // namespace ratenum

namespace {

std::uint64_t rat_layer_size(std::uint64_t q, std::uint64_t k) {
  if (k == 0) return q;
  const std::uint64_t qk = ratenum::ipow64(q, k);
  return (qk - 1) * qk + qk * qk * q;
}

}  // namespace

Stream::Stream(FieldPtr field, Height h) : field_(std::move(field)), height_(std::move(h)) {
  switch (field_->kind()) {
    case FieldKind::Finite:
      size_ = field_->gf()->q();
      break;
    case FieldKind::RatFunc: {
      const std::uint64_t q = field_->base()->gf()->q();
      const std::uint64_t hh = height_.at(0);
      size_ = 0;
      for (std::uint64_t k = 0; k <= hh; ++k) size_ += rat_layer_size(q, k);
      break;
    }
    case FieldKind::Laurent: {
      inner_ = std::make_shared<Stream>(field_->base(), height_.inner());
      size_ = inner_->size() * (1 + 4 * height_.at(0));
      break;
    }
  }
}

Stream::RatSlot Stream::rat_decode(std::uint64_t slot) const {
  const std::uint64_t q = field_->base()->gf()->q();
  if (slot < q) return {slot ? Poly{static_cast<std::uint32_t>(slot)} : Poly{}, {1}};
  std::uint64_t r = slot - q;
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t ls = rat_layer_size(q, k);
    if (r >= ls) {
      r -= ls;
      continue;
    }
    const std::uint64_t qk = ratenum::ipow64(q, k);
    const std::uint64_t lower = (qk - 1) * qk;
    if (r < lower) {
      const std::uint64_t block = (q - 1) * qk;
      return {ratenum::num_from_rank(qk + r % block, static_cast<std::uint32_t>(q)),
              ratenum::monic_from_rank(r / block, static_cast<std::uint32_t>(q))};
    }
    r -= lower;
    const std::uint64_t block = qk * q;
    return {ratenum::num_from_rank(r % block, static_cast<std::uint32_t>(q)),
            ratenum::monic_from_rank((qk - 1) / (q - 1) + r / block, static_cast<std::uint32_t>(q))};
  }
}

bool Stream::valid(std::uint64_t slot) const {
  if (slot >= size_) return false;
  switch (field_->kind()) {
    case FieldKind::Finite: return true;
    case FieldKind::RatFunc: {
      if (slot < field_->base()->gf()->q()) return true;
      RatSlot rs = rat_decode(slot);
      return poly::deg(poly::gcd(*field_->base()->gf(), rs.num, rs.den)) == 0;
    }
    case FieldKind::Laurent: {
      const std::uint64_t b = inner_->size();
      if (slot < b) return inner_->valid(slot);
      const std::uint64_t w = slot % b;
      if (w == 0 || !inner_->valid(w)) return false;
      // -1 + c t^j repeats 1 + c t^j in characteristic 2.
      return !(laurent_kind(slot / b - 1) == 3 && field_->characteristic() == 2);
    }
  }
  return false;
}

Elem Stream::at(std::uint64_t slot) const {
  switch (field_->kind()) {
    case FieldKind::Finite: return Elem(static_cast<std::uint32_t>(slot));
    case FieldKind::RatFunc: {
      RatSlot rs = rat_decode(slot);
      return Elem(RatVal{std::move(rs.num), std::move(rs.den)});
    }
    case FieldKind::Laurent: {
      const std::uint64_t b = inner_->size();
      const FieldPtr& base = field_->base();
      Elem c = inner_->at(slot % b);
      if (slot < b) return field_->embed(*base, c);
      const std::uint64_t blk = slot / b - 1;
      const std::int64_t e = laurent_shell(blk);
      switch (laurent_kind(blk)) {
        case 0: return Elem(LaurentVal{{e}, {c}, kExact});
        case 1: return Elem(LaurentVal{{-e}, {c}, kExact});
        case 2: return Elem(LaurentVal{{0, e}, {base->one(), c}, kExact});
        default: return Elem(LaurentVal{{0, e}, {base->from_int(-1), c}, kExact});
      }
    }
  }
  return field_->zero();
}

}  // namespace valdetect
