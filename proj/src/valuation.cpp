#include "valdetect/valuation.hpp"

namespace valdetect {

namespace {

const Field* layer_of(const FieldPtr& f, std::size_t layer) {
  const Field* cur = f.get();
  for (std::size_t i = 0; i < layer; ++i) {
    if (cur->kind() == FieldKind::Finite) return nullptr;
    cur = cur->base().get();
  }
  return cur;
}

}  // namespace

Valuation::Valuation(FieldPtr field, std::vector<PlaceStep> steps)
    : field_(std::move(field)), steps_(std::move(steps)) {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Field* f = layer_of(field_, i);
    const PlaceStep& s = steps_[i];
    if (f == nullptr || f->kind() == FieldKind::Finite)
      throw Error(Errc::UnsupportedValuation, "chain is longer than the tower");
    if (s.series) {
      if (f->kind() != FieldKind::Laurent || f->var() != s.label)
        throw Error(Errc::UnsupportedValuation, "'" + s.label + "' is not the series variable of layer " + std::to_string(i));
    } else {
      if (f->kind() != FieldKind::RatFunc)
        throw Error(Errc::UnsupportedValuation, "place step on a non rational function layer");
      if (s.place.size() < 2 || s.place.back() != 1 || !poly::is_irreducible(*f->base()->gf(), s.place))
        throw Error(Errc::UnsupportedValuation, "'" + s.label + "' is not monic irreducible");
    }
  }
}

Valuation Valuation::parse(FieldPtr field, const std::string& chain) {
  std::vector<PlaceStep> steps;
  std::size_t pos = 0;
  while (pos < chain.size()) {
    std::size_t comma = chain.find(',', pos);
    std::string label = chain.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? chain.size() : comma + 1;
    const Field* f = layer_of(field, steps.size());
    if (f == nullptr || f->kind() == FieldKind::Finite)
      throw Error(Errc::UnsupportedValuation, "chain is longer than the tower");
    if (f->kind() == FieldKind::Laurent) {
      steps.push_back({true, label, {}});
    } else {
      Elem e = f->parse_elem(label);
      const auto& r = std::get<RatVal>(e);
      if (r.den != Poly{1}) throw Error(Errc::UnsupportedValuation, "place must be a polynomial");
      steps.push_back({false, label, r.num});
    }
  }
  return Valuation(std::move(field), std::move(steps));
}

std::string Valuation::spec() const {
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) out += (i ? "," : "") + steps_[i].label;
  return out;
}

std::vector<std::int64_t> Valuation::value_of(const Elem& x) const {
  if (field_->is_zero(x)) throw Error(Errc::ZeroElement, "valuation of zero");
  std::vector<std::int64_t> out;
  const Field* f = field_.get();
  Elem cur = x;
  for (const auto& s : steps_) {
    if (s.series) {
      out.push_back(f->lead_exp(cur));
      cur = f->lead_coeff(cur);
      f = f->base().get();
    } else {
      const auto& r = std::get<RatVal>(cur);
      const GF& gf = *f->base()->gf();
      out.push_back(poly::valuation(gf, r.num, s.place) - poly::valuation(gf, r.den, s.place));
    }
  }
  return out;
}

FieldPtr Valuation::residue_model() const {
  if (steps_.empty()) return field_;
  const Field* f = layer_of(field_, steps_.size() - 1);
  const PlaceStep& last = steps_.back();
  if (last.series) return f->base();
  if (last.place.size() == 2) return f->base();
  const GF& gf = *f->base()->gf();
  if (gf.k() != 1)
    throw Error(Errc::UnsupportedValuation, "residue fields of higher degree places need a prime base");
  return Field::finite(GF::make_ext(gf.p(), last.place));
}

Elem Valuation::reduce(const Elem& unit) const {
  const Field* f = field_.get();
  Elem cur = unit;
  for (const auto& s : steps_) {
    if (s.series) {
      if (f->lead_exp(cur) != 0) throw Error(Errc::PreconditionViolated, "not a unit");
      cur = f->lead_coeff(cur);
      f = f->base().get();
      continue;
    }
    const auto& r = std::get<RatVal>(cur);
    const GF& gf = *f->base()->gf();
    Poly n = poly::mod(gf, r.num, s.place), d = poly::mod(gf, r.den, s.place);
    if (n.empty() || d.empty()) throw Error(Errc::PreconditionViolated, "not a unit");
    if (s.place.size() == 2) return Elem(gf.div(n.at(0), d.at(0)));
    FieldPtr res = residue_model();
    const GF& rg = *res->gf();
    auto code = [&](const Poly& p) {
      std::uint32_t c = 0;
      for (std::size_t i = p.size(); i-- > 0;) c = c * gf.p() + p[i];
      return c;
    };
    return Elem(rg.div(code(n), code(d)));
  }
  return cur;
}

Elem Valuation::lift_residue(const Elem& residue) const {
  if (steps_.empty()) return residue;
  const PlaceStep& last = steps_.back();
  const std::size_t layer = steps_.size() - 1;
  const Field* f = layer_of(field_, layer);
  if (last.series) return field_->embed(*f->base(), residue);
  std::uint32_t c = std::get<std::uint32_t>(residue);
  Poly p;
  if (last.place.size() == 2) {
    p = c ? Poly{c} : Poly{};
  } else {
    const std::uint32_t pr = f->base()->gf()->p();
    while (c) {
      p.push_back(c % pr);
      c /= pr;
    }
  }
  return field_->embed(*f, f->from_poly(p, {1}));
}

Valuation Valuation::compose(const Valuation& w) const {
  if (!w.field()->same(*residue_model()))
    throw Error(Errc::UnsupportedValuation, "second valuation lives on a different field");
  if (!steps_.empty() && !steps_.back().series && !w.trivial())
    throw Error(Errc::UnsupportedValuation, "finite residue fields carry no nontrivial valuation");
  std::vector<PlaceStep> s = steps_;
  s.insert(s.end(), w.steps().begin(), w.steps().end());
  return Valuation(field_, std::move(s));
}

std::vector<Valuation> Valuation::refinements(const Window& w) const {
  std::vector<Valuation> out;
  if (!steps_.empty() && !steps_.back().series) return out;
  const std::size_t layer = steps_.size();
  const Field* f = layer_of(field_, layer);
  if (f == nullptr || f->kind() == FieldKind::Finite) return out;
  auto extend = [&](PlaceStep s) {
    std::vector<PlaceStep> v = steps_;
    v.push_back(std::move(s));
    out.emplace_back(field_, std::move(v));
  };
  if (f->kind() == FieldKind::Laurent) {
    extend({true, f->var(), {}});
    return out;
  }
  std::vector<Poly> seen;
  for (const auto& g : w.gens())
    if (g.kind == GenKind::Place && g.layer == layer) {
      seen.push_back(g.place);
      extend({false, g.label, g.place});
    }
  const GF& gf = *f->base()->gf();
  for (std::uint32_t a = 0; a < gf.q(); ++a) {
    Poly p{gf.neg(a), 1};
    bool dup = false;
    for (const auto& s : seen) dup = dup || s == p;
    if (dup) continue;
    extend({false, f->to_string(f->from_poly(p, {1})), p});
  }
  return out;
}

bool Valuation::operator==(const Valuation& o) const {
  if (!field_->same(*o.field_) || steps_.size() != o.steps_.size()) return false;
  for (std::size_t i = 0; i < steps_.size(); ++i)
    if (steps_[i].series != o.steps_[i].series ||
        (steps_[i].series ? steps_[i].label != o.steps_[i].label : steps_[i].place != o.steps_[i].place))
      return false;
  return true;
}

}  // namespace valdetect
