#include "valdetect/milnor.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "valdetect/scan.hpp"

namespace valdetect {

namespace {

bool all_zero(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
}

}  // namespace

SymbolPresentation::SymbolPresentation(Window w, Height h, std::vector<SteinbergWitness> witnesses,
                                       bool complete)
    : w_(std::move(w)), h_(std::move(h)), witnesses_(std::move(witnesses)), complete_(complete) {}

SymbolPresentation SymbolPresentation::with_kernel(const std::vector<ClassVec>& classes) const {
  SymbolPresentation out(*this);
  out.extra_.insert(out.extra_.end(), classes.begin(), classes.end());
  return out;
}

std::size_t SymbolPresentation::wedge_index(std::size_t i, std::size_t j) const {
  if (i >= j) throw Error(Errc::PreconditionViolated, "wedge index needs i < j");
  const std::size_t r = w_.rank();
  return i * r - i * (i + 1) / 2 + (j - i - 1);
}

Row SymbolPresentation::wedge(const ClassVec& a, const ClassVec& b) const {
  const std::size_t r = w_.rank();
  Row out(wedge_rank(), 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      out[wedge_index(i, j)] = w_.level().reduce(Int(a[i]) * b[j] - Int(a[j]) * b[i]);
  return out;
}

FinMod SymbolPresentation::module() const {
  const std::size_t r = w_.rank();
  FinMod m{{}, {}, w_.level()};
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      m.gens.push_back(std::to_string(i) + "^" + std::to_string(j));
      Row rel(wedge_rank(), 0);
      rel[wedge_index(i, j)] = std::min(w_.orders()[i], w_.orders()[j]);
      m.relations.push_back(std::move(rel));
    }
  for (const auto& s : witnesses_) m.relations.push_back(wedge(s.z_class, s.one_minus_z_class));
  for (const auto& c : extra_)
    for (std::size_t k = 0; k < r; ++k) {
      ClassVec e(r, 0);
      e[k] = 1;
      Row rel = wedge(c, e);
      if (!all_zero(rel)) m.relations.push_back(std::move(rel));
    }
  return m;
}

FinMod SymbolPresentation::class_module() const {
  const std::size_t r = w_.rank();
  FinMod m{w_.labels(), {}, w_.level()};
  for (std::size_t i = 0; i < r; ++i) {
    Row rel(r, 0);
    rel[i] = w_.orders()[i];
    m.relations.push_back(std::move(rel));
  }
  for (const auto& c : extra_) m.relations.emplace_back(c.begin(), c.end());
  return m;
}

Int SymbolPresentation::order_of(const Row& x) const {
  const FinMod m = module();
  const HowellForm h = howell(m.relations, wedge_rank(), w_.level());
  Int k = 1;
  for (std::uint64_t e = 0; e <= w_.level().n(); ++e, k *= w_.level().ell()) {
    Row y(x);
    for (auto& v : y) v *= k;
    if (h.contains(y)) return k;
  }
  return k;
}

bool SymbolPresentation::vanishes(const Row& x) const { return order_of(x) == 1; }

SymbolPresentation steinberg_scan(const Window& w, const Height& h) {
  const auto prof = profile(w, h, 1);
  const std::size_t r = w.rank();
  Stream stream(w.field(), h);
  SymbolPresentation probe(w, h, {}, prof->complete);
  std::vector<SteinbergWitness> wit;
  std::set<Row> seen;
  for (const auto& [key, slot] : prof->pairs) {
    ClassVec a(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(r));
    ClassVec b(key.begin() + static_cast<std::ptrdiff_t>(r), key.end());
    Row x = probe.wedge(a, b);
    if (all_zero(x) || !seen.insert(x).second) continue;
    wit.push_back({slot, w.field()->to_string(stream.at(slot)), std::move(a), std::move(b)});
  }
  std::sort(wit.begin(), wit.end(), [](const auto& p, const auto& q) { return p.slot < q.slot; });
  return SymbolPresentation(w, h, std::move(wit), prof->complete);
}

K2Order k2_cyclic_order(const SymbolPresentation& sp) {
  if (dim_mod_ell(sp.class_module()) != 2)
    throw Error(Errc::RankNotTwo, "K^x/T' does not have rank 2");
  const FinMod m = sp.module();
  const HowellForm h = howell(m.relations, sp.wedge_rank(), sp.window().level());
  const std::uint64_t logo = sp.window().level().n() * sp.wedge_rank() - h.log_size();
  if (dim_mod_ell(m) > 1) throw Error(Errc::RankNotTwo, "symbol quotient is not cyclic");
  return {sp.window().level().power(logo), sp.window().level().n() - logo};
}

TameSymbol tame_symbol(const Elem& f, const Elem& g, const Valuation& v, const Level& level) {
  if (v.rank() != 1) throw Error(Errc::UnsupportedValuation, "tame symbols need a rank one place");
  const Field& K = *v.field();
  if (K.is_zero(f) || K.is_zero(g)) throw Error(Errc::ZeroElement, "tame symbol of zero");
  const PlaceStep& s = v.steps()[0];
  const Elem pi = s.series ? K.variable(s.label) : K.from_poly(s.place, {1});
  const std::int64_t a = v.value_of(f)[0], b = v.value_of(g)[0];
  TameSymbol out;
  out.residue_field = v.residue_model();
  const Field& k = *out.residue_field;
  const Elem rf = v.reduce(K.mul(f, K.pow(pi, -a)));
  const Elem rg = v.reduce(K.mul(g, K.pow(pi, -b)));
  Elem val = k.mul(k.pow(rf, b), k.pow(rg, -a));
  if ((a * b) % 2 != 0) val = k.neg(val);
  out.value = val;
  if (k.kind() == FieldKind::Finite) {
    const GF& gf = *k.gf();
    out.finite = true;
    const Int d = boost::multiprecision::gcd(level.modulus(), Int(gf.q() - 1));
    out.modulus = static_cast<std::uint64_t>(d);
    out.log_class = gf.log(std::get<std::uint32_t>(val)) % out.modulus;
    out.trivial = out.log_class == 0;
  } else {
    out.trivial = k.equal(val, k.one());
  }
  return out;
}

std::optional<std::string> tame_certificate(const Elem& f, const Elem& g, const std::vector<Valuation>& places,
                                            const Level& level) {
  for (const auto& v : places)
    if (!tame_symbol(f, g, v, level).trivial) return v.spec();
  return std::nullopt;
}

}  // namespace valdetect
