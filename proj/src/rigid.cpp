#include "valdetect/rigid.hpp"

#include <algorithm>
#include <deque>

#include "valdetect/cpairs.hpp"
#include "valdetect/scan.hpp"

namespace valdetect {

namespace {

using PsiVec = std::vector<Int>;

PsiVec psi_of(const std::vector<Character>& gens, const ClassVec& c) {
  PsiVec out;
  out.reserve(gens.size());
  for (const auto& g : gens) out.push_back(evaluate_class(g, c).value());
  return out;
}

bool is_zero(const PsiVec& p) {
  return std::all_of(p.begin(), p.end(), [](const Int& x) { return x == 0; });
}

std::pair<ClassVec, ClassVec> split(const ClassVec& key, std::size_t r) {
  return {ClassVec(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(r)),
          ClassVec(key.begin() + static_cast<std::ptrdiff_t>(r), key.end())};
}

bool all_zero_values(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<Coeff> to_coeffs(const PsiVec& p, const Level& lv) {
  std::vector<Coeff> out;
  for (const auto& x : p) out.emplace_back(x, lv);
  return out;
}

}  // namespace

const char* vresult_name(VResult r) {
  return r == VResult::Violation ? "Violation" : "NoViolationUpTo";
}

ValuativeVerdict valuative_test(const CharacterGroup& a, const Height& h, bool full, std::size_t clause_cap) {
  const Window& w = a.window();
  const Field& K = *w.field();
  const auto gens = a.generators();
  ValuativeVerdict v;
  v.height = h;

  v.checked.push_back("minus_one");
  if (!is_zero(psi_of(gens, w.class_of(K.neg(K.one()))))) {
    v.result = VResult::Violation;
    v.condition = "minus_one";
    v.witness_x = K.to_string(K.neg(K.one()));
    return v;
  }

  // class(-1 - x) = class(1 + x) since -1 lies in T.
  const auto prof = profile(w, h, -1);
  Stream stream(w.field(), h);
  v.checked.push_back("one_plus_x");
  v.exhaustive = prof->complete;
  std::vector<std::uint64_t> clause_slots;
  for (const auto& [key, slot] : prof->pairs) {
    const auto [cx, c1x] = split(key, w.rank());
    const PsiVec px = psi_of(gens, cx), p1x = psi_of(gens, c1x);
    if (is_zero(px)) continue;
    if (is_zero(p1x)) {
      clause_slots.push_back(slot);
      continue;
    }
    if (p1x != px) {
      v.result = VResult::Violation;
      v.condition = "one_plus_x";
      v.witness_x = K.to_string(stream.at(slot));
      return v;
    }
  }

  if (w.level().ell() != 2 && !full) return v;
  v.checked.push_back("one_plus_x_one_plus_y");
  std::sort(clause_slots.begin(), clause_slots.end());
  if (clause_slots.size() > clause_cap) clause_slots.resize(clause_cap);
  v.clause_cap = clause_cap;
  v.clause_elements = clause_slots.size();
  std::vector<Elem> xs;
  for (auto s : clause_slots) xs.push_back(stream.at(s));
  for (const auto& x : xs)
    for (const auto& y : xs) {
      const Elem z = K.add(K.one(), K.mul(x, K.add(K.one(), y)));
      if (K.is_zero(z)) continue;
      if (!is_zero(psi_of(gens, w.class_of(z)))) {
        v.result = VResult::Violation;
        v.condition = "one_plus_x_one_plus_y";
        v.witness_x = K.to_string(x);
        v.witness_y = K.to_string(y);
        return v;
      }
    }
  return v;
}

UnitGroupApprox::UnitGroupApprox(CharacterGroup a, Height x_height)
    : a_(std::move(a)), x_height_(std::move(x_height)), gens_(a_.generators()) {
  const Window& w = a_.window();
  const Field& K = *w.field();
  Stream s(w.field(), x_height_);
  for (std::uint64_t slot = 0; slot < s.size(); ++slot) {
    if (!s.valid(slot)) continue;
    const Elem x = s.at(slot);
    if (K.is_zero(x) || in_h(x)) continue;
    const Elem y = K.add(K.one(), x);
    if (K.is_zero(y)) continue;
    xs_.push_back(x);
    one_plus_xs_.push_back(w.class_of(y));
  }
  match_native();
}

bool UnitGroupApprox::psi_zero(const ClassVec& c) const { return is_zero(psi_of(gens_, c)); }

bool UnitGroupApprox::in_h(const Elem& x) const { return psi_zero(a_.window().class_of(x)); }

bool UnitGroupApprox::is_unit(const Elem& h) const {
  const Window& w = a_.window();
  const Field& K = *w.field();
  if (K.is_zero(h) || !in_h(h)) return false;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const Elem z = K.add(h, xs_[i]);
    if (K.is_zero(z)) return false;
    ClassVec d = w.class_of(z);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= one_plus_xs_[i][k];
    if (!psi_zero(w.canonical(std::move(d)))) return false;
  }
  return true;
}

Agreement UnitGroupApprox::agreement(const Valuation& v, const Height& h) const {
  const Field& K = *a_.window().field();
  Agreement out;
  Stream s(K.shared_from_this(), h);
  for (std::uint64_t slot = 0; slot < s.size(); ++slot) {
    if (!s.valid(slot)) continue;
    const Elem x = s.at(slot);
    if (K.is_zero(x)) continue;
    ++out.checked;
    if (is_unit(x) != all_zero_values(v.value_of(x))) {
      if (out.disagreements++ == 0) out.first_disagreement = K.to_string(x);
    }
  }
  return out;
}

void UnitGroupApprox::match_native() {
  const Window& w = a_.window();
  std::vector<Valuation> level{Valuation(w.field())};
  while (!level.empty()) {
    std::vector<Valuation> hits;
    for (const auto& v : level)
      if (inertia_chars(v, w).contains(a_)) hits.push_back(v);
    if (!hits.empty()) {
      for (const auto& v : hits) candidates_.push_back(v.spec());
      native_ = hits.front();
      if (hits.size() > 1)
        for (const auto& v : hits)
          if (agreement(v, x_height_).disagreements == 0) {
            native_ = v;
            break;
          }
      return;
    }
    std::vector<Valuation> next;
    for (const auto& v : level)
      for (auto& r : v.refinements(w)) next.push_back(std::move(r));
    level = std::move(next);
  }
}

UnitGroupApprox canonical_valuation(const CharacterGroup& a, const Height& x_height) {
  const ValuativeVerdict vt = valuative_test(a, x_height);
  if (!vt.valuative())
    throw Error(Errc::NotValuative, "H is not valuative: " + vt.condition + " fails at " + vt.witness_x);
  return UnitGroupApprox(a, x_height);
}

RigidComplement rigid_complement(const Character& f, const Character& g, const Height& h) {
  const Window& w = f.window();
  if (w.spec() != g.window().spec() || f.level() != g.level())
    throw Error(Errc::LevelMismatch, "characters live on different windows");
  const Level& lv = w.level();
  const std::vector<Character> psi{f, g};
  const auto prof = profile(w, h, -1);
  Stream stream(w.field(), h);
  std::vector<ClassVec> qualifying;
  std::vector<PsiVec> images;
  std::vector<std::uint64_t> slots;
  for (const auto& [key, slot] : prof->pairs) {
    const auto [cx, c1x] = split(key, w.rank());
    const PsiVec px = psi_of(psi, cx), p1x = psi_of(psi, c1x);
    if (is_zero(px) || is_zero(p1x) || p1x == px) continue;
    qualifying.push_back(cx);
    slots.push_back(slot);
    if (std::find(images.begin(), images.end(), px) == images.end()) images.push_back(px);
  }

  RigidComplement out{CharacterGroup::generated(w, psi), qualifying.empty(), {}, to_coeffs({0, 0}, lv), {}, h,
                      prof->complete};
  if (!qualifying.empty()) out.annihilator = out.annihilator.intersect(CharacterGroup::vanishing_on(w, qualifying));
  std::sort(slots.begin(), slots.end());
  for (std::size_t i = 0; i < slots.size() && i < 8; ++i) out.witnesses.push_back(w.field()->to_string(stream.at(slots[i])));
  for (const auto& p : images) out.images.push_back(to_coeffs(p, lv));
  if (images.empty()) return out;

  FinMod span{std::vector<std::string>(images.size(), "x"), left_kernel(images, 2, lv), lv};
  if (dim_mod_ell(span) > 1)
    throw Error(Errc::MainClaimViolated, "H/T is not cyclic; (f, g) is not the reduction of a high-level C-pair");
  // In a cyclic submodule of R_n^2 any element of least l-valuation generates.
  std::size_t best = 0;
  auto val = [&](const PsiVec& p) { return std::min(lv.val(p[0]), lv.val(p[1])); };
  for (std::size_t i = 1; i < images.size(); ++i)
    if (val(images[i]) < val(images[best])) best = i;
  out.generator = out.images[best];
  return out;
}

ComparableVerdict comparable(const Character& f, const Character& g, const Height& h) {
  const Window& w = f.window();
  if (w.spec() != g.window().spec() || f.level() != g.level())
    throw Error(Errc::LevelMismatch, "characters live on different windows");
  for (const auto* c : {&f, &g}) {
    const auto vt = valuative_test(CharacterGroup::generated(w, {*c}), h);
    if (!vt.valuative())
      throw Error(Errc::NotValuative, c->to_string() + " is not valuative: " + vt.condition + " fails at " + vt.witness_x);
  }
  ComparableVerdict out;
  out.height = h;
  const auto prof = profile(w, h, 1);
  const std::vector<Character> psi{f, g};
  for (const auto& [key, slot] : prof->pairs) {
    const auto [cx, c1x] = split(key, w.rank());
    if (!pair_span_cyclic(to_coeffs(psi_of(psi, c1x), w.level()), to_coeffs(psi_of(psi, cx), w.level()))) {
      out.comparable = false;
      out.witness = w.field()->to_string(Stream(w.field(), h).at(slot));
      break;
    }
  }
  out.pair_valuative = valuative_test(CharacterGroup::generated(w, psi), h).valuative();
  out.agree = out.comparable == out.pair_valuative;
  return out;
}

}  // namespace valdetect
