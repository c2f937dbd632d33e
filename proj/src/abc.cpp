#include "valdetect/abc.hpp"

#include <algorithm>
#include <set>

namespace valdetect {

namespace {

void same_frame(const std::string& a, const CentralFrame& fr) {
  if (a != fr.id) throw Error(Errc::FrameMismatch, "element belongs to frame " + a + ", not " + fr.id);
}

Row reduced(Row r, const Level& lv) {
  for (auto& x : r) x = lv.reduce(x);
  return r;
}

}  // namespace

std::size_t CentralFrame::wedge_index(std::size_t i, std::size_t j) const {
  if (i >= j || j >= rank()) throw Error(Errc::PreconditionViolated, "wedge index needs i < j < rank");
  return i * rank() - i * (i + 1) / 2 + (j - i - 1);
}

CentralFrame CentralFrame::free(const Level& level, std::vector<std::string> labels) {
  CentralFrame fr{level, std::move(labels), {}, "", "", {}, false};
  fr.id = "free:" + std::to_string(level.ell()) + "^" + std::to_string(level.n());
  for (const auto& l : fr.labels) fr.id += "," + l;
  return fr;
}

AbelianElement abelian(const CentralFrame& fr, const Row& s) {
  if (s.size() != fr.rank()) throw Error(Errc::FrameMismatch, "coefficient vector has the wrong length");
  return {fr.id, reduced(s, fr.level)};
}

AbelianElement abelian(const CentralFrame& fr, const Character& f) {
  if (!fr.field_derived || fr.id.rfind(f.window().spec() + "|", 0) != 0)
    throw Error(Errc::FrameMismatch, "character window does not match the frame");
  return abelian(fr, f.dual_coords());
}

AbelianElement operator+(const AbelianElement& a, const AbelianElement& b) {
  if (a.frame != b.frame || a.s.size() != b.s.size())
    throw Error(Errc::FrameMismatch, "elements of different frames");
  AbelianElement out = a;
  for (std::size_t i = 0; i < out.s.size(); ++i) out.s[i] += b.s[i];
  return out;
}

Int power_correction(const Level& lv) {
  const Int& m = lv.modulus();
  return lv.reduce(m * (m - 1) / 2);
}

CentralElement commutator(const AbelianElement& sigma, const AbelianElement& tau, const CentralFrame& fr) {
  same_frame(sigma.frame, fr);
  same_frame(tau.frame, fr);
  CentralElement out{fr.id, Row(fr.width(), 0)};
  for (std::size_t i = 0; i < fr.rank(); ++i)
    for (std::size_t j = i + 1; j < fr.rank(); ++j)
      out.coords[fr.wedge_index(i, j)] = fr.level.reduce(sigma.s[i] * tau.s[j] - sigma.s[j] * tau.s[i]);
  return out;
}

CentralElement pi_power(const AbelianElement& sigma, const CentralFrame& fr) {
  same_frame(sigma.frame, fr);
  CentralElement out{fr.id, Row(fr.width(), 0)};
  const Int c = power_correction(fr.level);
  // (x_1 ... x_k)^m = prod x_i^m prod_{i<j} [x_j, x_i]^C(m,2) and [j,i] = -[i,j].
  for (std::size_t i = 0; i < fr.rank(); ++i) {
    out.coords[fr.wedge_rank() + i] = fr.level.reduce(sigma.s[i]);
    for (std::size_t j = i + 1; j < fr.rank(); ++j)
      out.coords[fr.wedge_index(i, j)] = fr.level.reduce(-c * sigma.s[i] * sigma.s[j]);
  }
  return out;
}

CentralElement beta_power(const AbelianElement& sigma, const CentralFrame& fr) {
  CentralElement out = pi_power(sigma, fr);
  for (auto& x : out.coords) x = fr.level.reduce(2 * x);
  return out;
}

bool in_relations(const CentralElement& x, const std::vector<CentralElement>& gens, const CentralFrame& fr) {
  same_frame(x.frame, fr);
  std::vector<Row> rows = fr.relations;
  for (const auto& g : gens) {
    same_frame(g.frame, fr);
    rows.push_back(g.coords);
  }
  return howell(rows, fr.width(), fr.level).contains(x.coords);
}

bool cl_pair(const AbelianElement& sigma, const AbelianElement& tau, const CentralFrame& fr) {
  return in_relations(commutator(sigma, tau, fr), {beta_power(sigma, fr), beta_power(tau, fr)}, fr);
}

Elem default_omega(const Window& w) {
  const Field& K = *w.field();
  const GF& gf = K.const_field();
  const Int& m = w.level().modulus();
  const Int qm1 = gf.q() - 1;
  if (qm1 % m != 0)
    throw Error(Errc::NoRootsOfUnity, "l^n = " + to_dec(m) + " does not divide q - 1 = " + to_dec(qm1));
  for (std::uint32_t c = 1; c < gf.q(); ++c) {
    const Int order = qm1 / boost::multiprecision::gcd(Int(gf.log(c)), qm1);
    if (order == m) return K.embed(w.layer_field(K.depth()), Elem(c));
  }
  throw Error(Errc::NoRootsOfUnity, "no root of unity of order l^n");
}

CentralFrame frame_from_k2(const SymbolPresentation& sp) { return frame_from_k2(sp, default_omega(sp.window())); }

CentralFrame frame_from_k2(const SymbolPresentation& sp, const Elem& omega) {
  const Window& w = sp.window();
  const Level& lv = w.level();
  const Field& K = *w.field();
  const Int qm1 = K.const_field().q() - 1;
  if (qm1 % lv.modulus() != 0) throw Error(Errc::NoRootsOfUnity, "mu_{l^n} is not in the constant field");
  for (const auto& o : w.orders())
    if (o != lv.modulus())
      throw Error(Errc::PreconditionViolated, "frames need every window generator of order l^n");

  CentralFrame fr{lv, w.labels(), {}, "", K.to_string(omega), w.class_of(omega), true};
  fr.id = w.spec() + "|" + fr.omega;
  const std::size_t r = w.rank(), wr = sp.wedge_rank(), width = fr.width();

  // Images in the wedge module of the formal basis, followed by the relations
  // of the presented quotient.
  std::vector<Row> stacked;
  for (std::size_t p = 0; p < wr; ++p) {
    Row e(wr, 0);
    e[p] = 1;
    stacked.push_back(std::move(e));
  }
  for (std::size_t k = 0; k < r; ++k) {
    ClassVec e(r, 0);
    e[k] = 1;
    stacked.push_back(sp.wedge(e, fr.omega_class));
  }
  const FinMod m = sp.module();
  stacked.insert(stacked.end(), m.relations.begin(), m.relations.end());

  std::vector<Row> kernel;
  if (wr == 0) {
    // No wedge coordinates: every formal class maps to zero.
    for (std::size_t p = 0; p < width; ++p) {
      Row e(width, 0);
      e[p] = 1;
      kernel.push_back(std::move(e));
    }
  } else {
    for (const auto& x : left_kernel(stacked, wr, lv)) kernel.emplace_back(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(width));
  }
  kernel.erase(std::remove_if(kernel.begin(), kernel.end(),
                              [](const Row& x) { return std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; }); }),
               kernel.end());

  if (kernel.empty()) {
    for (std::size_t p = 0; p < width; ++p) {
      Row e(width, 0);
      e[p] = 1;
      fr.relations.push_back(std::move(e));
    }
    return fr;
  }
  std::vector<Row> transposed(width, Row(kernel.size(), 0));
  for (std::size_t k = 0; k < kernel.size(); ++k)
    for (std::size_t p = 0; p < width; ++p) transposed[p][k] = kernel[k][p];
  fr.relations = howell(left_kernel(transposed, kernel.size(), lv), width, lv).rows;
  return fr;
}

std::vector<AbelianElement> frame_elements(const CharacterGroup& a, const CentralFrame& fr) {
  std::vector<AbelianElement> out;
  for (const auto& f : a.elements()) out.push_back(abelian(fr, f));
  return out;
}

CLCenter cl_center(const std::vector<AbelianElement>& a, const CentralFrame& fr) {
  CLCenter out;
  for (const auto& s : a) {
    bool central = true;
    for (const auto& t : a) {
      central = cl_pair(s, t, fr);
      if (!central) break;
    }
    if (central) out.members.push_back(s);
  }
  std::set<Row> present;
  for (const auto& s : out.members) present.insert(reduced(s.s, fr.level));
  for (const auto& s : out.members)
    for (const auto& t : out.members)
      out.closed = out.closed && present.count(reduced((s + t).s, fr.level)) > 0;
  return out;
}

bool ibcl_alt_check(const std::vector<AbelianElement>& a, const CentralFrame& fr) {
  if (fr.level.n() != 1) throw Error(Errc::WrongLevel, "the alternate CL-center needs level one");
  std::vector<CentralElement> betas;
  for (const auto& t : a) betas.push_back(beta_power(t, fr));
  std::set<Row> alt;
  for (const auto& s : a) {
    bool ok = true;
    for (const auto& t : a) {
      ok = in_relations(commutator(s, t, fr), betas, fr);
      if (!ok) break;
    }
    if (ok) alt.insert(reduced(s.s, fr.level));
  }
  std::set<Row> center;
  for (const auto& s : cl_center(a, fr).members) center.insert(reduced(s.s, fr.level));
  return alt == center;
}

bool minimized_identity_check(const Valuation& v, const Window& w, const CentralFrame& fr, std::uint64_t decomp_bound) {
  const CharacterGroup iv = inertia_chars(v, w), dv = decomp_chars(v, w, decomp_bound);
  const auto taus = dv.elements();
  for (const auto& sigma : iv.elements()) {
    const AbelianElement s = abelian(fr, sigma);
    const CentralElement sp = pi_power(s, fr);
    for (const auto& tau : taus) {
      CentralElement x = commutator(s, abelian(fr, tau), fr);
      const Int k = evaluate_class(tau, fr.omega_class).value();
      for (std::size_t p = 0; p < x.coords.size(); ++p) x.coords[p] = fr.level.reduce(x.coords[p] + k * sp.coords[p]);
      if (!in_relations(x, {}, fr)) return false;
    }
  }
  return true;
}

}  // namespace valdetect
