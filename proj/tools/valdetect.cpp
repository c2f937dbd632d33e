// Command-line surface: every subcommand prints one JSON report.
// Exit 0 on success, 2 when a hypothesis of a theorem fails, 1 on errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "valdetect/abc.hpp"
#include "valdetect/characters.hpp"
#include "valdetect/cpairs.hpp"
#include "valdetect/detect.hpp"
#include "valdetect/milnor.hpp"
#include "valdetect/rigid.hpp"
#include "valdetect/scan.hpp"
#include "valdetect/valuation.hpp"

using json = nlohmann::ordered_json;
using namespace valdetect;

namespace {

constexpr const char* kSchema = "valdetect/1";

std::string dec(const Int& x) { return to_dec(x); }
std::string dec(std::uint64_t x) { return std::to_string(x); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const auto b = cur.find_first_not_of(' '), e = cur.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

json class_json(const ClassVec& c) {
  json out = json::array();
  for (auto x : c) out.push_back(std::to_string(x));
  return out;
}

json group_json(const CharacterGroup& g) {
  json gens = json::array();
  for (const auto& q : g.quasi_basis()) gens.push_back(q.to_string());
  return {{"quasi_basis", gens}, {"log_size", dec(g.log_size())}, {"certificate", certificate_name(g.certificate)}};
}

struct Common {
  std::string field, window, height = "4", out;
  int jobs = -1;
};

struct Context {
  FieldPtr field;
  Window window;
};

Context make_context(const Common& c) {
  FieldPtr f = Field::parse(c.field);
  return {f, Window::parse(f, c.window)};
}

json header(const std::string& command, const Common& c, const Window* w) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  if (!c.field.empty()) j["field"] = c.field;
  if (w != nullptr) {
    j["window"] = w->spec();
    j["ell"] = dec(w->level().ell());
    j["level"] = dec(w->level().n());
  }
  return j;
}

// "full" is the whole window group; otherwise comma separated characters.
CharacterGroup parse_group(const Window& w, const std::string& s) {
  if (s.empty() || s == "full") return CharacterGroup::full(w);
  std::vector<Character> gens;
  for (const auto& t : split_list(s)) gens.push_back(Character::parse(w, t));
  return CharacterGroup::generated(w, gens);
}

json report_json(const DetectionReport& r) {
  json j;
  j["mode"] = r.mode;
  j["n"] = dec(r.n);
  j["lift_level"] = dec(r.lift_level);
  j["required_level"] = dec(r.required_level);
  j["aggressive"] = r.aggressive;
  j["input"] = r.input;
  if (r.inertia) j["I"] = group_json(*r.inertia);
  if (r.decomp) j["D"] = group_json(*r.decomp);
  j["valuation"] = r.valuation ? json(r.valuation->spec()) : json(nullptr);
  j["canonical"] = r.canonical ? json(r.canonical->spec()) : json(nullptr);
  j["canonical_candidates"] = r.canonical_candidates;
  j["quotient_cyclic"] = r.quotient_cyclic;
  if (r.h_equals_t) {
    j["H_equals_T"] = *r.h_equals_t;
    j["rigid_witnesses"] = r.rigid_witnesses;
  }
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"holds", c.holds}, {"certificate", c.certificate}, {"detail", c.detail}});
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["height"] = r.height.to_string();
  j["ok"] = r.ok();
  return j;
}

json membership_json(const MembershipReport& m) {
  json rows = json::array();
  for (const auto& r : m.refinements)
    rows.push_back({{"valuation", r.valuation}, {"same_D", r.same_decomp}, {"same_I", r.same_inertia}});
  return {{"valuation", m.valuation},    {"n", dec(m.n)},
          {"I", group_json(m.inertia)},  {"D", group_json(m.decomp)},
          {"in_W", m.in_w},              {"in_V", m.in_v},
          {"residue_rank", dec(m.residue_rank)},
          {"alt_V", m.alt_v},            {"alt_V_agrees", m.alt_v_agrees},
          {"refinements", rows},         {"notes", m.notes}};
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(Errc::PreconditionViolated, "cannot write " + out);
  f << text;
}

int exit_code(Errc c) {
  switch (c) {
    case Errc::HypothesisFailed:
    case Errc::MainClaimViolated:
    case Errc::PreconditionViolated: return 2;
    default: return 1;
  }
}

void add_common(CLI::App* sub, Common& c, bool window = true) {
  sub->add_option("--field", c.field, "field spec, e.g. ratfunc(gf:7,u)")->required();
  if (window) sub->add_option("--window", c.window, "window spec, e.g. {ell=3,n=1,gens=[u,u-3]}")->required();
  sub->add_option("--height", c.height, "enumeration height per layer, outermost first");
  sub->add_option("--out", c.out, "write the report to this path");
  sub->add_option("--jobs", c.jobs, "worker cap for parallel scans");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valuation detection from C-pairs and CL-pairs"};
  app.require_subcommand(1);
  Common c;

  std::uint64_t ell = 3, n = 1, lift = 0;
  auto* levels = app.add_subcommand("levels", "index functions M_r, N', N");
  levels->add_option("--ell", ell)->required();
  levels->add_option("--n", n)->required();
  levels->add_option("--out", c.out);

  std::string f_text, g_text, x_text, place, gens, inertia, valuation, mode = "cpair", method = "direct";
  std::string x_height = "2", check_height;
  bool full = false, aggressive = false;

  auto* eval = app.add_subcommand("eval", "window class of an element and optional character value");
  add_common(eval, c);
  eval->add_option("--x", x_text)->required();
  eval->add_option("--f", f_text);

  auto* window = app.add_subcommand("window", "window generators and orders");
  add_common(window, c);

  auto* cpair = app.add_subcommand("cpair", "C-pair verdict");
  add_common(cpair, c);
  cpair->add_option("--f", f_text)->required();
  cpair->add_option("--g", g_text)->required();
  cpair->add_option("--method", method)->check(CLI::IsMember({"direct", "ktheory", "both"}));

  auto* cgroup = app.add_subcommand("cgroup", "C-group verdict");
  add_common(cgroup, c);
  cgroup->add_option("--gens", gens, "comma separated characters or 'full'");

  auto* ccenter = app.add_subcommand("ccenter", "C-center of a character group");
  add_common(ccenter, c);
  ccenter->add_option("--gens", gens);

  auto* k2 = app.add_subcommand("k2", "K_2 modulo T from the Steinberg scan");
  add_common(k2, c);
  k2->add_option("--kernel", gens, "characters whose common kernel is added to T");

  auto* tame = app.add_subcommand("tame", "tame symbol at a rank one place");
  add_common(tame, c, false);
  tame->add_option("--f", f_text)->required();
  tame->add_option("--g", g_text)->required();
  tame->add_option("--place", place)->required();
  tame->add_option("--ell", ell)->required();
  tame->add_option("--n", n);

  auto* valuative = app.add_subcommand("valuative", "valuative test of H = A^perp");
  add_common(valuative, c);
  valuative->add_option("--gens", gens)->required();
  valuative->add_flag("--full", full, "always check the 1 + x(1 + y) clause");

  auto* canon = app.add_subcommand("canonical-valuation", "unit predicate of v_H and its native match");
  add_common(canon, c);
  canon->add_option("--gens", gens)->required();
  canon->add_option("--x-height", x_height);
  canon->add_option("--check-height", check_height, "compare the predicate with the native match here");

  auto* detect = app.add_subcommand("detect", "detection pipelines and W/V classification");
  add_common(detect, c);
  detect->add_option("--mode", mode)->check(CLI::IsMember({"cpair", "cgroup", "inertia", "classify"}));
  detect->add_option("--level", n, "target level n");
  detect->add_option("--lift-level", lift, "level N of the inputs; defaults to the window level");
  detect->add_option("--f", f_text);
  detect->add_option("--g", g_text);
  detect->add_option("--gens", gens, "D'' for cgroup and inertia");
  detect->add_option("--inertia", inertia, "I'' for inertia");
  detect->add_option("--valuation", valuation, "chain for classify, e.g. t or t,s");
  detect->add_option("--x-height", x_height);
  detect->add_flag("--aggressive", aggressive, "allow a lift level below the required bound");

  auto* clcheck = app.add_subcommand("cl-check", "CL-pair versus C-pair on a K_2 frame");
  add_common(clcheck, c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c.jobs < 0)
      if (const char* env = std::getenv("VALDETECT_JOBS")) c.jobs = std::atoi(env);
    if (c.jobs >= 0) set_jobs(c.jobs);

    if (levels->parsed()) {
      json j = header("levels", c, nullptr);
      j["ell"] = dec(ell);
      j["n"] = dec(n);
      j["M1"] = dec(index_M(1, n));
      j["M2"] = dec(index_M(2, n));
      const IndexN in = index_N(ell, n);
      j["Nprime"] = dec(in.nprime);
      j["N"] = dec(in.n_big);
      emit(j, c.out);
      return 0;
    }

    if (tame->parsed()) {
      FieldPtr f = Field::parse(c.field);
      const Valuation v = Valuation::parse(f, place);
      const TameSymbol ts = tame_symbol(f->parse_elem(f_text), f->parse_elem(g_text), v, Level(ell, n));
      json j = header("tame", c, nullptr);
      j["place"] = v.spec();
      j["residue_field"] = ts.residue_field->spec();
      j["value"] = ts.residue_field->to_string(ts.value);
      if (ts.finite) {
        j["log_class"] = dec(ts.log_class);
        j["modulus"] = dec(ts.modulus);
      }
      j["trivial"] = ts.trivial;
      emit(j, c.out);
      return 0;
    }

    Context ctx = make_context(c);
    Window& w = ctx.window;
    const Height h = Height::parse(c.height);
    const Field& K = *ctx.field;

    if (eval->parsed()) {
      const Elem x = K.parse_elem(x_text);
      json j = header("eval", c, &w);
      j["x"] = K.to_string(x);
      j["class"] = class_json(w.class_of(x));
      if (!f_text.empty()) {
        const Character f = Character::parse(w, f_text);
        j["f"] = f.to_string();
        j["value"] = dec(evaluate(f, x).value());
      }
      emit(j, c.out);
    } else if (window->parsed()) {
      json j = header("window", c, &w);
      json gl = json::array();
      for (std::size_t i = 0; i < w.rank(); ++i)
        gl.push_back({{"label", w.labels()[i]}, {"order", dec(w.orders()[i])}, {"element", K.to_string(w.gen_element(i))}});
      j["rank"] = dec(w.rank());
      j["gens"] = gl;
      emit(j, c.out);
    } else if (cpair->parsed()) {
      const Character f = Character::parse(w, f_text), g = Character::parse(w, g_text);
      json j = header("cpair", c, &w);
      j["height"] = h.to_string();
      j["f"] = f.to_string();
      j["g"] = g.to_string();
      auto put = [&](const CPairVerdict& v, json& o) {
        o["result"] = cresult_name(v.result);
        if (v.result == CResult::NotCPair) o["witness"] = v.witness;
        if (v.method == CMethod::KTheory) {
          o["a"] = dec(v.a);
          o["b"] = dec(v.b);
          o["c"] = dec(v.c);
        }
      };
      if (method == "direct") {
        j["method"] = "direct";
        put(c_pair_direct(f, g, h), j);
      } else if (method == "ktheory") {
        j["method"] = "ktheory";
        put(c_pair_ktheory(f, g, steinberg_scan(w, h)), j);
      } else {
        const CPairVerdict d = c_pair_direct(f, g, h), kt = c_pair_ktheory(f, g, steinberg_scan(w, h));
        j["method"] = "both";
        put(d, j);
        json kj;
        put(kt, kj);
        j["ktheory"] = kj;
        j["agree"] = d.is_c() == kt.is_c();
      }
      emit(j, c.out);
    } else if (cgroup->parsed()) {
      const CharacterGroup a = parse_group(w, gens);
      const CGroupVerdict v = c_group(a, h);
      json j = header("cgroup", c, &w);
      j["height"] = h.to_string();
      j["group"] = group_json(a);
      j["result"] = v.result == CResult::NotCPair ? "NotCGroup" : (v.result == CResult::CPair ? "CGroup" : "CGroupUpToBound");
      if (!v.is_c()) {
        j["failing_pair"] = {v.f, v.g};
        j["witness"] = v.witness;
      }
      emit(j, c.out);
    } else if (ccenter->parsed()) {
      const CharacterGroup a = parse_group(w, gens);
      const CCenter cc = c_center(a, h);
      json j = header("ccenter", c, &w);
      j["height"] = h.to_string();
      j["group"] = group_json(a);
      j["center"] = group_json(cc.group);
      j["members"] = dec(cc.members.size());
      j["closed"] = cc.closed;
      j["complete"] = cc.complete;
      emit(j, c.out);
    } else if (k2->parsed()) {
      SymbolPresentation sp = steinberg_scan(w, h);
      if (!gens.empty()) sp = sp.with_kernel(parse_group(w, gens).perp());
      json j = header("k2", c, &w);
      j["height"] = h.to_string();
      j["complete"] = sp.complete();
      json wit = json::array();
      for (const auto& s : sp.witnesses())
        wit.push_back({{"z", s.z}, {"z_class", class_json(s.z_class)}, {"one_minus_z_class", class_json(s.one_minus_z_class)}});
      j["witnesses"] = wit;
      json q = json::array();
      for (const auto& e : quasi_basis(sp.module())) {
        std::string expr;
        for (std::size_t i = 0; i < e.expr.size(); ++i)
          if (e.expr[i] != 0) expr += (expr.empty() ? "" : "+") + dec(e.expr[i]) + "*{" + sp.module().gens[i] + "}";
        q.push_back({{"element", expr}, {"order", dec(e.order)}});
      }
      j["quotient"] = q;
      try {
        const K2Order o = k2_cyclic_order(sp);
        j["cyclic_order"] = dec(o.order);
        j["c"] = dec(o.c);
      } catch (const Error& e) {
        if (e.code() != Errc::RankNotTwo) throw;
        j["cyclic_order"] = nullptr;
      }
      emit(j, c.out);
    } else if (valuative->parsed()) {
      const CharacterGroup a = parse_group(w, gens);
      const ValuativeVerdict v = valuative_test(a, h, full);
      json j = header("valuative", c, &w);
      j["height"] = h.to_string();
      j["group"] = group_json(a);
      j["result"] = vresult_name(v.result);
      if (!v.valuative()) {
        j["condition"] = v.condition;
        j["witness_x"] = v.witness_x;
        if (!v.witness_y.empty()) j["witness_y"] = v.witness_y;
      }
      j["checked"] = v.checked;
      j["exhaustive"] = v.exhaustive;
      if (v.clause_cap) {
        j["clause_elements"] = dec(v.clause_elements);
        j["clause_cap"] = dec(v.clause_cap);
      }
      emit(j, c.out);
    } else if (canon->parsed()) {
      const CharacterGroup a = parse_group(w, gens);
      const UnitGroupApprox u = canonical_valuation(a, Height::parse(x_height));
      json j = header("canonical-valuation", c, &w);
      j["x_height"] = x_height;
      j["group"] = group_json(a);
      j["scanned_x"] = dec(u.scanned());
      j["native"] = u.native() ? json(u.native()->spec()) : json(nullptr);
      j["candidates"] = u.candidates();
      if (u.native() && !check_height.empty()) {
        const Agreement ag = u.agreement(*u.native(), Height::parse(check_height));
        j["check_height"] = check_height;
        j["checked"] = dec(ag.checked);
        j["disagreements"] = dec(ag.disagreements);
        if (ag.disagreements) j["first_disagreement"] = ag.first_disagreement;
      }
      emit(j, c.out);
    } else if (detect->parsed()) {
      if (lift != 0 && lift != w.level().n()) w = Window(ctx.field, Level(w.level().ell(), lift), w.labels());
      DetectOptions opt;
      opt.height = h;
      opt.x_height = Height::parse(x_height);
      opt.aggressive = aggressive;
      json j = header("detect", c, &w);
      if (mode == "cpair") {
        j["report"] = report_json(detect_from_cpair(Character::parse(w, f_text), Character::parse(w, g_text), n, opt));
      } else if (mode == "cgroup") {
        j["report"] = report_json(detect_from_cgroup(parse_group(w, gens), n, opt));
      } else if (mode == "inertia") {
        j["report"] = report_json(detect_inertia(parse_group(w, inertia), parse_group(w, gens), n, opt));
      } else {
        const MembershipReport m = class_membership(Valuation::parse(ctx.field, valuation), w, n, opt);
        j["in_W"] = m.in_w;
        j["in_V"] = m.in_v;
        j["alt_V_agrees"] = m.alt_v_agrees;
        j["report"] = membership_json(m);
      }
      emit(j, c.out);
    } else if (clcheck->parsed()) {
      const SymbolPresentation sp = steinberg_scan(w, h);
      const CentralFrame fr = frame_from_k2(sp);
      const CharacterGroup a = CharacterGroup::full(w);
      const auto els = a.elements();
      json dis = json::array();
      std::uint64_t checked = 0;
      for (const auto& f : els)
        for (const auto& g : els) {
          ++checked;
          const bool cl = cl_pair(abelian(fr, f), abelian(fr, g), fr);
          const bool cp = c_pair_direct(f, g, h).is_c();
          if (cl != cp) dis.push_back({{"f", f.to_string()}, {"g", g.to_string()}, {"cl", cl}, {"c", cp}});
        }
      const CLCenter clc = cl_center(frame_elements(a, fr), fr);
      std::vector<Character> members;
      for (const auto& s : clc.members) {
        Row vals(w.rank());
        for (std::size_t i = 0; i < w.rank(); ++i) vals[i] = s.s[i] * (w.level().modulus() / w.orders()[i]);
        members.push_back(Character(w, vals));
      }
      const CharacterGroup clg = CharacterGroup::generated(w, members);
      json j = header("cl-check", c, &w);
      j["height"] = h.to_string();
      j["omega"] = fr.omega;
      json rel = json::array();
      for (const auto& r : fr.relations) {
        json row = json::array();
        for (const auto& x : r) row.push_back(dec(x));
        rel.push_back(row);
      }
      j["relations"] = rel;
      j["pairs_checked"] = dec(checked);
      j["disagreements"] = dis;
      j["cl_center"] = group_json(clg);
      j["cl_center_closed"] = clc.closed;
      j["cl_center_equals_c_center"] = clg == c_center(a, h).group;
      emit(j, c.out);
    }
  } catch (const ParseError& e) {
    json j{{"schema", kSchema}, {"error", {{"code", errc_name(e.code())}, {"message", e.what()}, {"position", dec(e.position())}}}};
    std::cout << j.dump(2) << "\n";
    return 1;
  } catch (const Error& e) {
    json j{{"schema", kSchema}, {"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}};
    std::cout << j.dump(2) << "\n";
    return exit_code(e.code());
  }
  return 0;
}
