#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/galois.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/model.hpp"
#include "ttkit/poset.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

/** One expectation line: an operation, its arguments and the literal the
 *  engine must reproduce. Literals are whitespace-free canonical forms:
 *  set literals "{a,b}" with labels sorted, families sorted by size then
 *  literal, booleans "true"/"false", counts in decimal. */
struct LedgerEntry {
  std::string op;
  std::vector<std::string> args;
  std::string expect;
};

/** A fully assembled scenario: the support model, the frame of smashing
 *  ideals with its compact part and inflation map, the comparison
 *  dictionaries and the expectation ledger. `prime_to_point` renames each
 *  prime of the smashing frame to the model point it classifies. */
struct CaseStudy {
  SupportModel model;
  FiniteLattice smashing_frame;
  FiniteLattice compact_ideal_lattice;
  FrameMap inflation; // compact_ideal_lattice -> smashing_frame
  std::vector<std::string> hom_points;
  std::map<std::string, std::string> chi;
  std::map<std::string, std::string> phi;
  std::map<std::string, std::string> prime_to_point;
  std::vector<LedgerEntry> expected;
};

struct VerifyLine {
  std::string name;
  bool pass = false;
  std::string got;
  std::string want;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  bool all_pass = true;
};

inline std::string format_verify_report(const VerifyReport& rep) {
  std::ostringstream out;
  for (const auto& l : rep.lines)
    out << (l.pass ? "PASS " : "FAIL ") << l.name << " got=" << l.got
        << " want=" << l.want << "\n";
  return out.str();
}

namespace detail {

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

inline std::string format_label_set(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out + "}";
}

inline std::string entry_name(const LedgerEntry& e) {
  if (e.args.empty()) return e.op;
  std::string out = e.op + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ",";
    out += e.args[i];
  }
  return out + ")";
}

inline void need_args(const LedgerEntry& e, std::size_t n) {
  if (e.args.size() != n)
    throw input_error("op '" + e.op + "' takes " + std::to_string(n) +
                      " argument(s), got " + std::to_string(e.args.size()));
}

} // namespace detail

/** Runs every ledger entry against the engine and reports PASS/FAIL per
 *  line. An engine exception fails the entry with the message as `got`
 *  rather than aborting the run. */
inline VerifyReport verify(const CaseStudy& cs) {
  VerifyReport rep;
  std::optional<PsiModel> psi_cache;
  auto psi = [&]() -> const PsiModel& {
    if (!psi_cache) psi_cache = psi_model(cs.model);
    return *psi_cache;
  };
  auto points_of = [&](const std::vector<std::string>& labels,
                       std::size_t from) {
    Mask m = 0;
    for (std::size_t i = from; i < labels.size(); ++i)
      m |= nth_bit(cs.model.space.point_index(labels[i]));
    return m;
  };
  auto fmt = [&](Mask m) { return format_set(cs.model.space.points, m); };

  for (const auto& e : cs.expected) {
    VerifyLine line;
    line.name = detail::entry_name(e);
    line.want = e.expect;
    try {
      std::string got;
      if (e.op == "frame.primes") {
        detail::need_args(e, 0);
        std::vector<std::string> labels;
        for (std::size_t p : prime_elements(cs.smashing_frame))
          labels.push_back(cs.smashing_frame.elements[p]);
        got = detail::format_label_set(std::move(labels));
      } else if (e.op == "frame.prime") {
        detail::need_args(e, 1);
        const std::size_t i = cs.smashing_frame.index_of(e.args[0]);
        const auto primes = prime_elements(cs.smashing_frame);
        got = detail::format_bool(
            std::find(primes.begin(), primes.end(), i) != primes.end());
      } else if (e.op == "frame.spatial") {
        detail::need_args(e, 0);
        got = detail::format_bool(spatiality_check(cs.smashing_frame).spatial);
      } else if (e.op == "frame.compacts.all") {
        detail::need_args(e, 0);
        got = detail::format_bool(
            compact_elements(cs.smashing_frame).compact.size() ==
            cs.smashing_frame.elements.size());
      } else if (e.op == "sspec.points") {
        detail::need_args(e, 0);
        got = detail::format_label_set(spectrum(cs.smashing_frame).space.points);
      } else if (e.op == "sspec.model_iso") {
        detail::need_args(e, 0);
        const Spectrum spc = spectrum(cs.smashing_frame);
        bool iso = spc.space.size() == cs.model.space.size();
        std::vector<std::size_t> to_point(spc.space.size(), 0);
        Mask seen = 0;
        for (std::size_t k = 0; iso && k < spc.space.size(); ++k) {
          auto it = cs.prime_to_point.find(spc.space.points[k]);
          if (it == cs.prime_to_point.end())
            throw input_error("prime dictionary missing '" +
                              spc.space.points[k] + "'");
          to_point[k] = cs.model.space.point_index(it->second);
          if (has_bit(seen, to_point[k])) iso = false;
          seen |= nth_bit(to_point[k]);
        }
        if (iso) {
          std::vector<Mask> mapped;
          for (Mask o : spc.space.opens) {
            Mask r = 0;
            for_each_bit(o, [&](std::size_t k) { r |= nth_bit(to_point[k]); });
            mapped.push_back(r);
          }
          std::sort(mapped.begin(), mapped.end());
          iso = mapped == cs.model.space.opens;
        }
        got = detail::format_bool(iso);
      } else if (e.op == "adjoint") {
        detail::need_args(e, 1);
        const std::vector<std::size_t> g = right_adjoint(cs.inflation);
        got = cs.inflation.source
                  .elements[g[cs.inflation.target.index_of(e.args[0])]];
      } else if (e.op == "section") {
        detail::need_args(e, 0);
        const std::vector<std::size_t> g = right_adjoint(cs.inflation);
        bool section = true;
        for (std::size_t a = 0; a < cs.inflation.source.elements.size(); ++a)
          section = section && g[cs.inflation.map[a]] == a;
        got = detail::format_bool(section);
      } else if (e.op == "heyting") {
        detail::need_args(e, 2);
        got = cs.smashing_frame.elements[heyting_implication(
            cs.smashing_frame, cs.smashing_frame.index_of(e.args[0]),
            cs.smashing_frame.index_of(e.args[1]))];
      } else if (e.op == "gamma") {
        detail::need_args(e, 1);
        got = fmt(gamma(cs.model, cs.model.space.point_index(e.args[0])).support);
      } else if (e.op == "ssupp") {
        detail::need_args(e, 1);
        got = fmt(small_support_consistency(cs.model, e.args[0]).recomputed);
      } else if (e.op == "ssmash") {
        detail::need_args(e, 1);
        got = fmt(smashing_support(cs.model, e.args[0]));
      } else if (e.op == "ssmash.isclosure") {
        detail::need_args(e, 1);
        const Poset spec = specialization_poset(cs.model.space);
        const Mask up = spec.up_closure(cs.model.object(e.args[0]).support);
        got = detail::format_bool(up ==
                                  smashing_support(cs.model, e.args[0]));
      } else if (e.op == "sbig") {
        detail::need_args(e, 1);
        got = fmt(big_support(cs.model, e.args[0]));
      } else if (e.op == "tensor") {
        detail::need_args(e, 2);
        got = fmt(obj_tensor(cs.model, e.args[0], e.args[1]).support);
      } else if (e.op == "member") {
        if (e.args.empty()) throw input_error("op 'member' needs an object");
        const LocalizingIdealModel ideal =
            make_localizing(cs.model, points_of(e.args, 1));
        got = detail::format_bool(
            member(cs.model, cs.model.object(e.args[0]), ideal));
      } else if (e.op == "primes.cosingleton") {
        detail::need_args(e, 0);
        big_prime_scan(cs.model); // asserts the closed form internally
        got = "true";
      } else if (e.op == "topo.compacts" || e.op == "topo.compacts.size" ||
                 e.op == "topo.compacts.sober") {
        detail::need_args(e, 0);
        const FiniteSpace t =
            topology_from_supports(cs.model, SupportFilter::compacts);
        if (e.op == "topo.compacts")
          got = format_family(t.points, t.opens);
        else if (e.op == "topo.compacts.size")
          got = std::to_string(t.opens.size());
        else
          got = detail::format_bool(separation_report(t).sober);
      } else if (e.op == "psi.eq") {
        detail::need_args(e, 2);
        const PsiModel& pm = psi();
        const std::size_t a =
            pm.psi.point_map[pm.point_to_prime[cs.model.space.point_index(
                e.args[0])]];
        const std::size_t b =
            pm.psi.point_map[pm.point_to_prime[cs.model.space.point_index(
                e.args[1])]];
        got = detail::format_bool(a == b);
      } else if (e.op == "psi.surjective") {
        detail::need_args(e, 0);
        got = detail::format_bool(psi().surjective);
      } else if (e.op == "psi.injective") {
        detail::need_args(e, 0);
        got = detail::format_bool(psi().injective);
      } else if (e.op == "psi.homeo") {
        detail::need_args(e, 0);
        got = detail::format_bool(psi().homeomorphism);
      } else if (e.op == "telescope") {
        detail::need_args(e, 0);
        const PsiModel& pm = psi();
        got = detail::format_bool(
            telescope_check(pm.open_lattice, pm.lc).holds);
      } else if (e.op == "triangle") {
        detail::need_args(e, 0);
        got = detail::format_bool(
            triangle_check(cs.model, cs.hom_points, cs.chi, cs.phi).commutes);
      } else {
        throw input_error("unknown op '" + e.op + "'");
      }
      line.got = got;
      line.pass = got == e.expect;
    } catch (const std::exception& ex) {
      line.got = std::string("error: ") + ex.what();
      line.pass = false;
    }
    rep.lines.push_back(line);
    rep.all_pass = rep.all_pass && line.pass;
  }
  return rep;
}

/** Assembles a case study around a bare model: the smashing frame is the
 *  full open lattice, its compact part and inflation come from the psi
 *  comparison, and each frame prime is named after the model point whose
 *  closure it misses. */
inline CaseStudy make_case_from_model(SupportModel model,
                                      std::vector<std::string> hom_points,
                                      std::map<std::string, std::string> chi,
                                      std::map<std::string, std::string> phi,
                                      std::vector<LedgerEntry> expected) {
  const ModelReport rep = model_validate(model);
  if (!rep.ok)
    throw precondition_error("invalid model: " + rep.violations.front());
  PsiModel pm = psi_model(model);
  CaseStudy cs;
  cs.smashing_frame = pm.open_lattice;
  cs.compact_ideal_lattice = pm.inclusion.source;
  cs.inflation = pm.inclusion;
  for (std::size_t x = 0; x < model.space.size(); ++x) {
    const Mask prime_open =
        model.space.full() & ~point_closure(model.space, x);
    cs.prime_to_point[format_set(model.space.points, prime_open)] =
        model.space.points[x];
  }
  cs.model = std::move(model);
  cs.hom_points = std::move(hom_points);
  cs.chi = std::move(chi);
  cs.phi = std::move(phi);
  cs.expected = std::move(expected);
  return cs;
}

/** The discrete valuation scenario: three points 0, P, Q where 0 is
 *  generic, P carries the residue field and Q the closed fiber. The frame
 *  of smashing ideals is strictly larger than the open lattice (loc_Qm is
 *  an extra, non-prime smashing ideal), psi collapses 0 and P, and the
 *  telescope property fails. All expectations are frozen literals. */
inline CaseStudy build_valuation() {
  const std::vector<std::string> pts{"0", "P", "Q"};
  const FiniteSpace sp = make_space(
      pts, {0, nth_bit(0), nth_bit(0) | nth_bit(2), nth_bit(0) | nth_bit(1),
            nth_bit(0) | nth_bit(1) | nth_bit(2)});
  std::vector<FormalObject> objs{
      {"A", sp.full(), true},
      {"A_a", nth_bit(0) | nth_bit(1), true},
      {"m", nth_bit(0) | nth_bit(2), false},
      {"k", nth_bit(1), false},
      {"Q", nth_bit(2), false},
      {"Qm", nth_bit(0), false},
  };
  CaseStudy cs;
  cs.model = make_model(sp, std::move(objs), "A");

  // frame of smashing ideals: 0 < loc_Qm < {loc_m, D_m} < D_A
  cs.smashing_frame = lattice_from_pairs(
      {"0", "loc_Qm", "loc_m", "D_m", "D_A"},
      {{"0", "loc_Qm"}, {"loc_Qm", "loc_m"}, {"loc_Qm", "D_m"},
       {"loc_m", "D_A"}, {"D_m", "D_A"}});
  cs.compact_ideal_lattice =
      lattice_from_pairs({"0", "s", "1"}, {{"0", "s"}, {"s", "1"}});
  cs.inflation = make_frame_map(
      cs.compact_ideal_lattice, cs.smashing_frame,
      {cs.smashing_frame.index_of("0"), cs.smashing_frame.index_of("D_m"),
       cs.smashing_frame.index_of("D_A")});
  cs.prime_to_point = {{"0", "0"}, {"loc_m", "P"}, {"D_m", "Q"}};

  cs.expected = {
      {"frame.primes", {}, "{0,D_m,loc_m}"},
      {"frame.prime", {"loc_Qm"}, "false"},
      {"frame.prime", {"D_m"}, "true"},
      {"frame.spatial", {}, "true"},
      {"frame.compacts.all", {}, "true"},
      {"sspec.points", {}, "{0,D_m,loc_m}"},
      {"sspec.model_iso", {}, "true"},
      {"adjoint", {"0"}, "0"},
      {"adjoint", {"loc_Qm"}, "0"},
      {"adjoint", {"loc_m"}, "0"},
      {"adjoint", {"D_m"}, "s"},
      {"adjoint", {"D_A"}, "1"},
      {"section", {}, "true"},
      {"heyting", {"loc_m", "loc_Qm"}, "D_m"},
      {"gamma", {"0"}, "{0}"},
      {"gamma", {"P"}, "{P}"},
      {"gamma", {"Q"}, "{Q}"},
      {"ssupp", {"A"}, "{0,P,Q}"},
      {"ssupp", {"A_a"}, "{0,P}"},
      {"ssupp", {"m"}, "{0,Q}"},
      {"ssupp", {"k"}, "{P}"},
      {"ssupp", {"Q"}, "{Q}"},
      {"ssupp", {"Qm"}, "{0}"},
      {"ssmash", {"k"}, "{0,P}"},
      {"ssmash", {"A_a"}, "{0,P}"},
      {"ssmash.isclosure", {"k"}, "true"},
      {"sbig", {"A_a"}, "{0,P}"},
      {"sbig", {"m"}, "{0,Q}"},
      {"sbig", {"k"}, "{P}"},
      {"tensor", {"A_a", "m"}, "{0}"},
      {"member", {"k", "0", "P"}, "true"},
      {"member", {"m", "0", "P"}, "false"},
      {"primes.cosingleton", {}, "true"},
      {"topo.compacts", {}, "{{},{0,P},{0,P,Q}}"},
      {"topo.compacts.size", {}, "3"},
      {"topo.compacts.sober", {}, "false"},
      {"psi.eq", {"0", "P"}, "true"},
      {"psi.eq", {"0", "Q"}, "false"},
      {"psi.surjective", {}, "true"},
      {"psi.injective", {}, "false"},
      {"psi.homeo", {}, "false"},
      {"telescope", {}, "false"},
  };
  return cs;
}

/** Builds the noetherian scenario over an arbitrary finite poset: the
 *  model space has the up-sets of the poset as opens (obtained as the
 *  Hochster dual of the down-set topology), one residue object k_x per
 *  point, one compact V_x with support the principal up-set, and a compact
 *  unit. Every expectation is produced by an order-theoretic oracle on the
 *  input poset, independent of the engine under test. */
inline CaseStudy build_noetherian(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Mask> downsets;
  if (n > 16)
    throw precondition_error(
        "noetherian scenario: poset too large (up-set enumeration)");
  for (Mask s = 0; s <= full_mask(n); ++s) {
    if (p.is_down_set(s)) downsets.push_back(s);
    if (s == full_mask(n)) break;
  }
  if (downsets.size() > max_universe)
    throw precondition_error(
        "noetherian scenario: more than 64 up-sets of the input poset");

  const FiniteSpace zariski = make_space(p.elements, downsets);
  const FiniteSpace sp = hochster_dual(zariski);

  std::vector<FormalObject> objs;
  objs.push_back({"unit", full_mask(n), true});
  for (std::size_t x = 0; x < n; ++x)
    objs.push_back({"k_" + p.elements[x], nth_bit(x), false});
  for (std::size_t x = 0; x < n; ++x)
    objs.push_back({"V_" + p.elements[x], p.up_closure(nth_bit(x)), true});

  SupportModel model = make_model(sp, std::move(objs), "unit");

  std::vector<std::string> hom;
  std::map<std::string, std::string> chi, phi;
  for (const std::string& lab : p.elements) {
    hom.push_back(lab);
    chi[lab] = lab;
    phi[lab] = lab;
  }

  // expectations from poset-level oracles
  std::vector<LedgerEntry> exp;
  exp.push_back({"frame.spatial", {}, "true"});
  exp.push_back({"sspec.model_iso", {}, "true"});
  exp.push_back({"section", {}, "true"});
  exp.push_back({"psi.surjective", {}, "true"});
  exp.push_back({"psi.injective", {}, "true"});
  exp.push_back({"psi.homeo", {}, "true"});
  exp.push_back({"telescope", {}, "true"});
  exp.push_back({"triangle", {}, "true"});
  {
    std::vector<Mask> upsets;
    for (Mask s = 0; s <= full_mask(n); ++s) {
      if (p.is_up_set(s)) upsets.push_back(s);
      if (s == full_mask(n)) break;
    }
    exp.push_back({"topo.compacts", {}, format_family(p.elements, upsets)});
  }
  for (std::size_t x = 0; x < n; ++x) {
    const std::string& lab = p.elements[x];
    exp.push_back({"gamma", {lab}, format_set(p.elements, nth_bit(x))});
    exp.push_back(
        {"ssmash", {"k_" + lab}, format_set(p.elements, p.up_closure(nth_bit(x)))});
    exp.push_back({"ssmash.isclosure", {"k_" + lab}, "true"});
    exp.push_back({"ssmash.isclosure", {"V_" + lab}, "true"});
    exp.push_back(
        {"ssupp", {"k_" + lab}, format_set(p.elements, nth_bit(x))});
    exp.push_back(
        {"ssupp", {"V_" + lab}, format_set(p.elements, p.up_closure(nth_bit(x)))});
  }
  if (n <= detail::big_prime_scan_point_limit) {
    exp.push_back({"primes.cosingleton", {}, "true"});
    for (std::size_t x = 0; x < n; ++x) {
      exp.push_back(
          {"sbig", {"k_" + p.elements[x]}, format_set(p.elements, nth_bit(x))});
      exp.push_back({"sbig",
                     {"V_" + p.elements[x]},
                     format_set(p.elements, p.up_closure(nth_bit(x)))});
    }
  }

  return make_case_from_model(std::move(model), std::move(hom),
                              std::move(chi), std::move(phi), std::move(exp));
}

} // namespace ttkit
