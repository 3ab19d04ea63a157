// Acceptance gate: six go/no-go criteria, one verdict line each.
// Expected values and runtime budgets are pinned here and recomputed
// independently of the library internals wherever a closed form exists.
// Exit code is the number of failed criteria.

#include "enumerate.hpp"
#include "ttkit/case_study.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ttkit;

struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::vector<std::string> sample;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failed;
    if (sample.size() < 3) sample.push_back(what);
  }
};

std::string join_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += labels[i];
  }
  return out + "}";
}

std::set<Mask> cosingletons(std::size_t n) {
  std::set<Mask> out;
  for (std::size_t i = 0; i < n; ++i) out.insert(full_mask(n) ^ nth_bit(i));
  return out;
}

// 1. The valuation scenario, bit-exact. Every ledger line must pass and the
//    headline values are re-checked here against frozen literals.
void criterion_valuation(Tally& t) {
  const CaseStudy cs = build_valuation();
  const VerifyReport rep = verify(cs);
  for (const auto& l : rep.lines)
    t.expect(l.pass, "ledger " + l.name + " got=" + l.got + " want=" + l.want);

  std::vector<std::string> prime_labels;
  for (std::size_t i : prime_elements(cs.smashing_frame))
    prime_labels.push_back(cs.smashing_frame.elements[i]);
  std::sort(prime_labels.begin(), prime_labels.end());
  t.expect(prime_labels == std::vector<std::string>{"0", "D_m", "loc_m"},
           "frame primes are not {0, D_m, loc_m}");

  // spectrum opens, renamed to model points through the prime dictionary
  const Spectrum spc = spectrum(cs.smashing_frame);
  std::set<std::string> opens;
  for (Mask o : spc.space.opens) {
    std::vector<std::string> members;
    for_each_bit(o, [&](std::size_t k) {
      members.push_back(cs.prime_to_point.at(spc.space.points[k]));
    });
    opens.insert(join_labels(std::move(members)));
  }
  const std::set<std::string> want_opens{"{}", "{0}", "{0,P}", "{0,Q}",
                                         "{0,P,Q}"};
  t.expect(opens == want_opens, "spectrum opens differ from the frozen list");

  const SupportModel& m = cs.model;
  for (std::size_t x = 0; x < m.space.size(); ++x)
    t.expect(gamma(m, x).support == nth_bit(x),
             "gamma at " + m.space.points[x] + " is not the singleton");

  const Mask zero_p = nth_bit(0) | nth_bit(1); // {0,P}
  const Mask zero_q = nth_bit(0) | nth_bit(2); // {0,Q}
  t.expect(small_support_consistency(m, "A_a").recomputed == zero_p,
           "ssupp A_a != {0,P}");
  t.expect(small_support_consistency(m, "m").recomputed == zero_q,
           "ssupp m != {0,Q}");
  t.expect(small_support_consistency(m, "k").recomputed == nth_bit(1),
           "ssupp k != {P}");
  t.expect(smashing_support(m, "k") == zero_p, "sSupp k != {0,P}");

  const FiniteSpace topo = topology_from_supports(m, SupportFilter::compacts);
  t.expect(topo.opens.size() == 3, "compact-support topology has != 3 opens");
  t.expect(!separation_report(topo).sober,
           "compact-support topology is unexpectedly sober");

  const PsiModel pm = psi_model(m);
  t.expect(pm.psi.source_spec.primes.size() == 2,
           "compact spectrum does not have 2 points");
  t.expect(pm.surjective && !pm.injective,
           "psi is not surjective-but-not-injective");
  const auto reach = [&](const char* p) {
    return pm.psi.point_map[pm.point_to_prime[m.space.point_index(p)]];
  };
  t.expect(reach("0") == reach("P"), "psi does not collapse 0 and P");
  t.expect(!telescope_check(pm.open_lattice, pm.lc).holds,
           "telescope unexpectedly holds");
}

// 2. Noetherian scenarios over every non-isomorphic poset with at most 5
//    points: psi is a homeomorphism, the big primes are the co-singletons,
//    big support matches the stored support, smashing support is the
//    up-closure, and identity comparison tables commute.
void criterion_noetherian(Tally& t) {
  const auto reps = ttenum::poset_reps_up_to(5);
  t.expect(reps.size() == 87, "expected 87 poset classes up to 5 points");
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const Poset& p = reps[r];
    const std::string tag = "poset#" + std::to_string(r) + ": ";
    const CaseStudy cs = build_noetherian(p);
    const VerifyReport rep = verify(cs);
    for (const auto& l : rep.lines)
      t.expect(l.pass, tag + "ledger " + l.name + " got=" + l.got +
                           " want=" + l.want);

    const SupportModel& m = cs.model;
    const PsiModel pm = psi_model(m);
    t.expect(pm.homeomorphism, tag + "psi is not a homeomorphism");
    t.expect(telescope_check(pm.open_lattice, pm.lc).holds,
             tag + "telescope fails");

    std::set<Mask> got;
    for (const auto& ideal : big_prime_scan(m)) got.insert(ideal.carrier);
    t.expect(got == cosingletons(p.size()),
             tag + "big primes are not the co-singletons");

    for (const FormalObject& o : m.objects) {
      t.expect(big_support(m, o) == o.support,
               tag + "big support of " + o.name + " differs from stored");
      t.expect(smashing_support(m, o) == p.up_closure(o.support),
               tag + "smashing support of " + o.name + " is not the closure");
    }

    std::map<std::string, std::string> id;
    for (const std::string& lab : m.space.points) id[lab] = lab;
    t.expect(triangle_check(m, m.space.points, id, id).commutes,
             tag + "identity triangle does not commute");
  }
}

// 3. Duality suite: spatiality of every distributive lattice with at most 6
//    elements (two independent enumerations cross-checked), the spectrum of
//    a down-set lattice recovering the poset, the Hochster involution, and
//    Skula discreteness over all labeled T0 topologies on up to 4 points.
void criterion_duality(Tally& t) {
  const auto frames = ttenum::distributive_reps_birkhoff(6);
  t.expect(frames.size() == 13, "expected 13 distributive classes");
  std::map<std::size_t, int> hist;
  for (const auto& l : frames) ++hist[l.size()];
  const std::map<std::size_t, int> want_hist{{1, 1}, {2, 1}, {3, 1},
                                             {4, 2}, {5, 3}, {6, 5}};
  t.expect(hist == want_hist, "class size histogram is not 1,1,1,2,3,5");

  const auto direct = ttenum::distributive_reps_direct(6);
  t.expect(direct.size() == frames.size(),
           "direct enumeration finds a different class count");
  for (const auto& d : direct) {
    std::size_t matches = 0;
    for (const auto& b : frames)
      if (ttenum::lattice_isomorphic(d, b)) ++matches;
    t.expect(matches == 1, "direct class matches " + std::to_string(matches) +
                               " Birkhoff classes");
  }
  for (const auto& l : frames)
    t.expect(spatiality_check(l).spatial,
             "non-spatial distributive lattice of size " +
                 std::to_string(l.size()));

  // spectrum of the down-set lattice: the points recover the poset (with the
  // spectrum order opposite to the inclusion order, so both directions are
  // checked)
  for (const Poset& p : ttenum::poset_reps_up_to(5)) {
    const Poset back =
        specialization_poset(spectrum(downset_lattice(p).lattice).space);
    t.expect(ttenum::poset_isomorphic(back, opposite(p)),
             "down-set spectrum is not the opposite poset");
    const Poset round = specialization_poset(
        spectrum(downset_lattice(opposite(p)).lattice).space);
    t.expect(ttenum::poset_isomorphic(round, p),
             "opposite down-set spectrum does not recover the poset");
  }

  const std::size_t want_topologies[5] = {0, 1, 4, 29, 355};
  const std::size_t want_t0[5] = {0, 1, 3, 19, 219};
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto topos = ttenum::all_topologies(n);
    t.expect(topos.size() == want_topologies[n],
             "labeled topology count wrong at n=" + std::to_string(n));
    std::size_t t0_count = 0;
    for (const auto& fam : topos) {
      const FiniteSpace s = make_space(ttenum::letters(n), fam);
      const SeparationReport sep = separation_report(s);
      if (!sep.t0) continue;
      ++t0_count;
      t.expect(sep.sober, "finite T0 space is not sober");

      const FiniteSpace d = hochster_dual(s);
      std::vector<Mask> want = closed_sets(s);
      std::sort(want.begin(), want.end());
      t.expect(d.opens == want, "dual opens are not the closed sets");
      const FiniteSpace dd = hochster_dual(d);
      t.expect(dd.opens == s.opens, "double dual differs from the space");

      t.expect(skula(s).opens.size() == (std::size_t{1} << n),
               "skula topology is not discrete");
    }
    t.expect(t0_count == want_t0[n],
             "T0 topology count wrong at n=" + std::to_string(n));
  }
}

// 4. Adjunction suite over every sublattice inclusion of every frame with at
//    most 6 elements: the adjunction law on all pairs, the section identity,
//    openness of spectrum-map preimages, and agreement of the two telescope
//    criteria.
void criterion_adjunction(Tally& t) {
  std::size_t inclusions = 0;
  for (const FiniteLattice& l : ttenum::distributive_reps_birkhoff(6)) {
    for (const auto& members : ttenum::all_sublattices(l)) {
      ++inclusions;
      const std::string tag = "frame size " + std::to_string(l.size()) +
                              ", sublattice size " +
                              std::to_string(members.size()) + ": ";
      const FrameMap f = sublattice_inclusion(l, members);
      const auto g = right_adjoint(f);
      const FiniteLattice& k = f.source;
      for (std::size_t a = 0; a < k.size(); ++a) {
        for (std::size_t b = 0; b < l.size(); ++b)
          t.expect(l.leq(f.map[a], b) == k.leq(a, g[b]),
                   tag + "adjunction law fails");
        t.expect(g[f.map[a]] == a, tag + "g(f(a)) != a");
      }
      const SpecMap sm = spec_map(f);
      for (std::size_t a = 0; a < k.size(); ++a)
        t.expect(sm.target_spec.space.is_open(sm.preimage_of[a]),
                 tag + "spectrum preimage is not open");
      const TelescopeReport tr = telescope_check(l, members);
      t.expect(tr.join_generated == tr.homeomorphism,
               tag + "telescope criteria disagree");
    }
  }
  t.expect(inclusions >= 13, "sublattice enumeration is implausibly small");
}

// 5. Oracle equivalence for the big prime scan: the brute-force enumeration
//    must equal the co-singleton closed form, recomputed here, on spaces with
//    up to 8 points. Exhaustive over all labeled topologies up to 4 points
//    and all poset classes at 5 and 6; chain, discrete and seeded random
//    spaces at 7 and 8 (the scan reads only the point set).
void criterion_scan_oracle(Tally& t) {
  std::vector<FiniteSpace> spaces;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& fam : ttenum::all_topologies(n))
      spaces.push_back(make_space(ttenum::letters(n), fam));
  for (std::size_t n = 5; n <= 6; ++n)
    for (const Poset& p : ttenum::poset_reps(n))
      spaces.push_back(ttenum::upset_space(p));
  std::mt19937 rng(8461);
  for (std::size_t n = 7; n <= 8; ++n) {
    std::vector<Mask> chain_up(n), anti_up(n);
    for (std::size_t i = 0; i < n; ++i) {
      anti_up[i] = nth_bit(i);
      for (std::size_t j = i; j < n; ++j) chain_up[i] |= nth_bit(j);
    }
    spaces.push_back(ttenum::upset_space(
        ttenum::poset_from_up(chain_up)));
    spaces.push_back(ttenum::upset_space(ttenum::poset_from_up(anti_up)));
    for (int r = 0; r < 25; ++r)
      spaces.push_back(ttenum::upset_space(ttenum::random_poset(rng, n)));
  }

  for (const FiniteSpace& s : spaces) {
    const std::size_t n = s.size();
    SupportModel m = make_model(
        s, {FormalObject{"u", full_mask(n), true}}, "u");
    std::set<Mask> got;
    for (const auto& ideal : big_prime_scan(m)) got.insert(ideal.carrier);
    t.expect(got == cosingletons(n),
             "scan differs from the closed form on " + std::to_string(n) +
                 " points with " + std::to_string(s.opens.size()) + " opens");
  }
  t.expect(spaces.size() == 389 + 63 + 318 + 2 * 27,
           "space sample size changed");
}

// 6. Support laws on 500 seeded random models: zero/unit, sum, suspension,
//    tensor inclusion (equality on compacts), small-inside-big with equality
//    on compacts, the idempotent laws per open, and the meet-radical-tensor
//    identity on all carrier pairs.
void criterion_support_laws(Tally& t) {
  std::mt19937 rng(20260819);
  for (int round = 0; round < 500; ++round) {
    const SupportModel m = ttenum::random_model(rng);
    const std::string tag = "model#" + std::to_string(round) + ": ";
    t.expect(model_validate(m).ok, tag + "random model is invalid");
    const std::size_t n = m.space.size();

    const FormalObject zero{"zero", 0, false};
    t.expect(smashing_support(m, zero) == 0, tag + "sSupp 0 != {}");
    t.expect(smashing_support(m, m.objects[m.unit]) == full_mask(n),
             tag + "sSupp unit is not everything");

    for (const FormalObject& x : m.objects) {
      const Mask sx = smashing_support(m, x);
      t.expect(smashing_support(m, suspend_of(x)) == sx,
               tag + "suspension changes sSupp of " + x.name);
      t.expect(is_subset(x.support, sx),
               tag + "ssupp of " + x.name + " is not inside sSupp");
      if (x.compact)
        t.expect(sx == x.support,
                 tag + "compact " + x.name + " has sSupp != ssupp");
      t.expect(small_support_consistency(m, x.name).recomputed == x.support,
               tag + "gamma detection disagrees with stored support");
      for (const FormalObject& y : m.objects) {
        const Mask sy = smashing_support(m, y);
        t.expect(smashing_support(m, sum_of(x, y)) == (sx | sy),
                 tag + "sSupp of a sum is not the union");
        const Mask st = smashing_support(m, tensor_of(x, y));
        t.expect(is_subset(st, sx & sy),
                 tag + "sSupp of a tensor escapes the intersection");
        if (x.compact && y.compact)
          t.expect(st == (sx & sy),
                   tag + "compact tensor misses the intersection");
      }
    }

    for (Mask open : m.space.opens) {
      const FormalObject e = idempotent_E(m, make_smashing(m, open));
      const FormalObject f = idempotent_F(m, make_smashing(m, open));
      t.expect(tensor_of(e, e).support == e.support, tag + "E x E != E");
      t.expect(tensor_of(f, f).support == f.support, tag + "F x F != F");
      t.expect(tensor_of(e, f).is_zero(), tag + "E x F != 0");
    }

    for (Mask i = 0; i <= full_mask(n); ++i) {
      for (Mask j = 0; j <= full_mask(n); ++j) {
        const auto li = make_localizing(m, i);
        const auto lj = make_localizing(m, j);
        const Mask meet = ideal_meet(m, li, lj).carrier;
        const Mask rad = ideal_radical(m, ideal_tensor(m, li, lj)).carrier;
        t.expect(meet == rad, tag + "meet differs from radical tensor");
        if (j == full_mask(n)) break;
      }
      if (i == full_mask(n)) break;
    }
  }
}

struct Criterion {
  int number;
  std::string name;
  double budget_seconds; // 0: no stated budget
  void (*run)(Tally&);
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "valuation scenario reproduced bit-exact", 1.0, criterion_valuation},
      {2, "noetherian scenarios on all posets up to 5 points", 60.0,
       criterion_noetherian},
      {3, "duality suite: spatiality, down-set spectra, hochster, skula",
       120.0, criterion_duality},
      {4, "adjunction suite over all sublattice inclusions of frames up to 6",
       0.0, criterion_adjunction},
      {5, "big prime scan equals the co-singleton oracle up to 8 points",
       300.0, criterion_scan_oracle},
      {6, "support laws on 500 randomized models", 0.0,
       criterion_support_laws},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Tally t;
    std::string aborted;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      aborted = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_budget = c.budget_seconds == 0.0 || secs < c.budget_seconds;
    const bool pass = aborted.empty() && t.failed == 0 && in_budget;
    if (!pass) ++failed;

    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " " << c.number << " " << c.name
         << " (" << t.checks << " checks, " << std::fixed
         << std::setprecision(2) << secs << "s";
    if (c.budget_seconds > 0.0)
      line << ", budget " << std::setprecision(0) << c.budget_seconds << "s";
    line << ")";
    if (!aborted.empty()) line << " aborted: " << aborted;
    if (!in_budget) line << " over budget";
    if (t.failed > 0) {
      line << " " << t.failed << " failed";
      for (const std::string& s : t.sample) line << "; " << s;
    }
    std::cout << line.str() << "\n";
  }
  std::cout << (failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
            << (criteria.size() - static_cast<std::size_t>(failed)) << "/"
            << criteria.size() << " criteria)\n";
  return failed;
}
