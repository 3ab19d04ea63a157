#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "ttkit/model.hpp"

using namespace ttkit;
using Catch::Matchers::ContainsSubstring;

namespace {

FiniteSpace valuation_space() {
  return make_space({"0", "P", "Q"},
                    {0, nth_bit(0), nth_bit(0) | nth_bit(2),
                     nth_bit(0) | nth_bit(1), full_mask(3)});
}

SupportModel valuation_model() {
  FiniteSpace sp = valuation_space();
  std::vector<FormalObject> objs{
      {"A", sp.full(), true},
      {"A_a", nth_bit(0) | nth_bit(1), true},
      {"m", nth_bit(0) | nth_bit(2), false},
      {"k", nth_bit(1), false},
      {"Q", nth_bit(2), false},
      {"Qm", nth_bit(0), false},
  };
  return make_model(std::move(sp), std::move(objs), "A");
}

Mask pts(const SupportModel& m, const std::vector<std::string>& labels) {
  return make_mask(m.space.points, labels);
}

SupportModel one_point_model() {
  FiniteSpace sp = make_space({"x"}, {0, full_mask(1)});
  return make_model(std::move(sp), {{"unit", full_mask(1), true}}, "unit");
}

// discrete two-point model with a compact object per point
SupportModel discrete_pair_model() {
  FiniteSpace sp =
      make_space({"a", "b"}, {0, nth_bit(0), nth_bit(1), full_mask(2)});
  std::vector<FormalObject> objs{{"unit", full_mask(2), true},
                                 {"V_a", nth_bit(0), true},
                                 {"V_b", nth_bit(1), true}};
  return make_model(std::move(sp), std::move(objs), "unit");
}

} // namespace

TEST_CASE("the valuation model validates") {
  const ModelReport rep = model_validate(valuation_model());
  REQUIRE(rep.ok);
  REQUIRE(rep.violations.empty());
}

TEST_CASE("model validation names each violation") {
  SECTION("compact object with non-open support") {
    SupportModel m = valuation_model();
    m.objects.push_back({"bad", nth_bit(1), true}); // {P} is not open
    const ModelReport rep = model_validate(m);
    REQUIRE_FALSE(rep.ok);
    REQUIRE_THAT(rep.violations.front(), ContainsSubstring("'bad'"));
    REQUIRE_THAT(rep.violations.front(), ContainsSubstring("non-open"));
  }
  SECTION("non-sober space") {
    FiniteSpace sp = make_space(
        {"0", "P", "Q"}, {0, nth_bit(0) | nth_bit(1), full_mask(3)});
    const SupportModel m =
        make_model(std::move(sp), {{"unit", full_mask(3), true}}, "unit");
    const ModelReport rep = model_validate(m);
    REQUIRE_FALSE(rep.ok);
    bool found = false;
    for (const auto& v : rep.violations)
      if (v.find("not sober") != std::string::npos) found = true;
    REQUIRE(found);
  }
  SECTION("duplicate object names") {
    SupportModel m = valuation_model();
    m.objects.push_back({"k", nth_bit(2), false});
    const ModelReport rep = model_validate(m);
    REQUIRE_FALSE(rep.ok);
    REQUIRE_THAT(rep.violations.front(), ContainsSubstring("duplicate"));
  }
  SECTION("unit without full support") {
    FiniteSpace sp = valuation_space();
    SupportModel m = make_model(
        std::move(sp),
        {{"u", nth_bit(0), true}, {"w", full_mask(3), true}}, "u");
    const ModelReport rep = model_validate(m);
    REQUIRE_FALSE(rep.ok);
    REQUIRE_THAT(rep.violations.front(), ContainsSubstring("full support"));
  }
  SECTION("unknown unit name") {
    REQUIRE_THROWS_AS(
        make_model(valuation_space(), {{"u", full_mask(3), true}}, "nope"),
        input_error);
  }
}

TEST_CASE("object calculus follows the support arithmetic") {
  const SupportModel m = valuation_model();
  SECTION("tensor intersects supports") {
    const FormalObject t = obj_tensor(m, "m", "k");
    REQUIRE(t.name == "(m*k)");
    REQUIRE(t.is_zero());
    REQUIRE(obj_tensor(m, "A_a", "A_a").support == pts(m, {"0", "P"}));
    for (const auto& x : m.objects)
      REQUIRE(obj_tensor(m, x.name, "A").support == x.support);
  }
  SECTION("sum unions supports") {
    const FormalObject s = obj_sum(m, "k", "Q");
    REQUIRE(s.name == "(k+Q)");
    REQUIRE(s.support == pts(m, {"P", "Q"}));
  }
  SECTION("suspension preserves supports") {
    const FormalObject s = obj_suspend(m, "A_a");
    REQUIRE(s.name == "S(A_a)");
    REQUIRE(s.support == m.object("A_a").support);
    REQUIRE(s.compact == m.object("A_a").compact);
  }
  SECTION("compactness flags combine conjunctively") {
    REQUIRE(obj_tensor(m, "A", "A_a").compact);
    REQUIRE_FALSE(obj_tensor(m, "A", "m").compact);
    REQUIRE_FALSE(obj_sum(m, "A_a", "k").compact);
  }
  SECTION("unknown object") {
    REQUIRE_THROWS_AS(obj_tensor(m, "A", "nope"), input_error);
  }
}

TEST_CASE("localizing ideal operations") {
  const SupportModel m = valuation_model();
  const LocalizingIdealModel i = make_localizing(m, pts(m, {"0", "P"}));
  const LocalizingIdealModel j = make_localizing(m, pts(m, {"P", "Q"}));
  REQUIRE(ideal_meet(m, i, j).carrier == pts(m, {"P"}));
  REQUIRE(ideal_tensor(m, i, j).carrier == pts(m, {"P"}));
  REQUIRE(ideal_join(m, {i, j}).carrier == m.space.full());
  REQUIRE(ideal_radical(m, i).carrier == i.carrier);
  REQUIRE_THROWS_AS(make_localizing(m, nth_bit(7)), input_error);
}

TEST_CASE("ideal membership is support inclusion") {
  const SupportModel m = valuation_model();
  const SmashingIdealModel loc_m = make_smashing(m, pts(m, {"0", "Q"}));
  REQUIRE(member(m, m.object("m"), loc_m));
  REQUIRE_FALSE(member(m, m.object("A_a"), loc_m));
  const FormalObject zero = obj_tensor(m, "m", "k");
  REQUIRE(member(m, zero, loc_m));
  REQUIRE(member(m, zero, make_localizing(m, 0)));
  REQUIRE_THROWS_MATCHES(
      make_smashing(m, nth_bit(1)), input_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("not an open")));
}

TEST_CASE("idempotents of a smashing ideal") {
  const SupportModel m = valuation_model();
  SECTION("the loc_m open splits into m and k") {
    const SmashingIdealModel s = make_smashing(m, pts(m, {"0", "Q"}));
    const FormalObject e = idempotent_E(m, s);
    const FormalObject f = idempotent_F(m, s);
    REQUIRE(e.support == m.object("m").support);
    REQUIRE(f.support == m.object("k").support);
    REQUIRE(tensor_of(e, f).is_zero());
  }
  SECTION("the whole space gives a unit-support E and zero F") {
    const SmashingIdealModel s = make_smashing(m, m.space.full());
    REQUIRE(idempotent_E(m, s).support == m.space.full());
    REQUIRE(idempotent_F(m, s).is_zero());
  }
  SECTION("the empty open gives a zero E and full F") {
    const SmashingIdealModel s = make_smashing(m, 0);
    REQUIRE(idempotent_E(m, s).is_zero());
    REQUIRE(idempotent_F(m, s).support == m.space.full());
  }
  SECTION("idempotence at support level for every open") {
    for (Mask o : m.space.opens) {
      const SmashingIdealModel s{o};
      const FormalObject e = idempotent_E(m, s);
      const FormalObject f = idempotent_F(m, s);
      REQUIRE(tensor_of(e, e).support == e.support);
      REQUIRE(tensor_of(f, f).support == f.support);
      REQUIRE(tensor_of(e, f).is_zero());
    }
  }
}

TEST_CASE("point idempotents isolate their point") {
  const SupportModel m = valuation_model();
  REQUIRE(gamma(m, m.space.point_index("0")).support == pts(m, {"0"}));
  REQUIRE(gamma(m, m.space.point_index("P")).support == pts(m, {"P"}));
  REQUIRE(gamma(m, m.space.point_index("Q")).support == pts(m, {"Q"}));
  REQUIRE(gamma(m, 1).name == "Gamma(P)");
  REQUIRE_THROWS_AS(gamma(m, 9), input_error);

  const SupportModel one = one_point_model();
  REQUIRE(gamma(one, 0).support == one.objects[0].support);
}

TEST_CASE("smashing support is the specialization closure of the support") {
  const SupportModel m = valuation_model();
  REQUIRE(smashing_support(m, "k") == pts(m, {"0", "P"}));
  REQUIRE(smashing_support(m, "A_a") == pts(m, {"0", "P"}));
  REQUIRE(smashing_support(m, "m") == pts(m, {"0", "Q"}));
  REQUIRE(smashing_support(m, obj_tensor(m, "m", "k")) == 0);

  const Poset spec = specialization_poset(m.space);
  for (const auto& x : m.objects)
    REQUIRE(smashing_support(m, x) == spec.up_closure(x.support));
}

TEST_CASE("small support recomputation matches the stored support") {
  const SupportModel m = valuation_model();
  for (const auto& x : m.objects) {
    const SmallSupportReport rep = small_support_consistency(m, x.name);
    REQUIRE(rep.recomputed == x.support);
    REQUIRE(rep.stored == x.support);
  }
  REQUIRE(small_support_consistency(m, FormalObject{"z", 0, false})
              .recomputed == 0);
  REQUIRE(small_support_consistency(m, "A").recomputed == m.space.full());
}

TEST_CASE("small support is contained in the smashing support") {
  const SupportModel m = valuation_model();
  for (const auto& x : m.objects) {
    REQUIRE(is_subset(x.support, smashing_support(m, x)));
    if (x.compact) REQUIRE(smashing_support(m, x) == x.support);
  }
  // strict on the non-compact residue object
  REQUIRE(m.object("k").support != smashing_support(m, "k"));
}

TEST_CASE("big prime scan returns the co-singleton carriers") {
  const SupportModel m = valuation_model();
  const auto primes = big_prime_scan(m);
  std::vector<Mask> carriers;
  for (const auto& w : primes) carriers.push_back(w.carrier);
  REQUIRE(carriers == std::vector<Mask>{pts(m, {"0", "P"}),
                                        pts(m, {"0", "Q"}),
                                        pts(m, {"P", "Q"})});

  const SupportModel one = one_point_model();
  const auto single = big_prime_scan(one);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].carrier == 0);
}

TEST_CASE("big prime scan refuses large spaces") {
  const std::size_t n = 13;
  std::vector<Mask> up(n);
  for (std::size_t i = 0; i < n; ++i)
    up[i] = full_mask(n) & ~(nth_bit(i) - 1);
  const Poset chain = make_poset(ttenum::letters(n), up);
  const SupportModel big = make_model(ttenum::upset_space(chain),
                                      {{"unit", full_mask(n), true}}, "unit");
  REQUIRE_THROWS_MATCHES(
      big_prime_scan(big), precondition_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("refuses")));
}

TEST_CASE("support through the big primes recovers the stored support") {
  const SupportModel m = valuation_model();
  for (const auto& x : m.objects) REQUIRE(big_support(m, x) == x.support);
  REQUIRE(big_support(m, obj_tensor(m, "m", "k")) == 0);
  REQUIRE(big_support(m, "A") == m.space.full());
}

TEST_CASE("topology generated by compact supports") {
  const SupportModel m = valuation_model();
  const FiniteSpace t = topology_from_supports(m, SupportFilter::compacts);
  REQUIRE(t.opens ==
          std::vector<Mask>{0, pts(m, {"0", "P"}), m.space.full()});
  const SeparationReport rep = separation_report(t);
  REQUIRE_FALSE(rep.sober);
  REQUIRE_FALSE(rep.t0);
}

TEST_CASE("topology generated by all supports is discrete here") {
  const SupportModel m = valuation_model();
  const FiniteSpace t = topology_from_supports(m, SupportFilter::all);
  REQUIRE(t.opens.size() == 8);
}

TEST_CASE("topology from a unit-only model is indiscrete") {
  FiniteSpace sp = valuation_space();
  const SupportModel m =
      make_model(std::move(sp), {{"unit", full_mask(3), true}}, "unit");
  const FiniteSpace t = topology_from_supports(m, SupportFilter::compacts);
  REQUIRE(t.opens == std::vector<Mask>{0, m.space.full()});
}

TEST_CASE("psi comparison on the valuation model") {
  const SupportModel m = valuation_model();
  const PsiModel pm = psi_model(m);
  REQUIRE(pm.open_lattice.size() == 5);
  REQUIRE(pm.inclusion.source.elements ==
          std::vector<std::string>{"{}", "{0,P}", "{0,P,Q}"});
  REQUIRE(pm.surjective);
  REQUIRE_FALSE(pm.injective);
  REQUIRE_FALSE(pm.homeomorphism);

  SECTION("psi identifies the generic point with the residue point") {
    const auto reach = [&](const char* p) {
      return pm.psi.point_map[pm.point_to_prime[m.space.point_index(p)]];
    };
    REQUIRE(reach("0") == reach("P"));
    REQUIRE(reach("0") != reach("Q"));
  }
  SECTION("the compact part fails to join-generate the frame") {
    const TelescopeReport rep = telescope_check(pm.open_lattice, pm.lc);
    REQUIRE_FALSE(rep.holds);
    REQUIRE(pm.open_lattice.elements[*rep.witness] == "{0}");
  }
}

TEST_CASE("psi collapses to a point when the unit is the only compact") {
  FiniteSpace sp = valuation_space();
  const SupportModel m =
      make_model(std::move(sp), {{"unit", full_mask(3), true}}, "unit");
  const PsiModel pm = psi_model(m);
  REQUIRE(pm.inclusion.source.size() == 2);
  REQUIRE(pm.psi.source_spec.primes.size() == 1);
  REQUIRE(pm.surjective);
  REQUIRE_FALSE(pm.injective);
}

TEST_CASE("psi is a homeomorphism on the discrete pair model") {
  const PsiModel pm = psi_model(discrete_pair_model());
  REQUIRE(pm.homeomorphism);
  REQUIRE(telescope_check(pm.open_lattice, pm.lc).holds);
}

TEST_CASE("comparison triangle") {
  SECTION("identity tables commute on the discrete pair") {
    const SupportModel m = discrete_pair_model();
    const TriangleReport rep = triangle_check(
        m, {"a", "b"}, {{"a", "a"}, {"b", "b"}}, {{"a", "a"}, {"b", "b"}});
    REQUIRE(rep.commutes);
  }
  SECTION("a permuted phi fails with a witness") {
    const SupportModel m = discrete_pair_model();
    const TriangleReport rep = triangle_check(
        m, {"a", "b"}, {{"a", "a"}, {"b", "b"}}, {{"a", "b"}, {"b", "a"}});
    REQUIRE_FALSE(rep.commutes);
    REQUIRE_THAT(rep.detail, ContainsSubstring("at 'a'"));
  }
  SECTION("points collapsed by psi commute even when the tables differ") {
    const SupportModel m = valuation_model();
    const TriangleReport rep =
        triangle_check(m, {"h1"}, {{"h1", "P"}}, {{"h1", "0"}});
    REQUIRE(rep.commutes);
  }
  SECTION("an empty point set commutes vacuously") {
    const TriangleReport rep =
        triangle_check(valuation_model(), {}, {}, {});
    REQUIRE(rep.commutes);
    REQUIRE_THAT(rep.detail, ContainsSubstring("vacuous"));
  }
  SECTION("tables must be total") {
    REQUIRE_THROWS_MATCHES(
        triangle_check(valuation_model(), {"h1"}, {}, {{"h1", "0"}}),
        input_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("chi table")));
  }
}
