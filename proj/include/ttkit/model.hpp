#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/galois.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

/** Object of an encoded tensor-triangulated world: a name, the set of
 *  spectrum points where it lives (its small smashing support) and a
 *  compactness flag. The modelled regime identifies objects with their
 *  supports: an object is zero exactly when its support is empty. */
struct FormalObject {
  std::string name;
  Mask support = 0;
  bool compact = false;

  bool is_zero() const { return support == 0; }
};

inline FormalObject tensor_of(const FormalObject& a, const FormalObject& b) {
  return {"(" + a.name + "*" + b.name + ")", a.support & b.support,
          a.compact && b.compact};
}
inline FormalObject sum_of(const FormalObject& a, const FormalObject& b) {
  return {"(" + a.name + "+" + b.name + ")", a.support | b.support,
          a.compact && b.compact};
}
inline FormalObject suspend_of(const FormalObject& a) {
  return {"S(" + a.name + ")", a.support, a.compact};
}

/** A smashing spectrum (finite T0 sober TD space) together with a table of
 *  formal objects and a designated tensor unit of full support. */
struct SupportModel {
  FiniteSpace space;
  std::vector<FormalObject> objects;
  std::size_t unit = 0;

  std::size_t object_index(const std::string& name) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].name == name) return i;
    throw input_error("unknown object '" + name + "'");
  }
  const FormalObject& object(const std::string& name) const {
    return objects[object_index(name)];
  }
};

inline SupportModel make_model(FiniteSpace space,
                               std::vector<FormalObject> objects,
                               const std::string& unit_name) {
  SupportModel m{std::move(space), std::move(objects), 0};
  m.unit = m.object_index(unit_name);
  return m;
}

struct ModelReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/** Checks every model invariant with named witnesses: the space must be T0,
 *  sober and TD; compact objects must have open support; the unit must be
 *  compact with full support; names must be distinct and supports in range. */
inline ModelReport model_validate(const SupportModel& m) {
  ModelReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };
  SeparationReport sep = separation_report(m.space);
  if (!sep.t0) fail("space is not T0");
  if (!sep.sober)
    fail("space is not sober (irreducible closed set " +
         format_set(m.space.points, *sep.sober_witness) +
         " lacks a unique generic point)");
  if (!sep.td) fail("space is not TD");
  for (std::size_t i = 0; i < m.objects.size(); ++i) {
    const FormalObject& x = m.objects[i];
    if (x.name.empty()) fail("object with empty name");
    for (std::size_t j = i + 1; j < m.objects.size(); ++j)
      if (m.objects[j].name == x.name)
        fail("duplicate object name '" + x.name + "'");
    if (!is_subset(x.support, m.space.full()))
      fail("object '" + x.name + "' has out-of-range support");
    if (x.compact && !m.space.is_open(x.support))
      fail("compact object '" + x.name + "' has non-open support " +
           format_set(m.space.points, x.support));
  }
  if (m.unit >= m.objects.size()) {
    fail("unit index out of range");
    return rep;
  }
  if (m.objects[m.unit].support != m.space.full())
    fail("unit '" + m.objects[m.unit].name + "' does not have full support");
  if (!m.objects[m.unit].compact)
    fail("unit '" + m.objects[m.unit].name + "' is not compact");
  return rep;
}

inline FormalObject obj_tensor(const SupportModel& m, const std::string& x,
                               const std::string& y) {
  return tensor_of(m.object(x), m.object(y));
}
inline FormalObject obj_sum(const SupportModel& m, const std::string& x,
                            const std::string& y) {
  return sum_of(m.object(x), m.object(y));
}
inline FormalObject obj_suspend(const SupportModel& m, const std::string& x) {
  return suspend_of(m.object(x));
}

/** Localizing ideal encoded by its carrier: it holds the objects whose
 *  support lies inside the carrier. Every such ideal is radical in this
 *  regime. */
struct LocalizingIdealModel {
  Mask carrier = 0;
};

/** Smashing ideal encoded by an open of the model space. */
struct SmashingIdealModel {
  Mask open = 0;
};

inline LocalizingIdealModel make_localizing(const SupportModel& m,
                                            Mask carrier) {
  if (!is_subset(carrier, m.space.full()))
    throw input_error("localizing ideal: carrier out of range");
  return {carrier};
}

inline SmashingIdealModel make_smashing(const SupportModel& m, Mask open) {
  if (!m.space.is_open(open))
    throw input_error("smashing ideal: " + format_set(m.space.points, open) +
                      " is not an open of the model space");
  return {open};
}

/** Left idempotent of a smashing ideal: supported on the open itself. */
inline FormalObject idempotent_E(const SupportModel& m, SmashingIdealModel s) {
  return {"E(" + format_set(m.space.points, s.open) + ")", s.open, false};
}

/** Right idempotent: supported on the closed complement. E tensor F is the
 *  zero object, asserted on every call. */
inline FormalObject idempotent_F(const SupportModel& m, SmashingIdealModel s) {
  FormalObject f{"F(" + format_set(m.space.points, s.open) + ")",
                 m.space.full() & ~s.open, false};
  if ((f.support & s.open) != 0)
    throw internal_error("idempotents of " +
                         format_set(m.space.points, s.open) +
                         " fail E tensor F = 0");
  return f;
}

/** Point idempotent at P: E_S tensor F_P over an open S that cuts the
 *  closure of {P} down to {P}. Every admissible S is used and the supports
 *  are asserted equal, so the choice is immaterial; the result is the
 *  support-{P} object, nonzero. TD guarantees an admissible S exists. */
inline FormalObject gamma(const SupportModel& m, std::size_t point) {
  if (point >= m.space.size())
    throw input_error("gamma: point index out of range");
  const Mask cl = point_closure(m.space, point);
  const FormalObject f_point{"F_pt", cl, false};
  bool found = false;
  Mask support = 0;
  for (Mask s : m.space.opens) {
    if ((s & cl) != nth_bit(point)) continue;
    const FormalObject e = idempotent_E(m, SmashingIdealModel{s});
    const FormalObject g = tensor_of(e, f_point);
    if (!found) {
      support = g.support;
      found = true;
    } else if (g.support != support) {
      throw internal_error("gamma at '" + m.space.points[point] +
                           "' depends on the chosen open");
    }
  }
  if (!found)
    throw internal_error("point '" + m.space.points[point] +
                         "' is not locally closed");
  if (support != nth_bit(point))
    throw internal_error("gamma at '" + m.space.points[point] +
                         "' does not have support {" +
                         m.space.points[point] + "}");
  return {"Gamma(" + m.space.points[point] + ")", support, false};
}

namespace detail {

/** Radical of a carrier, computed semantically: the points whose gamma
 *  idempotent detects a witness object carried on it. */
inline Mask radical_carrier(const SupportModel& m, Mask c) {
  const FormalObject witness{"witness", c, false};
  Mask out = 0;
  for (std::size_t p = 0; p < m.space.size(); ++p)
    if (!tensor_of(gamma(m, p), witness).is_zero()) out |= nth_bit(p);
  return out;
}

/** I cap J = radical(I tensor J); asserted on every ideal operation. The
 *  two sides follow different code paths: the meet is the plain carrier
 *  intersection, the right side tensors witness objects and radicalizes
 *  through gamma detection. */
inline void check_cap_law(const SupportModel& m, Mask i, Mask j) {
  const Mask meet = i & j;
  const FormalObject wi{"wi", i, false};
  const FormalObject wj{"wj", j, false};
  const Mask radical = radical_carrier(m, tensor_of(wi, wj).support);
  if (meet != radical)
    throw internal_error("ideal law I cap J = radical(I tensor J) failed on " +
                         format_set(m.space.points, i) + " and " +
                         format_set(m.space.points, j));
}

} // namespace detail

inline LocalizingIdealModel ideal_meet(const SupportModel& m,
                                       LocalizingIdealModel i,
                                       LocalizingIdealModel j) {
  detail::check_cap_law(m, i.carrier, j.carrier);
  return {i.carrier & j.carrier};
}

inline LocalizingIdealModel ideal_tensor(const SupportModel& m,
                                         LocalizingIdealModel i,
                                         LocalizingIdealModel j) {
  detail::check_cap_law(m, i.carrier, j.carrier);
  return {i.carrier & j.carrier};
}

inline LocalizingIdealModel ideal_join(
    const SupportModel& m, const std::vector<LocalizingIdealModel>& family) {
  Mask u = 0;
  for (const auto& i : family) {
    if (!is_subset(i.carrier, m.space.full()))
      throw input_error("localizing ideal: carrier out of range");
    u |= i.carrier;
  }
  return {u};
}

inline LocalizingIdealModel ideal_radical(const SupportModel& m,
                                          LocalizingIdealModel i) {
  detail::check_cap_law(m, i.carrier, i.carrier);
  return i;
}

inline bool member(const SupportModel&, const FormalObject& x,
                   LocalizingIdealModel i) {
  return is_subset(x.support, i.carrier);
}

inline bool member(const SupportModel&, const FormalObject& x,
                   SmashingIdealModel s) {
  return is_subset(x.support, s.open);
}

/** Big smashing support: the points P whose prime the object escapes,
 *  detected through membership semantics as F_P tensor X != 0, i.e. the
 *  closure of {P} meets the support of X. */
inline Mask smashing_support(const SupportModel& m, const FormalObject& x) {
  if (!is_subset(x.support, m.space.full()))
    throw input_error("smashing support: object support out of range");
  Mask out = 0;
  for (std::size_t p = 0; p < m.space.size(); ++p) {
    const FormalObject f_p{"F_pt", point_closure(m.space, p), false};
    if (!tensor_of(f_p, x).is_zero()) out |= nth_bit(p);
  }
  return out;
}

inline Mask smashing_support(const SupportModel& m, const std::string& name) {
  return smashing_support(m, m.object(name));
}

struct SmallSupportReport {
  Mask recomputed = 0;
  Mask stored = 0;
};

/** Recomputes the small support as the points whose gamma idempotent
 *  detects the object, and asserts it equals the stored support. */
inline SmallSupportReport small_support_consistency(const SupportModel& m,
                                                    const FormalObject& x) {
  Mask rec = 0;
  for (std::size_t p = 0; p < m.space.size(); ++p)
    if (!tensor_of(gamma(m, p), x).is_zero()) rec |= nth_bit(p);
  if (rec != x.support)
    throw internal_error("stored support of '" + x.name +
                         "' disagrees with gamma detection: stored " +
                         format_set(m.space.points, x.support) +
                         ", recomputed " + format_set(m.space.points, rec));
  return {rec, x.support};
}

inline SmallSupportReport small_support_consistency(const SupportModel& m,
                                                    const std::string& name) {
  return small_support_consistency(m, m.object(name));
}

namespace detail {
constexpr std::size_t big_prime_scan_point_limit = 12;
} // namespace detail

/** Exhaustive meet-prime scan over all carriers: proper W such that
 *  A cap B inside W forces A inside W or B inside W, checked by the naive
 *  definition over all pairs of subsets. The co-singleton closed form is
 *  recomputed independently and asserted equal. Guarded at 12 points. */
inline std::vector<LocalizingIdealModel> big_prime_scan(
    const SupportModel& m) {
  const std::size_t n = m.space.size();
  if (n > detail::big_prime_scan_point_limit)
    throw precondition_error(
        "big prime scan refuses more than " +
        std::to_string(detail::big_prime_scan_point_limit) +
        " points (exhaustive subset-pair check)");
  const Mask full = m.space.full();
  std::vector<LocalizingIdealModel> primes;
  for (Mask w = 0; w < full; ++w) {
    bool prime = true;
    for (Mask a = 0; a <= full && prime; ++a) {
      if (is_subset(a, w)) continue;
      for (Mask b = 0; b <= full; ++b) {
        if (is_subset(b, w)) continue;
        if (is_subset(a & b, w)) {
          prime = false;
          break;
        }
      }
    }
    if (prime) primes.push_back({w});
  }
  std::vector<Mask> closed_form;
  for (std::size_t p = 0; p < n; ++p)
    closed_form.push_back(full & ~nth_bit(p));
  std::sort(closed_form.begin(), closed_form.end());
  std::vector<Mask> scanned;
  for (const auto& w : primes) scanned.push_back(w.carrier);
  if (scanned != closed_form)
    throw internal_error(
        "big prime scan disagrees with the co-singleton closed form");
  return primes;
}

/** Support through the big primes: { W prime : supp X not inside W },
 *  read back as the set of points missing from those carriers; asserted to
 *  equal the stored support. */
inline Mask big_support(const SupportModel& m, const FormalObject& x) {
  if (!is_subset(x.support, m.space.full()))
    throw input_error("big support: object support out of range");
  Mask points = 0;
  for (const auto& w : big_prime_scan(m))
    if (!is_subset(x.support, w.carrier))
      points |= m.space.full() & ~w.carrier;
  if (points != x.support)
    throw internal_error("big support of '" + x.name +
                         "' differs from its stored support");
  return points;
}

inline Mask big_support(const SupportModel& m, const std::string& name) {
  return big_support(m, m.object(name));
}

enum class SupportFilter { compacts, all };

/** Topology generated (in the open picture) by the stored supports of the
 *  selected objects. For compact objects the stored support coincides with
 *  the big smashing support, which is asserted before generating. */
inline FiniteSpace topology_from_supports(const SupportModel& m,
                                          SupportFilter filter) {
  std::vector<Mask> gens;
  for (const auto& x : m.objects) {
    if (filter == SupportFilter::compacts && !x.compact) continue;
    if (x.compact && smashing_support(m, x) != x.support)
      throw internal_error("compact object '" + x.name +
                           "' has big smashing support different from its "
                           "stored support");
    gens.push_back(x.support);
  }
  return topology_from_subbasis(m.space.points, std::move(gens),
                                SubbasisMode::opens);
}

/** Comparison data between the full open lattice of the model space and
 *  its compactly generated part. `open_lattice` has one element per open,
 *  labelled by the set literal; `lc` spans the sublattice generated by the
 *  supports of compact objects together with the bounds; `psi` is the
 *  spectrum map of the inclusion. `point_to_prime[x]` locates the prime
 *  open (complement of the closure of {x}) among the spectrum points of the
 *  open lattice; it is a bijection for valid models. */
struct PsiModel {
  FiniteLattice open_lattice;
  std::vector<std::size_t> lc;
  FrameMap inclusion; // inclusion.source is the lc sublattice
  SpecMap psi;        // spectrum(open_lattice) -> spectrum(lc)
  std::vector<std::size_t> point_to_prime;
  bool surjective = false;
  bool injective = false;
  bool homeomorphism = false;
};

inline FiniteLattice open_set_lattice(const FiniteSpace& s) {
  if (s.opens.size() > max_universe)
    throw precondition_error("open-set lattice: more than 64 opens");
  std::vector<std::string> labels;
  std::vector<Mask> up(s.opens.size(), 0);
  for (std::size_t i = 0; i < s.opens.size(); ++i) {
    labels.push_back(format_set(s.points, s.opens[i]));
    for (std::size_t j = 0; j < s.opens.size(); ++j)
      if (is_subset(s.opens[i], s.opens[j])) up[i] |= nth_bit(j);
  }
  return lattice_from_order(std::move(labels), std::move(up));
}

inline PsiModel psi_model(const SupportModel& m) {
  PsiModel out;
  out.open_lattice = open_set_lattice(m.space);
  auto open_index = [&](Mask o) {
    auto it = std::lower_bound(m.space.opens.begin(), m.space.opens.end(), o);
    if (it == m.space.opens.end() || *it != o)
      throw internal_error("set " + format_set(m.space.points, o) +
                           " is not an open of the model space");
    return static_cast<std::size_t>(it - m.space.opens.begin());
  };

  // lc: close the compact supports (plus the bounds) under meet and join
  std::vector<char> in_lc(m.space.opens.size(), 0);
  in_lc[open_index(0)] = 1;
  in_lc[open_index(m.space.full())] = 1;
  for (const auto& x : m.objects)
    if (x.compact) in_lc[open_index(x.support)] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < in_lc.size(); ++i) {
      if (!in_lc[i]) continue;
      for (std::size_t j = 0; j < in_lc.size(); ++j) {
        if (!in_lc[j]) continue;
        for (std::size_t k :
             {out.open_lattice.meet(i, j), out.open_lattice.join(i, j)})
          if (!in_lc[k]) {
            in_lc[k] = 1;
            changed = true;
          }
      }
    }
  }
  for (std::size_t i = 0; i < in_lc.size(); ++i)
    if (in_lc[i]) out.lc.push_back(i);

  out.inclusion = sublattice_inclusion(out.open_lattice, out.lc);
  out.psi = spec_map(out.inclusion);

  // locate each model point's prime open among the spectrum points
  const std::size_t n_pts = m.space.size();
  out.point_to_prime.assign(n_pts, 0);
  std::vector<char> hit(out.psi.target_spec.primes.size(), 0);
  for (std::size_t x = 0; x < n_pts; ++x) {
    const Mask prime_open = m.space.full() & ~point_closure(m.space, x);
    const std::size_t elem = open_index(prime_open);
    bool found = false;
    for (std::size_t k = 0; k < out.psi.target_spec.primes.size(); ++k)
      if (out.psi.target_spec.primes[k] == elem) {
        out.point_to_prime[x] = k;
        hit[k] = 1;
        found = true;
        break;
      }
    if (!found)
      throw internal_error("point '" + m.space.points[x] +
                           "' does not induce a prime open");
  }
  if (n_pts != out.psi.target_spec.primes.size() ||
      std::count(hit.begin(), hit.end(), char(1)) !=
          static_cast<std::ptrdiff_t>(hit.size()))
    throw internal_error(
        "model points do not biject with the primes of the open lattice");

  // verify: the spectrum-level support of every compact object pulls back
  // to its big smashing support
  for (const auto& x : m.objects) {
    if (!x.compact) continue;
    const std::size_t lc_elem =
        out.inclusion.source.index_of(format_set(m.space.points, x.support));
    const Mask pre = out.psi.preimage_of[lc_elem];
    Mask expected = 0;
    for_each_bit(smashing_support(m, x), [&](std::size_t p) {
      expected |= nth_bit(out.point_to_prime[p]);
    });
    if (pre != expected)
      throw internal_error("spectrum support of compact '" + x.name +
                           "' does not pull back to its smashing support");
  }

  const std::size_t n_src = out.psi.source_spec.primes.size();
  std::vector<int> hits(n_src, 0);
  for (std::size_t q : out.psi.point_map) ++hits[q];
  out.surjective = true;
  for (int h : hits) out.surjective = out.surjective && h >= 1;
  out.injective = true;
  for (int h : hits) out.injective = out.injective && h <= 1;
  bool bijective = out.surjective && out.injective &&
                   out.psi.point_map.size() == n_src;
  bool open_images = bijective;
  if (bijective)
    for (Mask o : out.psi.target_spec.space.opens) {
      Mask img = 0;
      for_each_bit(o,
                   [&](std::size_t q) { img |= nth_bit(out.psi.point_map[q]); });
      if (!out.psi.source_spec.space.is_open(img)) {
        open_images = false;
        break;
      }
    }
  out.homeomorphism = bijective && open_images;
  return out;
}

struct TriangleReport {
  bool commutes = false;
  std::string detail; // first failure
};

/** Commutativity of the comparison triangle: chi names the big prime of a
 *  homological point by the model point carrying it, phi names its
 *  compact-spectrum point the same way, and the triangle commutes when both
 *  reach the same point of the compact spectrum through psi. Tables must be
 *  total on hom_points; an empty point set commutes vacuously. */
inline TriangleReport triangle_check(
    const SupportModel& m, const std::vector<std::string>& hom_points,
    const std::map<std::string, std::string>& chi,
    const std::map<std::string, std::string>& phi) {
  if (hom_points.empty()) return {true, "vacuous: no homological points"};
  const PsiModel pm = psi_model(m);
  auto omega = [&](const std::string& point_label) {
    const std::size_t x = m.space.point_index(point_label);
    return pm.psi.point_map[pm.point_to_prime[x]];
  };
  for (const auto& h : hom_points) {
    auto ci = chi.find(h);
    if (ci == chi.end())
      throw input_error("chi table missing homological point '" + h + "'");
    auto pi = phi.find(h);
    if (pi == phi.end())
      throw input_error("phi table missing homological point '" + h + "'");
    const std::size_t via_chi = omega(ci->second);
    const std::size_t via_phi = omega(pi->second);
    if (via_chi != via_phi)
      return {false,
              "at '" + h + "': chi reaches '" +
                  pm.psi.source_spec.space.points[via_chi] +
                  "' but phi reaches '" +
                  pm.psi.source_spec.space.points[via_phi] + "'"};
  }
  return {true, ""};
}

} // namespace ttkit
