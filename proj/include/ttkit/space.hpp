#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/poset.hpp"

namespace ttkit {

/** Finite topological space: a frozen point order plus the full family of
 *  open subsets, stored as masks sorted ascending and deduplicated.
 *  Invariants (checked by make_space): contains the empty and the full set,
 *  and is closed under pairwise union and intersection, which at finite
 *  scale closes it under arbitrary unions and intersections. */
struct FiniteSpace {
  std::vector<std::string> points;
  std::vector<Mask> opens;

  std::size_t size() const { return points.size(); }
  Mask full() const { return full_mask(points.size()); }

  bool is_open(Mask m) const {
    return std::binary_search(opens.begin(), opens.end(), m);
  }
  bool is_closed(Mask m) const { return is_open(full() & ~m); }

  std::size_t point_index(const std::string& label) const {
    std::size_t i = label_index(points, label);
    if (i == points.size()) throw input_error("unknown point '" + label + "'");
    return i;
  }
};

inline FiniteSpace make_space(std::vector<std::string> points,
                              std::vector<Mask> opens) {
  detail::check_labels(points, "space");
  const Mask full = full_mask(points.size());
  for (Mask m : opens)
    if (!is_subset(m, full))
      throw input_error("space: open set mentions unknown point index");
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  if (opens.empty() || opens.front() != 0)
    throw input_error("space: the empty set is not open");
  if (opens.back() != full)
    throw input_error("space: the full point set is not open");
  FiniteSpace s{std::move(points), std::move(opens)};
  for (Mask a : s.opens)
    for (Mask b : s.opens) {
      if (!s.is_open(a | b))
        throw input_error("space: opens not closed under union (" +
                          format_set(s.points, a) + " with " +
                          format_set(s.points, b) + ")");
      if (!s.is_open(a & b))
        throw input_error("space: opens not closed under intersection (" +
                          format_set(s.points, a) + " with " +
                          format_set(s.points, b) + ")");
    }
  return s;
}

inline std::vector<Mask> closed_sets(const FiniteSpace& s) {
  std::vector<Mask> out;
  out.reserve(s.opens.size());
  const Mask full = s.full();
  for (Mask o : s.opens) out.push_back(full & ~o);
  std::sort(out.begin(), out.end());
  return out;
}

/** Smallest closed set containing a: the complement of the union of all
 *  opens disjoint from a. */
inline Mask closure(const FiniteSpace& s, Mask a) {
  if (!is_subset(a, s.full()))
    throw input_error("closure: subset mentions unknown point index");
  Mask avoid = 0;
  for (Mask o : s.opens)
    if ((o & a) == 0) avoid |= o;
  return s.full() & ~avoid;
}

inline Mask point_closure(const FiniteSpace& s, std::size_t i) {
  return closure(s, nth_bit(i));
}

/** Smallest open neighbourhood of point i; exists because finite open
 *  families are intersection-closed. */
inline Mask minimal_open(const FiniteSpace& s, std::size_t i) {
  Mask m = s.full();
  for (Mask o : s.opens)
    if (has_bit(o, i)) m &= o;
  return m;
}

/** Specialization preorder: x <= y iff x lies in the closure of {y}.
 *  Opens are exactly the up-sets of this preorder; it is a partial order
 *  precisely when the space is T0. */
struct SpecializationOrder {
  std::vector<std::string> points;
  std::vector<Mask> up; // up[i] = all j with i <= j
  bool is_partial_order;
  std::optional<std::pair<std::size_t, std::size_t>> antisymmetry_witness;

  bool leq(std::size_t i, std::size_t j) const { return has_bit(up[i], j); }
};

inline SpecializationOrder specialization_leq(const FiniteSpace& s) {
  const std::size_t n = s.size();
  std::vector<Mask> cl(n);
  for (std::size_t i = 0; i < n; ++i) cl[i] = point_closure(s, i);
  SpecializationOrder ord{s.points, std::vector<Mask>(n, 0), true, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (has_bit(cl[j], i)) ord.up[i] |= nth_bit(j);
  for (std::size_t i = 0; i < n && ord.is_partial_order; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ord.leq(i, j) && ord.leq(j, i)) {
        ord.is_partial_order = false;
        ord.antisymmetry_witness = {i, j};
        break;
      }
  return ord;
}

inline Poset specialization_poset(const FiniteSpace& s) {
  SpecializationOrder ord = specialization_leq(s);
  if (!ord.is_partial_order) {
    auto [i, j] = *ord.antisymmetry_witness;
    throw precondition_error("space is not T0: points '" + s.points[i] +
                             "' and '" + s.points[j] +
                             "' share all neighbourhoods");
  }
  return make_poset(ord.points, ord.up);
}

struct LocallyClosedWitness {
  std::size_t point;
  Mask open_part;   // minimal open neighbourhood
  Mask closed_part; // point closure
  bool locally_closed;
};

struct SeparationReport {
  bool t0 = false;
  std::optional<std::pair<std::size_t, std::size_t>> t0_witness;
  bool sober = false;
  std::optional<Mask> sober_witness; // irreducible closed set without a
                                     // unique generic point
  std::vector<std::size_t> sober_witness_generic_points;
  bool td = false;
  std::vector<LocallyClosedWitness> td_witnesses;
};

/** T0 / sober / TD diagnostics with witnesses.
 *  - t0: no two points share the same open neighbourhoods.
 *  - sober: every irreducible closed set (nonempty, not the union of two
 *    strictly smaller closed sets) has exactly one generic point.
 *  - td: every singleton is the intersection of an open and a closed set;
 *    the minimal open and the point closure are canonical witnesses. */
inline SeparationReport separation_report(const FiniteSpace& s) {
  const std::size_t n = s.size();
  SeparationReport rep;

  rep.t0 = true;
  for (std::size_t i = 0; i < n && rep.t0; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (minimal_open(s, i) == minimal_open(s, j)) {
        rep.t0 = false;
        rep.t0_witness = {i, j};
        break;
      }

  std::vector<Mask> cl(n);
  for (std::size_t i = 0; i < n; ++i) cl[i] = point_closure(s, i);
  const std::vector<Mask> closeds = closed_sets(s);
  rep.sober = true;
  for (Mask c : closeds) {
    if (c == 0) continue;
    bool irreducible = true;
    for (Mask c1 : closeds) {
      if (!irreducible) break;
      if (c1 == c || !is_subset(c1, c)) continue;
      for (Mask c2 : closeds) {
        if (c2 == c || !is_subset(c2, c)) continue;
        if ((c1 | c2) == c) {
          irreducible = false;
          break;
        }
      }
    }
    if (!irreducible) continue;
    std::vector<std::size_t> generic;
    for (std::size_t i = 0; i < n; ++i)
      if (cl[i] == c) generic.push_back(i);
    if (generic.size() != 1) {
      rep.sober = false;
      rep.sober_witness = c;
      rep.sober_witness_generic_points = generic;
      break;
    }
  }

  rep.td = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Mask u = minimal_open(s, i);
    const Mask c = cl[i];
    // {x} = U cap C for some open U and closed C iff it holds for the
    // minimal open and the point closure.
    const bool ok = (u & c) == nth_bit(i);
    rep.td_witnesses.push_back({i, u, c, ok});
    if (!ok) rep.td = false;
  }
  return rep;
}

enum class SubbasisMode { opens, closeds };

/** Smallest topology whose opens (resp. closeds) include the subbasis.
 *  Generation closes under finite intersections first (yielding a basis,
 *  with the empty intersection contributing the full set) and then under
 *  unions; the result is validated as a topology. */
inline FiniteSpace topology_from_subbasis(std::vector<std::string> points,
                                          std::vector<Mask> subbasis,
                                          SubbasisMode mode) {
  detail::check_labels(points, "space");
  const Mask full = full_mask(points.size());
  for (Mask& m : subbasis) {
    if (!is_subset(m, full))
      throw input_error("subbasis: set mentions unknown point index");
    if (mode == SubbasisMode::closeds) m = full & ~m;
  }
  std::set<Mask> basis(subbasis.begin(), subbasis.end());
  basis.insert(full);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Mask> cur(basis.begin(), basis.end());
    for (Mask a : cur)
      for (Mask b : cur)
        if (basis.insert(a & b).second) changed = true;
  }
  std::set<Mask> opens(basis.begin(), basis.end());
  opens.insert(0);
  changed = true;
  while (changed) {
    changed = false;
    std::vector<Mask> cur(opens.begin(), opens.end());
    for (Mask a : cur)
      for (Mask b : cur)
        if (opens.insert(a | b).second) changed = true;
  }
  return make_space(std::move(points),
                    std::vector<Mask>(opens.begin(), opens.end()));
}

/** Topology generated by the opens together with the closeds. Discrete for
 *  every finite T0 space, since those are TD. */
inline FiniteSpace skula(const FiniteSpace& s) {
  std::vector<Mask> sub = s.opens;
  for (Mask c : closed_sets(s)) sub.push_back(c);
  return topology_from_subbasis(s.points, std::move(sub),
                                SubbasisMode::opens);
}

/** Same points, opens generated by the closed sets of the input. Every
 *  subset of a finite space is quasi-compact, so no complement condition
 *  cuts the generating family down. Involutive on finite T0 sober spaces. */
inline FiniteSpace hochster_dual(const FiniteSpace& s) {
  SeparationReport rep = separation_report(s);
  if (!rep.t0) {
    auto [i, j] = *rep.t0_witness;
    throw precondition_error("hochster dual requires a T0 space; points '" +
                             s.points[i] + "' and '" + s.points[j] +
                             "' share all neighbourhoods");
  }
  if (!rep.sober)
    throw precondition_error(
        "hochster dual requires a sober space; irreducible closed set " +
        format_set(s.points, *rep.sober_witness) +
        " lacks a unique generic point");
  return topology_from_subbasis(s.points, closed_sets(s),
                                SubbasisMode::opens);
}

namespace detail {

constexpr std::size_t qc_exhaustive_trace_limit = 14;

/** Checks that every open cover of u admits a finite subcover. Covers are
 *  reduced to their traces on u (a member disjoint from u contributes
 *  nothing, and members with equal traces are interchangeable); with at most
 *  qc_exhaustive_trace_limit distinct traces every trace family is tried,
 *  otherwise only irredundant covers are walked, which suffices because a
 *  redundant cover inherits the finite subcover of any irredundant
 *  refinement. For each cover the canonical pointwise selection is built
 *  and verified to be a finite subcover. */
inline bool open_set_is_quasi_compact(const FiniteSpace& s, Mask u) {
  if (u == 0) return true; // covered by the empty subfamily
  std::vector<Mask> traces;
  for (Mask o : s.opens)
    if ((o & u) != 0) traces.push_back(o & u);
  std::sort(traces.begin(), traces.end());
  traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
  const std::size_t k = traces.size();

  auto pointwise_subcover_covers = [&](const std::vector<Mask>& family) {
    Mask got = 0;
    for_each_bit(u, [&](std::size_t x) {
      for (Mask t : family)
        if (has_bit(t, x)) {
          got |= t;
          break;
        }
    });
    return is_subset(u, got);
  };

  if (k <= qc_exhaustive_trace_limit) {
    for (Mask sel = 0; sel < (Mask{1} << k); ++sel) {
      Mask covered = 0;
      std::vector<Mask> family;
      for_each_bit(sel, [&](std::size_t i) {
        covered |= traces[i];
        family.push_back(traces[i]);
      });
      if (!is_subset(u, covered)) continue;
      if (!pointwise_subcover_covers(family)) return false;
    }
    return true;
  }

  // Irredundant covers only: branch on the lowest uncovered point. States
  // are keyed by the covered mask; the selection verdict is a function of
  // coveredness, so revisits are pruned.
  std::set<Mask> seen;
  std::vector<std::pair<Mask, std::vector<Mask>>> stack;
  stack.push_back({0, {}});
  while (!stack.empty()) {
    auto [covered, family] = std::move(stack.back());
    stack.pop_back();
    if (is_subset(u, covered)) {
      if (!pointwise_subcover_covers(family)) return false;
      continue;
    }
    if (!seen.insert(covered).second) continue;
    const std::size_t x =
        static_cast<std::size_t>(std::countr_zero(u & ~covered));
    for (Mask t : traces)
      if (has_bit(t, x)) {
        auto next = family;
        next.push_back(t);
        stack.push_back({covered | t, std::move(next)});
      }
  }
  return true;
}

} // namespace detail

inline bool is_quasi_compact(const FiniteSpace& s, Mask open_set) {
  if (!s.is_open(open_set))
    throw input_error("quasi-compactness: set " +
                      format_set(s.points, open_set) + " is not open");
  return detail::open_set_is_quasi_compact(s, open_set);
}

/** Opens whose covers all admit finite subcovers, found by running the
 *  cover check rather than by the finite-scale shortcut; on a finite space
 *  this is every open. */
inline std::vector<Mask> quasi_compact_opens(const FiniteSpace& s) {
  std::vector<Mask> out;
  for (Mask o : s.opens)
    if (detail::open_set_is_quasi_compact(s, o)) out.push_back(o);
  return out;
}

} // namespace ttkit
