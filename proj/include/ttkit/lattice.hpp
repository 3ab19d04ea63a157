#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/poset.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

/** Finite bounded lattice: a poset in which every pair has a meet and a
 *  join, with the tables precomputed on construction. */
struct FiniteLattice {
  std::vector<std::string> elements;
  std::vector<Mask> up; // up[i] = all j with i <= j
  std::vector<std::vector<std::size_t>> meet_table, join_table;
  std::size_t bottom = 0, top = 0;

  std::size_t size() const { return elements.size(); }
  bool leq(std::size_t i, std::size_t j) const { return has_bit(up[i], j); }
  std::size_t meet(std::size_t i, std::size_t j) const {
    return meet_table[i][j];
  }
  std::size_t join(std::size_t i, std::size_t j) const {
    return join_table[i][j];
  }

  std::size_t join_of(Mask subset) const {
    std::size_t r = bottom;
    for_each_bit(subset, [&](std::size_t i) { r = join(r, i); });
    return r;
  }
  std::size_t meet_of(Mask subset) const {
    std::size_t r = top;
    for_each_bit(subset, [&](std::size_t i) { r = meet(r, i); });
    return r;
  }

  std::size_t index_of(const std::string& label) const {
    std::size_t i = label_index(elements, label);
    if (i == elements.size())
      throw input_error("unknown lattice element '" + label + "'");
    return i;
  }
};

/** Validates the order and computes meet/join tables, failing with the
 *  offending pair when some meet or join does not exist. */
inline FiniteLattice lattice_from_order(std::vector<std::string> elements,
                                        std::vector<Mask> up) {
  Poset p = make_poset(std::move(elements), std::move(up));
  const std::size_t n = p.size();
  if (n == 0) throw input_error("lattice: no elements");
  FiniteLattice l;
  l.elements = p.elements;
  l.up = p.up;

  std::vector<Mask> down(n);
  for (std::size_t i = 0; i < n; ++i) down[i] = p.down(i);
  const Mask full = full_mask(n);

  std::optional<std::size_t> top, bottom;
  for (std::size_t i = 0; i < n; ++i) {
    if (down[i] == full) top = i;
    if (l.up[i] == full) bottom = i;
  }
  if (!top) throw input_error("lattice: no top element");
  if (!bottom) throw input_error("lattice: no bottom element");
  l.top = *top;
  l.bottom = *bottom;

  l.meet_table.assign(n, std::vector<std::size_t>(n, 0));
  l.join_table.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Mask lower = down[i] & down[j];
      std::optional<std::size_t> glb;
      for_each_bit(lower, [&](std::size_t k) {
        if (is_subset(lower, down[k])) glb = k;
      });
      if (!glb)
        throw input_error("lattice: no meet for '" + l.elements[i] +
                          "' and '" + l.elements[j] + "'");
      l.meet_table[i][j] = *glb;

      const Mask upper = l.up[i] & l.up[j];
      std::optional<std::size_t> lub;
      for_each_bit(upper, [&](std::size_t k) {
        if (is_subset(upper, l.up[k])) lub = k;
      });
      if (!lub)
        throw input_error("lattice: no join for '" + l.elements[i] +
                          "' and '" + l.elements[j] + "'");
      l.join_table[i][j] = *lub;
    }
  return l;
}

inline FiniteLattice lattice_from_pairs(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    bool take_closure = true) {
  Poset p = make_poset_from_pairs(std::move(elements), pairs, take_closure);
  return lattice_from_order(std::move(p.elements), std::move(p.up));
}

namespace detail {
constexpr std::size_t frame_law_subset_limit = 15;
constexpr std::size_t compact_law_subset_limit = 20;
} // namespace detail

/** Distributivity by the binary law over all triples, and the frame law
 *  a /\ \/S = \/{a /\ s} over every subset S when the lattice has at most
 *  frame_law_subset_limit elements; beyond that the binary verdict stands
 *  in (equivalent on finite lattices) and `note` says so. */
struct StructureReport {
  bool is_distributive = false;
  std::optional<std::array<std::size_t, 3>> distributivity_witness;
  bool is_frame = false;
  std::string note;
};

inline StructureReport structure_report(const FiniteLattice& l) {
  const std::size_t n = l.size();
  StructureReport rep;
  rep.is_distributive = true;
  for (std::size_t a = 0; a < n && rep.is_distributive; ++a)
    for (std::size_t b = 0; b < n && rep.is_distributive; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (l.meet(a, l.join(b, c)) !=
            l.join(l.meet(a, b), l.meet(a, c))) {
          rep.is_distributive = false;
          rep.distributivity_witness = {{a, b, c}};
          break;
        }
  if (!rep.is_distributive) {
    rep.is_frame = false;
    return rep;
  }
  if (n > detail::frame_law_subset_limit) {
    rep.is_frame = true;
    rep.note = "subset distributivity law skipped above " +
               std::to_string(detail::frame_law_subset_limit) +
               " elements; binary law verdict applies (equivalent on finite "
               "lattices)";
    return rep;
  }
  std::vector<std::size_t> join_of(std::size_t{1} << n);
  join_of[0] = l.bottom;
  for (Mask s = 1; s < (Mask{1} << n); ++s) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
    join_of[s] = l.join(join_of[s & (s - 1)], low);
  }
  rep.is_frame = true;
  for (std::size_t a = 0; a < n && rep.is_frame; ++a)
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
      std::size_t rhs = l.bottom;
      for_each_bit(s, [&](std::size_t e) { rhs = l.join(rhs, l.meet(a, e)); });
      if (l.meet(a, join_of[s]) != rhs) {
        rep.is_frame = false;
        rep.note = "subset distributivity law fails at element '" +
                   l.elements[a] + "'";
        break;
      }
    }
  return rep;
}

/** Elements p != top with a /\ b <= p implying a <= p or b <= p. */
inline std::vector<std::size_t> prime_elements(const FiniteLattice& l) {
  const std::size_t n = l.size();
  std::vector<std::size_t> primes;
  for (std::size_t p = 0; p < n; ++p) {
    if (p == l.top) continue;
    bool prime = true;
    for (std::size_t a = 0; a < n && prime; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (l.leq(l.meet(a, b), p) && !l.leq(a, p) && !l.leq(b, p)) {
          prime = false;
          break;
        }
    if (prime) primes.push_back(p);
  }
  return primes;
}

namespace detail {

inline void require_frame(const FiniteLattice& l, const char* op) {
  StructureReport rep = structure_report(l);
  if (!rep.is_frame) {
    std::string msg = std::string(op) + " requires a frame";
    if (rep.distributivity_witness) {
      auto [a, b, c] = *rep.distributivity_witness;
      msg += "; distributivity fails on ('" + l.elements[a] + "', '" +
             l.elements[b] + "', '" + l.elements[c] + "')";
    }
    throw precondition_error(msg);
  }
}

} // namespace detail

/** Stone-duality spectrum of a finite frame: points are the meet-prime
 *  elements, labelled by their element labels; the open assigned to a is
 *  U_a = { p prime : a is not below p }. */
struct Spectrum {
  FiniteSpace space;
  std::vector<std::size_t> primes; // element index per point
  std::vector<Mask> open_of;       // U_a per element, over space.points
};

inline Spectrum spectrum(const FiniteLattice& l) {
  detail::require_frame(l, "spectrum");
  Spectrum spc;
  spc.primes = prime_elements(l);
  std::vector<std::string> labels;
  for (std::size_t p : spc.primes) labels.push_back(l.elements[p]);
  spc.open_of.assign(l.size(), 0);
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t k = 0; k < spc.primes.size(); ++k)
      if (!l.leq(a, spc.primes[k])) spc.open_of[a] |= nth_bit(k);
  std::vector<Mask> opens = spc.open_of;
  spc.space = make_space(std::move(labels), std::move(opens));
  return spc;
}

/** Spatiality: a |-> U_a is injective. A failing pair is returned; on
 *  success the assignment is automatically a frame isomorphism onto the
 *  opens of the spectrum. */
struct SpatialityReport {
  bool spatial = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

inline SpatialityReport spatiality_check(const FiniteLattice& l) {
  detail::require_frame(l, "spatiality check");
  Spectrum spc = spectrum(l);
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = a + 1; b < l.size(); ++b)
      if (spc.open_of[a] == spc.open_of[b]) return {false, {{a, b}}};
  return {true, {}};
}

/** Lattice of down-sets of a poset under inclusion, with generated element
 *  labels D0, D1, ... in ascending carrier-mask order; `carrier[i]` is the
 *  down-set itself as a mask over p.elements. Always distributive. */
struct DownsetLattice {
  FiniteLattice lattice;
  std::vector<Mask> carrier;
};

inline DownsetLattice downset_lattice(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Mask> downs;
  for (Mask m = 0;; ++m) {
    if (p.is_down_set(m)) downs.push_back(m);
    if (m == full_mask(n)) break;
  }
  if (downs.size() > max_universe)
    throw input_error("downset lattice: more than 64 down-sets");
  std::vector<std::string> labels;
  std::vector<Mask> up(downs.size(), 0);
  for (std::size_t i = 0; i < downs.size(); ++i) {
    labels.push_back("D" + std::to_string(i));
    for (std::size_t j = 0; j < downs.size(); ++j)
      if (is_subset(downs[i], downs[j])) up[i] |= nth_bit(j);
  }
  return {lattice_from_order(std::move(labels), std::move(up)),
          std::move(downs)};
}

/** Heyting implication a -> b = \/{ c : c /\ a <= b }; the defining
 *  adjunction c <= (a -> b) iff c /\ a <= b is verified on every element. */
inline std::size_t heyting_implication(const FiniteLattice& l, std::size_t a,
                                       std::size_t b) {
  detail::require_frame(l, "heyting implication");
  std::size_t r = l.bottom;
  for (std::size_t c = 0; c < l.size(); ++c)
    if (l.leq(l.meet(c, a), b)) r = l.join(r, c);
  for (std::size_t c = 0; c < l.size(); ++c)
    if (l.leq(c, r) != l.leq(l.meet(c, a), b))
      throw internal_error("heyting implication adjunction failed at '" +
                           l.elements[c] + "'");
  return r;
}

/** Elements a such that a <= \/S forces a <= \/F for a finite F inside S.
 *  On a finite lattice every element qualifies and the verdict is flagged
 *  as trivial; the subset check still runs (with S itself as the finite
 *  witness) up to compact_law_subset_limit elements. */
struct CompactElementsReport {
  std::vector<std::size_t> compact;
  std::string flag;
};

inline CompactElementsReport compact_elements(const FiniteLattice& l) {
  const std::size_t n = l.size();
  CompactElementsReport rep;
  if (n > detail::compact_law_subset_limit) {
    for (std::size_t a = 0; a < n; ++a) rep.compact.push_back(a);
    rep.flag = "trivially all (finite lattice; subset check skipped above " +
               std::to_string(detail::compact_law_subset_limit) +
               " elements)";
    return rep;
  }
  std::vector<std::size_t> join_of(std::size_t{1} << n);
  join_of[0] = l.bottom;
  for (Mask s = 1; s < (Mask{1} << n); ++s)
    join_of[s] =
        l.join(join_of[s & (s - 1)],
               static_cast<std::size_t>(std::countr_zero(s)));
  for (std::size_t a = 0; a < n; ++a) {
    bool compact = true;
    for (Mask s = 0; s < (Mask{1} << n) && compact; ++s) {
      if (!l.leq(a, join_of[s])) continue;
      // search for a finite witness: join an ascending prefix of S until it
      // dominates a; the full prefix always does, so the search terminates
      std::size_t acc = l.bottom;
      bool witnessed = false;
      Mask rest = s;
      while (rest != 0 && !witnessed) {
        acc = l.join(acc, static_cast<std::size_t>(std::countr_zero(rest)));
        rest &= rest - 1;
        witnessed = l.leq(a, acc);
      }
      witnessed = witnessed || l.leq(a, acc); // s may be empty
      if (!witnessed) compact = false;
    }
    if (compact) rep.compact.push_back(a);
  }
  rep.flag = "trivially all (finite lattice; subset check executed)";
  return rep;
}

} // namespace ttkit
