#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "ttkit/galois.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/poset.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

} // namespace detail

/** Hasse diagram of a poset, bottom-up. Output is deterministic: nodes in
 *  element order, edges in (lower, upper) order. */
inline std::string dot_hasse(const Poset& p, const std::string& name = "hasse") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << "  n" << i << " [label=" << detail::dot_quote(p.elements[i])
        << "];\n";
  for (const auto& [lo, hi] : covering_pairs(p))
    out << "  n" << lo << " -> n" << hi << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string dot_hasse(const FiniteLattice& l,
                             const std::string& name = "hasse") {
  return dot_hasse(make_poset(l.elements, l.up), name);
}

/** Specialization diagram of a finite space: points grouped into
 *  specialization-equivalence classes (trivial when T0), Hasse edges of the
 *  induced order, and open/closed annotations per class. */
inline std::string dot_space(const FiniteSpace& s,
                             const std::string& name = "space") {
  const SpecializationOrder ord = specialization_leq(s);
  const std::size_t n = s.size();
  // class representative: least equivalent point
  std::vector<std::size_t> rep(n);
  for (std::size_t x = 0; x < n; ++x) {
    rep[x] = x;
    for (std::size_t y = 0; y < x; ++y)
      if (has_bit(ord.up[x], y) && has_bit(ord.up[y], x)) {
        rep[x] = rep[y];
        break;
      }
  }
  std::vector<std::size_t> classes;
  for (std::size_t x = 0; x < n; ++x)
    if (rep[x] == x) classes.push_back(x);

  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=ellipse];\n";
  for (std::size_t c : classes) {
    Mask members = 0;
    std::string label;
    for (std::size_t x = 0; x < n; ++x)
      if (rep[x] == c) {
        if (!label.empty()) label += "=";
        label += s.points[x];
        members |= nth_bit(x);
      }
    if (s.is_open(members)) label += " (open)";
    if (s.is_closed(members)) label += " (closed)";
    out << "  n" << c << " [label=" << detail::dot_quote(label) << "];\n";
  }
  // Hasse edges of the class order
  for (std::size_t a : classes)
    for (std::size_t b : classes) {
      if (a == b || !has_bit(ord.up[a], b)) continue;
      if (has_bit(ord.up[b], a)) continue; // same class by another rep
      bool covering = true;
      for (std::size_t c : classes) {
        if (c == a || c == b) continue;
        if (has_bit(ord.up[a], c) && has_bit(ord.up[c], b) &&
            !has_bit(ord.up[c], a) && !has_bit(ord.up[b], c)) {
          covering = false;
          break;
        }
      }
      if (covering) out << "  n" << a << " -> n" << b << ";\n";
    }
  out << "}\n";
  return out.str();
}

/** Bipartite diagram of a spectrum map: domain points on the left, their
 *  images in the codomain spectrum on the right. */
inline std::string dot_spec_map(const SpecMap& m,
                                const std::string& name = "spec_map") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  out << "  subgraph cluster_domain {\n    label=\"domain\";\n";
  for (std::size_t k = 0; k < m.target_spec.space.size(); ++k)
    out << "    d" << k
        << " [label=" << detail::dot_quote(m.target_spec.space.points[k])
        << "];\n";
  out << "  }\n  subgraph cluster_codomain {\n    label=\"codomain\";\n";
  for (std::size_t k = 0; k < m.source_spec.space.size(); ++k)
    out << "    c" << k
        << " [label=" << detail::dot_quote(m.source_spec.space.points[k])
        << "];\n";
  out << "  }\n";
  for (std::size_t k = 0; k < m.point_map.size(); ++k)
    out << "  d" << k << " -> c" << m.point_map[k] << ";\n";
  out << "}\n";
  return out.str();
}

} // namespace ttkit
