#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/mask.hpp"

namespace ttkit {

/** Finite partial order. `up[i]` is the principal up-set of element i
 *  (including i itself); reflexivity, antisymmetry and transitivity are
 *  checked on construction. */
struct Poset {
  std::vector<std::string> elements;
  std::vector<Mask> up;

  std::size_t size() const { return elements.size(); }
  bool leq(std::size_t i, std::size_t j) const { return has_bit(up[i], j); }

  Mask down(std::size_t i) const {
    Mask m = 0;
    for (std::size_t j = 0; j < up.size(); ++j)
      if (leq(j, i)) m |= nth_bit(j);
    return m;
  }

  /** Smallest down-set containing m. */
  Mask down_closure(Mask m) const {
    Mask out = 0;
    for_each_bit(m, [&](std::size_t i) { out |= down(i); });
    return out;
  }

  /** Smallest up-set containing m. */
  Mask up_closure(Mask m) const {
    Mask out = 0;
    for_each_bit(m, [&](std::size_t i) { out |= up[i]; });
    return out;
  }

  bool is_down_set(Mask m) const { return down_closure(m) == m; }
  bool is_up_set(Mask m) const { return up_closure(m) == m; }

  std::size_t index_of(const std::string& label) const {
    std::size_t i = label_index(elements, label);
    if (i == elements.size())
      throw input_error("unknown element '" + label + "'");
    return i;
  }
};

namespace detail {

inline void check_labels(const std::vector<std::string>& labels,
                         const char* what) {
  if (labels.size() > max_universe)
    throw input_error(std::string(what) + ": more than 64 labels");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty())
      throw input_error(std::string(what) + ": empty label");
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        throw input_error(std::string(what) + ": duplicate label '" +
                          labels[i] + "'");
  }
}

} // namespace detail

/** Builds a poset from up-set masks, verifying the partial-order laws. */
inline Poset make_poset(std::vector<std::string> elements,
                        std::vector<Mask> up) {
  detail::check_labels(elements, "poset");
  const std::size_t n = elements.size();
  if (up.size() != n) throw input_error("poset: relation size mismatch");
  const Mask full = full_mask(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_subset(up[i], full))
      throw input_error("poset: relation mentions unknown index");
    if (!has_bit(up[i], i))
      throw input_error("poset: not reflexive at '" + elements[i] + "'");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && has_bit(up[i], j) && has_bit(up[j], i))
        throw input_error("poset: not antisymmetric on '" + elements[i] +
                          "' and '" + elements[j] + "'");
      if (has_bit(up[i], j) && !is_subset(up[j], up[i]))
        throw input_error("poset: not transitive through '" + elements[i] +
                          "' <= '" + elements[j] + "'");
    }
  return Poset{std::move(elements), std::move(up)};
}

/** Builds a poset from a list of `a <= b` pairs. When take_closure is set the
 *  reflexive-transitive closure is formed first; otherwise the pairs must
 *  already describe a full partial order. */
inline Poset make_poset_from_pairs(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    bool take_closure = true) {
  detail::check_labels(elements, "poset");
  const std::size_t n = elements.size();
  std::vector<Mask> up(n, 0);
  for (std::size_t i = 0; i < n; ++i) up[i] = nth_bit(i);
  for (const auto& [a, b] : pairs) {
    std::size_t ia = label_index(elements, a);
    std::size_t ib = label_index(elements, b);
    if (ia == n) throw input_error("unknown element '" + a + "'");
    if (ib == n) throw input_error("unknown element '" + b + "'");
    up[ia] |= nth_bit(ib);
  }
  if (take_closure) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (has_bit(up[i], j) && !is_subset(up[j], up[i])) {
            up[i] |= up[j];
            changed = true;
          }
    }
  }
  return make_poset(std::move(elements), std::move(up));
}

inline Poset opposite(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Mask> up(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p.leq(j, i)) up[i] |= nth_bit(j);
  return Poset{p.elements, std::move(up)};
}

/** Covering pairs (i, j): i < j with nothing strictly between. */
inline std::vector<std::pair<std::size_t, std::size_t>> covering_pairs(
    const Poset& p) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !p.leq(i, j)) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (k != i && k != j && p.leq(i, k) && p.leq(k, j)) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

} // namespace ttkit
