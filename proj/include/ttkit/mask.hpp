#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttkit/error.hpp"

namespace ttkit {

/** Subset of an indexed universe of at most 64 points, one bit per index.
 *  All spaces, posets and lattices freeze their label order on construction;
 *  a Mask is only meaningful together with that frozen order. */
using Mask = std::uint64_t;

inline constexpr std::size_t max_universe = 64;

constexpr Mask nth_bit(std::size_t i) { return Mask{1} << i; }
constexpr bool has_bit(Mask m, std::size_t i) { return (m >> i) & Mask{1}; }
constexpr bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }
constexpr Mask full_mask(std::size_t n) {
  return n == 0 ? Mask{0} : (~Mask{0} >> (max_universe - n));
}

/** Calls fn(i) for every index in m, ascending. */
template <class Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    fn(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

inline std::size_t label_index(const std::vector<std::string>& labels,
                               const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  return labels.size();
}

/** Translates a list of labels into a subset mask over `labels`. */
inline Mask make_mask(const std::vector<std::string>& labels,
                      const std::vector<std::string>& subset) {
  Mask m = 0;
  for (const auto& s : subset) {
    std::size_t i = label_index(labels, s);
    if (i == labels.size()) throw input_error("unknown label '" + s + "'");
    m |= nth_bit(i);
  }
  return m;
}

inline std::vector<std::string> mask_labels(
    const std::vector<std::string>& labels, Mask m) {
  std::vector<std::string> out;
  for_each_bit(m, [&](std::size_t i) { out.push_back(labels[i]); });
  std::sort(out.begin(), out.end());
  return out;
}

/** Canonical set literal: labels sorted lexicographically, e.g. "{0,P}". */
inline std::string format_set(const std::vector<std::string>& labels, Mask m) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : mask_labels(labels, m)) {
    if (!first) out += ',';
    out += l;
    first = false;
  }
  out += '}';
  return out;
}

/** Canonical family literal: members formatted by format_set and ordered by
 *  (cardinality, then literal), e.g. "{{},{0,P},{0,P,Q}}". */
inline std::string format_family(const std::vector<std::string>& labels,
                                 const std::vector<Mask>& family) {
  std::vector<std::pair<int, std::string>> parts;
  parts.reserve(family.size());
  for (Mask m : family)
    parts.emplace_back(std::popcount(m), format_set(labels, m));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i].second;
  }
  out += '}';
  return out;
}

} // namespace ttkit
