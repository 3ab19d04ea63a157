#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/error.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

/** Map between finite lattices that is expected to preserve bottom, top,
 *  binary meet and binary join; at finite scale the latter gives all joins,
 *  so a valid FrameMap is a frame morphism. */
struct FrameMap {
  FiniteLattice source, target;
  std::vector<std::size_t> map; // source element index -> target element index

  std::size_t operator()(std::size_t a) const { return map[a]; }
};

inline FrameMap make_frame_map(FiniteLattice source, FiniteLattice target,
                               std::vector<std::size_t> map) {
  if (map.size() != source.size())
    throw input_error("frame map: mapping size mismatch");
  for (std::size_t v : map)
    if (v >= target.size())
      throw input_error("frame map: mapping hits unknown target index");
  return FrameMap{std::move(source), std::move(target), std::move(map)};
}

struct FrameMapReport {
  bool ok = false;
  std::string law;    // first violated law, empty when ok
  std::string detail; // witnesses
};

/** Checks bottom/top/meet/join preservation, reporting the first violation
 *  with witnesses. */
inline FrameMapReport validate_frame_map(const FrameMap& f) {
  const FiniteLattice& s = f.source;
  const FiniteLattice& t = f.target;
  if (f.map[s.bottom] != t.bottom)
    return {false, "bottom",
            "f('" + s.elements[s.bottom] + "') = '" +
                t.elements[f.map[s.bottom]] + "', expected '" +
                t.elements[t.bottom] + "'"};
  if (f.map[s.top] != t.top)
    return {false, "top",
            "f('" + s.elements[s.top] + "') = '" + t.elements[f.map[s.top]] +
                "', expected '" + t.elements[t.top] + "'"};
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (f.map[s.meet(a, b)] != t.meet(f.map[a], f.map[b]))
        return {false, "meet",
                "on '" + s.elements[a] + "' and '" + s.elements[b] + "'"};
      if (f.map[s.join(a, b)] != t.join(f.map[a], f.map[b]))
        return {false, "join",
                "on '" + s.elements[a] + "' and '" + s.elements[b] + "'"};
    }
  return {true, "", ""};
}

/** Right adjoint g(b) = \/{ a : f(a) <= b }; the adjunction
 *  f(a) <= b iff a <= g(b) is verified on all pairs. */
inline std::vector<std::size_t> right_adjoint(const FrameMap& f) {
  FrameMapReport rep = validate_frame_map(f);
  if (!rep.ok)
    throw precondition_error("right adjoint requires a frame map; " +
                             rep.law + " law fails " + rep.detail);
  const FiniteLattice& s = f.source;
  const FiniteLattice& t = f.target;
  std::vector<std::size_t> g(t.size());
  for (std::size_t b = 0; b < t.size(); ++b) {
    std::size_t r = s.bottom;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (t.leq(f.map[a], b)) r = s.join(r, a);
    g[b] = r;
  }
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      if (t.leq(f.map[a], b) != s.leq(a, g[b]))
        throw internal_error("adjunction law failed on '" + s.elements[a] +
                             "' and '" + t.elements[b] + "'");
  return g;
}

/** Induced map on spectra. For f : L -> M the point map runs
 *  psi : spectrum(M) -> spectrum(L), psi(p) = g(p) with g the right adjoint.
 *  Primality of every image and continuity (the preimage of U_a is
 *  U_{f(a)}) are verified; both can only fail on corrupt inputs. */
struct SpecMap {
  Spectrum source_spec; // spectrum of f.source
  Spectrum target_spec; // spectrum of f.target
  std::vector<std::size_t> point_map; // target point index -> source point index
  std::vector<Mask> preimage_of;      // per source element a:
                                      // psi^{-1}(U_a) over target points
};

inline SpecMap spec_map(const FrameMap& f) {
  SpatialityReport sp_s = spatiality_check(f.source);
  if (!sp_s.spatial)
    throw precondition_error(
        "spectrum map requires a spatial source frame; '" +
        f.source.elements[sp_s.witness->first] + "' and '" +
        f.source.elements[sp_s.witness->second] + "' share the same open");
  SpatialityReport sp_t = spatiality_check(f.target);
  if (!sp_t.spatial)
    throw precondition_error(
        "spectrum map requires a spatial target frame; '" +
        f.target.elements[sp_t.witness->first] + "' and '" +
        f.target.elements[sp_t.witness->second] + "' share the same open");

  std::vector<std::size_t> g = right_adjoint(f);
  SpecMap m;
  m.source_spec = spectrum(f.source);
  m.target_spec = spectrum(f.target);
  m.point_map.resize(m.target_spec.primes.size());

  std::vector<std::size_t> prime_pos(f.source.size(), f.source.size());
  for (std::size_t k = 0; k < m.source_spec.primes.size(); ++k)
    prime_pos[m.source_spec.primes[k]] = k;
  for (std::size_t q = 0; q < m.target_spec.primes.size(); ++q) {
    const std::size_t img = g[m.target_spec.primes[q]];
    if (prime_pos[img] == f.source.size())
      throw internal_error("adjoint image '" + f.source.elements[img] +
                           "' of prime '" +
                           f.target.elements[m.target_spec.primes[q]] +
                           "' is not prime");
    m.point_map[q] = prime_pos[img];
  }

  m.preimage_of.assign(f.source.size(), 0);
  for (std::size_t a = 0; a < f.source.size(); ++a) {
    Mask pre = 0;
    for (std::size_t q = 0; q < m.point_map.size(); ++q)
      if (has_bit(m.source_spec.open_of[a], m.point_map[q]))
        pre |= nth_bit(q);
    if (pre != m.target_spec.open_of[f.map[a]])
      throw internal_error("preimage of the open of '" +
                           f.source.elements[a] +
                           "' is not the open of its image");
    if (!m.target_spec.space.is_open(pre))
      throw internal_error("preimage of the open of '" +
                           f.source.elements[a] + "' is not open");
    m.preimage_of[a] = pre;
  }
  return m;
}

/** Preimages of quasi-compact opens are quasi-compact; executed through the
 *  cover check on both spectra, trivially true at finite scale. */
inline bool quasi_compactness_check(const SpecMap& m) {
  std::vector<Mask> qc_source = quasi_compact_opens(m.source_spec.space);
  for (std::size_t a = 0; a < m.preimage_of.size(); ++a) {
    const Mask u = m.source_spec.open_of[a];
    if (!std::binary_search(qc_source.begin(), qc_source.end(), u)) continue;
    if (!is_quasi_compact(m.target_spec.space, m.preimage_of[a]))
      return false;
  }
  return true;
}

/** Builds the sublattice of l spanned by the given element indices; they
 *  must contain bottom and top and be closed under meet and join. */
inline FiniteLattice sublattice(const FiniteLattice& l,
                                const std::vector<std::size_t>& members) {
  std::vector<std::size_t> idx = members;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  auto pos = [&](std::size_t e) {
    auto it = std::lower_bound(idx.begin(), idx.end(), e);
    return (it != idx.end() && *it == e) ? (it - idx.begin())
                                         : static_cast<std::ptrdiff_t>(-1);
  };
  if (pos(l.bottom) < 0 || pos(l.top) < 0)
    throw precondition_error("sublattice must contain bottom and top");
  for (std::size_t a : idx)
    for (std::size_t b : idx) {
      if (pos(l.meet(a, b)) < 0)
        throw precondition_error("sublattice not closed under meet: '" +
                                 l.elements[a] + "' with '" + l.elements[b] +
                                 "'");
      if (pos(l.join(a, b)) < 0)
        throw precondition_error("sublattice not closed under join: '" +
                                 l.elements[a] + "' with '" + l.elements[b] +
                                 "'");
    }
  std::vector<std::string> labels;
  std::vector<Mask> up(idx.size(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    labels.push_back(l.elements[idx[i]]);
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (l.leq(idx[i], idx[j])) up[i] |= nth_bit(j);
  }
  return lattice_from_order(std::move(labels), std::move(up));
}

inline FrameMap sublattice_inclusion(const FiniteLattice& l,
                                     const std::vector<std::size_t>& members) {
  FiniteLattice sub = sublattice(l, members);
  std::vector<std::size_t> map;
  map.reserve(sub.size());
  for (const auto& label : sub.elements) map.push_back(l.index_of(label));
  return make_frame_map(std::move(sub), l, std::move(map));
}

/** Telescope criterion for a frame l with designated compactly-generated
 *  part lc (a bounded sublattice): true iff every element is a join of lc
 *  elements; equivalently iff the spectrum map of the inclusion is a
 *  homeomorphism. Both criteria are computed and must agree. */
struct TelescopeReport {
  bool holds = false;
  bool join_generated = false;
  bool homeomorphism = false;
  std::optional<std::size_t> witness; // element of l not join-generated
};

inline TelescopeReport telescope_check(const FiniteLattice& l,
                                       const std::vector<std::size_t>& lc) {
  FrameMap inc = sublattice_inclusion(l, lc);
  TelescopeReport rep;
  rep.join_generated = true;
  for (std::size_t a = 0; a < l.size(); ++a) {
    std::size_t acc = l.bottom;
    for (std::size_t c = 0; c < inc.source.size(); ++c)
      if (l.leq(inc.map[c], a)) acc = l.join(acc, inc.map[c]);
    if (acc != a) {
      rep.join_generated = false;
      if (!rep.witness) rep.witness = a;
    }
  }

  SpecMap psi = spec_map(inc);
  const std::size_t n_src = psi.source_spec.primes.size();
  std::vector<int> hits(n_src, 0);
  for (std::size_t q : psi.point_map) ++hits[q];
  bool bijective = psi.point_map.size() == n_src;
  for (int h : hits) bijective = bijective && h == 1;
  bool open_images = true;
  if (bijective) {
    for (Mask o : psi.target_spec.space.opens) {
      Mask img = 0;
      for_each_bit(o, [&](std::size_t q) { img |= nth_bit(psi.point_map[q]); });
      if (!psi.source_spec.space.is_open(img)) {
        open_images = false;
        break;
      }
    }
  }
  rep.homeomorphism = bijective && open_images;

  if (rep.join_generated != rep.homeomorphism)
    throw internal_error(
        "telescope criteria disagree: join generation says " +
        std::string(rep.join_generated ? "true" : "false") +
        ", spectrum map says " +
        std::string(rep.homeomorphism ? "true" : "false"));
  rep.holds = rep.join_generated;
  return rep;
}

} // namespace ttkit
