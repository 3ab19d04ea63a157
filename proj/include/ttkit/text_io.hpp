#pragma once

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/case_study.hpp"
#include "ttkit/error.hpp"
#include "ttkit/galois.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/model.hpp"
#include "ttkit/poset.hpp"
#include "ttkit/space.hpp"

namespace ttkit {

namespace detail {

/** One logical input line: original number plus whitespace tokens, with
 *  `#` comments stripped. Blank lines are dropped by the reader. */
struct TextLine {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<TextLine> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open file");
  std::vector<TextLine> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream toks(raw);
    TextLine line{number, {}};
    std::string tok;
    while (toks >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline input_error at_line(const std::string& path, std::size_t number,
                           const std::string& msg) {
  return input_error(path + ":" + std::to_string(number) + ": " + msg);
}

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline void need_identifier(const std::string& path, std::size_t number,
                            const std::string& tok, const std::string& what) {
  if (!is_identifier(tok))
    throw at_line(path, number,
                  what + " '" + tok + "' is not a label ([A-Za-z0-9_]+)");
}

/** Incremental reflexive-transitive order builder for `le` lines. Keeps
 *  the closure after every edge so an antisymmetry violation is reported
 *  at the exact offending line. */
struct OrderBuilder {
  std::vector<std::string> labels;
  std::vector<Mask> up; // up[i] = elements above i, reflexive

  std::size_t add_element(const std::string& path, std::size_t number,
                          const std::string& label) {
    if (label_index(labels, label) != labels.size())
      throw at_line(path, number, "duplicate label '" + label + "'");
    if (labels.size() == max_universe)
      throw at_line(path, number, "more than 64 elements");
    labels.push_back(label);
    up.push_back(nth_bit(labels.size() - 1));
    return labels.size() - 1;
  }

  std::size_t index(const std::string& path, std::size_t number,
                    const std::string& label) const {
    const std::size_t i = label_index(labels, label);
    if (i == labels.size())
      throw at_line(path, number, "unknown label '" + label + "'");
    return i;
  }

  void add_le(const std::string& path, std::size_t number,
              const std::string& a, const std::string& b) {
    const std::size_t i = index(path, number, a);
    const std::size_t j = index(path, number, b);
    if (i != j && has_bit(up[j], i))
      throw at_line(path, number,
                    "antisymmetry violated: '" + a + "' and '" + b +
                        "' already compare the other way");
    for (std::size_t x = 0; x < labels.size(); ++x)
      if (has_bit(up[x], i)) up[x] |= up[j];
  }
};

/** Accumulates `point` and `open` lines; shared by the space file parser,
 *  the inline space block of model files and the subbasis reader. */
struct SpaceBuilder {
  std::vector<std::string> points;
  std::vector<Mask> sets;

  void add_point(const std::string& path, std::size_t number,
                 const std::string& label) {
    need_identifier(path, number, label, "point");
    if (label_index(points, label) != points.size())
      throw at_line(path, number, "duplicate point '" + label + "'");
    if (points.size() == max_universe)
      throw at_line(path, number, "more than 64 points");
    points.push_back(label);
  }

  void add_open(const std::string& path, const TextLine& line) {
    Mask m = 0;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      const std::size_t p = label_index(points, line.tokens[i]);
      if (p == points.size())
        throw at_line(path, line.number,
                      "unknown point '" + line.tokens[i] + "'");
      m |= nth_bit(p);
    }
    sets.push_back(m);
  }

  void consume(const std::string& path, const TextLine& line) {
    if (line.tokens[0] == "point") {
      if (line.tokens.size() != 2)
        throw at_line(path, line.number, "usage: point <label>");
      add_point(path, line.number, line.tokens[1]);
    } else if (line.tokens[0] == "open") {
      add_open(path, line);
    } else {
      throw at_line(path, line.number,
                    "unexpected directive '" + line.tokens[0] + "'");
    }
  }
};

template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

} // namespace detail

/** A subbasis file: the space grammar without the topology axioms. */
struct RawSpace {
  std::vector<std::string> points;
  std::vector<Mask> sets;
};

inline RawSpace parse_subbasis(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0].tokens[0] != "space")
    throw input_error(path + ":1: expected 'space' header");
  detail::SpaceBuilder b;
  for (std::size_t i = 1; i < lines.size(); ++i)
    b.consume(path, lines[i]);
  if (b.points.empty()) throw input_error(path + ": no points declared");
  return {std::move(b.points), std::move(b.sets)};
}

inline FiniteSpace parse_space(const std::string& path) {
  RawSpace raw = parse_subbasis(path);
  return detail::with_file_context(path, [&] {
    return make_space(std::move(raw.points), std::move(raw.sets));
  });
}

inline Poset parse_poset(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0].tokens[0] != "poset")
    throw input_error(path + ":1: expected 'poset' header");
  detail::OrderBuilder b;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] == "element" && l.tokens.size() == 2) {
      detail::need_identifier(path, l.number, l.tokens[1], "element");
      b.add_element(path, l.number, l.tokens[1]);
    } else if (l.tokens[0] == "le" && l.tokens.size() == 3) {
      b.add_le(path, l.number, l.tokens[1], l.tokens[2]);
    } else {
      throw detail::at_line(path, l.number,
                            "expected 'element <label>' or 'le <a> <b>'");
    }
  }
  return detail::with_file_context(
      path, [&] { return make_poset(std::move(b.labels), std::move(b.up)); });
}

inline FiniteLattice parse_lattice(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0].tokens[0] != "lattice")
    throw input_error(path + ":1: expected 'lattice' header");
  detail::OrderBuilder b;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] == "element" && l.tokens.size() == 2) {
      detail::need_identifier(path, l.number, l.tokens[1], "element");
      b.add_element(path, l.number, l.tokens[1]);
    } else if (l.tokens[0] == "le" && l.tokens.size() == 3) {
      b.add_le(path, l.number, l.tokens[1], l.tokens[2]);
    } else {
      throw detail::at_line(path, l.number,
                            "expected 'element <label>' or 'le <a> <b>'");
    }
  }
  return detail::with_file_context(path, [&] {
    return lattice_from_order(std::move(b.labels), std::move(b.up));
  });
}

/** A frame map file together with its resolved endpoint lattices. */
struct ParsedMap {
  FrameMap map;
  std::string from_path;
  std::string to_path;
};

inline ParsedMap parse_map(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0].tokens[0] != "map")
    throw input_error(path + ":1: expected 'map' header");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::string from_path, to_path;
  std::vector<const detail::TextLine*> send_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] == "from" && l.tokens.size() == 2) {
      if (!from_path.empty())
        throw detail::at_line(path, l.number, "duplicate 'from'");
      from_path = (dir / l.tokens[1]).string();
    } else if (l.tokens[0] == "to" && l.tokens.size() == 2) {
      if (!to_path.empty())
        throw detail::at_line(path, l.number, "duplicate 'to'");
      to_path = (dir / l.tokens[1]).string();
    } else if (l.tokens[0] == "send" && l.tokens.size() == 3) {
      send_lines.push_back(&l);
    } else {
      throw detail::at_line(
          path, l.number,
          "expected 'from <file>', 'to <file>' or 'send <a> <b>'");
    }
  }
  if (from_path.empty()) throw input_error(path + ": missing 'from' line");
  if (to_path.empty()) throw input_error(path + ": missing 'to' line");
  FiniteLattice source = parse_lattice(from_path);
  FiniteLattice target = parse_lattice(to_path);
  std::vector<std::size_t> map(source.elements.size(), target.elements.size());
  std::vector<char> seen(source.elements.size(), 0);
  for (const auto* l : send_lines) {
    const std::size_t a = label_index(source.elements, l->tokens[1]);
    if (a == source.elements.size())
      throw detail::at_line(path, l->number,
                            "unknown source element '" + l->tokens[1] + "'");
    const std::size_t b = label_index(target.elements, l->tokens[2]);
    if (b == target.elements.size())
      throw detail::at_line(path, l->number,
                            "unknown target element '" + l->tokens[2] + "'");
    if (seen[a])
      throw detail::at_line(path, l->number,
                            "element '" + l->tokens[1] + "' sent twice");
    seen[a] = 1;
    map[a] = b;
  }
  for (std::size_t a = 0; a < seen.size(); ++a)
    if (!seen[a])
      throw input_error(path + ": element '" + source.elements[a] +
                        "' is never sent");
  ParsedMap out;
  out.from_path = from_path;
  out.to_path = to_path;
  out.map = detail::with_file_context(path, [&] {
    return make_frame_map(std::move(source), std::move(target), std::move(map));
  });
  return out;
}

/** A model file: the support model plus the comparison tables and the
 *  expectation ledger it carries. */
struct ParsedModel {
  SupportModel model;
  std::vector<std::string> hom_points;
  std::map<std::string, std::string> chi;
  std::map<std::string, std::string> phi;
  std::vector<LedgerEntry> expects;
};

inline ParsedModel parse_model(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0].tokens[0] != "model")
    throw input_error(path + ":1: expected 'model' header");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();

  bool have_space = false;
  FiniteSpace space;
  std::vector<FormalObject> objects;
  std::string unit_name;
  ParsedModel out;

  std::size_t i = 1;
  while (i < lines.size()) {
    const auto& l = lines[i];
    const auto& t = l.tokens;
    if (t[0] == "space") {
      if (have_space)
        throw detail::at_line(path, l.number, "duplicate space");
      if (t.size() == 2) {
        space = parse_space((dir / t[1]).string());
      } else if (t.size() == 1) {
        detail::SpaceBuilder b;
        ++i;
        while (i < lines.size() && lines[i].tokens[0] != "end")
          b.consume(path, lines[i++]);
        if (i == lines.size())
          throw input_error(path + ": inline space block missing 'end'");
        space = detail::with_file_context(path, [&] {
          return make_space(std::move(b.points), std::move(b.sets));
        });
      } else {
        throw detail::at_line(path, l.number,
                              "usage: 'space <file>' or an inline block");
      }
      have_space = true;
    } else if (t[0] == "object") {
      if (!have_space)
        throw detail::at_line(path, l.number, "object before space");
      if (t.size() < 4 || t[2] != "supp")
        throw detail::at_line(
            path, l.number,
            "usage: object <name> supp <point>* compact=<true|false>");
      detail::need_identifier(path, l.number, t[1], "object name");
      const std::string& flag = t.back();
      bool compact;
      if (flag == "compact=true")
        compact = true;
      else if (flag == "compact=false")
        compact = false;
      else
        throw detail::at_line(path, l.number,
                              "last token must be compact=<true|false>");
      Mask supp = 0;
      for (std::size_t k = 3; k + 1 < t.size(); ++k) {
        const std::size_t p = label_index(space.points, t[k]);
        if (p == space.points.size())
          throw detail::at_line(path, l.number, "unknown point '" + t[k] + "'");
        supp |= nth_bit(p);
      }
      objects.push_back({t[1], supp, compact});
    } else if (t[0] == "unit") {
      if (t.size() != 2)
        throw detail::at_line(path, l.number, "usage: unit <name>");
      if (!unit_name.empty())
        throw detail::at_line(path, l.number, "duplicate unit");
      unit_name = t[1];
    } else if (t[0] == "hom") {
      if (t.size() != 2)
        throw detail::at_line(path, l.number, "usage: hom <label>");
      detail::need_identifier(path, l.number, t[1], "homological point");
      out.hom_points.push_back(t[1]);
    } else if (t[0] == "chi" || t[0] == "phi") {
      if (t.size() != 3)
        throw detail::at_line(path, l.number,
                              "usage: " + t[0] + " <hom-point> <point>");
      auto& table = t[0] == "chi" ? out.chi : out.phi;
      if (!table.emplace(t[1], t[2]).second)
        throw detail::at_line(path, l.number,
                              "duplicate " + t[0] + " entry for '" + t[1] + "'");
    } else if (t[0] == "expect") {
      if (t.size() < 4)
        throw detail::at_line(path, l.number,
                              "usage: expect <op> <args...> = <literal>");
      std::size_t eq = 0;
      for (std::size_t k = 2; k < t.size(); ++k)
        if (t[k] == "=") {
          eq = k;
          break;
        }
      if (eq == 0 || eq + 2 != t.size())
        throw detail::at_line(path, l.number,
                              "expected '= <literal>' at end of expect line");
      LedgerEntry e;
      e.op = t[1];
      e.args.assign(t.begin() + 2, t.begin() + eq);
      e.expect = t[eq + 1];
      out.expects.push_back(std::move(e));
    } else {
      throw detail::at_line(path, l.number,
                            "unexpected directive '" + t[0] + "'");
    }
    ++i;
  }

  if (!have_space) throw input_error(path + ": missing space");
  if (unit_name.empty()) throw input_error(path + ": missing unit line");
  out.model = detail::with_file_context(path, [&] {
    return make_model(std::move(space), std::move(objects), unit_name);
  });
  return out;
}

inline std::string print_space(const FiniteSpace& s) {
  std::ostringstream out;
  out << "space\n";
  for (const auto& p : s.points) out << "point " << p << "\n";
  for (Mask o : s.opens) {
    out << "open";
    for_each_bit(o, [&](std::size_t p) { out << " " << s.points[p]; });
    out << "\n";
  }
  return out.str();
}

inline std::string print_poset(const Poset& p) {
  std::ostringstream out;
  out << "poset\n";
  for (const auto& e : p.elements) out << "element " << e << "\n";
  for (const auto& [lo, hi] : covering_pairs(p))
    out << "le " << p.elements[lo] << " " << p.elements[hi] << "\n";
  return out.str();
}

inline std::string print_lattice(const FiniteLattice& l) {
  std::ostringstream out;
  out << "lattice\n";
  for (const auto& e : l.elements) out << "element " << e << "\n";
  Poset order = make_poset(l.elements, l.up);
  for (const auto& [lo, hi] : covering_pairs(order))
    out << "le " << l.elements[lo] << " " << l.elements[hi] << "\n";
  return out.str();
}

inline std::string print_model(const ParsedModel& pm) {
  std::ostringstream out;
  const SupportModel& m = pm.model;
  out << "model\n";
  out << "space\n";
  for (const auto& p : m.space.points) out << "point " << p << "\n";
  for (Mask o : m.space.opens) {
    out << "open";
    for_each_bit(o, [&](std::size_t p) { out << " " << m.space.points[p]; });
    out << "\n";
  }
  out << "end\n";
  for (const auto& x : m.objects) {
    out << "object " << x.name << " supp";
    for_each_bit(x.support,
                 [&](std::size_t p) { out << " " << m.space.points[p]; });
    out << " compact=" << (x.compact ? "true" : "false") << "\n";
  }
  out << "unit " << m.objects[m.unit].name << "\n";
  for (const auto& h : pm.hom_points) out << "hom " << h << "\n";
  for (const auto& [h, v] : pm.chi) out << "chi " << h << " " << v << "\n";
  for (const auto& [h, v] : pm.phi) out << "phi " << h << " " << v << "\n";
  for (const auto& e : pm.expects) {
    out << "expect " << e.op;
    for (const auto& a : e.args) out << " " << a;
    out << " = " << e.expect << "\n";
  }
  return out.str();
}

} // namespace ttkit
