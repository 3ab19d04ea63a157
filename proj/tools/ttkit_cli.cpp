// ttkit: command-line front end for the finite frame / spectral space /
// support-theory engine. Exit codes: 0 success or true verdict, 1 false
// verdict or failed expectation, 2 malformed input or internal check.
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttkit/ttkit.hpp"

namespace {

struct Session {
  std::string dot_path;
  bool quiet = false;
  std::ostringstream out;
  std::string dot_text;
  int exit_code = 0;
  std::function<void()> action;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

void print_or_fail_dot(Session& s) {
  if (!s.dot_path.empty()) {
    if (s.dot_text.empty())
      throw ttkit::input_error("no diagram for this command");
    std::ofstream f(s.dot_path);
    if (!f) throw ttkit::input_error(s.dot_path + ": cannot write file");
    f << s.dot_text;
  }
  if (!s.quiet) std::cout << s.out.str();
}

void add_space_commands(CLI::App& app, Session& s) {
  auto* space = app.add_subcommand("space", "finite topological spaces");
  space->require_subcommand(1);

  {
    auto* c = space->add_subcommand("closure", "closure of a set of points");
    auto file = std::make_shared<std::string>();
    auto pts = std::make_shared<std::vector<std::string>>();
    c->add_option("file", *file)->required();
    c->add_option("points", *pts);
    c->callback([&s, file, pts] {
      s.action = [&s, file, pts] {
        const ttkit::FiniteSpace sp = ttkit::parse_space(*file);
        const ttkit::Mask m = ttkit::make_mask(sp.points, *pts);
        s.out << ttkit::format_set(sp.points, ttkit::closure(sp, m)) << "\n";
        s.dot_text = ttkit::dot_space(sp);
      };
    });
  }
  {
    auto* c = space->add_subcommand("dual", "Hochster dual space");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteSpace d =
            ttkit::hochster_dual(ttkit::parse_space(*file));
        s.out << ttkit::print_space(d);
        s.dot_text = ttkit::dot_space(d);
      };
    });
  }
  {
    auto* c = space->add_subcommand("skula", "Skula topology");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteSpace d = ttkit::skula(ttkit::parse_space(*file));
        s.out << ttkit::print_space(d);
        s.dot_text = ttkit::dot_space(d);
      };
    });
  }
  {
    auto* c = space->add_subcommand("sober", "sobriety verdict");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteSpace sp = ttkit::parse_space(*file);
        const ttkit::SeparationReport rep = ttkit::separation_report(sp);
        s.out << "t0=" << bool_str(rep.t0) << "\n";
        s.out << "sober=" << bool_str(rep.sober) << "\n";
        if (!rep.sober && rep.sober_witness) {
          s.out << "witness=" << ttkit::format_set(sp.points, *rep.sober_witness)
                << "\n";
          ttkit::Mask gen = 0;
          for (std::size_t p : rep.sober_witness_generic_points)
            gen |= ttkit::nth_bit(p);
          s.out << "generic_points=" << ttkit::format_set(sp.points, gen)
                << "\n";
        }
        s.dot_text = ttkit::dot_space(sp);
        s.exit_code = rep.sober ? 0 : 1;
      };
    });
  }
  {
    auto* c = space->add_subcommand("td", "TD separation verdict");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteSpace sp = ttkit::parse_space(*file);
        const ttkit::SeparationReport rep = ttkit::separation_report(sp);
        s.out << "td=" << bool_str(rep.td) << "\n";
        if (!rep.td) {
          ttkit::Mask bad = 0;
          for (const auto& w : rep.td_witnesses)
            if (!w.locally_closed) bad |= ttkit::nth_bit(w.point);
          s.out << "witness=" << ttkit::format_set(sp.points, bad) << "\n";
        }
        s.dot_text = ttkit::dot_space(sp);
        s.exit_code = rep.td ? 0 : 1;
      };
    });
  }
  {
    auto* c = space->add_subcommand("gen", "generate topology from subbasis");
    auto file = std::make_shared<std::string>();
    auto closeds = std::make_shared<bool>(false);
    c->add_option("file", *file)->required();
    c->add_flag("--closeds", *closeds,
                "treat the listed sets as closed generators");
    c->callback([&s, file, closeds] {
      s.action = [&s, file, closeds] {
        ttkit::RawSpace raw = ttkit::parse_subbasis(*file);
        const ttkit::FiniteSpace sp = ttkit::topology_from_subbasis(
            raw.points, raw.sets,
            *closeds ? ttkit::SubbasisMode::closeds
                     : ttkit::SubbasisMode::opens);
        s.out << ttkit::print_space(sp);
        s.dot_text = ttkit::dot_space(sp);
      };
    });
  }
}

void add_lattice_commands(CLI::App& app, Session& s) {
  auto* lat = app.add_subcommand("lattice", "finite lattices and frames");
  lat->require_subcommand(1);

  {
    auto* c = lat->add_subcommand("check", "validate and classify");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteLattice l = ttkit::parse_lattice(*file);
        const ttkit::StructureReport rep = ttkit::structure_report(l);
        s.out << "elements=" << l.elements.size() << "\n";
        s.out << "distributive=" << bool_str(rep.is_distributive) << "\n";
        if (!rep.is_distributive && rep.distributivity_witness)
          s.out << "witness=" << l.elements[(*rep.distributivity_witness)[0]]
                << "," << l.elements[(*rep.distributivity_witness)[1]] << ","
                << l.elements[(*rep.distributivity_witness)[2]] << "\n";
        s.out << "frame=" << bool_str(rep.is_frame) << "\n";
        if (!rep.note.empty()) s.out << "note=" << rep.note << "\n";
        s.dot_text = ttkit::dot_hasse(l);
        s.exit_code = rep.is_distributive && rep.is_frame ? 0 : 1;
      };
    });
  }
  {
    auto* c = lat->add_subcommand("primes", "meet-prime elements");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteLattice l = ttkit::parse_lattice(*file);
        ttkit::Mask m = 0;
        for (std::size_t p : ttkit::prime_elements(l)) m |= ttkit::nth_bit(p);
        s.out << ttkit::format_set(l.elements, m) << "\n";
        s.dot_text = ttkit::dot_hasse(l);
      };
    });
  }
  {
    auto* c = lat->add_subcommand("spectrum", "spectrum as a space");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::Spectrum spc =
            ttkit::spectrum(ttkit::parse_lattice(*file));
        s.out << ttkit::print_space(spc.space);
        s.dot_text = ttkit::dot_space(spc.space);
      };
    });
  }
  {
    auto* c = lat->add_subcommand("spatial", "spatiality verdict");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteLattice l = ttkit::parse_lattice(*file);
        const ttkit::SpatialityReport rep = ttkit::spatiality_check(l);
        s.out << "spatial=" << bool_str(rep.spatial) << "\n";
        if (!rep.spatial && rep.witness)
          s.out << "witness=" << l.elements[rep.witness->first] << ","
                << l.elements[rep.witness->second] << "\n";
        s.dot_text = ttkit::dot_hasse(l);
        s.exit_code = rep.spatial ? 0 : 1;
      };
    });
  }
  {
    auto* c = lat->add_subcommand("heyting", "Heyting implication a -> b");
    auto file = std::make_shared<std::string>();
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->add_option("a", *a)->required();
    c->add_option("b", *b)->required();
    c->callback([&s, file, a, b] {
      s.action = [&s, file, a, b] {
        const ttkit::FiniteLattice l = ttkit::parse_lattice(*file);
        s.out << l.elements[ttkit::heyting_implication(l, l.index_of(*a),
                                                       l.index_of(*b))]
              << "\n";
        s.dot_text = ttkit::dot_hasse(l);
      };
    });
  }
  {
    auto* c = lat->add_subcommand("compact", "compact elements");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::FiniteLattice l = ttkit::parse_lattice(*file);
        const ttkit::CompactElementsReport rep = ttkit::compact_elements(l);
        ttkit::Mask m = 0;
        for (std::size_t e : rep.compact) m |= ttkit::nth_bit(e);
        s.out << ttkit::format_set(l.elements, m) << "\n";
        s.out << "note=" << rep.flag << "\n";
        s.dot_text = ttkit::dot_hasse(l);
      };
    });
  }
}

void add_map_commands(CLI::App& app, Session& s) {
  auto* map = app.add_subcommand("map", "lattice maps and spectra");
  map->require_subcommand(1);

  {
    auto* c = map->add_subcommand("check", "frame map laws");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::ParsedMap pm = ttkit::parse_map(*file);
        const ttkit::FrameMapReport rep = ttkit::validate_frame_map(pm.map);
        s.out << "valid=" << bool_str(rep.ok) << "\n";
        if (!rep.ok) {
          s.out << "law=" << rep.law << "\n";
          s.out << "detail=" << rep.detail << "\n";
        }
        s.exit_code = rep.ok ? 0 : 1;
      };
    });
  }
  {
    auto* c = map->add_subcommand("adjoint", "right adjoint");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::ParsedMap pm = ttkit::parse_map(*file);
        const std::vector<std::size_t> g = ttkit::right_adjoint(pm.map);
        for (std::size_t b = 0; b < pm.map.target.elements.size(); ++b)
          s.out << "send " << pm.map.target.elements[b] << " "
                << pm.map.source.elements[g[b]] << "\n";
      };
    });
  }
  {
    auto* c = map->add_subcommand("spec", "induced spectrum map");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::ParsedMap pm = ttkit::parse_map(*file);
        const ttkit::SpecMap sm = ttkit::spec_map(pm.map);
        for (std::size_t k = 0; k < sm.point_map.size(); ++k)
          s.out << "point " << sm.target_spec.space.points[k] << " -> "
                << sm.source_spec.space.points[sm.point_map[k]] << "\n";
        s.out << "quasi_compact_preimages="
              << bool_str(ttkit::quasi_compactness_check(sm)) << "\n";
        s.dot_text = ttkit::dot_spec_map(sm);
      };
    });
  }
  {
    auto* c = map->add_subcommand("telescope",
                                  "telescope verdict for an embedding");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::ParsedMap pm = ttkit::parse_map(*file);
        std::vector<std::size_t> image;
        std::vector<char> seen(pm.map.target.elements.size(), 0);
        for (std::size_t a = 0; a < pm.map.source.elements.size(); ++a) {
          if (seen[pm.map.map[a]])
            throw ttkit::input_error(
                "map is not an embedding: two elements share an image");
          seen[pm.map.map[a]] = 1;
          image.push_back(pm.map.map[a]);
        }
        const ttkit::TelescopeReport rep =
            ttkit::telescope_check(pm.map.target, image);
        s.out << "join_generated=" << bool_str(rep.join_generated) << "\n";
        s.out << "homeomorphism=" << bool_str(rep.homeomorphism) << "\n";
        if (!rep.holds && rep.witness)
          s.out << "witness=" << pm.map.target.elements[*rep.witness] << "\n";
        s.out << "telescope=" << bool_str(rep.holds) << "\n";
        const ttkit::SpecMap sm = ttkit::spec_map(pm.map);
        s.dot_text = ttkit::dot_spec_map(sm);
        s.exit_code = rep.holds ? 0 : 1;
      };
    });
  }
}

void add_model_commands(CLI::App& app, Session& s) {
  auto* mod = app.add_subcommand("model", "support models");
  mod->require_subcommand(1);

  auto validated = [](const std::string& file) {
    ttkit::ParsedModel pm = ttkit::parse_model(file);
    const ttkit::ModelReport rep = ttkit::model_validate(pm.model);
    if (!rep.ok) {
      std::string msg = file + ": invalid model";
      for (const auto& v : rep.violations) msg += "; " + v;
      throw ttkit::input_error(msg);
    }
    return pm;
  };

  {
    auto* c = mod->add_subcommand("check", "validate and run expectations");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file, validated] {
      s.action = [&s, file, validated] {
        ttkit::ParsedModel pm = validated(*file);
        s.out << "valid=true\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
        if (!pm.expects.empty()) {
          const ttkit::CaseStudy cs = ttkit::make_case_from_model(
              std::move(pm.model), std::move(pm.hom_points),
              std::move(pm.chi), std::move(pm.phi), std::move(pm.expects));
          const ttkit::VerifyReport rep = ttkit::verify(cs);
          s.out << ttkit::format_verify_report(rep);
          s.exit_code = rep.all_pass ? 0 : 1;
        }
      };
    });
  }
  {
    auto* c = mod->add_subcommand("support", "big smashing support");
    auto file = std::make_shared<std::string>();
    auto obj = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->add_option("object", *obj)->required();
    c->callback([&s, file, obj, validated] {
      s.action = [&s, file, obj, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        s.out << ttkit::format_set(pm.model.space.points,
                                   ttkit::smashing_support(pm.model, *obj))
              << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("ssmall", "small support consistency");
    auto file = std::make_shared<std::string>();
    auto obj = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->add_option("object", *obj)->required();
    c->callback([&s, file, obj, validated] {
      s.action = [&s, file, obj, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        const ttkit::SmallSupportReport rep =
            ttkit::small_support_consistency(pm.model, *obj);
        s.out << ttkit::format_set(pm.model.space.points, rep.recomputed)
              << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("sbig", "support through big primes");
    auto file = std::make_shared<std::string>();
    auto obj = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->add_option("object", *obj)->required();
    c->callback([&s, file, obj, validated] {
      s.action = [&s, file, obj, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        s.out << ttkit::format_set(pm.model.space.points,
                                   ttkit::big_support(pm.model, *obj))
              << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("gamma", "point idempotent support");
    auto file = std::make_shared<std::string>();
    auto pt = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->add_option("point", *pt)->required();
    c->callback([&s, file, pt, validated] {
      s.action = [&s, file, pt, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        const ttkit::FormalObject g =
            ttkit::gamma(pm.model, pm.model.space.point_index(*pt));
        s.out << ttkit::format_set(pm.model.space.points, g.support) << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("primes", "big prime carriers");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file, validated] {
      s.action = [&s, file, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        std::vector<ttkit::Mask> carriers;
        for (const auto& w : ttkit::big_prime_scan(pm.model))
          carriers.push_back(w.carrier);
        s.out << ttkit::format_family(pm.model.space.points, carriers) << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("psi", "compact spectrum comparison");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file, validated] {
      s.action = [&s, file, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        const ttkit::PsiModel psi = ttkit::psi_model(pm.model);
        for (std::size_t x = 0; x < pm.model.space.size(); ++x) {
          const std::size_t k = psi.psi.point_map[psi.point_to_prime[x]];
          s.out << "point " << pm.model.space.points[x] << " -> "
                << psi.psi.source_spec.space.points[k] << "\n";
        }
        s.out << "surjective=" << bool_str(psi.surjective) << "\n";
        s.out << "injective=" << bool_str(psi.injective) << "\n";
        s.out << "homeomorphism=" << bool_str(psi.homeomorphism) << "\n";
        s.dot_text = ttkit::dot_spec_map(psi.psi);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("topology", "topology from supports");
    auto file = std::make_shared<std::string>();
    auto all = std::make_shared<bool>(false);
    c->add_option("file", *file)->required();
    c->add_flag("--all", *all, "use all objects, not only compacts");
    c->callback([&s, file, all, validated] {
      s.action = [&s, file, all, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        const ttkit::FiniteSpace t = ttkit::topology_from_supports(
            pm.model,
            *all ? ttkit::SupportFilter::all : ttkit::SupportFilter::compacts);
        s.out << ttkit::print_space(t);
        s.dot_text = ttkit::dot_space(t);
      };
    });
  }
  {
    auto* c = mod->add_subcommand("triangle", "comparison triangle verdict");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&s, file, validated] {
      s.action = [&s, file, validated] {
        const ttkit::ParsedModel pm = validated(*file);
        const ttkit::TriangleReport rep =
            ttkit::triangle_check(pm.model, pm.hom_points, pm.chi, pm.phi);
        s.out << "triangle=" << bool_str(rep.commutes) << "\n";
        if (!rep.detail.empty()) s.out << "detail=" << rep.detail << "\n";
        s.dot_text = ttkit::dot_space(pm.model.space);
        s.exit_code = rep.commutes ? 0 : 1;
      };
    });
  }
}

void add_case_commands(CLI::App& app, Session& s) {
  auto* cas = app.add_subcommand("case", "bundled scenarios");
  cas->require_subcommand(1);

  {
    auto* c = cas->add_subcommand("valuation",
                                  "rank-1 valuation scenario ledger");
    c->callback([&s] {
      s.action = [&s] {
        const ttkit::CaseStudy cs = ttkit::build_valuation();
        const ttkit::VerifyReport rep = ttkit::verify(cs);
        s.out << ttkit::format_verify_report(rep);
        s.dot_text = ttkit::dot_hasse(cs.smashing_frame);
        s.exit_code = rep.all_pass ? 0 : 1;
      };
    });
  }
  {
    auto* c = cas->add_subcommand("noetherian",
                                  "noetherian scenario over a poset");
    auto file = std::make_shared<std::string>();
    c->add_option("poset-file", *file)->required();
    c->callback([&s, file] {
      s.action = [&s, file] {
        const ttkit::CaseStudy cs =
            ttkit::build_noetherian(ttkit::parse_poset(*file));
        const ttkit::VerifyReport rep = ttkit::verify(cs);
        s.out << ttkit::format_verify_report(rep);
        s.dot_text = ttkit::dot_hasse(cs.smashing_frame);
        s.exit_code = rep.all_pass ? 0 : 1;
      };
    });
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite frames, spectral spaces and support theories"};
  app.require_subcommand(1);
  app.fallthrough(true);
  Session s;
  app.add_option("--dot", s.dot_path, "write a DOT diagram to this path");
  app.add_flag("--quiet", s.quiet, "suppress normal output");

  add_space_commands(app, s);
  add_lattice_commands(app, s);
  add_map_commands(app, s);
  add_model_commands(app, s);
  add_case_commands(app, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s.action) s.action();
    print_or_fail_dot(s);
  } catch (const ttkit::internal_error& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return s.exit_code;
}
