#include "periodica/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "periodica/catalogue.hpp"
#include "periodica/planar_map.hpp"
#include "periodica/projection.hpp"
#include "periodica/render.hpp"
#include "periodica/search.hpp"
#include "periodica/service.hpp"
#include "periodica/text_format.hpp"
#include "periodica/tridiagram.hpp"

namespace periodica {

using nlohmann::json;

namespace {

// A failure that should exit with status 1 after printing its JSON.
struct DomainFailure {
  json detail;
};

std::vector<SquareDiagram> diagrams_of(const PdgDocument& doc) {
  if (const auto* d = std::get_if<SquareDiagram>(&doc)) return {*d};
  const auto& t = std::get<Tridiagram>(doc);
  return {t.diagrams.begin(), t.diagrams.end()};
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("PERIODICA_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw CLI::ValidationError("PERIODICA_SEED", "must be a non-negative integer");
    }
  }
  return 1;
}

void add_budget(CLI::App* cmd, SimplifyBudget& b) {
  cmd->add_option("--max-states", b.max_states, "states per exploration")->check(CLI::PositiveNumber);
  cmd->add_option("--max-extra-crossings", b.max_extra_crossings, "crossings above the start while exploring");
  cmd->add_option("--max-extra-markers", b.max_extra_markers);
  cmd->add_option("--max-extra-punctures", b.max_extra_punctures);
  cmd->add_option("--max-crossings", b.max_crossings, "absolute cap, overrides the relative one");
  cmd->add_option("--max-markers", b.max_markers);
  cmd->add_option("--max-punctures", b.max_punctures);
  cmd->add_option("--max-ports", b.max_ports);
  cmd->add_option("--time-limit", b.time_limit, "seconds per exploration, 0 for none")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", b.threads, "0 for the hardware concurrency")->check(CLI::NonNegativeNumber);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

json report_json(const ValidationReport& r) {
  json rules = json::array();
  for (const auto& x : r.rules) rules.push_back({{"rule", x.rule}, {"ok", x.ok}, {"message", x.message}});
  return {{"valid", r.valid()}, {"errors", r.errors}, {"rules", rules}};
}

Tridiagram tridiagram_from(const std::vector<SquareDiagram>& ds) {
  Tridiagram t;
  std::copy(ds.begin(), ds.end(), t.diagrams.begin());
  return t;
}

std::string document_pdg(const std::vector<SquareDiagram>& ds) {
  return ds.size() == 3 ? to_pdg(tridiagram_from(ds)) : to_pdg(ds[0]);
}

bool is_net(const std::string& path) { return std::filesystem::path(path).extension() == ".net"; }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Untangling periodic structures through square diagrams", "periodica"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "tables instead of JSON where a command reports");

  SimplifyBudget budget;
  std::string input, output;
  std::vector<std::string> inputs;
  int axis = 0;
  std::uint64_t seed = 0;
  bool do_simplify = false, have_seed = false;
  double eps = 1e-3;

  auto* validate_cmd = app.add_subcommand("validate", "check a pdg document against the diagram rules");
  validate_cmd->add_option("file", input)->required();

  auto* project_cmd = app.add_subcommand("project", "project a net file to a tridiagram");
  project_cmd->add_option("net", input)->required();
  project_cmd->add_option("--seed", seed, "perturbation seed, default PERIODICA_SEED or 1")
      ->each([&](const std::string&) { have_seed = true; });
  project_cmd->add_option("--axis", axis, "one diagram only, along cell axis 1..3")->check(CLI::Range(1, 3));
  project_cmd->add_option("--eps", eps, "perturbation size")->check(CLI::PositiveNumber);
  project_cmd->add_flag("--simplify", do_simplify, "simplify every diagram");
  project_cmd->add_option("-o,--output", output);
  add_budget(project_cmd, budget);

  auto* simplify_cmd = app.add_subcommand("simplify", "simplify every diagram of a pdg document");
  simplify_cmd->add_option("file", input)->required();
  simplify_cmd->add_option("-o,--output", output);
  add_budget(simplify_cmd, budget);

  std::string method = "bfs";
  UntangleOptions uo;
  int max_fixed = 12;
  auto* untangle_cmd = app.add_subcommand("untangle", "bound the untangling number of each diagram");
  untangle_cmd->add_option("file", input)->required();
  untangle_cmd->add_option("--method", method)->check(CLI::IsMember({"bfs", "fixed"}));
  untangle_cmd->add_option("--max-changes", uo.max_changes)->check(CLI::NonNegativeNumber);
  untangle_cmd->add_option("--max-members", uo.max_expanded_members, "members changed per class, -1 for all");
  untangle_cmd->add_option("--max-fixed-crossings", max_fixed, "largest shadow for the fixed method");
  add_budget(untangle_cmd, budget);

  RenderStyle style;
  auto* render_cmd = app.add_subcommand("render", "draw a pdg document as SVG");
  render_cmd->add_option("file", input)->required();
  render_cmd->add_option("-o,--output", output);
  render_cmd->add_option("--size", style.size);
  render_cmd->add_option("--stroke", style.stroke);
  render_cmd->add_option("--gap", style.gap);
  render_cmd->add_option("--marker-radius", style.marker_radius);

  bool report_untangle = false;
  auto* report_cmd = app.add_subcommand("report", "crossing triplets for many nets or pdg files");
  report_cmd->add_option("files", inputs)->required();
  report_cmd->add_option("--seed", seed)->each([&](const std::string&) { have_seed = true; });
  report_cmd->add_flag("--untangle", report_untangle, "also run the layered search");
  report_cmd->add_option("--max-changes", uo.max_changes)->check(CLI::NonNegativeNumber);
  add_budget(report_cmd, budget);

  auto* moves_cmd = app.add_subcommand("moves", "list the applicable moves");
  moves_cmd->add_option("file", input)->required();
  moves_cmd->add_option("--axis", axis, "diagram of a tridiagram, 1..3")->check(CLI::Range(1, 3));

  bool generate = false, verify = false;
  std::uint64_t cat_seed = 1;
  auto* catalogue_cmd = app.add_subcommand("catalogue", "generate or verify a move catalogue");
  catalogue_cmd->add_flag("--generate", generate, "walk from the given seed diagrams");
  catalogue_cmd->add_flag("--verify", verify, "replay a catalogue file");
  catalogue_cmd->add_option("files", inputs)->required();
  catalogue_cmd->add_option("--seed", cat_seed);
  catalogue_cmd->add_option("-o,--output", output);

  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceOptions so;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--snapshot", so.snapshot_path, "JSON file holding the sessions");
  serve_cmd->add_option("--cors-origin", so.cors_origin);

  try {
    app.parse(argc, argv);
    if (!have_seed) seed = default_seed();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto dump = [&](const json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };

  try {
    if (*validate_cmd) {
      PdgDocument doc;
      try {
        doc = parse_pdg(read_file(input));
      } catch (const ParseError& e) {
        throw DomainFailure{{{"valid", false}, {"parse_error", e.what()}, {"line", e.line()}, {"column", e.column()}}};
      }
      const auto ds = diagrams_of(doc);
      const auto report = ds.size() == 3 ? check_tridiagram(tridiagram_from(ds)) : validate(ds[0]);
      const json j = report_json(report);
      if (pretty) {
        for (const auto& e : report.errors) out << "error  " << e << '\n';
        for (const auto& r : report.rules) out << (r.ok ? "ok     " : "FAIL   ") << pad(r.rule, 8) << r.message << '\n';
        out << (report.valid() ? "valid" : "invalid") << '\n';
      } else {
        dump(j);
      }
      return report.valid() ? 0 : 1;
    }

    if (*project_cmd) {
      PerturbOptions po;
      po.seed = seed;
      po.eps = eps;
      const auto e = perturb_generic(load_net(read_file(input)), po);
      std::vector<SquareDiagram> ds;
      if (axis)
        ds.push_back(project(e, axis));
      else
        ds = diagrams_of(tridiagram_of(e));
      if (do_simplify)
        for (auto& d : ds) d = simplify(d, budget);
      write_text(output, document_pdg(ds), out);
      return 0;
    }

    if (*simplify_cmd) {
      auto ds = diagrams_of(parse_pdg(read_file(input)));
      for (auto& d : ds) d = simplify(d, budget);
      write_text(output, document_pdg(ds), out);
      return 0;
    }

    if (*untangle_cmd) {
      const auto ds = diagrams_of(parse_pdg(read_file(input)));
      for (const auto& d : ds) require_valid(d);
      uo.budget = budget;
      std::vector<UntanglingResult> results;
      for (const auto& d : ds)
        results.push_back(method == "bfs" ? untangle_bfs(d, uo) : untangle_fixed_shadow(d, budget, max_fixed));
      const json j = to_json(results);
      if (pretty) {
        out << "axis  start  min  u_upper  exhaustive\n";
        for (const auto& r : results)
          out << pad(std::to_string(r.axis), 6) << pad(std::to_string(r.start_crossings), 7)
              << pad(std::to_string(r.min_crossings), 5) << pad(std::to_string(r.u_upper), 9)
              << (r.exhaustive ? "yes" : "no") << '\n';
        out << "total u_upper " << j["u_upper"].get<int>() << '\n';
      } else {
        dump(j);
      }
      return 0;
    }

    if (*render_cmd) {
      style.check();
      const auto doc = parse_pdg(read_file(input));
      const auto svg = std::holds_alternative<SquareDiagram>(doc) ? render_svg(std::get<SquareDiagram>(doc), style)
                                                                 : render_svg(std::get<Tridiagram>(doc), style);
      write_text(output, svg, out);
      return 0;
    }

    if (*report_cmd) {
      json rows = json::array();
      PerturbOptions po;
      po.seed = seed;
      uo.budget = budget;
      for (const auto& path : inputs) {
        json row = {{"file", std::filesystem::path(path).filename().string()}};
        try {
          Tridiagram t;
          if (is_net(path)) {
            t = tridiagram_of(perturb_generic(load_net(read_file(path)), po));
          } else {
            const auto ds = diagrams_of(parse_pdg(read_file(path)));
            if (ds.size() != 3) throw std::invalid_argument("report needs nets or tridiagrams");
            t = tridiagram_from(ds);
          }
          const auto b = crossing_bound(t, budget);
          row["projected"] = triplet(t);
          row["triplet"] = b.triplet;
          row["c"] = b.c_value;
          row["exhaustive"] = b.exhaustive;
          if (report_untangle) {
            std::vector<UntanglingResult> rs;
            for (const auto& d : b.simplified.diagrams) rs.push_back(untangle_bfs(d, uo));
            const json u = to_json(rs);
            row["u_upper"] = u["u_upper"];
            row["untangle_exhaustive"] = u["exhaustive"];
          }
        } catch (const std::exception& e) {
          row["error"] = e.what();
        }
        rows.push_back(row);
      }
      bool failed = false;
      for (const auto& r : rows) failed = failed || r.contains("error");
      if (pretty) {
        out << pad("file", 32) << pad("triplet", 12) << pad("c", 4) << (report_untangle ? "u_upper" : "") << '\n';
        for (const auto& r : rows) {
          if (r.contains("error")) {
            out << pad(r["file"], 32) << "error: " << r["error"].get<std::string>() << '\n';
            continue;
          }
          const auto& tr = r["triplet"];
          std::ostringstream t;
          t << '(' << tr[0] << ',' << tr[1] << ',' << tr[2] << ')';
          out << pad(r["file"], 32) << pad(t.str(), 12) << pad(std::to_string(r["c"].get<int>()), 4);
          if (report_untangle) out << r["u_upper"].get<int>() << (r["untangle_exhaustive"].get<bool>() ? "" : "+");
          out << '\n';
        }
      } else {
        dump(rows);
      }
      return failed ? 1 : 0;
    }

    if (*moves_cmd) {
      const auto ds = diagrams_of(parse_pdg(read_file(input)));
      const int a = axis ? axis : 1;
      if (a > static_cast<int>(ds.size())) throw std::invalid_argument("--axis needs a tridiagram");
      require_valid(ds[a - 1]);
      const auto moves = enumerate_moves(ds[a - 1]);
      if (pretty) {
        for (std::size_t i = 0; i < moves.size(); ++i) out << std::setw(4) << i << "  " << moves[i].describe() << '\n';
      } else {
        json list = json::array();
        for (std::size_t i = 0; i < moves.size(); ++i) {
          json j = to_json(moves[i]);
          j["index"] = i;
          list.push_back(std::move(j));
        }
        dump(list);
      }
      return 0;
    }

    if (*catalogue_cmd) {
      if (generate == verify) throw CLI::ValidationError("catalogue", "give exactly one of --generate and --verify");
      if (verify) {
        json failures = json::array();
        int entries = 0;
        for (const auto& path : inputs) {
          const auto cat = parse_catalogue(read_file(path));
          entries += static_cast<int>(cat.size());
          for (const auto& f : verify_catalogue(cat)) failures.push_back(path + ": " + f);
        }
        dump({{"entries", entries}, {"failures", failures}});
        return failures.empty() ? 0 : 1;
      }
      auto paths = inputs;
      std::sort(paths.begin(), paths.end());
      std::vector<SquareDiagram> seeds;
      for (const auto& p : paths) seeds.push_back(parse_diagram(read_file(p)));
      CatalogueOptions co;
      co.seed = cat_seed;
      write_text(output, format_catalogue(generate_catalogue(seeds, co)), out);
      return 0;
    }

    if (*serve_cmd) return serve(host, port, so);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const DomainFailure& f) {
    dump(f.detail);
    return 1;
  } catch (const ParseError& e) {
    err << json{{"error", e.what()}, {"line", e.line()}, {"column", e.column()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace periodica
