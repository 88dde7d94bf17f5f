// linset: command-line front end for the linear-set library.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linset/constructions.hpp"
#include "linset/directions.hpp"
#include "linset/error.hpp"
#include "linset/io.hpp"
#include "linset/linearity.hpp"
#include "linset/projection.hpp"
#include "linset/verify.hpp"

using namespace linset;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUsage = 64;

struct Common {
  std::string format = "json";
  bool timing = false;
  int jobs = 0;
};

struct FieldOpts {
  std::string field;
  std::string q;
  int h = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--timing", c.timing, "Include wall_time in the JSON output");
  app->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

void add_field(CLI::App* app, FieldOpts& f) {
  app->add_option("--field", f.field, "Field spec p^e:h[:poly-hex]");
  app->add_option("--q", f.q, "Ground field size (with --h)");
  app->add_option("--h", f.h, "Extension degree (with --q)");
}

FieldTower tower_of(const FieldOpts& f) {
  if (!f.field.empty()) return FieldTower::make(parse_field_spec(f.field));
  if (f.q.empty() || f.h <= 0) throw CLI::ValidationError("--field", "give --field or both --q and --h");
  auto [p, e] = parse_prime_power(f.q);
  return FieldTower::make(p, e, f.h);
}

void flatten_csv(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_csv(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
    out.emplace_back(prefix, s);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Linear sets print one row per point; everything else as key,value rows.
void emit(const json& j, const Common& c) {
  if (c.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  const json* pts = nullptr;
  if (j.contains("points")) pts = &j["points"];
  else if (j.contains("linear_set") && j["linear_set"].contains("points")) pts = &j["linear_set"]["points"];
  if (pts) {
    std::cout << "coords,weight\n";
    for (const auto& p : *pts) {
      std::string coords;
      for (std::size_t i = 0; i < p["coords"].size(); ++i) coords += (i ? " " : "") + p["coords"][i].dump();
      std::cout << coords << "," << p["weight"].dump() << "\n";
    }
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten_csv(j, "", rows);
  std::cout << "key,value\n";
  for (const auto& [k, v] : rows) std::cout << csv_field(k) << "," << csv_field(v) << "\n";
}

std::vector<Fe> parse_hex_list(const std::string& s) {
  std::vector<Fe> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    const std::string tok = s.substr(start, end - start);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw Error(ErrorCode::ParseError, "bad hex value '" + tok + "'");
    out.push_back(Fe{static_cast<std::uint32_t>(v)});
    start = end + 1;
  }
  return out;
}

// Appends "--key value" for config entries whose flag is not already given.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty()) return out;
  std::set<std::string> given;
  for (const auto& a : out)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  for (const auto& [key, value] : read_config_file(path)) {
    if (given.count(key)) continue;
    if (value == "true" || value == "false") {
      if (value == "true") out.push_back("--" + key);
    } else {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  return out;
}

json tower_json(const FieldTower& t) {
  json j;
  j["p"] = t.p();
  j["e"] = t.e();
  j["h"] = t.h();
  j["q"] = t.q();
  j["order"] = t.order();
  j["spec"] = t.spec_string();
  j["generator"] = t.generator().code;
  j["q_embedding"] = t.q_embedding().code;
  j["theta"] = t.theta().code;
  json subs = json::array();
  for (int s = 1; s <= t.h(); ++s)
    if (t.h() % s == 0) {
      json e;
      e["s"] = s;
      e["size"] = t.subfield_elements(s).size();
      e["generator"] = t.subfield_generator(s).code;
      subs.push_back(e);
    }
  j["subfields"] = subs;
  return j;
}

json set_with_linearity(const FieldTower& t, const FqSubspace& u) {
  json j = linear_set_json(build_linear_set(t, u));
  j["algebraic_max_s"] = algebraic_max_field(t, u);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with F_q-linear sets in PG(r-1, q^h)", "linset"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Common common;
  FieldOpts fo;

  // field
  auto* field_cmd = app.add_subcommand("field", "Describe a field tower");
  add_field(field_cmd, fo);
  add_common(field_cmd, common);
  std::optional<std::uint32_t> element;
  field_cmd->add_option("--element", element, "Report the degree of this element over F_q");

  // orbit
  auto* orbit_cmd = app.add_subcommand("orbit", "Type orbit S_alpha of an element");
  add_field(orbit_cmd, fo);
  add_common(orbit_cmd, common);
  std::uint32_t alpha = 0;
  bool list_orbit = false;
  orbit_cmd->add_option("--alpha", alpha, "Element code")->required();
  orbit_cmd->add_flag("--list", list_orbit, "Include the orbit and coset representatives");

  // linset / geolin
  std::string subspace_path;
  auto* linset_cmd = app.add_subcommand("linset", "Points and weights of L_U");
  add_field(linset_cmd, fo);
  add_common(linset_cmd, common);
  linset_cmd->add_option("--subspace", subspace_path, "Subspace file")->required();

  std::optional<std::uint64_t> budget;
  auto* geolin_cmd = app.add_subcommand("geolin", "Algebraic and geometric fields of linearity");
  add_field(geolin_cmd, fo);
  add_common(geolin_cmd, common);
  geolin_cmd->add_option("--subspace", subspace_path, "Subspace file")->required();
  geolin_cmd->add_option("--budget", budget, "Search nodes per subfield");

  // project / pilines
  std::string scene_path;
  auto* project_cmd = app.add_subcommand("project", "Linear set obtained by projecting Sigma from Pi onto Omega");
  add_common(project_cmd, common);
  project_cmd->add_option("--scene", scene_path, "Scene file")->required();

  auto* pilines_cmd = app.add_subcommand("pilines", "Pi-lines of a scene with their types");
  add_common(pilines_cmd, common);
  pilines_cmd->add_option("--scene", scene_path, "Scene file")->required();

  // construct
  int cs = 2, blocks = 1;
  std::uint64_t seed = 1;
  std::string out_path, scene_out;
  auto* construct_cmd = app.add_subcommand("construct", "Block construction of a linear set");
  add_field(construct_cmd, fo);
  add_common(construct_cmd, common);
  construct_cmd->add_option("--s", cs, "Subfield degree s")->required();
  construct_cmd->add_option("--blocks", blocks, "Number of blocks (k = blocks*s + 2)");
  construct_cmd->add_option("--seed", seed, "Seed for alpha and the betas");
  construct_cmd->add_option("--out", out_path, "Write the subspace file here");
  construct_cmd->add_option("--scene-out", scene_out, "Write the scene file here");

  // club
  int ci = 1, ck = 2;
  auto* club_cmd = app.add_subcommand("club", "An i-club of rank k in PG(1, q^h)");
  add_field(club_cmd, fo);
  add_common(club_cmd, common);
  club_cmd->add_option("--i", ci, "Weight of the head")->required();
  club_cmd->add_option("--k", ck, "Rank")->required();
  club_cmd->add_option("--seed", seed, "Seed for the random search");
  club_cmd->add_option("--out", out_path, "Write the subspace file here");

  // directions
  std::string q0_text, map_text;
  auto* dir_cmd = app.add_subcommand("directions", "Directions determined by the graph of f");
  add_common(dir_cmd, common);
  dir_cmd->add_option("--q0", q0_text, "Field size q0 = p^h")->required();
  dir_cmd->add_option("--map", map_text, "Comma-separated hex table, or linear:<hex images of x^j>")->required();

  // verify
  std::string suite;
  SuiteConfig vc;
  std::string vq;
  std::optional<int> vh, vk, vw;
  std::optional<std::uint64_t> vsamples;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify_cmd, common);
  verify_cmd->add_option("suite", suite, "Suite name")->required();
  verify_cmd->add_option("--q", vq, "Ground field size");
  verify_cmd->add_option("--h", vh, "Extension degree");
  verify_cmd->add_option("--k", vk, "Rank");
  verify_cmd->add_option("--w", vw, "Weight");
  verify_cmd->add_option("--scope", vc.scope, "exhaustive, sample or construction");
  verify_cmd->add_option("--seed", vc.seed, "Random seed");
  verify_cmd->add_option("--budget", budget, "Search nodes per subfield");
  verify_cmd->add_option("--samples", vsamples, "Sample count");

  try {
    // CLI11 takes the argument vector in reverse order.
    auto args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "linset: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    json out;
    int status = 0;
    if (*field_cmd) {
      const FieldTower t = tower_of(fo);
      out = tower_json(t);
      if (element) {
        if (*element >= t.order()) throw Error(ErrorCode::InvalidParams, "element code out of range");
        out["element"] = *element;
        out["element_degree"] = t.degree_over_q(Fe{*element});
      }
    } else if (*orbit_cmd) {
      const FieldTower t = tower_of(fo);
      if (alpha >= t.order()) throw Error(ErrorCode::InvalidParams, "alpha out of range");
      const TypeOrbit o = type_orbit(t, Fe{alpha});
      out["alpha"] = alpha;
      out["degree"] = o.degree;
      out["orbit_size"] = o.orbit.size();
      out["cosets"] = o.cosets.size();
      out["type"] = o.rep.code;
      if (list_orbit) {
        json orb = json::array(), cos = json::array();
        for (Fe x : o.orbit) orb.push_back(x.code);
        for (Fe x : o.cosets) cos.push_back(x.code);
        out["orbit"] = orb;
        out["coset_representatives"] = cos;
      }
    } else if (*linset_cmd || *geolin_cmd) {
      const SubspaceFile f = read_subspace_file(subspace_path);
      const FieldTower t = fo.field.empty() && fo.q.empty() ? FieldTower::make(f.p, f.e, f.h) : tower_of(fo);
      const FqSubspace u = subspace_from_file(t, f);
      if (*linset_cmd) {
        out = set_with_linearity(t, u);
      } else {
        const std::uint64_t b = budget.value_or(default_search_budget());
        const LinearityReport rep = geometric_fields(t, u, b);
        out = linearity_json(rep, algebraic_max_field(t, u));
        out["budget"] = b;
        if (std::any_of(rep.fields.begin(), rep.fields.end(),
                        [](const FieldSearch& s) { return s.status == SearchStatus::Inconclusive; }))
          std::cerr << "linset: search budget exhausted for some s; raise --budget or LINSET_BUDGET\n";
      }
    } else if (*project_cmd || *pilines_cmd) {
      const SceneFile f = read_scene_file(scene_path);
      const FieldTower t = FieldTower::make(f.field);
      const ProjectionScene sc = make_scene(t, f.k, f.pi, f.omega);
      if (*project_cmd) {
        out = linear_set_json(projected_linear_set(t, sc));
      } else {
        const auto lines = find_pi_lines(t, sc);
        const PiLineBounds b = check_pi_line_bounds(t, sc);
        out["pi_lines"] = json::array();
        for (const auto& l : lines) out["pi_lines"].push_back(pi_line_json(l));
        out["count"] = lines.size();
        out["heavy_fibers"] = b.heavy_fibers;
        out["threshold_hits"] = b.threshold_hits;
        out["violations"] = b.violations;
        if (!b.violations.empty()) status = kExitViolation;
      }
    } else if (*construct_cmd) {
      const FieldTower t = tower_of(fo);
      const Construction c = build_construction(t, random_construction_params(t, cs, blocks, seed));
      out["s"] = cs;
      out["blocks"] = blocks;
      out["k"] = c.k;
      out["alpha"] = c.params.alpha.code;
      json betas = json::array();
      for (Fe b : c.params.betas) betas.push_back(b.code);
      out["betas"] = betas;
      out["subspace_file"] = format_subspace_file(t, c.closed_form);
      out["scene_file"] = format_scene_file(t, c.scene);
      out["linear_set"] = linear_set_json(build_linear_set(t, c.closed_form));
      if (!out_path.empty()) std::ofstream(out_path) << format_subspace_file(t, c.closed_form);
      if (!scene_out.empty()) std::ofstream(scene_out) << format_scene_file(t, c.scene);
    } else if (*club_cmd) {
      const FieldTower t = tower_of(fo);
      const FqSubspace u = build_club(t, ci, ck, seed);
      out["i"] = ci;
      out["k"] = ck;
      out["subspace_file"] = format_subspace_file(t, u);
      out["linear_set"] = linear_set_json(build_linear_set(t, u));
      if (!out_path.empty()) std::ofstream(out_path) << format_subspace_file(t, u);
    } else if (*dir_cmd) {
      auto [p, h] = parse_prime_power(q0_text);
      const FieldTower t = FieldTower::make(p, 1, h);
      GraphMap f;
      if (map_text.rfind("linear:", 0) == 0) {
        const auto images = parse_hex_list(map_text.substr(7));
        if (static_cast<int>(images.size()) != h)
          throw Error(ErrorCode::InvalidParams, "linear map needs " + std::to_string(h) + " images");
        for (Fe x : images)
          if (x.code >= t.order()) throw Error(ErrorCode::InvalidParams, "image out of range");
        f = linear_map(t, images);
      } else {
        f.table = parse_hex_list(map_text);
        if (f.table.size() != t.order())
          throw Error(ErrorCode::InvalidParams, "table needs " + std::to_string(t.order()) + " entries");
        for (Fe x : f.table)
          if (x.code >= t.order()) throw Error(ErrorCode::InvalidParams, "table value out of range");
      }
      const TrichotomyResult res = classify(t, f);
      out["q0"] = t.order();
      out["N"] = res.dc.n;
      out["r"] = res.dc.r;
      out["case"] = res.cases.size() == 1 ? json(res.cases.front()) : json();
      out["cases"] = res.cases;
      out["linear_over"] = res.linear_over;
      if (res.linearity_checked) out["fr_linear"] = res.fr_linear;
      out["bounds_ok"] = res.ok();
    } else if (*verify_cmd) {
      if (!vq.empty()) {
        auto [p, e] = parse_prime_power(vq);
        vc.p = p;
        vc.e = e;
      }
      vc.h = vh;
      vc.k = vk;
      vc.w = vw;
      vc.budget = budget;
      vc.samples = vsamples;
      vc.jobs = common.jobs;
      SuiteReport rep;
      try {
        rep = run_suite(suite, vc);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownSuite) throw;
        std::cerr << "linset: " << e.what() << "\n";
        return kExitUsage;
      }
      out = to_json(rep, common.timing);
      std::cerr << "linset: verify " << suite << ": " << rep.visited << " visited, "
                << rep.details.value("violation_count", std::uint64_t{0}) << " violations, "
                << rep.wall_time << " s\n";
      if (!rep.passed()) status = kExitViolation;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (common.timing && !*verify_cmd) out["wall_time"] = wall;
    emit(out, common);
    return status;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "linset: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "linset: " << e.what() << "\n";
    return kExitDomain;
  }
}
