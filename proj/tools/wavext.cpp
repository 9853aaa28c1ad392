#include "wavext/analysis.hpp"
#include "wavext/mesh.hpp"
#include "wavext/reference_tables.hpp"
#include "wavext/report.hpp"
#include "wavext/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace wavext;

struct RunConfig {
  std::string problem = "u1";
  int levels = 1;
  std::string solver = "auto";
  std::string hilbert_k = "auto";
  int quad_order = 10;
  int source_order = 5;
  std::string output_format = "markdown";
  std::string memory_budget = "2G";
};

const std::vector<std::string> kConfigKeys = {"problem",       "levels",        "solver",       "hilbert_k",
                                              "quad_order",    "source_order",  "output_format", "memory_budget"};

std::int64_t parse_bytes(const std::string& text) {
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  const std::string unit = text.substr(used);
  double scale = 1.0;
  if (unit == "" || unit == "B") {
    scale = 1.0;
  } else if (unit == "K" || unit == "KiB") {
    scale = 1024.0;
  } else if (unit == "M" || unit == "MiB") {
    scale = 1024.0 * 1024.0;
  } else if (unit == "G" || unit == "GiB") {
    scale = 1024.0 * 1024.0 * 1024.0;
  } else {
    throw std::invalid_argument("memory budget: unknown unit '" + unit + "'");
  }
  if (!(value > 0.0)) throw std::invalid_argument("memory budget must be positive");
  return static_cast<std::int64_t>(value * scale);
}

int parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  const int v = std::stoi(text, &used);
  if (used != text.size()) throw std::invalid_argument(key + ": not an integer: '" + text + "'");
  return v;
}

/// Adds the shared study options; `given` maps config keys to their option for override checks.
void add_run_options(CLI::App* app, RunConfig& cfg, std::map<std::string, CLI::Option*>& given,
                     std::string& config_path) {
  given["problem"] = app->add_option("--problem", cfg.problem, "Manufactured problem")
                         ->check(CLI::IsMember({"u1", "u2"}));
  given["levels"] = app->add_option("--levels", cfg.levels, "Number of refinement levels (>= 1)");
  given["solver"] = app->add_option("--solver", cfg.solver, "Linear solver")
                        ->check(CLI::IsMember({"tensor", "assembled", "auto"}));
  given["hilbert_k"] = app->add_option("--hilbert-k", cfg.hilbert_k, "Fourier modes for the temporal matrices, or auto");
  given["quad_order"] = app->add_option("--quad-order", cfg.quad_order, "Gauss order of the error quadrature");
  given["source_order"] =
      app->add_option("--source-order", cfg.source_order, "Gauss points per direction for the cell averages of f");
  given["output_format"] = app->add_option("--output-format", cfg.output_format, "Table format")
                               ->check(CLI::IsMember({"csv", "markdown"}));
  given["memory_budget"] =
      app->add_option("--memory-budget", cfg.memory_budget, "Budget for the assembled solver, e.g. 512M or 2G");
  app->add_option("--config", config_path, "key=value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
}

void apply_config_file(const std::string& path, RunConfig& cfg, const std::map<std::string, CLI::Option*>& given) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  for (const auto& [key, value] : read_key_value_config(in, kConfigKeys)) {
    const auto it = given.find(key);
    if (it != given.end() && it->second->count() > 0) continue;
    if (key == "problem") cfg.problem = value;
    if (key == "levels") cfg.levels = parse_int(key, value);
    if (key == "solver") cfg.solver = value;
    if (key == "hilbert_k") cfg.hilbert_k = value;
    if (key == "quad_order") cfg.quad_order = parse_int(key, value);
    if (key == "source_order") cfg.source_order = parse_int(key, value);
    if (key == "output_format") cfg.output_format = value;
    if (key == "memory_budget") cfg.memory_budget = value;
  }
}

StudyConfig study_config(const RunConfig& cfg) {
  if (cfg.problem != "u1" && cfg.problem != "u2") throw std::invalid_argument("problem must be u1 or u2");
  if (cfg.levels < 1) throw std::invalid_argument("levels must be >= 1");
  if (cfg.quad_order < 1) throw std::invalid_argument("quad_order must be >= 1");
  if (cfg.source_order < 0) throw std::invalid_argument("source_order must be >= 0");
  if (cfg.output_format != "csv" && cfg.output_format != "markdown") {
    throw std::invalid_argument("output_format must be csv or markdown");
  }
  StudyConfig sc;
  sc.levels = cfg.levels;
  sc.quad_order = cfg.quad_order;
  sc.source_order = cfg.source_order;
  sc.solver.kind = solver_from_string(cfg.solver);
  sc.solver.memory_budget = parse_bytes(cfg.memory_budget);
  if (cfg.hilbert_k != "auto") {
    const int k = parse_int("hilbert_k", cfg.hilbert_k);
    if (k < 1) throw std::invalid_argument("hilbert_k must be >= 1");
    sc.hilbert_truncation = k;
  }
  return sc;
}

int error_digits(const std::string& problem) { return problem == "u1" ? 2 : 4; }

void print_table(const RunConfig& cfg, const std::vector<ConvergenceRow>& rows) {
  const int dim = problem_by_name(cfg.problem).dim;
  if (cfg.output_format == "csv") {
    write_csv(std::cout, rows, dim);
  } else {
    write_markdown(std::cout, rows, dim, error_digits(cfg.problem));
  }
}

int cmd_study(const RunConfig& cfg) {
  const StudyConfig sc = study_config(cfg);
  try {
    const auto rows = run_study(problem_by_name(cfg.problem), sc);
    print_table(cfg, rows);
  } catch (const StudyError& e) {
    print_table(cfg, e.partial());
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cmd_verify(RunConfig cfg, bool levels_given) {
  const std::vector<std::string> problems = cfg.problem == "all" ? std::vector<std::string>{"u1", "u2"}
                                                                 : std::vector<std::string>{cfg.problem};
  bool all_pass = true;
  for (const std::string& name : problems) {
    const ReferenceTable& ref = reference_table(name);
    RunConfig c = cfg;
    c.problem = name;
    if (!levels_given) c.levels = ref.gating_rows;
    if (c.levels > static_cast<int>(ref.rows.size())) {
      throw std::invalid_argument("levels exceeds the reference table length");
    }
    std::vector<ConvergenceRow> rows;
    try {
      rows = run_study(problem_by_name(name), study_config(c));
    } catch (const StudyError& e) {
      rows = e.partial();
      std::cout << name << ": study failed: " << e.what() << '\n';
      all_pass = false;
    }
    for (const RowVerdict& v : compare_with_reference(rows, ref)) {
      std::cout << name << " row " << v.level << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << '\n';
      all_pass = all_pass && v.pass;
    }
  }
  std::cout << (all_pass ? "all rows PASS" : "some rows FAIL") << '\n';
  return all_pass ? 0 : 1;
}

int cmd_selftest() {
  bool all_pass = true;
  run_selftests([&](const SuiteResult& r) {
    std::printf("%-22s %s  %s  (%.1f s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
  });
  return all_pass ? 0 : 1;
}

int cmd_mesh(const std::string& problem, int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  if (problem == "u1") {
    const auto [s, t] = initial_mesh_1d();
    write_mesh(std::cout, refine_uniform(s, level - 1));
    write_mesh(std::cout, refine_uniform(t, level - 1));
  } else {
    const auto [s, t] = initial_mesh_lshape();
    write_mesh(std::cout, refine_uniform(s, level - 1));
    write_mesh(std::cout, refine_uniform(t, level - 1));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time Galerkin solver for the wave equation"};
  app.require_subcommand(1);

  RunConfig study_cfg;
  std::string study_config_path;
  std::map<std::string, CLI::Option*> study_given;
  CLI::App* study = app.add_subcommand("study", "Run a uniform refinement study and print the error table");
  add_run_options(study, study_cfg, study_given, study_config_path);

  RunConfig verify_cfg;
  verify_cfg.problem = "all";
  std::string verify_config_path;
  std::map<std::string, CLI::Option*> verify_given;
  CLI::App* verify = app.add_subcommand("verify-tables", "Compare a study with the embedded reference tables");
  add_run_options(verify, verify_cfg, verify_given, verify_config_path);
  verify->get_option("--problem")->check(CLI::IsMember({"u1", "u2", "all"}));

  CLI::App* selftest = app.add_subcommand("selftest", "Run the oracle and property suites");

  std::string mesh_problem = "u1";
  int mesh_level = 1;
  CLI::App* mesh = app.add_subcommand("mesh", "Print the spatial and temporal meshes of one level");
  mesh->add_option("--problem", mesh_problem, "Problem whose meshes are printed")->check(CLI::IsMember({"u1", "u2"}));
  mesh->add_option("--level", mesh_level, "Refinement level (>= 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) {
      apply_config_file(study_config_path, study_cfg, study_given);
      return cmd_study(study_cfg);
    }
    if (verify->parsed()) {
      apply_config_file(verify_config_path, verify_cfg, verify_given);
      return cmd_verify(verify_cfg, verify_given["levels"]->count() > 0);
    }
    if (selftest->parsed()) return cmd_selftest();
    if (mesh->parsed()) return cmd_mesh(mesh_problem, mesh_level);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
