// Batch front end: permeable <command> [scene.json] [flags]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "permeable/commands.hpp"
#include "permeable/error.hpp"
#include "permeable/scene.hpp"

namespace {

int usage_error(const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << "\n";
  return permeable::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace permeable;

  CLI::App app{"Intrinsic metrics, permeability certificates and Lipschitz checks around exception sets"};
  app.set_version_flag("--version", "permeable 1.0");

  std::string command, scene_path, format, out_path;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  int depth = 10, pairs = 10000;
  bool finite_only = false;

  app.add_option("command", command, "dist | theta-dist | certify | cb-rank | staircase | lipschitz | verify")
      ->required();
  app.add_option("scene", scene_path, "JSON scene file (optional for verify and staircase)");
  auto* eps_opt = app.add_option("--eps", eps, "length slack for witnesses (default 1e-6)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (default 0)");
  auto* depth_opt = app.add_option("--grid-depth", depth, "grid refinement depth (default 10)")->check(CLI::Range(1, 16));
  auto* pairs_opt = app.add_option("--pairs", pairs, "sampled pairs (default 10000)")->check(CLI::PositiveNumber);
  auto* format_opt = app.add_option("--format", format, "json | csv | text (default json)");
  app.add_option("--out", out_path, "write the artifact here instead of stdout");
  auto* finite_opt = app.add_flag("--finite-only", finite_only, "accept only finitely crossing witnesses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const auto cmd = parse_command(command);
  if (!cmd) return usage_error("schema_violation", "unknown command '" + command + "'");

  SceneConfig cfg;
  try {
    if (!scene_path.empty()) {
      std::ifstream in(scene_path);
      if (!in) return usage_error("schema_violation", "cannot read scene file '" + scene_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      cfg = parse_scene_config(text.str());
    }
    if (eps_opt->count()) {
      if (!(eps > 0.0)) return usage_error("schema_violation", "--eps must be positive");
      cfg.params.eps = eps;
    }
    if (seed_opt->count()) cfg.params.seed = seed;
    if (depth_opt->count()) cfg.params.depth = depth;
    if (pairs_opt->count()) cfg.params.pairs = pairs;
    if (finite_opt->count()) cfg.params.finite_only = finite_only;
    if (format_opt->count()) cfg.format = parse_output_format(format);
    if (!out_path.empty()) cfg.output_path = out_path;
    require_scene_fields(*cmd, cfg);
  } catch (const Error& e) {
    return usage_error(std::string(to_string(e.code())), e.message());
  }

  if (cfg.output_path && !scene_path.empty()) {
    std::error_code ec;
    if (std::filesystem::equivalent(*cfg.output_path, scene_path, ec))
      return usage_error("schema_violation", "refusing to overwrite the scene file");
  }

  const CommandResult r = execute_command(*cmd, cfg);
  if (!r.error.empty()) {
    std::cerr << r.error << "\n";
    return r.exit_code;
  }
  if (cfg.output_path) {
    std::ofstream out(*cfg.output_path, std::ios::binary);
    if (!out) return usage_error("schema_violation", "cannot write '" + *cfg.output_path + "'");
    out << r.output;
  } else {
    std::cout << r.output;
  }
  return r.exit_code;
}
