#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permeable/cb_rank.hpp"
#include "permeable/exception_set.hpp"
#include "permeable/fixtures.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

enum class OutputFormat { json, csv, text };

std::string_view to_string(OutputFormat f);
/// Throws schema_violation for anything but json, csv or text.
OutputFormat parse_output_format(std::string_view s);

struct SceneParams {
  int depth = 10;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  int pairs = 10000;
  double tol = 1e-3;
  bool finite_only = false;
  std::optional<double> lipschitz;
  std::string metric = "euclidean";  // euclidean | intrinsic | l1
};

struct SceneConfig {
  std::size_t dimension = 2;
  std::optional<ExceptionSet> exception_set;
  std::optional<FixtureFunction> function;
  std::vector<Point> points;
  std::optional<CBSet> cb_set;
  SceneParams params;
  OutputFormat format = OutputFormat::json;
  std::optional<std::string> output_path;
};

/// Parses and validates a JSON scene. Syntax errors report the line; schema
/// errors name the offending field. Unknown keys are rejected.
SceneConfig parse_scene_config(std::string_view text);

}  // namespace permeable
