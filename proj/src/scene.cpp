#include "permeable/scene.hpp"

#include <algorithm>
#include <cmath>

#include "permeable/error.hpp"
#include "permeable/io.hpp"

namespace permeable {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::schema_violation, "field '" + field + "': " + what);
}

int int_field(const Json& j, const std::string& field, int lo, int hi) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > hi) fail(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double positive_field(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be a positive finite number");
  return v;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

SceneParams parse_params(const Json& j) {
  if (!j.is_object()) fail("params", "expected an object");
  require_keys(j, {"depth", "eps", "seed", "pairs", "tol", "finite_only", "lipschitz", "metric"}, "params");
  SceneParams p;
  if (j.contains("depth")) p.depth = int_field(j["depth"], "params.depth", 1, 16);
  if (j.contains("eps")) p.eps = positive_field(j["eps"], "params.eps");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("params.seed", "expected a non-negative integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("pairs")) p.pairs = int_field(j["pairs"], "params.pairs", 1, 100'000'000);
  if (j.contains("tol")) p.tol = positive_field(j["tol"], "params.tol");
  if (j.contains("finite_only")) {
    if (!j["finite_only"].is_boolean()) fail("params.finite_only", "expected true or false");
    p.finite_only = j["finite_only"].get<bool>();
  }
  if (j.contains("lipschitz")) {
    if (!j["lipschitz"].is_number() || j["lipschitz"].get<double>() < 0.0)
      fail("params.lipschitz", "expected a non-negative number");
    p.lipschitz = j["lipschitz"].get<double>();
  }
  if (j.contains("metric")) {
    const Json& m = j["metric"];
    if (!m.is_string()) fail("params.metric", "expected a string");
    p.metric = m.get<std::string>();
    if (p.metric != "euclidean" && p.metric != "intrinsic" && p.metric != "l1")
      throw Error(ErrorCode::unknown_kind, "field 'params.metric': expected euclidean, intrinsic or l1");
  }
  return p;
}

}  // namespace

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::text: return "text";
  }
  return "json";
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw Error(ErrorCode::schema_violation, "field 'output.format': expected json, csv or text");
}

SceneConfig parse_scene_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema_violation,
                "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": malformed JSON (" +
                    e.what() + ")");
  }
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "line 1: the scene must be a JSON object");
  require_keys(j, {"dimension", "exception_set", "function", "points", "cb_set", "params", "output"}, "");

  SceneConfig cfg;
  if (j.contains("dimension")) cfg.dimension = static_cast<std::size_t>(int_field(j["dimension"], "dimension", 1, 64));
  if (j.contains("params")) cfg.params = parse_params(j["params"]);
  if (j.contains("exception_set")) cfg.exception_set = parse_exception_set(j["exception_set"], cfg.dimension, "exception_set");
  if (j.contains("function")) cfg.function = parse_function(j["function"], cfg.dimension, "function");
  if (j.contains("points")) {
    const Json& pts = j["points"];
    if (!pts.is_array()) fail("points", "expected an array of points");
    for (std::size_t i = 0; i < pts.size(); ++i)
      cfg.points.push_back(parse_point(pts[i], cfg.dimension, "points[" + std::to_string(i) + "]"));
  }
  if (j.contains("cb_set")) cfg.cb_set = parse_cb_set(j["cb_set"], "cb_set");
  if (j.contains("output")) {
    const Json& o = j["output"];
    if (!o.is_object()) fail("output", "expected an object");
    require_keys(o, {"format", "path"}, "output");
    if (o.contains("format")) {
      if (!o["format"].is_string()) fail("output.format", "expected a string");
      cfg.format = parse_output_format(o["format"].get<std::string>());
    }
    if (o.contains("path")) {
      if (!o["path"].is_string() || o["path"].get<std::string>().empty()) fail("output.path", "expected a file name");
      cfg.output_path = o["path"].get<std::string>();
    }
  }
  return cfg;
}

}  // namespace permeable
