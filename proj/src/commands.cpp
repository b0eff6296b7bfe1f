#include "permeable/commands.hpp"

#include <cmath>
#include <sstream>

#include "permeable/error.hpp"
#include "permeable/io.hpp"
#include "permeable/metrics.hpp"
#include "permeable/verification.hpp"

namespace permeable {

namespace {

[[noreturn]] void missing(std::string_view field, Command cmd) {
  throw Error(ErrorCode::schema_violation,
              "field '" + std::string(field) + "': required by the '" + std::string(to_string(cmd)) + "' command");
}

const ExceptionSet& need_set(const SceneConfig& cfg, Command cmd) {
  if (!cfg.exception_set) missing("exception_set", cmd);
  return *cfg.exception_set;
}

std::pair<Point, Point> need_pair(const SceneConfig& cfg, Command cmd) {
  if (cfg.points.size() != 2)
    throw Error(ErrorCode::schema_violation,
                "field 'points': the '" + std::string(to_string(cmd)) + "' command needs exactly two points");
  return {cfg.points[0], cfg.points[1]};
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// JSON for a path result; CSV is the witness path, text the upper bound.
std::string emit_path(Json j, const std::optional<Polyline>& path, double value, OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::json: return j.dump(2) + "\n";
    case OutputFormat::csv:
      if (path) return polyline_csv(*path);
      return std::string(kCsvVersion) + " path\n";
    case OutputFormat::text: return std::isfinite(value) ? csv_number(value) + "\n" : "inf\n";
  }
  return {};
}

CommandResult run_distance(Command cmd, const SceneConfig& cfg) {
  const ExceptionSet& theta = need_set(cfg, cmd);
  const auto [x, y] = need_pair(cfg, cmd);
  MetricEstimate m;
  if (cmd == Command::dist) {
    Domain d;
    d.dimension = cfg.dimension;
    d.obstacle = theta;
    m = intrinsic_distance(d, x, y, cfg.params.depth);
  } else {
    m = theta_intrinsic_distance(theta, x, y, ThetaOptions{cfg.params.eps, cfg.params.finite_only, cfg.params.seed});
  }
  Json j;
  j["command"] = std::string(to_string(cmd));
  j["lower"] = m.lower;
  j["upper"] = m.upper;
  j["infinite"] = m.infinite;
  j["method"] = m.method;
  if (!m.diagnostic.empty()) j["diagnostic"] = m.diagnostic;
  j["witness"] = m.witness ? to_json(*m.witness) : Json(nullptr);
  if (m.witness) j["crossings"] = to_json(path_crossings(theta, *m.witness));
  return {kExitOk, emit_path(std::move(j), m.witness, m.upper, cfg.format), {}};
}

CommandResult run_certify(const SceneConfig& cfg) {
  const ExceptionSet& theta = need_set(cfg, Command::certify);
  const auto [x, y] = need_pair(cfg, Command::certify);
  const Certificate c = permeability_certificate(theta, x, y, cfg.params.eps, cfg.params.seed);
  Json j;
  j["command"] = "certify";
  j["strategy"] = c.strategy;
  j["length"] = polyline_length(c.path);
  j["euclidean"] = distance(x, y);
  j["eps"] = cfg.params.eps;
  j["witness"] = to_json(c.path);
  j["crossings"] = to_json(c.report);
  return {kExitOk, emit_path(std::move(j), c.path, polyline_length(c.path), cfg.format), {}};
}

CommandResult run_cb_rank(const SceneConfig& cfg) {
  if (!cfg.cb_set) missing("cb_set", Command::cb_rank);
  validate(*cfg.cb_set);
  const PermeabilityDecision d = is_permeable_1d(*cfg.cb_set);
  switch (cfg.format) {
    case OutputFormat::text: return {kExitOk, d.rank.to_string() + "\n", {}};
    case OutputFormat::csv:
      return {kExitOk,
              std::string(kCsvVersion) + " cb-rank\nrank,permeable\n" + d.rank.to_string() + "," +
                  (d.permeable ? "true" : "false") + "\n",
              {}};
    case OutputFormat::json: break;
  }
  Json j;
  j["command"] = "cb-rank";
  j["rank"] = d.rank.perfect_core ? Json("perfect_core") : Json(d.rank.rank);
  j["permeable"] = d.permeable;
  j["reason"] = d.reason;
  return {kExitOk, j.dump(2) + "\n", {}};
}

CommandResult run_staircase(const SceneConfig& cfg) {
  struct Row {
    double x, value, ratio;
    int n;
  };
  std::vector<Row> rows;
  if (!cfg.points.empty()) {
    if (cfg.dimension != 1) throw Error(ErrorCode::dimension_mismatch, "field 'points': staircase points are 1-d");
    for (const Point& p : cfg.points) {
      if (p[0] < 0.0 || p[0] > 1.0) throw Error(ErrorCode::out_of_domain, "field 'points': values must lie in [0, 1]");
      const double v = cantor_staircase(p[0]);
      rows.push_back({p[0], v, p[0] > 0.0 ? v / p[0] : 0.0, 0});
    }
  } else {
    // c(3^-n) = 2^-n exactly, so the ratio is (3/2)^n.
    std::int64_t p3 = 1;
    for (int n = 1; n <= 20; ++n) {
      p3 *= 3;
      const double v = cantor_staircase_exact(1, p3);
      rows.push_back({1.0 / static_cast<double>(p3), v, v * static_cast<double>(p3), n});
    }
  }
  if (cfg.format == OutputFormat::csv) {
    std::string out = std::string(kCsvVersion) + " staircase\nn,x,value,ratio\n";
    for (const Row& r : rows)
      out += std::to_string(r.n) + "," + csv_number(r.x) + "," + csv_number(r.value) + "," + csv_number(r.ratio) + "\n";
    return {kExitOk, out, {}};
  }
  if (cfg.format == OutputFormat::text) {
    std::string out;
    for (const Row& r : rows) out += csv_number(r.value) + "\n";
    return {kExitOk, out, {}};
  }
  Json list = Json::array();
  for (const Row& r : rows) {
    Json e{{"x", r.x}, {"value", r.value}, {"ratio", r.ratio}};
    if (r.n > 0) e["n"] = r.n;
    list.push_back(std::move(e));
  }
  Json j;
  j["command"] = "staircase";
  j["rows"] = std::move(list);
  return {kExitOk, j.dump(2) + "\n", {}};
}

CommandResult run_lipschitz(const SceneConfig& cfg) {
  if (!cfg.function) missing("function", Command::lipschitz);
  const FixtureFunction& f = *cfg.function;
  std::optional<ExceptionSet> theta = cfg.exception_set ? cfg.exception_set : f.exception_set;
  auto pairs = stratified_pairs(theta ? &*theta : nullptr, f.box_lo, f.box_hi, cfg.params.pairs, cfg.params.seed);
  MetricOracle metric;
  if (cfg.params.metric == "euclidean") {
    metric = euclidean_metric();
  } else if (cfg.params.metric == "l1") {
    metric = l1_square_metric();
    std::erase_if(pairs, [](const PointPair& pq) {
      for (const Point* p : {&pq.first, &pq.second})
        if (p->dim() != 2 || (*p)[0] < 0.0 || (*p)[0] > 1.0 || (*p)[1] < 0.0 || (*p)[1] > 1.0) return true;
      return false;
    });
  } else {
    if (!theta) missing("exception_set", Command::lipschitz);
    const ExceptionSet closed = closure(*theta);
    std::erase_if(pairs, [&](const PointPair& pq) { return contains(closed, pq.first) || contains(closed, pq.second); });
    metric = complement_metric(*theta, cfg.params.depth);
  }
  const LipschitzEstimate e = lipschitz_constant_estimate(f, metric, pairs);
  const bool exceeds = cfg.params.lipschitz && e.value > *cfg.params.lipschitz * (1.0 + cfg.params.tol);
  const int code = exceeds ? kExitMismatch : kExitOk;
  if (cfg.format == OutputFormat::text) return {code, csv_number(e.value) + "\n", {}};
  if (cfg.format == OutputFormat::csv) {
    std::string out = std::string(kCsvVersion) + " lipschitz\nmetric,estimate,finite_pairs\n";
    out += cfg.params.metric + "," + csv_number(e.value) + "," + std::to_string(e.finite_pairs) + "\n";
    return {code, out, {}};
  }
  Json j;
  j["command"] = "lipschitz";
  j["function"] = std::string(to_string(f.kind));
  j["metric"] = cfg.params.metric;
  j["estimate"] = e.value;
  j["finite_pairs"] = e.finite_pairs;
  j["witness"] = Json::array({to_json(e.witness.first), to_json(e.witness.second)});
  if (cfg.params.lipschitz) {
    j["declared"] = *cfg.params.lipschitz;
    j["exceeds_declared"] = exceeds;
  }
  return {code, j.dump(2) + "\n", {}};
}

CommandResult run_verify(const SceneConfig& cfg) {
  SuiteOptions o;
  o.seed = cfg.params.seed;
  o.pairs = cfg.params.pairs;
  o.depth = cfg.params.depth;
  o.eps = cfg.params.eps;
  const SuiteReport r = run_claim_suite(o);
  const int code = r.all_expected() ? kExitOk : kExitMismatch;
  if (cfg.format == OutputFormat::json) return {code, r.to_json() + "\n", {}};
  std::string out;
  if (cfg.format == OutputFormat::csv) out = std::string(kCsvVersion) + " verify\nclaim,verdict,expected,pairs,max_ratio,threshold\n";
  for (const auto& e : r.entries) {
    if (cfg.format == OutputFormat::csv) {
      out += e.report.claim + "," + std::string(to_string(e.report.verdict)) + "," + std::string(to_string(e.expected)) +
             "," + std::to_string(e.report.pairs) + "," + csv_number(e.report.max_ratio) + "," +
             csv_number(e.report.threshold) + "\n";
    } else {
      out += std::string(e.matches() ? "ok   " : "FAIL ") + e.report.claim + ": " +
             std::string(to_string(e.report.verdict)) + "\n";
    }
  }
  return {code, out, {}};
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::dist: return "dist";
    case Command::theta_dist: return "theta-dist";
    case Command::certify: return "certify";
    case Command::cb_rank: return "cb-rank";
    case Command::staircase: return "staircase";
    case Command::lipschitz: return "lipschitz";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::dist, Command::theta_dist, Command::certify, Command::cb_rank, Command::staircase,
                    Command::lipschitz, Command::verify})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

void require_scene_fields(Command cmd, const SceneConfig& cfg) {
  switch (cmd) {
    case Command::dist:
    case Command::theta_dist:
    case Command::certify:
      need_set(cfg, cmd);
      need_pair(cfg, cmd);
      break;
    case Command::cb_rank:
      if (!cfg.cb_set) missing("cb_set", cmd);
      break;
    case Command::lipschitz:
      if (!cfg.function) missing("function", cmd);
      break;
    case Command::staircase:
    case Command::verify: break;
  }
}

CommandResult execute_command(Command cmd, const SceneConfig& cfg) {
  try {
    require_scene_fields(cmd, cfg);
    switch (cmd) {
      case Command::dist:
      case Command::theta_dist: return run_distance(cmd, cfg);
      case Command::certify: return run_certify(cfg);
      case Command::cb_rank: return run_cb_rank(cfg);
      case Command::staircase: return run_staircase(cfg);
      case Command::lipschitz: return run_lipschitz(cfg);
      case Command::verify: return run_verify(cfg);
    }
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::schema_violation || e.code() == ErrorCode::unknown_kind;
    Json j{{"error", std::string(to_string(e.code()))}, {"message", e.message()}, {"command", std::string(to_string(cmd))}};
    return {usage ? kExitUsage : kExitFailure, {}, j.dump()};
  } catch (const std::exception& e) {
    Json j{{"error", "internal"}, {"message", e.what()}, {"command", std::string(to_string(cmd))}};
    return {kExitFailure, {}, j.dump()};
  }
  return {kExitFailure, {}, R"({"error":"internal","message":"unhandled command"})"};
}

}  // namespace permeable
