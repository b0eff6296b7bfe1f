#include <algorithm>
#include <cmath>
#include <sstream>

#include "permeable/charts.hpp"
#include "permeable/error.hpp"
#include "permeable/io.hpp"

namespace permeable {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what,
                       ErrorCode code = ErrorCode::schema_violation) {
  throw Error(code, "field '" + where + "': " + what);
}

std::string sub(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

std::string idx(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const Json& object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  return j;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

double number_or(const Json& obj, std::string_view key, double fallback, const std::string& where) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? fallback : number(*it, sub(where, key));
}

const Json& required(const Json& obj, std::string_view key, const std::string& where) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) fail(sub(where, key), "required field is missing");
  return *it;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool boolean_or(const Json& obj, std::string_view key, bool fallback, const std::string& where) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(sub(where, key), "expected true or false");
  return it->get<bool>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], idx(where, i)));
  return out;
}

Point point_any(const Json& j, const std::string& where) {
  std::vector<double> c = numbers(j, where);
  if (c.empty()) fail(where, "a point needs at least one coordinate");
  return Point(std::move(c));
}

std::vector<Point> point_list(const Json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_point(j[i], d, idx(where, i)));
  return out;
}

std::string kind_of(const Json& j, const std::string& where) {
  const Json& k = required(j, "kind", where);
  if (!k.is_string()) fail(sub(where, "kind"), "expected a string");
  return k.get<std::string>();
}

const Json& params_of(const Json& j, const std::string& where) {
  static const Json empty = Json::object();
  const auto it = j.find("params");
  if (it == j.end()) return empty;
  return object(*it, sub(where, "params"));
}

HalfSpace half_space(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  require_keys(j, {"normal", "offset"}, where);
  return HalfSpace{parse_point(required(j, "normal", where), d, sub(where, "normal")),
                   number_or(j, "offset", 0.0, where)};
}

std::vector<HalfSpace> half_spaces(const Json& obj, std::size_t d, const std::string& where) {
  std::vector<HalfSpace> out;
  const auto it = obj.find("bounds");
  if (it == obj.end()) return out;
  const std::string w = sub(where, "bounds");
  if (!it->is_array()) fail(w, "expected an array of half-spaces");
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(half_space((*it)[i], d, idx(w, i)));
  return out;
}

ChartDomain chart_domain(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  require_keys(j, {"shape", "center", "radius", "lo", "hi", "normal", "offset"}, where);
  ChartDomain dom;
  const Json& shape = required(j, "shape", where);
  const std::string s = shape.is_string() ? shape.get<std::string>() : "";
  if (s == "whole_space") {
    dom.shape = ChartDomain::Shape::whole_space;
  } else if (s == "ball") {
    dom.shape = ChartDomain::Shape::ball;
    dom.center = parse_point(required(j, "center", where), d, sub(where, "center"));
    dom.radius = number(required(j, "radius", where), sub(where, "radius"));
  } else if (s == "box") {
    dom.shape = ChartDomain::Shape::box;
    dom.lo = parse_point(required(j, "lo", where), d, sub(where, "lo"));
    dom.hi = parse_point(required(j, "hi", where), d, sub(where, "hi"));
  } else if (s == "half_space") {
    dom.shape = ChartDomain::Shape::half_space;
    dom.normal = parse_point(required(j, "normal", where), d, sub(where, "normal"));
    dom.offset = number_or(j, "offset", 0.0, where);
  } else {
    fail(sub(where, "shape"), "expected whole_space, ball, box or half_space", ErrorCode::unknown_kind);
  }
  return dom;
}

GraphFunction graph_function(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  const std::string kind = kind_of(j, where);
  if (kind == "sine") {
    require_keys(j, {"kind", "amplitude", "frequency"}, where);
    return make_sine_graph(number_or(j, "amplitude", 1.0, where), number_or(j, "frequency", 1.0, where));
  }
  if (kind == "abs") {
    require_keys(j, {"kind", "slope", "center"}, where);
    std::vector<double> c(d - 1, 0.0);
    if (j.contains("center")) {
      const Point pc = parse_point(j["center"], d - 1, sub(where, "center"));
      c.assign(pc.coords().begin(), pc.coords().end());
    }
    return make_abs_graph(number_or(j, "slope", 1.0, where), std::move(c));
  }
  if (kind == "linear") {
    require_keys(j, {"kind", "coeffs", "offset"}, where);
    std::vector<double> c = numbers(required(j, "coeffs", where), sub(where, "coeffs"));
    if (c.size() != d - 1)
      fail(sub(where, "coeffs"), "expected " + std::to_string(d - 1) + " coefficients", ErrorCode::dimension_mismatch);
    return make_linear_graph(std::move(c), number_or(j, "offset", 0.0, where));
  }
  fail(sub(where, "kind"), "unknown graph kind '" + kind + "'", ErrorCode::unknown_kind);
}

Chart chart(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  const std::string kind = kind_of(j, where);
  Chart c;
  if (kind == "affine") {
    require_keys(j, {"kind", "matrix", "offset", "manifold_dim", "domain", "lipschitz"}, where);
    const Json& m = required(j, "matrix", where);
    const std::string mw = sub(where, "matrix");
    if (!m.is_array() || m.size() != d) fail(mw, "expected " + std::to_string(d) + " rows", ErrorCode::dimension_mismatch);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d; ++i) {
      rows.push_back(numbers(m[i], idx(mw, i)));
      if (rows.back().size() != d)
        fail(idx(mw, i), "expected " + std::to_string(d) + " entries", ErrorCode::dimension_mismatch);
    }
    const Point off = j.contains("offset") ? parse_point(j["offset"], d, sub(where, "offset")) : Point::zeros(d);
    const int m_dim = j.contains("manifold_dim") ? integer(j["manifold_dim"], sub(where, "manifold_dim"))
                                                 : static_cast<int>(d) - 1;
    if (m_dim < 1 || m_dim >= static_cast<int>(d))
      fail(sub(where, "manifold_dim"), "must lie in [1, d - 1]", ErrorCode::dimension_mismatch);
    const ChartDomain dom = j.contains("domain") ? chart_domain(j["domain"], d, sub(where, "domain")) : ChartDomain{};
    try {
      c = make_affine_chart(rows, off, static_cast<std::size_t>(m_dim), dom);
    } catch (const Error& e) {
      fail(mw, e.message());
    }
  } else if (kind == "hyperplane") {
    require_keys(j, {"kind", "normal", "offset", "lipschitz"}, where);
    c = make_hyperplane_chart(parse_point(required(j, "normal", where), d, sub(where, "normal")),
                              number_or(j, "offset", 0.0, where));
  } else if (kind == "circle") {
    if (d != 2) fail(sub(where, "kind"), "circle charts are planar", ErrorCode::dimension_mismatch);
    require_keys(j, {"kind", "center", "radius", "near", "lipschitz"}, where);
    const Point center = j.contains("center") ? parse_point(j["center"], d, sub(where, "center")) : Point::zeros(d);
    const double r = number_or(j, "radius", 1.0, where);
    if (!(r > 0.0)) fail(sub(where, "radius"), "must be positive");
    c = make_circle_chart(center, r, parse_point(required(j, "near", where), d, sub(where, "near")));
  } else if (kind == "graph") {
    require_keys(j, {"kind", "function", "domain", "lipschitz"}, where);
    const ChartDomain dom = j.contains("domain") ? chart_domain(j["domain"], d, sub(where, "domain")) : ChartDomain{};
    c = make_graph_chart(graph_function(required(j, "function", where), d, sub(where, "function")), d, dom);
  } else {
    fail(sub(where, "kind"), "unknown chart kind '" + kind + "'", ErrorCode::unknown_kind);
  }
  if (j.contains("lipschitz")) {
    // A declared constant must dominate the sampled bi-Lipschitz ratios.
    const double declared = number(j["lipschitz"], sub(where, "lipschitz"));
    const double seen = sampled_chart_lipschitz(c, d, 2000, 0);
    if (seen > declared * (1.0 + 1e-6))
      fail(sub(where, "lipschitz"), "declared constant " + std::to_string(declared) + " is below the sampled ratio " +
                                        std::to_string(seen));
    c.lipschitz = std::max(c.lipschitz, declared);
  }
  return c;
}

}  // namespace

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(sub(where, it.key()), "unknown key");
}

Point parse_point(const Json& j, std::size_t dimension, const std::string& where) {
  Point p = point_any(j, where);
  if (p.dim() != dimension)
    fail(where, "expected " + std::to_string(dimension) + " coordinates, got " + std::to_string(p.dim()),
         ErrorCode::dimension_mismatch);
  return p;
}

Polyline parse_polyline(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of points");
  const Point first = point_any(j[0], idx(where, 0));
  std::vector<Point> v = point_list(j, first.dim(), where);
  if (v.size() == 1) v.push_back(v.front());
  return Polyline(std::move(v));
}

ExceptionSet parse_exception_set(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  require_keys(j, {"kind", "params"}, where);
  const std::string kind = kind_of(j, where);
  const Json& p = params_of(j, where);
  const std::string pw = sub(where, "params");
  auto build = [&](Family f) -> ExceptionSet {
    try {
      return ExceptionSet(d, std::move(f));
    } catch (const Error& e) {
      fail(where, e.message(), e.code() == ErrorCode::dimension_mismatch ? ErrorCode::dimension_mismatch
                                                                      : ErrorCode::schema_violation);
    }
  };
  if (kind == "finite_points") {
    require_keys(p, {"points"}, pw);
    return build(family::FinitePoints{p.contains("points") ? point_list(p["points"], d, sub(pw, "points"))
                                                           : std::vector<Point>{}});
  }
  if (kind == "hyperplane") {
    require_keys(p, {"normal", "offset"}, pw);
    return build(family::Hyperplane{parse_point(required(p, "normal", pw), d, sub(pw, "normal")),
                                    number_or(p, "offset", 0.0, pw)});
  }
  if (kind == "arrangement") {
    require_keys(p, {"flats"}, pw);
    const Json& fl = required(p, "flats", pw);
    const std::string fw = sub(pw, "flats");
    if (!fl.is_array()) fail(fw, "expected an array");
    family::Arrangement a;
    for (std::size_t i = 0; i < fl.size(); ++i) {
      const std::string w = idx(fw, i);
      object(fl[i], w);
      require_keys(fl[i], {"normal", "offset", "bounds"}, w);
      a.flats.push_back(Flat{parse_point(required(fl[i], "normal", w), d, sub(w, "normal")),
                             number_or(fl[i], "offset", 0.0, w), half_spaces(fl[i], d, w)});
    }
    return build(std::move(a));
  }
  if (kind == "slit") {
    require_keys(p, {"tip", "direction", "normal", "closed"}, pw);
    family::Slit s;
    if (p.contains("tip")) s.tip = parse_point(p["tip"], d, sub(pw, "tip"));
    if (p.contains("direction")) s.direction = parse_point(p["direction"], d, sub(pw, "direction"));
    if (p.contains("normal")) s.normal = parse_point(p["normal"], d, sub(pw, "normal"));
    s.closed = boolean_or(p, "closed", false, pw);
    return build(std::move(s));
  }
  if (kind == "lipschitz_graph") {
    require_keys(p, {"function"}, pw);
    if (d < 2) fail(sub(where, "kind"), "graphs need dimension >= 2", ErrorCode::dimension_mismatch);
    return build(family::LipschitzGraph{graph_function(required(p, "function", pw), d, sub(pw, "function"))});
  }
  if (kind == "sphere" || kind == "circle") {
    require_keys(p, {"center", "radius", "bounds"}, pw);
    if (kind == "circle" && d != 2) fail(sub(where, "kind"), "a circle is planar", ErrorCode::dimension_mismatch);
    const Point c = p.contains("center") ? parse_point(p["center"], d, sub(pw, "center")) : Point::zeros(d);
    return build(family::Sphere{c, number_or(p, "radius", 1.0, pw), half_spaces(p, d, pw)});
  }
  if (kind == "chart_manifold") {
    require_keys(p, {"charts", "closed"}, pw);
    const Json& cs = required(p, "charts", pw);
    const std::string cw = sub(pw, "charts");
    if (!cs.is_array()) fail(cw, "expected an array of charts");
    family::ChartManifold m;
    for (std::size_t i = 0; i < cs.size(); ++i) m.charts.push_back(chart(cs[i], d, idx(cw, i)));
    m.closed = boolean_or(p, "closed", true, pw);
    return build(std::move(m));
  }
  if (kind == "cantor_set") {
    require_keys(p, {"start", "end"}, pw);
    Point start = Point::zeros(d), end = Point::zeros(d);
    end[0] = 1.0;
    if (p.contains("start")) start = parse_point(p["start"], d, sub(pw, "start"));
    if (p.contains("end")) end = parse_point(p["end"], d, sub(pw, "end"));
    return build(family::CantorSet{start, end});
  }
  if (kind == "rational_grid") {
    require_keys(p, {}, pw);
    return build(family::RationalGrid{});
  }
  if (kind == "irrational_square") {
    require_keys(p, {}, pw);
    return build(family::IrrationalSquare{});
  }
  if (kind == "topologist_sine") {
    require_keys(p, {"closure"}, pw);
    return build(family::TopologistSine{boolean_or(p, "closure", false, pw)});
  }
  if (kind == "isolated_cantor_d0") {
    require_keys(p, {"max_depth"}, pw);
    family::IsolatedCantorD0 f;
    if (p.contains("max_depth")) f.max_depth = integer(p["max_depth"], sub(pw, "max_depth"));
    return build(f);
  }
  fail(sub(where, "kind"), "unknown exception set kind '" + kind + "'", ErrorCode::unknown_kind);
}

FixtureFunction parse_function(const Json& j, std::size_t d, const std::string& where) {
  object(j, where);
  require_keys(j, {"kind", "params"}, where);
  const std::string kind = kind_of(j, where);
  const Json& p = params_of(j, where);
  const std::string pw = sub(where, "params");
  auto planar = [&] {
    if (d != 2) fail(sub(where, "kind"), "'" + kind + "' is planar", ErrorCode::dimension_mismatch);
  };
  FixtureFunction f;
  if (kind == "slit_arg") {
    planar();
    require_keys(p, {}, pw);
    f = make_slit_arg();
  } else if (kind == "slit_arg_quadratic") {
    planar();
    require_keys(p, {}, pw);
    f = make_slit_arg_quadratic();
  } else if (kind == "radial_piecewise") {
    planar();
    require_keys(p, {}, pw);
    f = make_radial_piecewise();
  } else if (kind == "linear") {
    require_keys(p, {"v"}, pw);
    f = make_linear(parse_point(required(p, "v", pw), d, sub(pw, "v")));
  } else if (kind == "cantor_staircase_1d") {
    if (d != 1) fail(sub(where, "kind"), "the staircase lives on the line", ErrorCode::dimension_mismatch);
    require_keys(p, {"depth"}, pw);
    const int depth = p.contains("depth") ? integer(p["depth"], sub(pw, "depth")) : 52;
    if (depth < 1 || depth > 60) fail(sub(pw, "depth"), "must lie in [1, 60]");
    f = make_cantor_staircase_fixture(depth);
  } else if (kind == "user_tabulated") {
    require_keys(p, {"xs", "ys", "values"}, pw);
    try {
      if (d == 1) {
        f = make_tabulated_1d(numbers(required(p, "xs", pw), sub(pw, "xs")),
                              numbers(required(p, "values", pw), sub(pw, "values")));
      } else if (d == 2) {
        const Json& v = required(p, "values", pw);
        const std::string vw = sub(pw, "values");
        if (!v.is_array()) fail(vw, "expected an array of rows");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(numbers(v[i], idx(vw, i)));
        f = make_tabulated_2d(numbers(required(p, "xs", pw), sub(pw, "xs")),
                              numbers(required(p, "ys", pw), sub(pw, "ys")), std::move(rows));
      } else {
        fail(sub(where, "kind"), "tabulated functions need dimension 1 or 2", ErrorCode::dimension_mismatch);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::invalid_argument) throw;
      fail(pw, e.message());
    }
  } else {
    fail(sub(where, "kind"), "unknown function kind '" + kind + "'", ErrorCode::unknown_kind);
  }
  if (f.dimension != d)
    fail(sub(where, "kind"), "function dimension differs from the scene", ErrorCode::dimension_mismatch);
  return f;
}

CBSet parse_cb_set(const Json& j, const std::string& where) {
  object(j, where);
  const std::string kind = kind_of(j, where);
  if (kind == "points") {
    require_keys(j, {"kind", "values"}, where);
    return make_points(numbers(required(j, "values", where), sub(where, "values")));
  }
  if (kind == "limit") {
    require_keys(j, {"kind", "p", "base", "law", "scale", "ratio", "shift"}, where);
    const double p = number(required(j, "p", where), sub(where, "p"));
    CBSet base = j.contains("base") ? parse_cb_set(j["base"], sub(where, "base")) : make_points({0.0});
    std::string law = "harmonic";
    if (j.contains("law")) {
      if (!j["law"].is_string()) fail(sub(where, "law"), "expected a string");
      law = j["law"].get<std::string>();
    }
    try {
      if (law == "harmonic") return make_limit(p, std::move(base), cb::Law::harmonic, number_or(j, "scale", 1.0, where));
      if (law == "geometric")
        return make_limit(p, std::move(base), cb::Law::geometric, number_or(j, "ratio", 0.5, where),
                          number_or(j, "shift", 3.0, where));
    } catch (const Error& e) {
      fail(where, e.message(), e.code());
    }
    fail(sub(where, "law"), "expected harmonic or geometric", ErrorCode::unknown_kind);
  }
  if (kind == "union") {
    require_keys(j, {"kind", "parts"}, where);
    const Json& parts = required(j, "parts", where);
    const std::string w = sub(where, "parts");
    if (!parts.is_array()) fail(w, "expected an array");
    std::vector<CBSet> out;
    for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(parse_cb_set(parts[i], idx(w, i)));
    try {
      return make_union(std::move(out));
    } catch (const Error& e) {
      fail(where, e.message(), e.code());
    }
  }
  if (kind == "perfect_core") {
    require_keys(j, {"kind", "start", "end"}, where);
    const double a = number_or(j, "start", 0.0, where), b = number_or(j, "end", 1.0, where);
    if (!(b > a)) fail(where, "end must exceed start");
    return make_cantor(a, b);
  }
  if (kind == "sk_family") {
    require_keys(j, {"kind", "k"}, where);
    const int k = integer(required(j, "k", where), sub(where, "k"));
    if (k < 0 || k >= kMaxNesting) fail(sub(where, "k"), "must lie in [0, " + std::to_string(kMaxNesting - 1) + "]");
    return make_sk(k);
  }
  fail(sub(where, "kind"), "unknown set kind '" + kind + "'", ErrorCode::unknown_kind);
}

Json to_json(const Point& p) { return Json(std::vector<double>(p.coords().begin(), p.coords().end())); }

Json to_json(const Polyline& p) {
  Json a = Json::array();
  for (const auto& v : p.vertices()) a.push_back(to_json(v));
  return a;
}

Json to_json(const CrossingReport& r) {
  Json j;
  j["classification"] = std::string(to_string(r.classification));
  Json pts = Json::array();
  for (const auto& c : r.crossings) pts.push_back(Json{{"param", c.param}, {"point", to_json(c.point)}});
  j["points"] = std::move(pts);
  Json runs = Json::array();
  for (const auto& [a, b] : r.runs) runs.push_back(Json::array({a, b}));
  j["runs"] = std::move(runs);
  j["evidence"] = r.evidence;
  return j;
}

std::string polyline_csv(const Polyline& p) {
  std::ostringstream out;
  out.precision(17);
  out << kCsvVersion << " path\n";
  for (std::size_t i = 0; i < p.dim(); ++i) out << (i ? "," : "") << 'x' << (i + 1);
  out << '\n';
  for (const auto& v : p.vertices()) {
    for (std::size_t i = 0; i < v.dim(); ++i) out << (i ? "," : "") << v[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace permeable
