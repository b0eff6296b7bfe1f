#include "permeable/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "permeable/cb_rank.hpp"
#include "permeable/error.hpp"

namespace permeable {

std::string_view to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::slit_arg: return "slit_arg";
    case FixtureKind::slit_arg_quadratic: return "slit_arg_quadratic";
    case FixtureKind::radial_piecewise: return "radial_piecewise";
    case FixtureKind::linear: return "linear";
    case FixtureKind::cantor_staircase_1d: return "cantor_staircase_1d";
    case FixtureKind::user_tabulated: return "user_tabulated";
  }
  return "unknown";
}

double FixtureFunction::operator()(const Point& x) const {
  if (x.dim() != dimension) throw Error(ErrorCode::dimension_mismatch, "fixture evaluated at a point of wrong dimension");
  return eval(x);
}

double principal_arg(const Point& x) {
  const double y = x[1] == 0.0 ? 0.0 : x[1];
  return std::atan2(y, x[0]);
}

FixtureFunction make_slit_arg() {
  FixtureFunction f;
  f.kind = FixtureKind::slit_arg;
  f.eval = [](const Point& x) { return norm(x) * principal_arg(x); };
  f.continuous = false;
  f.exception_set = make_slit(false);
  f.box_lo = Point{-2.0, -2.0};
  f.box_hi = Point{2.0, 2.0};
  return f;
}

FixtureFunction make_slit_arg_quadratic() {
  FixtureFunction f = make_slit_arg();
  f.kind = FixtureKind::slit_arg_quadratic;
  f.eval = [](const Point& x) { return dot(x, x) * principal_arg(x); };
  return f;
}

FixtureFunction make_radial_piecewise() {
  FixtureFunction f;
  f.kind = FixtureKind::radial_piecewise;
  f.eval = [](const Point& x) {
    const double r = norm(x);
    return r <= 1.0 ? 1.0 - r : std::sin(1.0 - r);
  };
  f.lipschitz = 1.0;
  f.exception_set = ExceptionSet(2, family::Sphere{Point{0.0, 0.0}, 1.0, {}});
  f.box_lo = Point{-2.0, -2.0};
  f.box_hi = Point{2.0, 2.0};
  return f;
}

FixtureFunction make_linear(const Point& v) {
  FixtureFunction f;
  f.kind = FixtureKind::linear;
  f.dimension = v.dim();
  f.eval = [v](const Point& x) { return dot(v, x); };
  f.lipschitz = norm(v);
  f.box_lo = Point(std::vector<double>(v.dim(), -2.0));
  f.box_hi = Point(std::vector<double>(v.dim(), 2.0));
  return f;
}

FixtureFunction make_cantor_staircase_fixture(int depth) {
  FixtureFunction f;
  f.kind = FixtureKind::cantor_staircase_1d;
  f.dimension = 1;
  f.eval = [depth](const Point& x) { return cantor_staircase(std::clamp(x[0], 0.0, 1.0), depth); };
  // Constant on every gap: 0-Lipschitz for the intrinsic metric off the Cantor set.
  f.lipschitz = 0.0;
  f.exception_set = ExceptionSet(1, family::CantorSet{Point{0.0}, Point{1.0}});
  f.box_lo = Point{0.0};
  f.box_hi = Point{1.0};
  return f;
}

FixtureFunction make_tabulated_1d(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw Error(ErrorCode::invalid_argument, "tabulated function needs matching abscissae and values");
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i])) throw Error(ErrorCode::invalid_argument, "abscissae must increase strictly");
    lip = std::max(lip, std::fabs(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  }
  FixtureFunction f;
  f.kind = FixtureKind::user_tabulated;
  f.dimension = 1;
  f.box_lo = Point{xs.front()};
  f.box_hi = Point{xs.back()};
  f.eval = [xs = std::move(xs), ys = std::move(ys)](const Point& p) {
    const double x = std::clamp(p[0], xs.front(), xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.end() ? xs.size() - 2 : static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
  };
  f.lipschitz = lip;
  return f;
}

FixtureFunction make_tabulated_2d(std::vector<double> xs, std::vector<double> ys,
                                  std::vector<std::vector<double>> values) {
  if (xs.size() < 2 || ys.size() < 2 || values.size() != xs.size())
    throw Error(ErrorCode::invalid_argument, "tabulated grid needs at least 2 x 2 values");
  for (const auto& row : values)
    if (row.size() != ys.size()) throw Error(ErrorCode::invalid_argument, "tabulated grid rows must match ys");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i + 1] > xs[i])) throw Error(ErrorCode::invalid_argument, "xs must increase strictly");
  for (std::size_t j = 0; j + 1 < ys.size(); ++j)
    if (!(ys[j + 1] > ys[j])) throw Error(ErrorCode::invalid_argument, "ys must increase strictly");
  // On each cell the gradient norm is maximal at a corner of the cell.
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double hx = xs[i + 1] - xs[i], hy = ys[j + 1] - ys[j];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double gx = (values[i + 1][j + b] - values[i][j + b]) / hx;
          const double gy = (values[i + a][j + 1] - values[i + a][j]) / hy;
          lip = std::max(lip, std::hypot(gx, gy));
        }
    }
  FixtureFunction f;
  f.kind = FixtureKind::user_tabulated;
  f.dimension = 2;
  f.box_lo = Point{xs.front(), ys.front()};
  f.box_hi = Point{xs.back(), ys.back()};
  f.eval = [xs = std::move(xs), ys = std::move(ys), v = std::move(values)](const Point& p) {
    auto locate = [](const std::vector<double>& g, double x, double& t) {
      x = std::clamp(x, g.front(), g.back());
      auto it = std::upper_bound(g.begin(), g.end(), x);
      std::size_t i = it == g.end() ? g.size() - 2 : static_cast<std::size_t>(it - g.begin()) - 1;
      t = (x - g[i]) / (g[i + 1] - g[i]);
      return i;
    };
    double tx, ty;
    const std::size_t i = locate(xs, p[0], tx), j = locate(ys, p[1], ty);
    return (1 - tx) * (1 - ty) * v[i][j] + tx * (1 - ty) * v[i + 1][j] + (1 - tx) * ty * v[i][j + 1] +
           tx * ty * v[i + 1][j + 1];
  };
  f.lipschitz = lip;
  return f;
}

}  // namespace permeable
