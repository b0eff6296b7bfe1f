#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permeable/exception_set.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

enum class FixtureKind { slit_arg, slit_arg_quadratic, radial_piecewise, linear, cantor_staircase_1d, user_tabulated };

std::string_view to_string(FixtureKind k);

/// Test function with its declared exception set, Lipschitz constant and
/// continuity on the whole space.
struct FixtureFunction {
  FixtureKind kind = FixtureKind::linear;
  std::size_t dimension = 2;
  std::function<double(const Point&)> eval;
  bool continuous = true;
  std::optional<double> lipschitz;
  std::optional<ExceptionSet> exception_set;
  Point box_lo, box_hi;  // default sampling box

  double operator()(const Point& x) const;
};

/// arg in (-pi, pi]; a negative zero second coordinate counts as zero.
double principal_arg(const Point& x);

/// |x| arg(x), discontinuous across the negative real axis.
FixtureFunction make_slit_arg();
/// |x|^2 arg(x), only locally intrinsically Lipschitz.
FixtureFunction make_slit_arg_quadratic();
/// 1 - |x| inside the unit circle, sin(1 - |x|) outside.
FixtureFunction make_radial_piecewise();
/// <v, x>
FixtureFunction make_linear(const Point& v);
/// Devil's staircase on [0, 1] with the Cantor set as exception set.
FixtureFunction make_cantor_staircase_fixture(int depth = 52);
/// Piecewise-linear interpolation of (xs, ys); xs strictly increasing.
FixtureFunction make_tabulated_1d(std::vector<double> xs, std::vector<double> ys);
/// Bilinear interpolation on the grid xs x ys with values[i][j] = f(xs[i], ys[j]).
FixtureFunction make_tabulated_2d(std::vector<double> xs, std::vector<double> ys,
                                  std::vector<std::vector<double>> values);

}  // namespace permeable
