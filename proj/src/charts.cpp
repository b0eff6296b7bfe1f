#include "permeable/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "permeable/error.hpp"
#include "permeable/random.hpp"

namespace permeable {

GraphFunction make_sine_graph(double amplitude, double frequency) {
  GraphFunction g;
  g.eval = [amplitude, frequency](std::span<const double> x) {
    return amplitude * std::sin(frequency * x[0]);
  };
  g.lipschitz = std::fabs(amplitude * frequency);
  g.name = "sine";
  return g;
}

GraphFunction make_abs_graph(double slope, std::vector<double> center) {
  GraphFunction g;
  g.eval = [slope, center = std::move(center)](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = i < center.size() ? center[i] : 0.0;
      s += (x[i] - c) * (x[i] - c);
    }
    return slope * std::sqrt(s);
  };
  g.lipschitz = std::fabs(slope);
  g.name = "abs";
  return g;
}

GraphFunction make_linear_graph(std::vector<double> coeffs, double offset) {
  double n2 = 0.0;
  for (double c : coeffs) n2 += c * c;
  GraphFunction g;
  g.eval = [coeffs = std::move(coeffs), offset](std::span<const double> x) {
    double s = offset;
    for (std::size_t i = 0; i < x.size() && i < coeffs.size(); ++i) s += coeffs[i] * x[i];
    return s;
  };
  g.lipschitz = std::sqrt(n2);
  g.name = "linear";
  return g;
}

bool ChartDomain::contains(const Point& y) const {
  switch (shape) {
    case Shape::whole_space:
      return true;
    case Shape::ball:
      return distance(y, center) < radius;
    case Shape::box:
      for (std::size_t i = 0; i < y.dim(); ++i)
        if (!(y[i] > lo[i] && y[i] < hi[i])) return false;
      return true;
    case Shape::half_space:
      return dot(normal, y) < offset;
  }
  return false;
}

bool ChartDomain::contains_closure(const Point& y, double tol) const {
  switch (shape) {
    case Shape::whole_space:
      return true;
    case Shape::ball:
      return distance(y, center) <= radius + tol;
    case Shape::box:
      for (std::size_t i = 0; i < y.dim(); ++i)
        if (y[i] < lo[i] - tol || y[i] > hi[i] + tol) return false;
      return true;
    case Shape::half_space:
      return dot(normal, y) <= offset + tol * norm(normal);
  }
  return false;
}

double ChartDomain::clearance(const Point& y) const {
  switch (shape) {
    case Shape::whole_space:
      return std::numeric_limits<double>::infinity();
    case Shape::ball:
      return std::max(0.0, radius - distance(y, center));
    case Shape::box: {
      double c = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < y.dim(); ++i) c = std::min({c, y[i] - lo[i], hi[i] - y[i]});
      return std::max(0.0, c);
    }
    case Shape::half_space:
      return std::max(0.0, (offset - dot(normal, y)) / norm(normal));
  }
  return 0.0;
}

double Chart::normal_part(const Point& y) const {
  double s = 0.0;
  for (std::size_t i = manifold_dim; i < y.dim(); ++i) s += y[i] * y[i];
  return std::sqrt(s);
}

namespace {

Eigen::VectorXd to_eigen(const Point& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.dim()));
  for (std::size_t i = 0; i < p.dim(); ++i) v(static_cast<Eigen::Index>(i)) = p[i];
  return v;
}

Point from_eigen(const Eigen::VectorXd& v) {
  std::vector<double> c(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) c[static_cast<std::size_t>(i)] = v(i);
  return Point(std::move(c));
}

// Orthonormal basis whose first column is `first` (normalized).
Eigen::MatrixXd basis_with_first(const Point& first) {
  const auto d = static_cast<Eigen::Index>(first.dim());
  Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(d, d);
  seed.col(0) = to_eigen(first).normalized();
  // Householder QR of [first | e_1 ... ] gives an orthonormal completion.
  Eigen::MatrixXd m(d, d + 1);
  m.col(0) = seed.col(0);
  m.rightCols(d) = Eigen::MatrixXd::Identity(d, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  if (q.col(0).dot(seed.col(0)) < 0) q.col(0) = -q.col(0);
  return q;
}

Chart affine_from(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::size_t m, ChartDomain domain,
                  std::string name) {
  const Eigen::MatrixXd ainv = a.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  Chart c;
  c.forward = [a, b](const Point& y) { return from_eigen(a * to_eigen(y) + b); };
  c.inverse = [ainv, b](const Point& x) { return from_eigen(ainv * (to_eigen(x) - b)); };
  c.domain = std::move(domain);
  c.lipschitz = std::max(smax, 1.0 / smin);
  c.manifold_dim = m;
  c.affine = true;
  c.name = std::move(name);
  return c;
}

}  // namespace

Chart make_affine_chart(const std::vector<std::vector<double>>& matrix, const Point& offset,
                        std::size_t manifold_dim, ChartDomain domain) {
  const std::size_t d = offset.dim();
  if (matrix.size() != d) throw Error(ErrorCode::dimension_mismatch, "chart matrix row count differs from dimension");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (matrix[i].size() != d) throw Error(ErrorCode::dimension_mismatch, "chart matrix must be square");
    for (std::size_t j = 0; j < d; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix[i][j];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::invalid_argument, "chart matrix is singular");
  if (manifold_dim < 1 || manifold_dim >= d)
    throw Error(ErrorCode::invalid_argument, "manifold dimension must lie in [1, d-1]");
  return affine_from(a, to_eigen(offset), manifold_dim, std::move(domain), "affine");
}

Chart make_hyperplane_chart(const Point& normal, double offset) {
  const double n = norm(normal);
  if (n == 0.0) throw Error(ErrorCode::invalid_argument, "zero hyperplane normal");
  const auto d = static_cast<Eigen::Index>(normal.dim());
  Eigen::MatrixXd q = basis_with_first(normal);
  // Columns 1..d-1 span the plane, column 0 is the normal; move it last.
  Eigen::MatrixXd a(d, d);
  a.leftCols(d - 1) = q.rightCols(d - 1);
  a.col(d - 1) = q.col(0);
  const Eigen::VectorXd b = to_eigen(normal) * (offset / (n * n));
  return affine_from(a, b, normal.dim() - 1, {}, "hyperplane");
}

Chart make_slit_chart(const Point& tip, const Point& direction, const Point& normal) {
  const auto d = static_cast<Eigen::Index>(tip.dim());
  const Eigen::VectorXd u = to_eigen(direction).normalized();
  const Eigen::VectorXd n = to_eigen(normal).normalized();
  Eigen::MatrixXd a(d, d);
  a.col(0) = u;
  a.col(d - 1) = n;
  if (d > 2) {
    Eigen::MatrixXd m(d, d + 2);
    m.col(0) = u;
    m.col(1) = n;
    m.rightCols(d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    a.middleCols(1, d - 2) = q.middleCols(2, d - 2);
  }
  ChartDomain dom;
  dom.shape = ChartDomain::Shape::half_space;
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  e[0] = -1.0;
  dom.normal = Point(e);
  dom.offset = 0.0;
  return affine_from(a, to_eigen(tip), tip.dim() - 1, dom, "slit");
}

Chart make_graph_chart(const GraphFunction& g, std::size_t dim, ChartDomain domain) {
  Chart c;
  c.forward = [g, dim](const Point& y) {
    std::vector<double> x(y.coords().begin(), y.coords().end());
    x[dim - 1] = y[dim - 1] + g(y.coords().first(dim - 1));
    return Point(std::move(x));
  };
  c.inverse = [g, dim](const Point& x) {
    std::vector<double> y(x.coords().begin(), x.coords().end());
    y[dim - 1] = x[dim - 1] - g(x.coords().first(dim - 1));
    return Point(std::move(y));
  };
  c.domain = std::move(domain);
  c.lipschitz = 1.0 + g.lipschitz;
  c.manifold_dim = dim - 1;
  c.affine = g.name == "linear";
  c.name = "graph";
  return c;
}

Chart make_circle_chart(const Point& center, double radius, const Point& near) {
  if (center.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "circle charts live in R^2");
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  const double theta0 = std::atan2(near[1] - center[1], near[0] - center[0]);
  Chart c;
  c.forward = [center, radius, theta0](const Point& y) {
    const double r = radius + y[1];
    const double a = theta0 + y[0];
    return Point{center[0] + r * std::cos(a), center[1] + r * std::sin(a)};
  };
  c.inverse = [center, radius, theta0](const Point& x) {
    const double dx = x[0] - center[0], dy = x[1] - center[1];
    double a = std::atan2(dy, dx) - theta0;
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return Point{a, std::hypot(dx, dy) - radius};
  };
  c.domain.shape = ChartDomain::Shape::box;
  c.domain.lo = Point{-std::numbers::pi / 2, -radius / 2};
  c.domain.hi = Point{std::numbers::pi / 2, radius / 2};
  c.lipschitz = std::max({1.5 * radius, 1.0, 2.0 / radius});
  c.manifold_dim = 1;
  c.name = "circle";
  return c;
}

double sampled_chart_lipschitz(const Chart& chart, std::size_t dim, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  auto draw = [&]() {
    switch (chart.domain.shape) {
      case ChartDomain::Shape::ball:
        return rng.in_ball(chart.domain.center, chart.domain.radius * 0.999);
      case ChartDomain::Shape::box:
        return rng.in_box(chart.domain.lo, chart.domain.hi);
      default:
        return rng.in_ball(Point::zeros(dim), 1.0);
    }
  };
  for (int i = 0; i < samples; ++i) {
    const Point u = draw();
    Point v = u + rng.unit_vector(dim) * (1e-3 * (1.0 + rng.uniform()));
    if (!chart.domain.contains(u) || !chart.domain.contains(v)) continue;
    const double dy = distance(u, v);
    const double dx = distance(chart.forward(u), chart.forward(v));
    if (dy > 0 && dx > 0) worst = std::max({worst, dx / dy, dy / dx});
  }
  return worst;
}

}  // namespace permeable
