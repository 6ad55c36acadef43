#ifndef PKS_GEOMETRY_HPP
#define PKS_GEOMETRY_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "pks/errors.hpp"
#include "pks/field.hpp"

namespace pks {

// Indicator geometry E described by a signed distance evaluator (> 0 inside),
// with its measure and the interface length P(E, Omega) (boundary portions on
// the domain boundary do not count).
struct Geometry {
  std::function<double(double, double)> signed_distance;
  double measure = 0.0;
  double perimeter = 0.0;

  // 1D finite union of disjoint intervals inside [0, L]; the perimeter counts
  // the endpoints strictly inside the domain.
  static Geometry intervals(const std::vector<std::pair<double, double>>& iv,
                            double domain_length) {
    for (const auto& [a, b] : iv)
      if (!(a < b)) throw invalid_parameter_error("geometry: empty interval");
    Geometry g;
    double meas = 0.0;
    double per = 0.0;
    for (const auto& [a, b] : iv) {
      meas += b - a;
      if (a > 0.0) per += 1.0;
      if (b < domain_length) per += 1.0;
    }
    g.measure = meas;
    g.perimeter = per;
    g.signed_distance = [iv](double x, double) {
      double best = -1e300;
      for (const auto& [a, b] : iv)
        best = std::max(best, std::min(x - a, b - x));
      return best;
    };
    return g;
  }

  static Geometry interval(double a, double b, double domain_length) {
    return intervals({{a, b}}, domain_length);
  }

  static Geometry disk(double cx, double cy, double r) {
    if (!(r > 0.0)) throw invalid_parameter_error("geometry: disk radius must be positive");
    Geometry g;
    g.measure = M_PI * r * r;
    g.perimeter = 2.0 * M_PI * r;
    g.signed_distance = [=](double x, double y) {
      return r - std::hypot(x - cx, y - cy);
    };
    return g;
  }

  // Axis-aligned ellipse with semi-axes ax, ay. The signed distance is the
  // first-order normalized algebraic distance, accurate near the boundary
  // where the mollified profiles live; the perimeter is computed by
  // quadrature of the arc length.
  static Geometry ellipse(double cx, double cy, double ax, double ay) {
    if (!(ax > 0.0 && ay > 0.0))
      throw invalid_parameter_error("geometry: ellipse semi-axes must be positive");
    Geometry g;
    g.measure = M_PI * ax * ay;
    const int n = 1 << 14;
    double per = 0.0;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * M_PI * (k + 0.5) / n;
      per += std::hypot(-ax * std::sin(th), ay * std::cos(th));
    }
    g.perimeter = per * 2.0 * M_PI / n;
    g.signed_distance = [=](double x, double y) {
      const double u = (x - cx) / ax, v = (y - cy) / ay;
      const double q = std::sqrt(u * u + v * v);
      if (q < 1e-12) return std::min(ax, ay);
      const double grad = std::hypot(u / ax, v / ay) / q;
      return (1.0 - q) / grad;
    };
    return g;
  }
};

}  // namespace pks

#endif
