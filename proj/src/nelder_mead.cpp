// Adaptive Nelder-Mead simplex (dimension-dependent coefficients of Gao and Han).

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cascade_vqa/optimizer.hpp"
#include "optimizer_internal.hpp"

namespace cvqa::opt {

OptimResult minimize_nelder_mead(const CostFunction& cost, std::span<const double> x0,
                                 const OptimizerConfig& cfg) {
  cfg.validate(x0.size());
  detail::Evaluator eval(cost, cfg);
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  using Point = std::vector<double>;
  std::vector<Point> simplex(n + 1, Point(x0.begin(), x0.end()));
  std::vector<double> f(n + 1);
  try {
    f[0] = eval(simplex[0]);
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += cfg.initial_trust_radius;
      f[i + 1] = eval(simplex[i + 1]);
    }
    std::vector<std::size_t> order(n + 1);
    Point centroid(n);
    Point trial(n);
    auto point_at = [&](double t, const Point& worst) {
      Point p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (worst[j] - centroid[j]);
      return p;
    };
    for (;;) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second = order[n > 0 ? n - 1 : 0];

      double diameter = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          d2 += (simplex[i][j] - simplex[best][j]) * (simplex[i][j] - simplex[best][j]);
        }
        diameter = std::max(diameter, std::sqrt(d2));
      }
      const double spread = f[worst] - f[best];
      if (diameter <= cfg.final_trust_radius ||
          (spread < std::max(cfg.abs_tol, cfg.rel_tol * std::abs(f[best])) &&
           diameter <= cfg.initial_trust_radius * 1e-3)) {
        return eval.finish(StopReason::Tolerance, "simplex collapsed below tolerance", x0);
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dn;
      }

      const Point xr = point_at(-reflect, simplex[worst]);
      const double fr = eval(xr);
      if (fr < f[best]) {
        const Point xe = point_at(-reflect * expand, simplex[worst]);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          f[worst] = fe;
        } else {
          simplex[worst] = xr;
          f[worst] = fr;
        }
        continue;
      }
      if (fr < f[second]) {
        simplex[worst] = xr;
        f[worst] = fr;
        continue;
      }
      const bool outside = fr < f[worst];
      const Point xc = outside ? point_at(-reflect * contract, simplex[worst])
                               : point_at(contract, simplex[worst]);
      const double fc = eval(xc);
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = xc;
        f[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t j = 0; j < n; ++j) {
          simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
        }
        f[i] = eval(simplex[i]);
      }
    }
  } catch (const detail::Stop& stop) {
    return eval.finish(stop.reason, stop.message, x0);
  }
}

}  // namespace cvqa::opt
