// Quadratic-interpolation trust-region minimizer in the style of Powell's NEWUOA:
// 2n+1 interpolation points, least-Frobenius-norm model updates and an explicitly
// maintained inverse of the interpolation KKT matrix.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cascade_vqa/optimizer.hpp"
#include "newuoa_kkt.hpp"
#include "optimizer_internal.hpp"

namespace cvqa::opt {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Interval between from-scratch refactorizations of the KKT inverse.
constexpr int kRefreshInterval = 250;

class Newuoa {
 public:
  Newuoa(detail::Evaluator& eval, std::span<const double> x0, const OptimizerConfig& cfg)
      : eval_(eval),
        cfg_(cfg),
        n_(static_cast<int>(x0.size())),
        m_(2 * n_ + 1),
        x0_(Eigen::Map<const VectorXd>(x0.data(), n_)),
        xpt_(MatrixXd::Zero(m_, n_)),
        fval_(VectorXd::Zero(m_)),
        gq_(VectorXd::Zero(n_)),
        hq_(MatrixXd::Zero(n_, n_)),
        pq_(VectorXd::Zero(m_)),
        h_(MatrixXd::Zero(m_ + n_ + 1, m_ + n_ + 1)) {}

  StopReason run(std::string& message) {
    rho_ = cfg_.initial_trust_radius;
    delta_ = rho_;
    initialize();
    double level_start = fopt();
    long level_evals = evals_;
    int stalled_levels = 0;
    int knew_geometry = -1;

    for (;;) {
      if (xopt().squaredNorm() > 1e3 * delta_ * delta_) shift_base();
      if (++since_refresh_ >= kRefreshInterval) refresh_inverse();

      if (knew_geometry >= 0) {
        geometry_step(knew_geometry);
        knew_geometry = -1;
        continue;
      }

      const VectorXd xo = xopt();
      const VectorXd gopt = gq_ + hess_vec(xo);
      const VectorXd d = trust_region_step(gopt, delta_);
      const double dnorm = d.norm();

      bool reduce = false;
      if (dnorm < 0.5 * rho_) {
        delta_ = 0.1 * delta_;
        if (delta_ <= 1.5 * rho_) delta_ = rho_;
        const auto [k, dist2] = farthest_point();
        if (dist2 > 4.0 * delta_ * delta_) {
          knew_geometry = k;
          continue;
        }
        reduce = true;
      } else {
        const double vquad = gopt.dot(d) + 0.5 * d.dot(hess_vec(d));
        const double fo = fopt();
        const VectorXd s = xo + d;
        const double fnew = evaluate(s);
        const double ratio = vquad < 0.0 ? (fnew - fo) / vquad : -1.0;

        if (ratio <= 0.1) {
          delta_ = 0.5 * dnorm;
        } else if (ratio <= 0.7) {
          delta_ = std::max(0.5 * delta_, dnorm);
        } else {
          delta_ = std::max(0.5 * delta_, 2.0 * dnorm);
        }
        if (delta_ <= 1.5 * rho_) delta_ = rho_;

        include_point(s, fnew, fnew - fo - vquad, xo, /*from_trust_region=*/true);

        if (ratio >= 0.1) continue;
        const auto [k, dist2] = farthest_point();
        if (dist2 > 4.0 * delta_ * delta_) {
          knew_geometry = k;
          continue;
        }
        if (ratio > 0.0 || std::max(delta_, dnorm) > rho_) continue;
        reduce = true;
      }

      if (reduce) {
        if (rho_ <= cfg_.final_trust_radius) {
          message = "trust radius reached its final value";
          return StopReason::Tolerance;
        }
        // Levels that never evaluated a step carry no evidence of convergence.
        if (evals_ > level_evals) {
          const double gain = level_start - fopt();
          const bool stalled = gain < std::max(cfg_.abs_tol, cfg_.rel_tol * std::abs(fopt()));
          stalled_levels = stalled ? stalled_levels + 1 : 0;
          if (stalled_levels >= 2) {
            message = "improvement over two trust-region cycles below tolerance";
            return StopReason::Tolerance;
          }
        }
        level_start = fopt();
        level_evals = evals_;
        const double ratio = rho_ / cfg_.final_trust_radius;
        const double rho_new = ratio <= 16.0    ? cfg_.final_trust_radius
                               : ratio <= 250.0 ? std::sqrt(ratio) * cfg_.final_trust_radius
                                                : 0.1 * rho_;
        delta_ = std::max(0.5 * rho_, rho_new);
        rho_ = rho_new;
      }
    }
  }

 private:
  VectorXd xopt() const { return xpt_.row(kopt_).transpose(); }
  double fopt() const { return fval_(kopt_); }

  double evaluate(const VectorXd& s) {
    const VectorXd x = x0_ + s;
    ++evals_;
    return eval_(std::span<const double>(x.data(), static_cast<std::size_t>(n_)));
  }

  VectorXd hess_vec(const VectorXd& v) const {
    return hq_ * v + xpt_.transpose() * (pq_.array() * (xpt_ * v).array()).matrix();
  }

  void initialize() {
    fval_(0) = evaluate(xpt_.row(0).transpose());
    for (int i = 0; i < n_; ++i) {
      xpt_(2 * i + 1, i) = rho_;
      fval_(2 * i + 1) = evaluate(xpt_.row(2 * i + 1).transpose());
      xpt_(2 * i + 2, i) = -rho_;
      fval_(2 * i + 2) = evaluate(xpt_.row(2 * i + 2).transpose());
    }
    for (int i = 0; i < n_; ++i) {
      const double fp = fval_(2 * i + 1);
      const double fm = fval_(2 * i + 2);
      gq_(i) = (fp - fm) / (2.0 * rho_);
      hq_(i, i) = (fp + fm - 2.0 * fval_(0)) / (rho_ * rho_);
    }
    fval_.minCoeff(&kopt_);
    refresh_inverse();
  }

  // Recomputes H = W^{-1} from the current points, scaling the blocks to O(1).
  void refresh_inverse() {
    since_refresh_ = 0;
    const int dim = m_ + n_ + 1;
    const MatrixXd w = detail::kkt_matrix(xpt_);

    const double scale = std::max(rho_, 1e-300);
    VectorXd dscale(dim);
    dscale.head(m_).setConstant(1.0 / (scale * scale));
    dscale(m_) = scale * scale;
    dscale.tail(n_).setConstant(scale);
    const MatrixXd scaled = dscale.asDiagonal() * w * dscale.asDiagonal();
    h_ = dscale.asDiagonal() * scaled.partialPivLu().inverse() * dscale.asDiagonal();
  }

  VectorXd kkt_column(const VectorXd& s) const { return detail::kkt_column(xpt_, s); }

  // Replaces interpolation point t with s, updating H (Powell's rank-two
  // formula), the model (least-Frobenius change fixing the residual at s) and kopt.
  void replace(int t, const VectorXd& s, double fnew, double residual,
               const VectorXd& hw, double beta) {
    hq_.noalias() += pq_(t) * xpt_.row(t).transpose() * xpt_.row(t);
    pq_(t) = 0.0;
    detail::powell_update(h_, t, hw, beta);

    xpt_.row(t) = s.transpose();
    fval_(t) = fnew;
    pq_ += residual * h_.col(t).head(m_);
    gq_ += residual * h_.col(t).tail(n_);
    fval_.minCoeff(&kopt_);
  }

  void include_point(const VectorXd& s, double fnew, double residual, const VectorXd& xo,
                     bool from_trust_region) {
    const VectorXd w = kkt_column(s);
    const VectorXd hw = h_ * w;
    const double beta = detail::kkt_beta(s, w, hw);
    const bool improved = fnew < fopt();
    int best = -1;
    double best_score = 0.0;
    for (int t = 0; t < m_; ++t) {
      if (!improved && t == kopt_) continue;
      const double sigma = h_(t, t) * beta + hw(t) * hw(t);
      double weight = 1.0;
      if (from_trust_region) {
        const double dsq = (xpt_.row(t).transpose() - xo).squaredNorm();
        if (dsq > rho_ * rho_) weight = std::pow(dsq / (rho_ * rho_), 3);
      }
      const double score = weight * std::abs(sigma);
      if (score > best_score) {
        best_score = score;
        best = t;
      }
    }
    if (best < 0) return;
    const double sigma = h_(best, best) * beta + hw(best) * hw(best);
    if (!(std::abs(sigma) > 1e-14 * (1.0 + std::abs(h_(best, best) * beta)))) return;
    replace(best, s, fnew, residual, hw, beta);
  }

  std::pair<int, double> farthest_point() const {
    const VectorXd xo = xopt();
    int k = kopt_;
    double best = -1.0;
    for (int t = 0; t < m_; ++t) {
      const double d2 = (xpt_.row(t).transpose() - xo).squaredNorm();
      if (d2 > best) {
        best = d2;
        k = t;
      }
    }
    return {k, best};
  }

  // Moves point k to a nearby position where its Lagrange function, and hence
  // the denominator of the H update, is large.
  void geometry_step(int k) {
    const VectorXd xo = xopt();
    const double dist = (xpt_.row(k).transpose() - xo).norm();
    const double step = std::max(std::min(0.1 * dist, 0.5 * delta_), rho_);

    const VectorXd lambda = h_.col(k).head(m_);
    const VectorXd glag = h_.col(k).tail(n_) + xpt_.transpose() * (lambda.array() * (xpt_ * xo).array()).matrix();
    std::vector<VectorXd> directions;
    if (glag.norm() > 0.0) directions.push_back(glag.normalized());
    const VectorXd toward = xpt_.row(k).transpose() - xo;
    if (toward.norm() > 0.0) directions.push_back(toward.normalized());

    VectorXd best_d = VectorXd::Zero(n_);
    double best_sigma = -1.0;
    for (const auto& dir : directions) {
      for (double sign : {1.0, -1.0}) {
        const VectorXd d = sign * step * dir;
        const VectorXd s = xo + d;
        const VectorXd w = kkt_column(s);
        const VectorXd hw = h_ * w;
        const double beta = detail::kkt_beta(s, w, hw);
        const double sigma = std::abs(h_(k, k) * beta + hw(k) * hw(k));
        if (sigma > best_sigma) {
          best_sigma = sigma;
          best_d = d;
        }
      }
    }
    if (best_sigma <= 0.0) return;

    const VectorXd gopt = gq_ + hess_vec(xo);
    const double vquad = gopt.dot(best_d) + 0.5 * best_d.dot(hess_vec(best_d));
    const VectorXd s = xo + best_d;
    const double fo = fopt();
    const double fnew = evaluate(s);
    const VectorXd w = kkt_column(s);
    const VectorXd hw = h_ * w;
    const double beta = detail::kkt_beta(s, w, hw);
    replace(k, s, fnew, fnew - fo - vquad, hw, beta);
  }

  // Truncated conjugate gradient on the model inside the ball |d| <= radius.
  VectorXd trust_region_step(const VectorXd& g, double radius) const {
    VectorXd d = VectorXd::Zero(n_);
    VectorXd r = -g;
    VectorXd p = r;
    double rr = r.squaredNorm();
    const double stop = 1e-20 * std::max(rr, 1e-300);
    if (rr == 0.0) return d;
    for (int it = 0; it < n_; ++it) {
      const VectorXd gp = hess_vec(p);
      const double pgp = p.dot(gp);
      if (pgp <= 0.0) return d + boundary_tau(d, p, radius) * p;
      const double alpha = rr / pgp;
      if ((d + alpha * p).norm() >= radius) return d + boundary_tau(d, p, radius) * p;
      d += alpha * p;
      r -= alpha * gp;
      const double rr_next = r.squaredNorm();
      if (rr_next <= stop) break;
      p = r + (rr_next / rr) * p;
      rr = rr_next;
    }
    return d;
  }

  static double boundary_tau(const VectorXd& d, const VectorXd& p, double radius) {
    const double a = p.squaredNorm();
    const double b = 2.0 * d.dot(p);
    const double c = d.squaredNorm() - radius * radius;
    return (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
  }

  void shift_base() {
    const VectorXd s = xopt();
    gq_ += hess_vec(s);
    const VectorXd v_sum = xpt_.transpose() * pq_ - pq_.sum() * s;  // sum pq_j (xpt_j - s)
    hq_ += s * v_sum.transpose() + v_sum * s.transpose() + pq_.sum() * s * s.transpose();
    xpt_.rowwise() -= s.transpose();
    x0_ += s;
    refresh_inverse();
  }

  detail::Evaluator& eval_;
  const OptimizerConfig& cfg_;
  int n_;
  int m_;
  VectorXd x0_;
  long evals_ = 0;
  MatrixXd xpt_;
  VectorXd fval_;
  VectorXd gq_;
  MatrixXd hq_;
  VectorXd pq_;
  MatrixXd h_;
  int kopt_ = 0;
  double rho_ = 0.0;
  double delta_ = 0.0;
  int since_refresh_ = 0;
};

}  // namespace

OptimResult minimize_newuoa(const CostFunction& cost, std::span<const double> x0,
                            const OptimizerConfig& cfg) {
  cfg.validate(x0.size());
  detail::Evaluator eval(cost, cfg);
  if (x0.empty()) {
    try {
      eval(x0);
    } catch (const detail::Stop& stop) {
      return eval.finish(stop.reason, stop.message, x0);
    }
    return eval.finish(StopReason::Tolerance, "zero-dimensional problem", x0);
  }
  Newuoa solver(eval, x0, cfg);
  try {
    std::string message;
    const StopReason reason = solver.run(message);
    return eval.finish(reason, message, x0);
  } catch (const detail::Stop& stop) {
    return eval.finish(stop.reason, stop.message, x0);
  }
}

}  // namespace cvqa::opt
