#pragma once

// Interpolation KKT system of the quadratic model: for points xpt (rows),
//   W = [A  1  X; 1' 0 0; X' 0 0],  A_ij = (x_i . x_j)^2 / 2.

#include <Eigen/Dense>
#include <cmath>

namespace cvqa::opt::detail {

inline Eigen::MatrixXd kkt_matrix(const Eigen::MatrixXd& xpt) {
  const auto m = xpt.rows();
  const auto n = xpt.cols();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m + n + 1, m + n + 1);
  const Eigen::MatrixXd gram = xpt * xpt.transpose();
  w.topLeftCorner(m, m) = 0.5 * gram.array().square().matrix();
  w.block(0, m, m, 1).setOnes();
  w.block(m, 0, 1, m).setOnes();
  w.block(0, m + 1, m, n) = xpt;
  w.block(m + 1, 0, n, m) = xpt.transpose();
  return w;
}

/// Column of W belonging to a candidate point s.
inline Eigen::VectorXd kkt_column(const Eigen::MatrixXd& xpt, const Eigen::VectorXd& s) {
  const auto m = xpt.rows();
  Eigen::VectorXd w(m + xpt.cols() + 1);
  w.head(m) = 0.5 * (xpt * s).array().square().matrix();
  w(m) = 1.0;
  w.tail(xpt.cols()) = s;
  return w;
}

/// beta = |s|^4 / 2 - w' H w for the candidate column w.
inline double kkt_beta(const Eigen::VectorXd& s, const Eigen::VectorXd& w,
                       const Eigen::VectorXd& hw) {
  return 0.5 * s.squaredNorm() * s.squaredNorm() - w.dot(hw);
}

/// Rank-two update of H = W^{-1} when point t is replaced by the candidate with
/// column w (hw = H w). Returns false, leaving H untouched, if sigma vanishes.
inline bool powell_update(Eigen::MatrixXd& h, Eigen::Index t, const Eigen::VectorXd& hw,
                          double beta) {
  const double alpha = h(t, t);
  const double tau = hw(t);
  const double sigma = alpha * beta + tau * tau;
  if (sigma == 0.0 || !std::isfinite(sigma)) return false;
  Eigen::VectorXd v = -hw;
  v(t) += 1.0;
  const Eigen::VectorXd het = h.col(t);
  // H += (alpha v v' - beta e e' + tau (e v' + v e')) / sigma, with e = H e_t.
  const Eigen::VectorXd a = (alpha / sigma) * v + (tau / sigma) * het;
  const Eigen::VectorXd b = (tau / sigma) * v - (beta / sigma) * het;
  h.noalias() += v * a.transpose();
  h.noalias() += het * b.transpose();
  return true;
}

}  // namespace cvqa::opt::detail
