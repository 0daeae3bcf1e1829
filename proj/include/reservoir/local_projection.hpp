#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace reservoir {

// Direct projections of future outcomes on currently observed shocks: one
// least-squares regression per horizon, y[t+h] on a constant and the shock
// row at t. Coefficients are responses per unit shock; pre-scale the shock
// columns by their standard deviations to read responses per one sigma.
struct LocalProjection {
  std::vector<Eigen::MatrixXd> beta;  // per horizon, shocks x outcomes
  std::vector<Eigen::MatrixXd> se;    // matching standard errors
  int horizons = 0;
  int T_used = 0;  // sample length at horizon 0
};

inline LocalProjection irf_local_projection(const Eigen::MatrixXd& outcomes,
                                            const Eigen::MatrixXd& shocks, int horizons) {
  int T = static_cast<int>(outcomes.rows());
  int k = static_cast<int>(outcomes.cols());
  int ms = static_cast<int>(shocks.cols());
  if (shocks.rows() != T)
    throw std::invalid_argument("irf_local_projection: outcomes and shocks must align by row");
  if (horizons < 0) throw std::invalid_argument("irf_local_projection: horizons must be nonnegative");
  if (T - horizons < ms + 2)
    throw std::invalid_argument("irf_local_projection: insufficient sample for the longest horizon");

  LocalProjection lp;
  lp.horizons = horizons;
  lp.T_used = T;
  lp.beta.reserve(horizons + 1);
  lp.se.reserve(horizons + 1);
  for (int h = 0; h <= horizons; ++h) {
    int n = T - h;
    Eigen::MatrixXd X(n, ms + 1);
    X.col(0).setOnes();
    X.rightCols(ms) = shocks.topRows(n);
    Eigen::MatrixXd Y = outcomes.bottomRows(n);  // rows h .. T-1, i.e. y[t+h]

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < ms + 1)
      throw std::runtime_error("irf_local_projection: shock regressors are collinear");
    Eigen::MatrixXd B = qr.solve(Y);
    Eigen::MatrixXd E = Y - X * B;

    Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(ms + 1, ms + 1));
    Eigen::MatrixXd se(ms, k);
    for (int j = 0; j < k; ++j) {
      double s2 = E.col(j).squaredNorm() / static_cast<double>(n - ms - 1);
      for (int i = 0; i < ms; ++i) se(i, j) = std::sqrt(s2 * xtx_inv(i + 1, i + 1));
    }
    lp.beta.push_back(B.bottomRows(ms));
    lp.se.push_back(se);
  }
  return lp;
}

}  // namespace reservoir
