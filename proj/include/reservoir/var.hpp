#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace reservoir {

// Reduced-form vector autoregression fit by equationwise least squares, with
// BIC order selection over a common effective sample so the criteria are
// comparable across lag lengths.
struct VarModel {
  int p = 0;                          // lag order
  Eigen::VectorXd c;                  // intercepts
  std::vector<Eigen::MatrixXd> A;     // lag coefficient matrices
  Eigen::MatrixXd Sigma;              // innovation covariance
  std::vector<std::string> names;     // variable labels
  int T_eff = 0;                      // rows used in the fit
  double bic = 0.0;
  std::vector<double> bic_by_lag;     // populated by order selection

  int k() const { return static_cast<int>(c.size()); }
};

namespace detail {

inline std::string lag_label(const std::vector<std::string>& names, int k, int col) {
  if (col == 0) return "const";
  int lag = (col - 1) / k + 1, var = (col - 1) % k;
  std::string base = var < static_cast<int>(names.size()) ? names[var]
                                                          : "y" + std::to_string(var);
  return base + "[t-" + std::to_string(lag) + "]";
}

// Log determinant with eigenvalues floored away from zero, so that a
// covariance that is singular up to numerical dust still yields a finite,
// stable criterion value.
inline double clamped_logdet(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  double top = std::max(es.eigenvalues().maxCoeff(), 1.0);
  double floor = 1e-12 * top;
  double out = 0.0;
  for (int i = 0; i < S.rows(); ++i) out += std::log(std::max(es.eigenvalues()[i], floor));
  return out;
}

// Cholesky factor of a positive semidefinite matrix in the given variable
// order. Pivots smaller than tol times the largest diagonal are treated as
// exact zeros, which keeps directions of numerically zero variance out of
// the orthogonalized innovations instead of corrupting them.
inline Eigen::MatrixXd semidefinite_cholesky(const Eigen::MatrixXd& S, double tol = 1e-10) {
  int k = static_cast<int>(S.rows());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
  double scale = std::max(S.diagonal().maxCoeff(), 0.0);
  for (int j = 0; j < k; ++j) {
    double d = S(j, j) - L.row(j).head(j).squaredNorm();
    if (d <= tol * scale) continue;  // numerically zero variance direction
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < k; ++i)
      L(i, j) = (S(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
  }
  return L;
}

}  // namespace detail

// Fit a VAR(p) on rows [offset, T) of the data. offset >= p allows a common
// estimation sample across candidate orders.
inline VarModel fit_var_fixed(const Eigen::MatrixXd& data, int p,
                              const std::vector<std::string>& names = {}, int offset = -1) {
  int T = static_cast<int>(data.rows()), k = static_cast<int>(data.cols());
  if (p < 1) throw std::invalid_argument("fit_var: lag order must be positive");
  if (offset < 0) offset = p;
  if (offset < p) throw std::invalid_argument("fit_var: offset must be at least the lag order");
  int T_eff = T - offset, ncol = 1 + k * p;
  if (T_eff < ncol + 1)
    throw std::invalid_argument("fit_var: insufficient sample for the requested lag order");

  Eigen::MatrixXd X(T_eff, ncol), Y(T_eff, k);
  for (int t = 0; t < T_eff; ++t) {
    X(t, 0) = 1.0;
    for (int l = 1; l <= p; ++l)
      X.block(t, 1 + (l - 1) * k, 1, k) = data.row(offset + t - l);
    Y.row(t) = data.row(offset + t);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < ncol) {
    std::string cols;
    const auto& perm = qr.colsPermutation().indices();
    for (int j = qr.rank(); j < ncol; ++j)
      cols += (cols.empty() ? "" : ", ") + detail::lag_label(names, k, perm[j]);
    throw std::runtime_error("fit_var: collinear regressors: " + cols);
  }
  Eigen::MatrixXd B = qr.solve(Y);
  Eigen::MatrixXd E = Y - X * B;

  VarModel m;
  m.p = p;
  m.c = B.row(0).transpose();
  for (int l = 0; l < p; ++l) m.A.push_back(B.middleRows(1 + l * k, k).transpose());
  m.Sigma = E.transpose() * E / static_cast<double>(T_eff);
  m.names = names.empty() ? std::vector<std::string>(k, "") : names;
  if (names.empty())
    for (int j = 0; j < k; ++j) m.names[j] = "y" + std::to_string(j);
  m.T_eff = T_eff;
  m.bic = detail::clamped_logdet(m.Sigma) +
          std::log(static_cast<double>(T_eff)) / T_eff * (k * ncol);
  return m;
}

// BIC order selection over 1..max_lag, every candidate fit on the sample that
// starts at max_lag.
inline VarModel fit_var(const Eigen::MatrixXd& data, int max_lag,
                        const std::vector<std::string>& names = {}) {
  if (max_lag < 1) throw std::invalid_argument("fit_var: max_lag must be positive");
  VarModel best;
  std::vector<double> bics;
  for (int p = 1; p <= max_lag; ++p) {
    VarModel m = fit_var_fixed(data, p, names, max_lag);
    bics.push_back(m.bic);
    if (p == 1 || m.bic < best.bic) best = m;
  }
  best.bic_by_lag = bics;
  return best;
}

inline Eigen::MatrixXd companion_matrix(const VarModel& m) {
  int k = m.k(), kp = k * m.p;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(kp, kp);
  for (int l = 0; l < m.p; ++l) F.block(0, l * k, k, k) = m.A[l];
  if (m.p > 1) F.block(k, 0, kp - k, kp - k).setIdentity();
  return F;
}

inline double spectral_radius(const VarModel& m) {
  return companion_matrix(m).eigenvalues().cwiseAbs().maxCoeff();
}

inline bool is_stable(const VarModel& m) { return spectral_radius(m) < 1.0; }

// Orthogonalized impulse responses: entry [h](i, j) is the response of
// variable i, h periods after a one standard deviation innovation in the
// j-th orthogonalized shock under the recursive ordering of the data.
inline std::vector<Eigen::MatrixXd> irf_var(const VarModel& m, int horizon) {
  if (horizon < 0) throw std::invalid_argument("irf_var: horizon must be nonnegative");
  int k = m.k();
  Eigen::MatrixXd L = detail::semidefinite_cholesky(m.Sigma);
  std::vector<Eigen::MatrixXd> psi(horizon + 1);
  psi[0] = Eigen::MatrixXd::Identity(k, k);
  for (int h = 1; h <= horizon; ++h) {
    psi[h] = Eigen::MatrixXd::Zero(k, k);
    for (int l = 1; l <= std::min(h, m.p); ++l) psi[h] += m.A[l - 1] * psi[h - l];
  }
  for (auto& P : psi) P = Eigen::MatrixXd(P * L);
  return psi;
}

struct FevdResult {
  Eigen::MatrixXd shares;  // row = variable, column = shock innovation
  int horizon = 0;
  bool converged = true;
};

// Forecast error variance shares at a fixed horizon. Rows sum to one.
inline FevdResult fevd(const VarModel& m, int horizon) {
  if (horizon < 1) throw std::invalid_argument("fevd: horizon must be positive");
  int k = m.k();
  auto theta = irf_var(m, horizon - 1);
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(k, k);
  for (int h = 0; h < horizon; ++h) num += theta[h].cwiseProduct(theta[h]);
  FevdResult out;
  out.shares.resize(k, k);
  out.horizon = horizon;
  for (int i = 0; i < k; ++i) {
    double total = num.row(i).sum();
    if (!(total > 0.0))
      throw std::runtime_error("fevd: zero forecast variance for variable " + m.names[i]);
    out.shares.row(i) = num.row(i) / total;
  }
  return out;
}

// Long-run shares: the horizon is grown until every share moves less than
// step_tol per period, which requires a covariance stationary model. The
// moving-average terms are accumulated incrementally.
inline FevdResult fevd_unconditional(const VarModel& m, double step_tol = 1e-6,
                                     int max_horizon = 5000) {
  if (!is_stable(m))
    throw std::runtime_error("fevd: model is not covariance stationary, no long-run shares");
  int k = m.k();
  Eigen::MatrixXd L = detail::semidefinite_cholesky(m.Sigma);
  std::vector<Eigen::MatrixXd> psi;  // plain moving-average weights, newest last
  psi.push_back(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd theta = psi.back() * L;
  Eigen::MatrixXd num = theta.cwiseProduct(theta);

  auto shares_of = [&](const Eigen::MatrixXd& acc) {
    Eigen::MatrixXd s(k, k);
    for (int i = 0; i < k; ++i) {
      double total = acc.row(i).sum();
      if (!(total > 0.0))
        throw std::runtime_error("fevd: zero forecast variance for variable " + m.names[i]);
      s.row(i) = acc.row(i) / total;
    }
    return s;
  };

  Eigen::MatrixXd prev = shares_of(num);
  for (int h = 1; h <= max_horizon; ++h) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, k);
    for (int l = 1; l <= std::min(h, m.p); ++l)
      next += m.A[l - 1] * psi[psi.size() - l];
    psi.push_back(next);
    if (static_cast<int>(psi.size()) > m.p + 1) psi.erase(psi.begin());
    theta = next * L;
    num += theta.cwiseProduct(theta);
    Eigen::MatrixXd cur = shares_of(num);
    if ((cur - prev).cwiseAbs().maxCoeff() < step_tol)
      return {cur, h + 1, true};
    prev = cur;
  }
  return {prev, max_horizon, false};
}

}  // namespace reservoir
