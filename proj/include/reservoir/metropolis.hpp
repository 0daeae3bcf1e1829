#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "reservoir/loan.hpp"
#include "reservoir/params.hpp"

namespace reservoir {

// Priors are specified by mean and standard deviation and moment-matched to
// the named family, which is how the calibration targets are quoted.
struct PriorSpec {
  enum Family { Beta, Gamma };
  Family family;
  std::string name;
  double mean, stddev;

  // Matched hyperparameters: (alpha, beta) for Beta, (shape, scale) for Gamma.
  std::pair<double, double> hyper() const {
    if (!(mean > 0.0) || !(stddev > 0.0))
      throw std::invalid_argument("PriorSpec: mean and stddev must be positive");
    if (family == Beta) {
      if (!(mean < 1.0)) throw std::invalid_argument("PriorSpec: Beta mean must lie in (0,1)");
      double nu = mean * (1.0 - mean) / (stddev * stddev) - 1.0;
      if (!(nu > 0.0))
        throw std::invalid_argument("PriorSpec: Beta stddev too large for the mean");
      return {mean * nu, (1.0 - mean) * nu};
    }
    return {mean * mean / (stddev * stddev), stddev * stddev / mean};
  }

  double log_density(double x) const {
    auto [a, b] = hyper();
    if (family == Beta) {
      if (x <= 0.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
      return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
             (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    }
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return (a - 1.0) * std::log(x) - x / b - a * std::log(b) - std::lgamma(a);
  }
};

struct MomentTarget {
  std::string name;
  double target, stddev;
};

struct MetropolisOptions {
  int chain_length = 20000;
  int burn_in = -1;  // default chain_length / 5
  std::uint64_t seed = 0;
  double initial_scale = 0.2;  // proposal step in units of the prior stddevs
};

struct PosteriorResult {
  Eigen::MatrixXd chain;  // kept draws, row per draw
  Eigen::VectorXd mean, stddev;
  double acceptance = 0.0;      // rate over the kept portion
  bool acceptance_in_band = true;  // [0.1, 0.6] after adaptation
  double proposal_scale = 0.0;
  std::uint64_t seed = 0;
};

// Random-walk Metropolis over the prior-supported parameters with a Gaussian
// pseudo-likelihood on model moments. The proposal scale adapts toward a 0.3
// acceptance rate during burn-in only and is frozen afterwards, so the kept
// draws come from a fixed kernel. A moment function may throw to mark a
// parameter point infeasible.
inline PosteriorResult estimate_posterior(
    const std::vector<PriorSpec>& priors, const std::vector<MomentTarget>& targets,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& moments,
    const MetropolisOptions& opts = {}) {
  int dim = static_cast<int>(priors.size());
  if (dim == 0) throw std::invalid_argument("estimate_posterior: no parameters to sample");
  int burn = opts.burn_in >= 0 ? opts.burn_in : opts.chain_length / 5;
  if (opts.chain_length <= burn)
    throw std::invalid_argument("estimate_posterior: chain shorter than its burn-in");

  auto log_post = [&](const Eigen::VectorXd& x) -> double {
    double lp = 0.0;
    for (int i = 0; i < dim; ++i) {
      lp += priors[i].log_density(x[i]);
      if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
    }
    if (!targets.empty()) {
      Eigen::VectorXd m;
      try {
        m = moments(x);
      } catch (const std::exception&) {
        return -std::numeric_limits<double>::infinity();
      }
      if (m.size() != static_cast<Eigen::Index>(targets.size()))
        throw std::runtime_error("estimate_posterior: moment dimension mismatch");
      for (size_t j = 0; j < targets.size(); ++j) {
        double z = (m[j] - targets[j].target) / targets[j].stddev;
        lp -= 0.5 * z * z;
      }
    }
    return lp;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  Eigen::VectorXd x(dim), steps(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = priors[i].mean;
    steps[i] = priors[i].stddev;
  }
  double lp = log_post(x);
  if (!std::isfinite(lp))
    throw std::runtime_error("estimate_posterior: prior mean is not a feasible start");

  double scale = opts.initial_scale;
  int kept = opts.chain_length - burn;
  PosteriorResult out;
  out.chain.resize(kept, dim);
  out.seed = opts.seed;
  int accepted_window = 0, accepted_kept = 0;
  for (int it = 0; it < opts.chain_length; ++it) {
    Eigen::VectorXd prop = x;
    for (int i = 0; i < dim; ++i) prop[i] += scale * steps[i] * N(rng);
    double lp_prop = log_post(prop);
    if (std::log(U(rng)) < lp_prop - lp) {
      x = prop;
      lp = lp_prop;
      ++accepted_window;
      if (it >= burn) ++accepted_kept;
    }
    if (it < burn && (it + 1) % 50 == 0) {
      double rate = accepted_window / 50.0;
      scale *= rate > 0.3 ? 1.1 : 0.9;
      accepted_window = 0;
    }
    if (it >= burn) out.chain.row(it - burn) = x.transpose();
  }

  out.mean = out.chain.colwise().mean();
  out.stddev.resize(dim);
  for (int i = 0; i < dim; ++i) {
    double m = out.mean[i];
    out.stddev[i] = std::sqrt((out.chain.col(i).array() - m).square().sum() / (kept - 1));
  }
  out.acceptance = static_cast<double>(accepted_kept) / kept;
  out.acceptance_in_band = out.acceptance >= 0.1 && out.acceptance <= 0.6;
  out.proposal_scale = scale;
  return out;
}

// The premium-block estimation problem: sample the refinancing fraction and
// the premium elasticity against the observed contract rate and premium
// factor, holding the remaining calibration fixed.
struct EstimationProblem {
  std::vector<PriorSpec> priors;
  std::vector<MomentTarget> targets;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> moments;
};

inline EstimationProblem premium_estimation_problem(const ModelParams& p) {
  EstimationProblem prob;
  prob.priors = {{PriorSpec::Beta, "mu", 0.0336, 0.0119},
                 {PriorSpec::Beta, "xi", 0.0322, 0.0153}};
  prob.targets = {{"loan_rate", 0.03521, 0.01092}, {"premium_factor", 1.1275, 0.0694}};
  double theta = p.theta_bar, R = p.R_bar;
  prob.moments = [theta, R](const Eigen::VectorXd& x) {
    auto lt = household_leverage_with_refi(theta, R, x[1], x[0]);
    double f_h = std::pow(lt.leverage, x[1]);
    return Eigen::Vector2d(R * f_h, f_h);
  };
  return prob;
}

}  // namespace reservoir
