#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "reservoir/decomposition.hpp"
#include "reservoir/equilibrium.hpp"
#include "reservoir/growth.hpp"
#include "reservoir/io.hpp"
#include "reservoir/local_projection.hpp"
#include "reservoir/metropolis.hpp"
#include "reservoir/params.hpp"
#include "reservoir/simulate.hpp"
#include "reservoir/spectral.hpp"
#include "reservoir/var.hpp"

namespace {

using nlohmann::json;
using namespace reservoir;

// Shared command context: flags, resolved configuration, and report plumbing.
struct Cli {
  std::string config_path;
  std::string out_dir = ".";
  long long seed_flag = -1;
  bool emit_json = false;

  RunConfig cfg;
  ModelParams params;
  std::uint64_t seed = 1;
  std::string command;
  std::vector<std::string> outputs;
  bool verbose = false;

  void prepare(const std::string& cmd) {
    command = cmd;
    const char* lvl = std::getenv("RESERVOIR_LOG");
    verbose = lvl != nullptr && std::string(lvl) != "" && std::string(lvl) != "0";
    cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    cfg.reject_unknown(known_config_keys());
    long long s = seed_flag >= 0 ? seed_flag : cfg.integer("seed", 1);
    if (s < 0) throw std::invalid_argument("config: seed must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
    params = params_from_config(cfg);
    std::filesystem::create_directories(out_dir);
    note("command " + cmd + ", config " + hash_hex(cfg.hash) + ", seed " +
         std::to_string(seed));
  }

  void note(const std::string& msg) const {
    if (verbose) std::cerr << "[reservoir] " << msg << '\n';
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }

  void save(CsvTable& table, const std::string& name) {
    std::string full = path(name);
    table.save(full);
    outputs.push_back(full);
    note("wrote " + full);
  }

  std::vector<std::string> stamp() const { return provenance(cfg, seed, command); }

  json base_summary() const {
    json j;
    j["command"] = command;
    j["version"] = engine_version;
    j["config"] = hash_hex(cfg.hash);
    j["seed"] = seed;
    j["outputs"] = outputs;
    return j;
  }

  // Machine summary on --json, otherwise the collected human lines.
  void finish(const json& extras, const std::vector<std::string>& human) const {
    if (emit_json) {
      json j = base_summary();
      j.update(extras);
      std::cout << j.dump(2) << '\n';
      return;
    }
    for (const auto& line : human) std::cout << line << '\n';
    for (const auto& f : outputs) std::cout << "wrote " << f << '\n';
  }
};

SteadyState solved_steady_state(const Cli& cli) {
  return solve_steady_state(cli.params, cli.cfg.number("solver_tol", 1e-10));
}

struct PanelRun {
  SteadyState ss;
  ShockSpec spec;
  SimPath path;
  Eigen::MatrixXd panel;  // percent deviations after discard
  int discard = 0;
};

PanelRun simulated_panel(Cli& cli) {
  PanelRun run;
  run.ss = solved_steady_state(cli);
  run.spec = shocks_from_config(cli.cfg);
  long long T = cli.cfg.integer("periods", 2000);
  run.discard = static_cast<int>(cli.cfg.integer("discard", 200));
  if (T < 1) throw std::invalid_argument("config: periods must be positive");
  if (run.discard < 0) throw std::invalid_argument("config: discard must be nonnegative");
  cli.note("simulating " + std::to_string(T) + " periods");
  ShockPanel shocks = draw_shocks(run.spec, cli.params, static_cast<int>(T), cli.seed);
  run.path = simulate(cli.params, run.ss, shocks);
  run.panel = observation_panel(run.path, run.ss, run.discard);
  return run;
}

int cmd_steady(Cli& cli) {
  SteadyState ss = solved_steady_state(cli);
  auto residuals = step_residuals(ss.state, ss.state, ss.state, cli.params);
  bool converged = ss.residual_norm < 1e-8;

  CsvTable state;
  state.comments = cli.stamp();
  state.comments.push_back("iterations " + std::to_string(ss.iterations));
  state.comments.push_back("residual_norm " + fmt_num(ss.residual_norm));
  state.header = {"name", "value"};
  auto names = state_column_names();
  auto row = state_to_row(ss.state);
  for (size_t i = 0; i < names.size(); ++i) state.rows.push_back({names[i], fmt_num(row[i])});
  cli.save(state, "steady_state.csv");

  CsvTable res;
  res.comments = cli.stamp();
  res.header = {"name", "value"};
  for (size_t i = 0; i < residuals.size(); ++i)
    res.rows.push_back({residual_names[i], fmt_num(residuals[i])});
  cli.save(res, "steady_residuals.csv");

  json extras;
  extras["converged"] = converged;
  extras["iterations"] = ss.iterations;
  extras["residual_norm"] = ss.residual_norm;
  json st;
  for (size_t i = 0; i < names.size(); ++i) st[names[i]] = row[i];
  extras["state"] = st;

  cli.finish(extras, {"steady state: residual inf-norm " + fmt_num(ss.residual_norm) +
                      " after " + std::to_string(ss.iterations) + " iterations"});
  if (!converged)
    throw std::runtime_error("steady: residual " + fmt_num(ss.residual_norm) +
                             " exceeds 1e-8");
  return 0;
}

int cmd_simulate(Cli& cli) {
  PanelRun run = simulated_panel(cli);
  int T = static_cast<int>(run.path.states.size());

  CsvTable states;
  states.comments = cli.stamp();
  states.header = {"t"};
  for (const auto& n : state_column_names()) states.header.push_back(n);
  states.header.push_back("clearing_residual");
  states.header.push_back("taylor_gap");
  for (int t = 0; t < T; ++t) {
    std::vector<std::string> r = {std::to_string(t)};
    for (double v : state_to_row(run.path.states[t])) r.push_back(fmt_num(v));
    r.push_back(fmt_num(run.path.clearing_residual[t]));
    r.push_back(fmt_num(run.path.taylor_gap[t]));
    states.rows.push_back(std::move(r));
  }
  cli.save(states, "simulation_states.csv");

  CsvTable panel;
  panel.comments = cli.stamp();
  panel.comments.push_back("units percent deviation from the stationary point");
  panel.comments.push_back("discard " + std::to_string(run.discard));
  panel.header = {"t"};
  for (const auto& n : panel_columns) panel.header.push_back(n);
  for (int i = 0; i < run.panel.rows(); ++i) {
    std::vector<std::string> r = {std::to_string(run.discard + i)};
    for (int j = 0; j < run.panel.cols(); ++j) r.push_back(fmt_num(run.panel(i, j)));
    panel.rows.push_back(std::move(r));
  }
  cli.save(panel, "simulation_panel.csv");

  json extras;
  extras["periods"] = T;
  extras["discard"] = run.discard;
  double worst = 0.0;
  for (double v : run.path.clearing_residual) worst = std::max(worst, std::abs(v));
  extras["max_clearing_residual"] = worst;
  cli.finish(extras, {"simulated " + std::to_string(T) + " periods, max clearing residual " +
                      fmt_num(worst)});
  return 0;
}

int cmd_irf(Cli& cli) {
  std::string mode = cli.cfg.text("irf_mode", "lp");
  int H = static_cast<int>(cli.cfg.integer("irf_horizon", 40));
  if (H < 1) throw std::invalid_argument("config: irf_horizon must be positive");
  if (mode != "lp" && mode != "var" && mode != "model")
    throw std::invalid_argument("config: irf_mode must be lp, var or model");

  CsvTable table;
  table.comments = cli.stamp();
  table.comments.push_back("mode " + mode);
  table.comments.push_back("units percent deviation per one-sigma impulse");
  table.header = {"shock", "h"};
  for (const auto& n : panel_columns) table.header.push_back(n);

  json extras;
  extras["mode"] = mode;
  extras["horizon"] = H;

  if (mode == "model") {
    SteadyState ss = solved_steady_state(cli);
    ShockSpec spec = shocks_from_config(cli.cfg);
    for (int j = 0; j < 4; ++j) {
      Eigen::MatrixXd resp = impulse_response_path(cli.params, ss, spec, j, 1.0, H + 1);
      for (int h = 0; h <= H; ++h) {
        std::vector<std::string> r = {shock_names[j], std::to_string(h)};
        for (int i = 0; i < resp.cols(); ++i) r.push_back(fmt_num(resp(h, i)));
        table.rows.push_back(std::move(r));
      }
    }
  } else if (mode == "var") {
    PanelRun run = simulated_panel(cli);
    int max_lag = static_cast<int>(cli.cfg.integer("var_max_lag", 8));
    VarModel m = fit_var(run.panel, max_lag, panel_columns);
    extras["var_lag"] = m.p;
    extras["var_stable"] = is_stable(m);
    table.comments.push_back("var_lag " + std::to_string(m.p));
    auto psi = irf_var(m, H);
    for (int j = 0; j < 4; ++j)
      for (int h = 0; h <= H; ++h) {
        std::vector<std::string> r = {shock_names[j], std::to_string(h)};
        for (int i = 0; i < m.k(); ++i) r.push_back(fmt_num(psi[h](i, j)));
        table.rows.push_back(std::move(r));
      }
  } else {
    PanelRun run = simulated_panel(cli);
    // Regress on the latent innovations scaled to unit variance so the
    // coefficients read as responses to a one-sigma impulse.
    Eigen::MatrixXd eps = run.path.innovations.bottomRows(run.panel.rows());
    for (int j = 0; j < 4; ++j) {
      if (!(run.spec.sigma[j] > 0.0))
        throw std::runtime_error("irf: shock " + shock_names[j] +
                                 " has zero variance, projection is undefined");
      eps.col(j) /= run.spec.sigma[j];
    }
    LocalProjection lp = irf_local_projection(run.panel, eps, H);
    extras["T_used"] = lp.T_used;
    for (int j = 0; j < 4; ++j)
      for (int h = 0; h <= H; ++h) {
        std::vector<std::string> r = {shock_names[j], std::to_string(h)};
        for (int i = 0; i < run.panel.cols(); ++i) r.push_back(fmt_num(lp.beta[h](j, i)));
        table.rows.push_back(std::move(r));
      }
  }

  cli.save(table, "irf.csv");
  cli.finish(extras, {"impulse responses (" + mode + ") over " + std::to_string(H) +
                      " horizons"});
  return 0;
}

int cmd_fevd(Cli& cli) {
  PanelRun run = simulated_panel(cli);
  int max_lag = static_cast<int>(cli.cfg.integer("var_max_lag", 8));
  int H = static_cast<int>(cli.cfg.integer("fevd_horizon", 4));
  if (H < 0) throw std::invalid_argument("config: fevd_horizon must be nonnegative");
  VarModel m = fit_var(run.panel, max_lag, panel_columns);
  FevdResult con = fevd(m, H);
  FevdResult unc = fevd_unconditional(m);
  if (!unc.converged)
    throw std::runtime_error("fevd: unconditional decomposition did not converge");

  // Responding variables in the published table order; shares renormalized
  // over the four driver innovations, with the absorbed fraction reported.
  const std::vector<int> vars = {4, 5, 8, 9, 6, 11, 12, 10};

  CsvTable table;
  table.comments = cli.stamp();
  table.comments.push_back("conditional horizon " + std::to_string(H));
  table.comments.push_back("shares renormalized over the four driver innovations");
  table.header = {"variable", "mode", "R", "mu", "theta", "xi", "driver_fraction"};
  json rows = json::array();
  for (int i : vars) {
    for (int mode = 0; mode < 2; ++mode) {
      const FevdResult& f = mode == 0 ? con : unc;
      double frac = f.shares.row(i).head<4>().sum();
      Eigen::Vector4d share = f.shares.row(i).head<4>().transpose();
      if (frac > 0.0) share /= frac;
      std::vector<std::string> r = {panel_columns[i], mode == 0 ? "conditional" : "unconditional"};
      for (int j = 0; j < 4; ++j) r.push_back(fmt_num(share[j]));
      r.push_back(fmt_num(frac));
      table.rows.push_back(r);
      json jr;
      jr["variable"] = panel_columns[i];
      jr["mode"] = r[1];
      for (int j = 0; j < 4; ++j) jr[shock_names[j]] = share[j];
      jr["driver_fraction"] = frac;
      rows.push_back(jr);
    }
  }
  cli.save(table, "fevd.csv");

  json extras;
  extras["var_lag"] = m.p;
  extras["conditional_horizon"] = H;
  extras["rows"] = rows;
  cli.finish(extras, {"variance decomposition for " + std::to_string(vars.size()) +
                      " variables at lag " + std::to_string(m.p)});
  return 0;
}

CsvTable decomposition_table(const Cli& cli, const DecompositionReport& rep) {
  CsvTable t;
  t.comments = cli.stamp();
  t.comments.push_back("target " + rep.target);
  t.comments.push_back("reconstruction_slope " + fmt_num(rep.reconstruction_slope));
  t.comments.push_back("mean_abs_residual " + fmt_num(rep.mean_abs_residual));
  t.header = {"t", "observed"};
  for (const auto& f : rep.factors) t.header.push_back("weight_" + f);
  for (const auto& f : rep.factors) t.header.push_back("delta_" + f);
  for (const auto& f : rep.factors) t.header.push_back("contribution_" + f);
  t.header.insert(t.header.end(), {"residual", "reconstruction", "gap"});
  for (const auto& row : rep.rows) {
    std::vector<std::string> r = {std::to_string(row.t), fmt_num(row.observed)};
    for (int j = 0; j < 4; ++j) r.push_back(fmt_num(row.weight[j]));
    for (int j = 0; j < 4; ++j) r.push_back(fmt_num(row.delta[j]));
    for (int j = 0; j < 4; ++j) r.push_back(fmt_num(row.contribution[j]));
    r.push_back(fmt_num(row.residual));
    r.push_back(fmt_num(row.reconstruction));
    r.push_back(fmt_num(row.gap));
    t.rows.push_back(std::move(r));
  }
  return t;
}

int cmd_premium(Cli& cli) {
  PanelRun run = simulated_panel(cli);
  const ModelParams& p = cli.params;

  PremiumWeights w = premium_weights(p);
  CsvTable wt;
  wt.comments = cli.stamp();
  wt.header = {"factor", "exponent"};
  wt.rows = {{"leverage", fmt_num(w.leverage)},
             {"rate", fmt_num(w.rate)},
             {"land", fmt_num(w.land)},
             {"payment", fmt_num(w.payment)}};
  cli.save(wt, "premium_weights.csv");

  json slopes;
  auto emit = [&](const DecompositionReport& rep, const std::string& file) {
    CsvTable t = decomposition_table(cli, rep);
    cli.save(t, file);
    json s;
    s["reconstruction_slope"] = rep.reconstruction_slope;
    s["mean_abs_residual"] = rep.mean_abs_residual;
    slopes[rep.target] = s;
  };

  emit(leverage_growth_decomposition(run.path, p), "decomp_leverage.csv");
  emit(market_value_ratio_growth(run.path, p), "decomp_value_ratio.csv");
  emit(price_premium_growth(run.path, p), "decomp_price_premium.csv");
  AllocationGrowth alloc = allocation_ratio_growth(run.path, p);
  emit(alloc.capital, "decomp_ratio_capital.csv");
  emit(alloc.land, "decomp_ratio_land.csv");
  emit(alloc.labor, "decomp_ratio_labor.csv");
  CapitalFiscalGrowth cf = capital_and_fiscal_growth(run.path, p);
  emit(cf.capital_h, "decomp_capital_h.csv");
  emit(cf.capital_f, "decomp_capital_f.csv");
  emit(cf.fiscal, "decomp_fiscal.csv");

  CsvTable inv;
  inv.comments = cli.stamp();
  inv.comments.push_back("target public investment growth");
  inv.header = {"t", "observed", "reconstruction", "gap"};
  for (size_t i = 0; i < cf.invest_t.size(); ++i)
    inv.rows.push_back({std::to_string(cf.invest_t[i]), fmt_num(cf.invest_observed[i]),
                        fmt_num(cf.invest_reconstruction[i]), fmt_num(cf.invest_gap[i])});
  cli.save(inv, "decomp_public_investment.csv");

  json extras;
  extras["weights"] = {{"leverage", w.leverage},
                       {"rate", w.rate},
                       {"land", w.land},
                       {"payment", w.payment}};
  extras["reports"] = slopes;
  cli.finish(extras, {"premium exponents and growth decompositions over " +
                      std::to_string(run.path.states.size()) + " periods"});
  return 0;
}

int cmd_growth(Cli& cli) {
  SteadyState ss = solved_steady_state(cli);
  WageBillReport wb = wage_bill(ss.state, cli.params);

  GrowthEnv env;
  env.eta = cli.params.eta;
  env.n0 = cli.params.n_bar;
  env.n_g = cli.cfg.number("growth_n_g", 0.0);
  env.sigma_n = cli.cfg.number("growth_sigma_n", 0.01);
  env.horizon = static_cast<int>(cli.cfg.integer("growth_horizon", 2000));
  env.wage_bill = {wb.direct};
  env.rate = {ss.state.R};
  env.validate();

  AlphaOptions opt;
  opt.feedback = cli.cfg.integer("growth_feedback", 1) != 0;
  AlphaResult ar = equilibrium_alpha(env, opt);

  int T = static_cast<int>(cli.cfg.integer("growth_periods", 200));
  if (T < 1) throw std::invalid_argument("config: growth_periods must be positive");
  std::vector<double> alphas(T, ar.alpha);
  std::vector<double> A = technology_path(env, alphas);

  CsvTable table;
  table.comments = cli.stamp();
  table.comments.push_back("wage_bill " + fmt_num(wb.direct));
  table.comments.push_back("discounted_stream " + fmt_num(ar.stream));
  table.comments.push_back("alpha " + fmt_num(ar.alpha) +
                           (ar.clamped ? " (clamped)" : ""));
  table.header = {"t", "alpha", "n", "A"};
  double n = env.n0;
  for (int t = 0; t <= T; ++t) {
    double a = t < T ? alphas[t] : alphas[T - 1];
    table.rows.push_back({std::to_string(t), fmt_num(a), fmt_num(n), fmt_num(A[t])});
    n *= std::exp(env.n_g);
  }
  cli.save(table, "growth_path.csv");

  json extras;
  extras["wage_bill"] = wb.direct;
  extras["alpha"] = ar.alpha;
  extras["clamped"] = ar.clamped;
  extras["stream"] = ar.stream;
  extras["final_technology"] = A.back();
  std::vector<std::string> human = {
      "production share alpha " + fmt_num(ar.alpha) + ", technology level " + fmt_num(A.back()) +
      " after " + std::to_string(T) + " periods"};

  if (cli.cfg.has("growth_target_alpha")) {
    double target = cli.cfg.number("growth_target_alpha", 0.0);
    double shift = offsetting_rate(env, target, opt);
    extras["offsetting_rate_shift"] = shift;
    human.push_back("rate shift holding alpha at " + fmt_num(target) + ": " + fmt_num(shift));
  }

  cli.finish(extras, human);
  return 0;
}

int cmd_cycles(Cli& cli) {
  if (!cli.cfg.has("cycles_a") || !cli.cfg.has("cycles_b"))
    throw std::invalid_argument("config: keys 'cycles_a' and 'cycles_b' are required");
  std::string file_a = cli.cfg.text("cycles_a", "");
  std::string file_b = cli.cfg.text("cycles_b", "");
  DatedSeries a = load_dated_series(file_a);
  DatedSeries b = load_dated_series(file_b);
  if (a.dates.size() != b.dates.size())
    throw std::invalid_argument("cycles: series lengths differ (" +
                                std::to_string(a.dates.size()) + " vs " +
                                std::to_string(b.dates.size()) + ")");
  for (size_t i = 0; i < a.dates.size(); ++i)
    if (a.dates[i] != b.dates[i])
      throw std::invalid_argument("cycles: date mismatch at row " + std::to_string(i + 1) +
                                  " (" + a.dates[i] + " vs " + b.dates[i] + ")");

  CycleCorrelation c = cycle_rank_correlation(a.values, b.values);

  CsvTable table;
  table.comments = cli.stamp();
  table.comments.push_back("series_a " + file_a);
  table.comments.push_back("series_b " + file_b);
  table.header = {"statistic", "value"};
  table.rows = {{"rank_correlation", fmt_num(c.rank)},
                {"pearson_raw", fmt_num(c.pearson_raw)},
                {"frequencies", std::to_string(c.frequencies)}};
  cli.save(table, "cycles.csv");

  json extras;
  extras["rank_correlation"] = c.rank;
  extras["pearson_raw"] = c.pearson_raw;
  extras["frequencies"] = c.frequencies;
  cli.finish(extras, {"amplitude rank correlation " + fmt_num(c.rank) + " over " +
                      std::to_string(c.frequencies) + " frequencies (raw Pearson " +
                      fmt_num(c.pearson_raw) + ")"});
  return 0;
}

int cmd_estimate(Cli& cli) {
  EstimationProblem prob = premium_estimation_problem(cli.params);
  MetropolisOptions opts;
  opts.chain_length = static_cast<int>(cli.cfg.integer("chain_length", 20000));
  opts.burn_in = static_cast<int>(cli.cfg.integer("burn_in", -1));
  opts.seed = cli.seed;
  opts.initial_scale = cli.cfg.number("proposal_scale", 0.2);
  cli.note("sampling " + std::to_string(opts.chain_length) + " draws");
  PosteriorResult post = estimate_posterior(prob.priors, prob.targets, prob.moments, opts);

  CsvTable summary;
  summary.comments = cli.stamp();
  summary.comments.push_back("acceptance " + fmt_num(post.acceptance));
  summary.comments.push_back("proposal_scale " + fmt_num(post.proposal_scale));
  summary.header = {"parameter", "post_mean", "post_std"};
  for (size_t i = 0; i < prob.priors.size(); ++i)
    summary.rows.push_back(
        {prob.priors[i].name, fmt_num(post.mean[i]), fmt_num(post.stddev[i])});
  cli.save(summary, "estimate_posterior.csv");

  CsvTable chain;
  chain.comments = cli.stamp();
  chain.header = {"draw"};
  for (const auto& pr : prob.priors) chain.header.push_back(pr.name);
  for (int t = 0; t < post.chain.rows(); ++t) {
    std::vector<std::string> r = {std::to_string(t)};
    for (int j = 0; j < post.chain.cols(); ++j) r.push_back(fmt_num(post.chain(t, j)));
    chain.rows.push_back(std::move(r));
  }
  cli.save(chain, "estimate_chain.csv");

  json extras;
  for (size_t i = 0; i < prob.priors.size(); ++i) {
    extras[prob.priors[i].name] = {{"mean", post.mean[i]}, {"std", post.stddev[i]}};
  }
  extras["acceptance"] = post.acceptance;
  extras["acceptance_in_band"] = post.acceptance_in_band;
  std::vector<std::string> human;
  for (size_t i = 0; i < prob.priors.size(); ++i)
    human.push_back("posterior " + prob.priors[i].name + ": mean " + fmt_num(post.mean[i]) +
                    ", std " + fmt_num(post.stddev[i]));
  human.push_back("acceptance rate " + fmt_num(post.acceptance));
  cli.finish(extras, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monetary reservoir model: solve, simulate, decompose, estimate"};
  app.require_subcommand(1);

  Cli cli;
  std::function<int(Cli&)> chosen;
  auto add = [&](const std::string& name, const std::string& help, int (*fn)(Cli&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", cli.config_path, "key=value configuration file");
    sub->add_option("--seed", cli.seed_flag, "seed override (wins over the config)");
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_flag("--json", cli.emit_json, "machine-readable summary on stdout");
    sub->callback([&chosen, fn]() { chosen = fn; });
    return sub;
  };

  add("steady", "solve the stationary equilibrium", cmd_steady);
  add("simulate", "simulate the shocked economy", cmd_simulate);
  add("irf", "impulse responses (local projection, VAR or model)", cmd_irf);
  add("fevd", "forecast error variance decomposition", cmd_fevd);
  add("premium", "premium exponents and growth decompositions", cmd_premium);
  add("growth", "production share and technology path", cmd_growth);
  add("cycles", "frequency-domain comparison of two series", cmd_cycles);
  add("estimate", "posterior for the refinancing and premium parameters", cmd_estimate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cli.prepare(app.get_subcommands().front()->get_name());
    return chosen(cli);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
