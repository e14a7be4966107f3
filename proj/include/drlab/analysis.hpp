#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "drlab/adversary.hpp"
#include "drlab/estimators.hpp"
#include "drlab/model.hpp"

namespace drlab {

enum class EstimatorTag { plug_in_wate, dr_wate, plug_in_att, dr_att };

const char* estimator_name(EstimatorTag t);
EstimatorTag estimator_from_name(const std::string& name);

// A fully pinned experiment condition: data come from `truth`, estimators
// consume the fixed `hat`, errors are measured against `true_value`.
struct Scenario {
  NuisancePair truth;
  NuisancePair hat;
  FunctionalSpec functional;
  double true_value = 0.0;
};

EstimateResult run_estimator(EstimatorTag tag, const Dataset& data, const Scenario& scenario);

struct QuantileRiskResult {
  double risk = 0.0;                // order statistic at ceil(gamma * reps)
  std::vector<double> sq_errors;    // all squared errors, unsorted by rep index
};

// reps independent (dataset, estimate) draws; squared error against the
// scenario's true functional; replication r uses RNG stream r so results do
// not depend on scheduling.
QuantileRiskResult quantile_risk(EstimatorTag tag, const Scenario& scenario, std::size_t n,
                                 int reps, double gamma, std::uint64_t seed, int threads = 1);

struct RiskRow {
  std::size_t n = 0;
  double gamma = 0.0;
  double quantile_risk = 0.0;
  int reps = 0;
};

struct RiskReport {
  std::vector<RiskRow> rows;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

// Least-squares fit of log(risk) on log(n) across the n grid.
RiskReport rate_sweep(const std::function<Scenario(std::size_t)>& scenario_for_n,
                      EstimatorTag tag, std::span<const std::size_t> ns, int reps, double gamma,
                      std::uint64_t seed, int threads = 1);

// 0.5 * sum_{d,y} integral (sqrt p - sqrt q)^2 over [0,1]^K; exact on
// piecewise-constant inputs when the quadrature resolves their cells.
double hellinger_single(const std::function<double(const Point&, int, int)>& p,
                        const std::function<double(const Point&, int, int)>& q,
                        const Quadrature& quad);

double hellinger_single(const NuisancePair& p, const NuisancePair& q, const Quadrature& quad);

// (1 - sqrt(delta (1 - delta/4))) / 2 for delta in [0, 2].
double fano_floor(double delta);

struct DistinguishReport {
  std::size_t n = 0;
  int M = 0;
  int trials = 0;
  double empirical_test_error = 0.0;
  double fano_floor = 0.0;
};

// Per trial: a fair coin picks the center law or Q_lambda with fresh lambda;
// an n-sample is drawn and classified by the exact likelihood ratio of the
// n-fold mixture against the center. The mixture likelihood factorizes over
// partition pairs because each Rademacher coordinate touches one pair only.
DistinguishReport distinguishability_experiment(const PerturbedFamily& family, std::size_t n,
                                                int trials, double delta, std::uint64_t seed,
                                                int threads = 1);

// log of the n-sample mixture likelihood ratio, computed pair-by-pair.
double mixture_log_likelihood_ratio(const PerturbedFamily& family, const Dataset& data);

// Brute-force reference: average of prod_i q_lambda(z_i)/p_hat(z_i) over all
// 2^(M/2) sign vectors. Only sensible for small M.
double mixture_log_likelihood_ratio_bruteforce(const PerturbedFamily& family,
                                               const Dataset& data);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace drlab
