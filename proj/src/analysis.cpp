#include "drlab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "drlab/errors.hpp"
#include "drlab/rng.hpp"

namespace drlab {

const char* estimator_name(EstimatorTag t) {
  switch (t) {
    case EstimatorTag::plug_in_wate: return "plug_in_wate";
    case EstimatorTag::dr_wate: return "dr_wate";
    case EstimatorTag::plug_in_att: return "plug_in_att";
    case EstimatorTag::dr_att: return "dr_att";
  }
  return "?";
}

EstimatorTag estimator_from_name(const std::string& name) {
  if (name == "plug_in_wate") return EstimatorTag::plug_in_wate;
  if (name == "dr_wate") return EstimatorTag::dr_wate;
  if (name == "plug_in_att") return EstimatorTag::plug_in_att;
  if (name == "dr_att") return EstimatorTag::dr_att;
  throw std::invalid_argument("unknown estimator: " + name);
}

EstimateResult run_estimator(EstimatorTag tag, const Dataset& data, const Scenario& scenario) {
  switch (tag) {
    case EstimatorTag::plug_in_wate: return plug_in_wate(data, scenario.hat, scenario.functional.w);
    case EstimatorTag::dr_wate: return dr_wate(data, scenario.hat, scenario.functional.w);
    case EstimatorTag::plug_in_att: return plug_in_att(data, scenario.hat);
    case EstimatorTag::dr_att: return dr_att(data, scenario.hat);
  }
  throw std::invalid_argument("run_estimator: bad tag");
}

namespace {

// Runs body(i) for i in [0, count) over `threads` workers; any exception is
// rethrown on the caller thread with the index attached.
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::size_t quantile_index(double gamma, int reps) {
  // upper order statistic at ceil(gamma * reps), 1-based
  const double raw = std::ceil(gamma * reps);
  return static_cast<std::size_t>(std::max(1.0, raw)) - 1;
}

}  // namespace

QuantileRiskResult quantile_risk(EstimatorTag tag, const Scenario& scenario, std::size_t n,
                                 int reps, double gamma, std::uint64_t seed, int threads) {
  if (reps < 20) throw std::invalid_argument("quantile_risk: reps must be >= 20");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("quantile_risk: gamma must lie in (0,1)");
  }
  QuantileRiskResult out;
  out.sq_errors.resize(static_cast<std::size_t>(reps));
  parallel_for(reps, threads, [&](int r) {
    try {
      const Dataset data = sample_dataset(scenario.truth, n, seed, static_cast<std::uint64_t>(r));
      const EstimateResult est = run_estimator(tag, data, scenario);
      const double err = est.value - scenario.true_value;
      out.sq_errors[static_cast<std::size_t>(r)] = err * err;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "quantile_risk: estimator failed in replication " << r << ": " << e.what();
      throw Error(os.str());
    }
  });
  std::vector<double> sorted = out.sq_errors;
  std::sort(sorted.begin(), sorted.end());
  out.risk = sorted[quantile_index(gamma, reps)];
  return out;
}

OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw std::invalid_argument("ols_fit: need >= 2 paired points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.slope_stderr = n > 2 ? std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return fit;
}

RiskReport rate_sweep(const std::function<Scenario(std::size_t)>& scenario_for_n,
                      EstimatorTag tag, std::span<const std::size_t> ns, int reps, double gamma,
                      std::uint64_t seed, int threads) {
  if (ns.size() < 4) throw std::invalid_argument("rate_sweep: need at least 4 sample sizes");
  RiskReport report;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t n = ns[i];
    const Scenario sc = scenario_for_n(n);
    // decorrelate replication streams across n values
    const std::uint64_t sub_seed = mix64(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    const QuantileRiskResult qr = quantile_risk(tag, sc, n, reps, gamma, sub_seed, threads);
    report.rows.push_back(RiskRow{n, gamma, qr.risk, reps});
    if (qr.risk <= 0.0) throw Error("rate_sweep: zero risk row, log-log fit undefined");
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(qr.risk));
  }
  const OlsFit fit = ols_fit(lx, ly);
  report.fitted_slope = fit.slope;
  report.slope_stderr = fit.slope_stderr;
  report.intercept = fit.intercept;
  return report;
}

double hellinger_single(const std::function<double(const Point&, int, int)>& p,
                        const std::function<double(const Point&, int, int)>& q,
                        const Quadrature& quad) {
  double acc = 0.0;
  quad.for_each_cell([&](const Point& x, double vol) {
    for (int d = 0; d < 2; ++d) {
      for (int y = 0; y < 2; ++y) {
        const double pv = p(x, d, y);
        const double qv = q(x, d, y);
        if (pv < 0.0 || qv < 0.0) {
          throw InvalidDensity("hellinger_single: negative density on the grid");
        }
        const double diff = std::sqrt(pv) - std::sqrt(qv);
        acc += 0.5 * diff * diff * vol;
      }
    }
  });
  return acc;
}

double hellinger_single(const NuisancePair& p, const NuisancePair& q, const Quadrature& quad) {
  const Quadrature fine = quad.refined_with({&p.m, &p.g0, &p.g1, &q.m, &q.g0, &q.g1});
  return hellinger_single(
      [&](const Point& x, int d, int y) { return density(p, x, d, y); },
      [&](const Point& x, int d, int y) { return density(q, x, d, y); }, fine);
}

double fano_floor(double delta) {
  if (!(delta >= 0.0 && delta <= 2.0)) {
    throw std::invalid_argument("fano_floor: delta must lie in [0, 2]");
  }
  return 0.5 * (1.0 - std::sqrt(delta * (1.0 - 0.25 * delta)));
}

double mixture_log_likelihood_ratio(const PerturbedFamily& family, const Dataset& data) {
  // Group observations by partition pair; within a pair the mixture averages
  // the two signs of that pair's Rademacher coordinate.
  const Partition& part = family.partition();
  std::vector<std::pair<int, const DataRow*>> tagged;
  tagged.reserve(data.rows.size());
  for (const DataRow& r : data.rows) {
    tagged.emplace_back(part.cell_of(r.x) / 2, &r);
  }
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double loglr = 0.0;
  std::size_t i = 0;
  while (i < tagged.size()) {
    std::size_t j = i;
    double s_plus = 0.0;
    double s_minus = 0.0;
    while (j < tagged.size() && tagged[j].first == tagged[i].first) {
      const DataRow& r = *tagged[j].second;
      const double p = family.center_density_at(r.x, r.d, r.y);
      if (p <= 0.0) throw InvalidDensity("mixture likelihood: center density vanishes");
      s_plus += std::log(family.density_at(r.x, r.d, r.y, +1) / p);
      s_minus += std::log(family.density_at(r.x, r.d, r.y, -1) / p);
      ++j;
    }
    // log(0.5 (e^{s+} + e^{s-})) via log-sum-exp
    const double hi = std::max(s_plus, s_minus);
    loglr += hi + std::log(0.5 * (std::exp(s_plus - hi) + std::exp(s_minus - hi)));
    i = j;
  }
  return loglr;
}

double mixture_log_likelihood_ratio_bruteforce(const PerturbedFamily& family,
                                               const Dataset& data) {
  const int half = family.partition().size() / 2;
  if (half > 20) throw std::invalid_argument("bruteforce mixture: M too large");
  const std::uint64_t combos = 1ULL << half;
  double acc = 0.0;
  RademacherAssignment asg;
  asg.signs.resize(static_cast<std::size_t>(half));
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    for (int j = 0; j < half; ++j) {
      asg.signs[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? +1 : -1;
    }
    double ratio = 1.0;
    for (const DataRow& r : data.rows) {
      const int delta = bump(asg, family.partition(), r.x);
      ratio *= family.density_at(r.x, r.d, r.y, delta) /
               family.center_density_at(r.x, r.d, r.y);
    }
    acc += ratio;
  }
  return std::log(acc / static_cast<double>(combos));
}

DistinguishReport distinguishability_experiment(const PerturbedFamily& family, std::size_t n,
                                                int trials, double delta, std::uint64_t seed,
                                                int threads) {
  if (trials < 1) throw std::invalid_argument("distinguishability: trials must be >= 1");
  const int M = family.partition().size();

  std::vector<int> wrong(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, threads, [&](int t) {
    const std::uint64_t trial_seed = mix64(seed ^ (0xa0761d6478bd642fULL * (t + 1)));
    CounterRng coin(trial_seed, 0);
    const bool from_mixture = coin.next_unit() < 0.5;
    Dataset data;
    if (from_mixture) {
      const RademacherAssignment asg = sample_assignment(M, trial_seed, 1);
      data = sample_dataset(family.realize(asg), n, trial_seed, 2);
    } else {
      data = sample_dataset(family.center(), n, trial_seed, 2);
    }
    const double loglr = mixture_log_likelihood_ratio(family, data);
    const bool guess_mixture = loglr > 0.0;  // ties go to the center law
    wrong[static_cast<std::size_t>(t)] = guess_mixture != from_mixture ? 1 : 0;
  });

  int total = 0;
  for (int w : wrong) total += w;
  DistinguishReport rep;
  rep.n = n;
  rep.M = M;
  rep.trials = trials;
  rep.empirical_test_error = static_cast<double>(total) / trials;
  rep.fano_floor = fano_floor(delta);
  return rep;
}

}  // namespace drlab
