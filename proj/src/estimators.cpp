#include "drlab/estimators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "drlab/errors.hpp"
#include "drlab/summation.hpp"

namespace drlab {

namespace {

void require_nonempty(const Dataset& data, const char* who) {
  if (data.rows.empty()) {
    std::ostringstream os;
    os << who << ": empty dataset";
    throw std::invalid_argument(os.str());
  }
}

std::size_t count_treated(const Dataset& data, const char* who) {
  std::size_t t = 0;
  for (const DataRow& r : data.rows) t += r.d;
  if (t == 0) {
    std::ostringstream os;
    os << who << ": no treated units";
    throw NoTreatedUnits(os.str());
  }
  return t;
}

}  // namespace

EstimateResult plug_in_wate(const Dataset& data, const NuisancePair& hat, const Evaluable& w) {
  require_nonempty(data, "plug_in_wate");
  std::vector<double> terms;
  terms.reserve(data.rows.size());
  std::size_t treated = 0;
  for (const DataRow& r : data.rows) {
    terms.push_back(w(r.x) * (hat.g1(r.x) - hat.g0(r.x)));
    treated += r.d;
  }
  return EstimateResult{pairwise_mean(terms), data.rows.size(), 0.0, treated};
}

EstimateResult dr_wate(const Dataset& data, const NuisancePair& hat, const Evaluable& w) {
  require_nonempty(data, "dr_wate");
  std::vector<double> terms;
  std::vector<double> ipw;
  terms.reserve(data.rows.size());
  ipw.reserve(data.rows.size());
  std::size_t treated = 0;
  for (const DataRow& r : data.rows) {
    const double mh = hat.m(r.x);
    if (!(mh > 0.0 && mh < 1.0)) {
      std::ostringstream os;
      os << "dr_wate: m_hat = " << mh << " at a data point violates overlap";
      throw OverlapViolation(os.str());
    }
    const double weight = (r.d - mh) / (mh * (1.0 - mh));
    const double resid = r.y - hat.g(r.d, r.x);
    terms.push_back(w(r.x) * (hat.g1(r.x) - hat.g0(r.x) + weight * resid));
    ipw.push_back(std::abs(weight));
    treated += r.d;
  }
  return EstimateResult{pairwise_mean(terms), data.rows.size(), pairwise_mean(ipw), treated};
}

EstimateResult plug_in_att(const Dataset& data, const NuisancePair& hat) {
  require_nonempty(data, "plug_in_att");
  const std::size_t treated = count_treated(data, "plug_in_att");
  std::vector<double> terms;
  terms.reserve(treated);
  for (const DataRow& r : data.rows) {
    if (r.d) terms.push_back(r.y - hat.g0(r.x));
  }
  return EstimateResult{pairwise_mean(terms), data.rows.size(), 0.0, treated};
}

EstimateResult dr_att(const Dataset& data, const NuisancePair& hat) {
  require_nonempty(data, "dr_att");
  const std::size_t treated = count_treated(data, "dr_att");
  std::vector<double> terms;
  std::vector<double> ipw;
  terms.reserve(data.rows.size());
  for (const DataRow& r : data.rows) {
    const double resid = r.y - hat.g0(r.x);
    if (r.d) {
      terms.push_back(resid);
    } else {
      const double mh = hat.m(r.x);
      if (!(mh < 1.0)) {
        std::ostringstream os;
        os << "dr_att: m_hat = " << mh << " at an untreated point violates overlap";
        throw OverlapViolation(os.str());
      }
      const double weight = mh / (1.0 - mh);
      terms.push_back(-weight * resid);
      ipw.push_back(weight);
    }
  }
  const double total = pairwise_sum(terms);
  return EstimateResult{total / static_cast<double>(treated), data.rows.size(),
                        pairwise_mean(ipw), treated};
}

}  // namespace drlab
