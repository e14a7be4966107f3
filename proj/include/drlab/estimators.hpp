#pragma once

#include "drlab/model.hpp"

namespace drlab {

struct EstimateResult {
  double value = 0.0;
  std::size_t n_used = 0;
  double mean_abs_ipw = 0.0;  // mean |inverse-propensity weight|
  std::size_t treated = 0;
};

// (1/n) sum w(X_i) (g_hat(1,X_i) - g_hat(0,X_i))
EstimateResult plug_in_wate(const Dataset& data, const NuisancePair& hat, const Evaluable& w);

// Doubly robust WATE: adds the inverse-propensity residual correction
// (D - m_hat) / (m_hat (1 - m_hat)) * (Y - g_hat(D, X)).
EstimateResult dr_wate(const Dataset& data, const NuisancePair& hat, const Evaluable& w);

// Treated-sample mean of Y - g_hat(0, X).
EstimateResult plug_in_att(const Dataset& data, const NuisancePair& hat);

// Doubly robust ATT with the m_hat/(1-m_hat)-weighted control correction.
EstimateResult dr_att(const Dataset& data, const NuisancePair& hat);

}  // namespace drlab
