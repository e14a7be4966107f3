#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drlab/model.hpp"
#include "drlab/oracle.hpp"
#include "drlab/partition.hpp"

namespace drlab {

enum class ConstructionCase { case1, case2, case3, case4, att, oracle_shift };

const char* case_name(ConstructionCase c);
ConstructionCase case_from_name(const std::string& name);

struct FeasibilityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
  bool gating = true;  // recorded-only diagnostics have gating == false
};

struct PerturbationParams {
  ConstructionCase kind = ConstructionCase::case1;
  double alpha = 0.0;
  double beta = 0.0;
  double xi = 0.0;  // oracle shift only
  std::vector<FeasibilityCheck> checks;
};

// Optional context for the feasibility battery. Checks whose inputs are
// absent are skipped; the orchestration layer passes the full set.
struct ParamContext {
  double c = 0.0;
  double trunc_l2 = 0.0;  // ||w_trunc||_{P_X,2}; required for the WATE cases
  std::optional<double> trunc_linf;
  std::optional<double> w_linf;
  std::optional<double> g_min;          // grid min of the perturbed-side g
  std::optional<double> margin_expect;  // case-specific separation expectation
  // ATT (from choose_u):
  std::optional<double> c_u;
  std::optional<double> C_u;
  std::optional<double> u_linf;
  std::optional<double> u_l2;
  std::optional<double> m_max;
  std::optional<double> att_margin_expect;  // E[u / (m_hat (1 - m_hat))]
  // Oracle shift:
  std::optional<double> xi;
  std::optional<double> w_l2;
  std::optional<std::uint64_t> n;
};

// Evaluates the selecting lemma's formulas for (alpha, beta) and the
// feasibility battery; throws CaseMismatch on a budget-order violation and
// NTooSmall carrying the first failed gating inequality.
PerturbationParams select_params(ConstructionCase kind, const ErrorBudget& budget,
                                 const ParamContext& ctx);

struct AttAuxiliary;
class Partition;

// Computes every optional ParamContext field from the actual center, weight
// and partition, so the feasibility battery can gate on real quantities.
ParamContext full_context(ConstructionCase kind, const NuisancePair& center, const Evaluable& w,
                          const Partition& partition, const Quadrature& quad,
                          const AttAuxiliary* aux = nullptr);

// Auxiliary weight u for the ATT construction, with its constants and the
// reordered equal-measure partition whose first cells sit inside the
// level-set event used to define u.
struct AttAuxiliary {
  Evaluable u;
  Evaluable v;  // (1 - m_hat) / m_hat
  double C_u = 0.0;
  double c_u = 0.0;
  double delta0 = 0.0;
  double theta_ml = 0.0;
  double u_linf = 0.0;
  double u_l2 = 0.0;
};

struct AttSetup {
  AttAuxiliary aux;
  std::shared_ptr<const Partition> partition;
};

AttSetup choose_u(const NuisancePair& center, int levels, const Quadrature& quad);

// Coefficient desync knobs for mutation tests; all 1.0 in normal use.
struct Corruption {
  double g_alpha = 1.0;
  double g_beta = 1.0;
  double m_alpha = 1.0;
  double m_beta = 1.0;
};

// One lower-bound construction around a center (m_hat, g_hat): evaluates
// (m_lambda, g_lambda) pointwise for either sign of the local Rademacher
// coordinate.
class PerturbedFamily {
 public:
  struct Values {
    double m;
    double g0;
    double g1;
  };

  ConstructionCase kind() const { return params_.kind; }
  const NuisancePair& center() const { return center_; }
  const PerturbationParams& params() const { return params_; }
  const Partition& partition() const { return *partition_; }
  std::shared_ptr<const Partition> partition_ptr() const { return partition_; }
  const Evaluable& w() const { return w_; }
  const Evaluable& trunc() const { return trunc_; }
  const std::optional<AttAuxiliary>& att() const { return att_; }

  Values eval(const Point& x, int delta) const;
  double density_at(const Point& x, int d, int y, int delta) const;
  double center_density_at(const Point& x, int d, int y) const;

  NuisancePair realize(const RademacherAssignment& assignment) const;
  NuisancePair shifted() const;  // oracle_shift only

  Quadrature refined_quad(const Quadrature& base) const;

  friend PerturbedFamily construct(ConstructionCase, const NuisancePair&,
                                   std::shared_ptr<const Partition>, const PerturbationParams&,
                                   const Evaluable&, const Quadrature&,
                                   std::optional<AttAuxiliary>, Corruption);

 private:
  NuisancePair center_;
  std::shared_ptr<const Partition> partition_;
  PerturbationParams params_;
  Evaluable w_;
  Evaluable trunc_;
  std::optional<AttAuxiliary> att_;
  Corruption corruption_;

  std::array<std::vector<double>, kMaxDim> refined_breaks() const;
};

// Builds the family and validates 0 <= m_lambda, g_lambda <= 1 at every
// refined grid point for both signs; throws ConstructionInvalid naming the
// offending point. `partition` may be null only for oracle_shift.
PerturbedFamily construct(ConstructionCase kind, const NuisancePair& center,
                          std::shared_ptr<const Partition> partition,
                          const PerturbationParams& params, const Evaluable& w,
                          const Quadrature& quad, std::optional<AttAuxiliary> att = {},
                          Corruption corruption = {});

// max over grid points and (d, y) of |E_lambda q_lambda - p_hat|, the
// lambda-average taken exactly over the two signs of the local coordinate.
double verify_mixture_equality(const PerturbedFamily& family, const Quadrature& base);

struct SeparationReport {
  double required_margin = 0.0;
  int direction = +1;  // +1: theta_lambda >= ref + margin; -1: <= ref - margin
  double theta_ref = 0.0;
  std::vector<double> gaps;  // theta_lambda - theta_ref per sampled lambda
  double min_margin = 0.0;   // min over lambda of direction * gap
  bool all_ok = false;       // min_margin >= required_margin - 1e-12
};

SeparationReport verify_separation(const PerturbedFamily& family, int n_lambda,
                                   std::uint64_t seed, const Quadrature& base);

// theta(shifted) - theta(center) for the oracle-shift construction, together
// with the predicted value xi * ||w||_2^2 (WATE) or xi (ATT).
struct OracleShiftGap {
  double gap = 0.0;
  double predicted = 0.0;
};
OracleShiftGap oracle_shift_gap(const PerturbedFamily& family, FunctionalKind kind,
                                const Quadrature& base);

struct Lemma1Report {
  double b = 0.0;
  double max_pj = 0.0;
  double max_pj_deviation = 0.0;  // max_j |p_j - 2/M|
  bool bound_ok = false;          // b <= 4/c^2 and p_j = 2/M to 1e-12
};

Lemma1Report lemma1_premises(const PerturbedFamily& family, const Quadrature& base);

}  // namespace drlab
