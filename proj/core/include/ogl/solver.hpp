#pragma once

#include "ogl/model.hpp"

namespace ogl {

enum class StepRule {
  kFixedLipschitz,  // step 1/||X||_F^2, always valid
  kBacktracking,    // step from a spectral-norm estimate, halved on violation
};

struct SolverConfig {
  int max_outer_iters = 10000;
  double outer_tol = 1e-10;  // relative objective change, 5 consecutive hits
  int prox_max_iters = 500;
  double prox_tol = 1e-12;  // max dual block update norm
  StepRule step_rule = StepRule::kBacktracking;
};

/// Dual decomposition state for the overlapping prox, reusable across
/// calls on the same group set for warm starts.
struct ProxWorkspace {
  std::vector<Vector> xi;  // one block per group, xi[g].size() == n_g
  bool initialized = false;
};

struct ProxInfo {
  int sweeps = 0;
  bool converged = true;
  double last_change = 0.0;
};

/// argmin_b 0.5*||b - v||^2 + tau * sum_g weight_g ||b_g||, computed by
/// cyclic projection of the dual blocks onto balls of radius tau*weight_g.
/// Exact shrinkage to zero happens in the dual, no thresholding epsilon.
Vector prox_overlap(const Vector& v, double tau, const GroupSet& groups,
                    const SolverConfig& cfg = {}, ProxWorkspace* ws = nullptr,
                    ProxInfo* info = nullptr);

struct Solution {
  Vector beta;
  double lambda = 0.0;
  double objective = 0.0;
  double gap_estimate = 0.0;  // norm of the proximal-gradient mapping
  int iterations = 0;
  bool converged = false;
};

struct SolveTrace {
  std::vector<double> objectives;  // one entry per accepted outer iterate
};

/// Accelerated proximal gradient with monotone restart. The momentum is
/// dropped whenever the candidate would raise the objective, so the trace
/// is non-increasing up to roundoff.
Solution solve(const Problem& p, double lambda,
               const Vector* warm_start = nullptr,
               const SolverConfig& cfg = {}, SolveTrace* trace = nullptr);

enum class DualSource {
  kExact0,      // beta* = 0 certified, theta = y / lambda0
  kFromPrimal,  // theta = (y - X beta) / lambda0
  kExternal,
};

/// Dual certificate theta*(lambda0) used as the screening anchor.
struct DualPoint {
  Vector theta;
  double lambda0 = 0.0;
  DualSource source = DualSource::kExternal;
};

/// Maps a solved primal point to its dual certificate at the same lambda.
DualPoint dual_point(const Problem& p, const Solution& sol);

}  // namespace ogl
