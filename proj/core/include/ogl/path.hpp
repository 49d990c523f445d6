#pragma once

#include "ogl/model.hpp"
#include "ogl/screening.hpp"
#include "ogl/solver.hpp"

#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace ogl {

/// Strictly decreasing positive lambda grid. anchor is the certified
/// all-zero lambda the first step screens against (NaN for explicit grids
/// built without one; the driver then finds it itself).
struct LambdaPath {
  std::vector<double> values;
  double anchor = std::numeric_limits<double>::quiet_NaN();

  static LambdaPath geometric(double lambda_prime, double ratio, int steps);
  static LambdaPath explicit_values(std::vector<double> values);
};

/// Smallest lambda at which the zero solution is certified by weights
/// alone: max_g ||X_g^T y||_2 / weight_g.
double lambda_one(const Problem& p);

struct LambdaPrimeResult {
  double lambda_prime = 0.0;
  double lambda1 = 0.0;
  int steps = 0;        // screening evaluations performed
  bool hit_cap = false; // max_steps reached with every lambda still all-zero
};

/// Walks lambda down geometrically from lambda_one, screening each next
/// value against the exact dual y/lambda of the previous one, and returns
/// the last lambda whose survivor set was empty.
LambdaPrimeResult find_lambda_prime(const Problem& p, double ratio = 0.9,
                                    int max_steps = 100,
                                    Rule rule = Rule::kOls,
                                    int window = kDefaultWindow,
                                    double safe_eps = 0.0);

/// Restriction of a problem to the features outside the discarded groups.
/// Surviving groups keep their original weights; groups emptied by the
/// restriction are dropped, and survivors that collapse onto the same
/// index set merge with summed weights. problem is empty when every
/// feature was discarded.
struct Reduction {
  std::vector<int> kept;  // ascending original feature indices
  std::optional<Problem> problem;

  Vector scatter(const Vector& reduced_beta, Eigen::Index full_dim) const;
  Vector restrict(const Vector& full_beta) const;
};

Reduction reduce_problem(const Problem& p, const ScreenReport& report);

struct PathStep {
  double lambda = 0.0;
  bool screened = false;
  int n_survivor_groups = 0;
  int n_discarded_coeffs = 0;
  std::vector<int> discarded_features;
  Vector beta;  // full length
  double objective = 0.0;
  int n_true_zero = -1;  // filled by evaluate_against_reference
  double rejection_ratio = std::numeric_limits<double>::quiet_NaN();
  double screen_ms = 0.0;
  double solve_ms = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct PathResult {
  std::vector<PathStep> steps;
  Rule rule = Rule::kGdpp;
  bool screening_used = true;  // false for reference runs
  double anchor = std::numeric_limits<double>::quiet_NaN();
  bool aborted = false;        // solver failed; steps hold partial results
  std::string abort_message;

  double total_screen_ms() const;
  double total_solve_ms() const;
};

/// Sequential screened path. The first value screens against the anchor
/// with the exact dual y/anchor; later values use the dual of the previous
/// solution. Once a value discards nothing, screening stays off for the
/// rest of the run. Each solve is warm-started from the previous step.
PathResult run_sequential(const Problem& p, const LambdaPath& path, Rule rule,
                          int window = kDefaultWindow,
                          const SolverConfig& cfg = {}, double safe_eps = 0.0);

/// Same path without screening; the correctness yardstick.
PathResult run_reference(const Problem& p, const LambdaPath& path,
                         const SolverConfig& cfg = {});

/// |discarded features| / |reference coefficients with magnitude <= tol|,
/// defined as 1 when both are zero. Throws SafetyViolation if a discarded
/// feature is active in the reference.
double rejection_ratio(const Problem& p, const std::vector<int>& discarded,
                       const Vector& reference_beta, double zero_tol = 1e-6);

/// Fills rejection_ratio and n_true_zero on every screened step, checking
/// each discard against the reference solution at the same lambda.
void evaluate_against_reference(PathResult& screened,
                                const PathResult& reference, const Problem& p,
                                double zero_tol = 1e-6);

/// One row per step. Screened runs carry the screening columns; reference
/// runs only lambda, rule, solve_ms and objective.
void write_path_csv(std::ostream& os, const PathResult& result);

}  // namespace ogl
