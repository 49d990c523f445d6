#pragma once

#include "ogl/model.hpp"
#include "ogl/solver.hpp"

#include <span>
#include <string_view>

namespace ogl {

enum class Rule { kGdpp, kOls, kSols };

std::string_view rule_name(Rule r);

struct ScreenDecision {
  int group_id = 0;  // position in the canonical group order
  bool discard = false;
  double lhs = 0.0;
  double threshold = 0.0;
};

struct ScreenReport {
  std::vector<ScreenDecision> decisions;  // one per group, canonical order
  std::vector<int> survivors;             // ascending group positions
  Rule rule = Rule::kGdpp;
  double lambda = 0.0;
  double lambda0 = 0.0;
  double elapsed_ms = 0.0;

  /// Sorted union of the discarded groups' feature indices.
  std::vector<int> discarded_features(const GroupSet& groups) const;
};

/// Right-hand side of the discard test: weight_g minus the group's
/// Frobenius norm times the dual ball radius ||y||*|1/lambda - 1/lambda0|
/// (optionally inflated by safe_eps). May be negative, in which case the
/// group can never be discarded at this lambda.
double threshold(const Group& g, double lambda, double lambda0, double y_norm,
                 double safe_eps = 0.0);

struct WUpdate {
  double w = 0.0;
  double d_next = 0.0;
  double residual_sq = 0.0;
};

/// One coordinate of the greedy subgradient fit: spend as much of the
/// remaining squared budget d as the correlation asks for, saturate at
/// sign(corr)*sqrt(d) otherwise. weight is the owning subset's weight.
WUpdate w_update(double corr, double weight, double d);

/// ||X_g^T theta||_2 from precomputed correlations X^T theta.
double gdpp_lhs(const Group& g, const Vector& correlations);

/// Tightened bound: subsets listed in ghat1 (positions into groups, the
/// order inclusive_groups produced) absorb their share of the correlation
/// before the remainder is measured. Never exceeds gdpp_lhs.
double ols_lhs(const Group& g, std::span<const int> ghat1,
               const GroupSet& groups, const Vector& correlations);

/// Sparse-problem bound: every coordinate owns an l1 singleton, so the
/// subset fit reduces to per-coordinate soft thresholding at l1_weight.
/// Singleton groups measure their bare correlation.
double sols_lhs(const Group& g, const Vector& correlations, double l1_weight);

/// The screen_* functions test every group against theta0, a dual
/// certificate at theta0.lambda0 >= lambda (equality means radius zero).
/// Groups whose lhs falls strictly below the threshold are discarded;
/// ties survive. Decisions are pure per-group functions of the shared
/// correlation vector, so they parallelize and are order-independent.
ScreenReport screen_gdpp(const Problem& p, double lambda,
                         const DualPoint& theta0, double safe_eps = 0.0);
ScreenReport screen_ols(const Problem& p, double lambda,
                        const DualPoint& theta0, int window,
                        double safe_eps = 0.0);
ScreenReport screen_sols(const Problem& p, double lambda,
                         const DualPoint& theta0, double safe_eps = 0.0);
ScreenReport screen(Rule rule, const Problem& p, double lambda,
                    const DualPoint& theta0, int window,
                    double safe_eps = 0.0);

}  // namespace ogl
