#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ogl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Malformed user input: files, shapes, group definitions, bad parameters.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative routine failed where convergence is required.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A screening decision discarded a coefficient the reference says is active.
struct SafetyViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense column-major design matrix with cached per-column norms.
/// Entries must be finite; both dimensions must be positive.
class DesignMatrix {
 public:
  explicit DesignMatrix(Matrix values);

  Eigen::Index n_samples() const { return values_.rows(); }
  Eigen::Index n_features() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  auto col(Eigen::Index j) const { return values_.col(j); }
  const Vector& col_norms() const { return col_norms_; }
  double col_norm(Eigen::Index j) const { return col_norms_[j]; }

 private:
  Matrix values_;
  Vector col_norms_;
};

/// One penalty group. indices is nonempty and strictly increasing.
/// weight is sqrt(size) unless the group is an l1 singleton (ratio weight)
/// or the survivor of a reduction (original weight kept, possibly merged).
/// frob_norm is ||X_g||_F, bound when the group joins a Problem.
struct Group {
  std::vector<int> indices;
  double weight = 0.0;
  double frob_norm = 0.0;

  int size() const { return static_cast<int>(indices.size()); }
  int min_index() const { return indices.front(); }
  bool contains(int j) const;
  bool subset_of(const Group& other) const;
};

/// Sorts and validates a raw index list; weight defaults to sqrt(size).
Group make_group(std::vector<int> indices);
Group make_group(std::vector<int> indices, double weight);

inline constexpr int kDefaultWindow = 50;

/// Groups in canonical order: smallest index ascending, ties broken by
/// larger size first, then lexicographically on the index lists.
/// Exact duplicate index sets are dropped (first kept). The canonical order
/// puts every subset of a group after it, which is what the windowed
/// subset search relies on.
class GroupSet {
 public:
  GroupSet() = default;
  static GroupSet build(std::vector<Group> groups, int window = kDefaultWindow);

  const std::vector<Group>& groups() const { return groups_; }
  const Group& operator[](int m) const { return groups_[m]; }
  int count() const { return static_cast<int>(groups_.size()); }
  int window() const { return window_; }
  /// Largest feature index referenced; -1 when empty.
  int max_index() const;
  bool covers(int n_features) const;

 private:
  std::vector<Group> groups_;
  int window_ = kDefaultWindow;
};

enum class PenaltyKind {
  kOverlapping,        // sum_g weight_g ||beta_g||
  kSparseOverlapping,  // same, over a group set augmented with all singletons
};

/// Immutable problem instance. For kSparseOverlapping the group set already
/// contains every singleton {j} with weight l1_ratio; group frob norms are
/// bound to x.
struct Problem {
  DesignMatrix x;
  Vector y;
  GroupSet groups;
  PenaltyKind kind = PenaltyKind::kOverlapping;
  double l1_ratio = 1.0;

  Eigen::Index n_samples() const { return x.n_samples(); }
  Eigen::Index n_features() const { return x.n_features(); }
};

/// Validates shapes and raw groups, sorts them, augments sparse problems
/// with singletons, and binds per-group Frobenius norms.
/// Overlapping problems must cover every feature with at least one group.
Problem build_problem(DesignMatrix x, Vector y,
                      const std::vector<std::vector<int>>& raw_groups,
                      PenaltyKind kind = PenaltyKind::kOverlapping,
                      double l1_ratio = 1.0, int window = kDefaultWindow);

/// Internal assembly from an already canonical group set; binds frob norms.
Problem assemble_problem(DesignMatrix x, Vector y, GroupSet groups,
                         PenaltyKind kind, double l1_ratio);

/// Adds the missing singletons {0..n_features-1} and gives every size-1
/// group weight l1_weight. Idempotent.
GroupSet sparse_augment(const GroupSet& groups, int n_features,
                        double l1_weight = 1.0);

/// Positions (ascending) of the groups within `window` slots after
/// position g_pos that are subsets of groups[g_pos]. The deliberate
/// truncation to a window keeps the search linear; missing a subset only
/// weakens a bound, never breaks it.
std::vector<int> inclusive_groups(int g_pos, const GroupSet& groups,
                                  int window);

double group_norm(const Vector& beta, const Group& g);

/// 0.5*||y - X beta||^2 + lambda * sum_g weight_g ||beta_g||.
double objective(const Problem& p, const Vector& beta, double lambda);

}  // namespace ogl
