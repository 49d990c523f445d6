#include "ogl/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ogl {

DesignMatrix::DesignMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InputError("design matrix must have at least one row and column");
  }
  if (!values_.allFinite()) {
    throw InputError("design matrix contains non-finite entries");
  }
  col_norms_ = values_.colwise().norm();
}

bool Group::contains(int j) const {
  return std::binary_search(indices.begin(), indices.end(), j);
}

bool Group::subset_of(const Group& other) const {
  return std::includes(other.indices.begin(), other.indices.end(),
                       indices.begin(), indices.end());
}

Group make_group(std::vector<int> indices) {
  const double unset = -1.0;
  Group g = make_group(std::move(indices), unset);
  g.weight = std::sqrt(static_cast<double>(g.size()));
  return g;
}

Group make_group(std::vector<int> indices, double weight) {
  if (indices.empty()) {
    throw InputError("empty group");
  }
  std::sort(indices.begin(), indices.end());
  if (indices.front() < 0) {
    throw InputError("negative feature index in group");
  }
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InputError("duplicate feature index in group");
  }
  Group g;
  g.indices = std::move(indices);
  g.weight = weight;
  return g;
}

namespace {

bool group_order(const Group& a, const Group& b) {
  if (a.min_index() != b.min_index()) return a.min_index() < b.min_index();
  if (a.size() != b.size()) return a.size() > b.size();
  return a.indices < b.indices;
}

}  // namespace

GroupSet GroupSet::build(std::vector<Group> groups, int window) {
  if (window < 0) {
    throw InputError("window must be non-negative");
  }
  std::sort(groups.begin(), groups.end(), group_order);
  groups.erase(std::unique(groups.begin(), groups.end(),
                           [](const Group& a, const Group& b) {
                             return a.indices == b.indices;
                           }),
               groups.end());
  GroupSet set;
  set.groups_ = std::move(groups);
  set.window_ = window;
  return set;
}

int GroupSet::max_index() const {
  int m = -1;
  for (const Group& g : groups_) m = std::max(m, g.indices.back());
  return m;
}

bool GroupSet::covers(int n_features) const {
  std::vector<char> seen(static_cast<size_t>(n_features), 0);
  for (const Group& g : groups_) {
    for (int j : g.indices) {
      if (j < n_features) seen[static_cast<size_t>(j)] = 1;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

GroupSet sparse_augment(const GroupSet& groups, int n_features,
                        double l1_weight) {
  if (l1_weight <= 0.0) {
    throw InputError("l1 weight must be positive");
  }
  std::vector<Group> out = groups.groups();
  std::vector<char> has_singleton(static_cast<size_t>(n_features), 0);
  for (Group& g : out) {
    if (g.size() == 1) {
      has_singleton[static_cast<size_t>(g.indices[0])] = 1;
      g.weight = l1_weight;
    }
  }
  for (int j = 0; j < n_features; ++j) {
    if (!has_singleton[static_cast<size_t>(j)]) {
      out.push_back(make_group({j}, l1_weight));
    }
  }
  return GroupSet::build(std::move(out), groups.window());
}

Problem assemble_problem(DesignMatrix x, Vector y, GroupSet groups,
                         PenaltyKind kind, double l1_ratio) {
  if (y.size() != x.n_samples()) {
    throw InputError("response length does not match sample count");
  }
  if (!y.allFinite()) {
    throw InputError("response contains non-finite entries");
  }
  if (groups.max_index() >= x.n_features()) {
    throw InputError("group index out of range");
  }
  Problem p{std::move(x), std::move(y), std::move(groups), kind, l1_ratio};
  std::vector<Group> bound = p.groups.groups();
  for (Group& g : bound) {
    double sq = 0.0;
    for (int j : g.indices) {
      double c = p.x.col_norm(j);
      sq += c * c;
    }
    g.frob_norm = std::sqrt(sq);
  }
  GroupSet rebound = GroupSet::build(std::move(bound), p.groups.window());
  p.groups = std::move(rebound);
  return p;
}

Problem build_problem(DesignMatrix x, Vector y,
                      const std::vector<std::vector<int>>& raw_groups,
                      PenaltyKind kind, double l1_ratio, int window) {
  std::vector<Group> groups;
  groups.reserve(raw_groups.size());
  for (const auto& raw : raw_groups) {
    groups.push_back(make_group(raw));
  }
  GroupSet set = GroupSet::build(std::move(groups), window);
  if (set.max_index() >= x.n_features()) {
    throw InputError("group index out of range");
  }
  if (kind == PenaltyKind::kSparseOverlapping) {
    if (l1_ratio <= 0.0) {
      throw InputError("l1 ratio must be positive");
    }
    set = sparse_augment(set, static_cast<int>(x.n_features()), l1_ratio);
  } else if (!set.covers(static_cast<int>(x.n_features()))) {
    throw InputError(
        "every feature must belong to a group (only sparse problems allow "
        "uncovered features)");
  }
  return assemble_problem(std::move(x), std::move(y), std::move(set), kind,
                          l1_ratio);
}

std::vector<int> inclusive_groups(int g_pos, const GroupSet& groups,
                                  int window) {
  if (g_pos < 0 || g_pos >= groups.count()) {
    throw InputError("group position out of range");
  }
  if (window < 0) {
    throw InputError("window must be non-negative");
  }
  const Group& g = groups[g_pos];
  std::vector<int> out;
  int last = std::min(groups.count() - 1, g_pos + window);
  for (int m = g_pos + 1; m <= last; ++m) {
    if (groups[m].size() <= g.size() && groups[m].subset_of(g)) {
      out.push_back(m);
    }
  }
  return out;
}

double group_norm(const Vector& beta, const Group& g) {
  double sq = 0.0;
  for (int j : g.indices) sq += beta[j] * beta[j];
  return std::sqrt(sq);
}

double objective(const Problem& p, const Vector& beta, double lambda) {
  if (beta.size() != p.n_features()) {
    throw InputError("coefficient length does not match feature count");
  }
  double loss = 0.5 * (p.y - p.x.values() * beta).squaredNorm();
  double penalty = 0.0;
  for (const Group& g : p.groups.groups()) {
    penalty += g.weight * group_norm(beta, g);
  }
  return loss + lambda * penalty;
}

}  // namespace ogl
