#include "ogl/screening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace ogl {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kGdpp:
      return "gdpp";
    case Rule::kOls:
      return "ols";
    case Rule::kSols:
      return "sols";
  }
  return "unknown";
}

std::vector<int> ScreenReport::discarded_features(
    const GroupSet& groups) const {
  std::vector<int> out;
  for (const ScreenDecision& d : decisions) {
    if (!d.discard) continue;
    const auto& idx = groups[d.group_id].indices;
    out.insert(out.end(), idx.begin(), idx.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double threshold(const Group& g, double lambda, double lambda0, double y_norm,
                 double safe_eps) {
  if (!(lambda > 0.0) || !(lambda0 > 0.0)) {
    throw InputError("lambda and lambda0 must be positive");
  }
  if (safe_eps < 0.0) {
    throw InputError("safe_eps must be non-negative");
  }
  double radius = y_norm * std::abs(1.0 / lambda - 1.0 / lambda0) + safe_eps;
  return g.weight - g.frob_norm * radius;
}

WUpdate w_update(double corr, double weight, double d) {
  if (!(weight > 0.0)) {
    throw InputError("group weight must be positive");
  }
  if (d < 0.0 || d > 1.0 + 1e-9) {
    throw InputError("budget must lie in [0, 1]");
  }
  double ratio = corr / weight;
  double root = std::sqrt(d);
  if (std::abs(ratio) <= root) {
    double d_next = d - ratio * ratio;
    return {ratio, d_next < 0.0 ? 0.0 : d_next, 0.0};
  }
  double w = corr > 0.0 ? root : -root;
  double resid = corr - weight * w;
  return {w, 0.0, resid * resid};
}

double gdpp_lhs(const Group& g, const Vector& correlations) {
  double sq = 0.0;
  for (int j : g.indices) {
    double c = correlations[j];
    sq += c * c;
  }
  return std::sqrt(sq);
}

double ols_lhs(const Group& g, std::span<const int> ghat1,
               const GroupSet& groups, const Vector& correlations) {
  // active marks coordinates of g not yet claimed by a processed subset
  std::vector<char> active(g.indices.size(), 1);
  std::vector<int> claimed;
  double l = 0.0;
  for (int h_pos : ghat1) {
    const Group& h = groups[h_pos];
    claimed.clear();
    for (int j : h.indices) {
      auto it = std::lower_bound(g.indices.begin(), g.indices.end(), j);
      if (it != g.indices.end() && *it == j) {
        auto k = static_cast<size_t>(it - g.indices.begin());
        if (active[k]) claimed.push_back(static_cast<int>(k));
      }
    }
    if (claimed.empty()) continue;
    double nsq = 0.0;
    for (int k : claimed) {
      double c = correlations[g.indices[static_cast<size_t>(k)]];
      nsq += c * c;
    }
    if (std::sqrt(nsq) > h.weight) {
      // Greedy fit over the whole intersection; once the budget is spent
      // the remaining coordinates contribute their full correlation.
      double d = 1.0;
      for (int k : claimed) {
        WUpdate u =
            w_update(correlations[g.indices[static_cast<size_t>(k)]], h.weight, d);
        d = u.d_next;
        l += u.residual_sq;
      }
    }
    for (int k : claimed) active[static_cast<size_t>(k)] = 0;
  }
  for (size_t k = 0; k < active.size(); ++k) {
    if (active[k]) {
      double c = correlations[g.indices[k]];
      l += c * c;
    }
  }
  return std::sqrt(l);
}

double sols_lhs(const Group& g, const Vector& correlations, double l1_weight) {
  if (g.size() == 1) {
    return std::abs(correlations[g.indices[0]]);
  }
  double l = 0.0;
  for (int j : g.indices) {
    double excess = std::abs(correlations[j]) - l1_weight;
    if (excess > 0.0) l += excess * excess;
  }
  return std::sqrt(l);
}

namespace {

void check_screen_inputs(const Problem& p, double lambda,
                         const DualPoint& theta0) {
  if (!(lambda > 0.0)) {
    throw InputError("lambda must be positive");
  }
  if (!(theta0.lambda0 > 0.0)) {
    throw InputError("dual point lambda0 must be positive");
  }
  if (lambda > theta0.lambda0) {
    throw InputError("screening requires lambda <= lambda0");
  }
  if (theta0.theta.size() != p.n_samples()) {
    throw InputError("dual point length does not match sample count");
  }
}

template <typename LhsFn>
ScreenReport run_screen(Rule rule, const Problem& p, double lambda,
                        const DualPoint& theta0, double safe_eps, LhsFn lhs_fn) {
  check_screen_inputs(p, lambda, theta0);
  auto t0 = std::chrono::steady_clock::now();

  Vector corr = p.x.values().transpose() * theta0.theta;
  double y_norm = p.y.norm();

  ScreenReport report;
  report.rule = rule;
  report.lambda = lambda;
  report.lambda0 = theta0.lambda0;
  report.decisions.resize(static_cast<size_t>(p.groups.count()));
  for (int m = 0; m < p.groups.count(); ++m) {
    const Group& g = p.groups[m];
    ScreenDecision& d = report.decisions[static_cast<size_t>(m)];
    d.group_id = m;
    d.lhs = lhs_fn(m, g, corr);
    d.threshold = threshold(g, lambda, theta0.lambda0, y_norm, safe_eps);
    d.discard = d.lhs < d.threshold;
  }
  for (const ScreenDecision& d : report.decisions) {
    if (!d.discard) report.survivors.push_back(d.group_id);
  }

  auto t1 = std::chrono::steady_clock::now();
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

}  // namespace

ScreenReport screen_gdpp(const Problem& p, double lambda,
                         const DualPoint& theta0, double safe_eps) {
  return run_screen(Rule::kGdpp, p, lambda, theta0, safe_eps,
                    [](int, const Group& g, const Vector& corr) {
                      return gdpp_lhs(g, corr);
                    });
}

ScreenReport screen_ols(const Problem& p, double lambda,
                        const DualPoint& theta0, int window, double safe_eps) {
  if (window < 0) {
    throw InputError("window must be non-negative");
  }
  return run_screen(Rule::kOls, p, lambda, theta0, safe_eps,
                    [&](int m, const Group& g, const Vector& corr) {
                      std::vector<int> ghat1 =
                          inclusive_groups(m, p.groups, window);
                      return ols_lhs(g, ghat1, p.groups, corr);
                    });
}

ScreenReport screen_sols(const Problem& p, double lambda,
                         const DualPoint& theta0, double safe_eps) {
  if (p.kind != PenaltyKind::kSparseOverlapping) {
    throw InputError("the sparse rule requires a sparse overlapping problem");
  }
  return run_screen(Rule::kSols, p, lambda, theta0, safe_eps,
                    [&](int, const Group& g, const Vector& corr) {
                      return sols_lhs(g, corr, p.l1_ratio);
                    });
}

ScreenReport screen(Rule rule, const Problem& p, double lambda,
                    const DualPoint& theta0, int window, double safe_eps) {
  switch (rule) {
    case Rule::kGdpp:
      return screen_gdpp(p, lambda, theta0, safe_eps);
    case Rule::kOls:
      return screen_ols(p, lambda, theta0, window, safe_eps);
    case Rule::kSols:
      return screen_sols(p, lambda, theta0, safe_eps);
  }
  throw InputError("unknown screening rule");
}

}  // namespace ogl
