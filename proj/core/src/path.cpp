#include "ogl/path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <utility>

namespace ogl {

LambdaPath LambdaPath::geometric(double lambda_prime, double ratio,
                                 int steps) {
  if (!(lambda_prime > 0.0)) {
    throw InputError("lambda' must be positive");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InputError("path ratio must lie in (0, 1)");
  }
  if (steps < 1) {
    throw InputError("path needs at least one step");
  }
  LambdaPath path;
  path.anchor = lambda_prime;
  path.values.reserve(static_cast<size_t>(steps));
  double lam = lambda_prime;
  for (int t = 0; t < steps; ++t) {
    lam *= ratio;
    path.values.push_back(lam);
  }
  return path;
}

LambdaPath LambdaPath::explicit_values(std::vector<double> values) {
  if (values.empty()) {
    throw InputError("path needs at least one value");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw InputError("path values must be positive");
    }
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw InputError("path values must be strictly decreasing");
    }
  }
  LambdaPath path;
  path.values = std::move(values);
  return path;
}

double lambda_one(const Problem& p) {
  if (p.groups.count() == 0) {
    throw InputError("problem has no groups");
  }
  Vector corr = p.x.values().transpose() * p.y;
  double best = 0.0;
  for (const Group& g : p.groups.groups()) {
    best = std::max(best, gdpp_lhs(g, corr) / g.weight);
  }
  if (best <= 0.0) {
    throw InputError("X^T y is zero; the penalty never activates");
  }
  return best;
}

LambdaPrimeResult find_lambda_prime(const Problem& p, double ratio,
                                    int max_steps, Rule rule, int window,
                                    double safe_eps) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InputError("ratio must lie in (0, 1)");
  }
  if (max_steps < 1) {
    throw InputError("max_steps must be positive");
  }
  LambdaPrimeResult out;
  out.lambda1 = lambda_one(p);
  double prev = out.lambda1;
  for (int t = 1; t <= max_steps; ++t) {
    double next = prev * ratio;
    DualPoint theta{p.y / prev, prev, DualSource::kExact0};
    ScreenReport rep = screen(rule, p, next, theta, window, safe_eps);
    out.steps = t;
    if (!rep.survivors.empty()) {
      out.lambda_prime = prev;
      return out;
    }
    prev = next;
  }
  out.lambda_prime = prev;
  out.hit_cap = true;
  return out;
}

Vector Reduction::scatter(const Vector& reduced_beta,
                          Eigen::Index full_dim) const {
  if (reduced_beta.size() != static_cast<Eigen::Index>(kept.size())) {
    throw InputError("reduced coefficient length does not match kept set");
  }
  Vector out = Vector::Zero(full_dim);
  for (size_t i = 0; i < kept.size(); ++i) {
    out[kept[i]] = reduced_beta[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Vector Reduction::restrict(const Vector& full_beta) const {
  Vector out(static_cast<Eigen::Index>(kept.size()));
  for (size_t i = 0; i < kept.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = full_beta[kept[i]];
  }
  return out;
}

Reduction reduce_problem(const Problem& p, const ScreenReport& report) {
  if (static_cast<int>(report.decisions.size()) != p.groups.count()) {
    throw InputError("screen report does not match the problem's group set");
  }
  const int n_feat = static_cast<int>(p.n_features());
  std::vector<int> zero_set = report.discarded_features(p.groups);

  Reduction red;
  red.kept.reserve(static_cast<size_t>(n_feat) - zero_set.size());
  size_t zi = 0;
  for (int j = 0; j < n_feat; ++j) {
    if (zi < zero_set.size() && zero_set[zi] == j) {
      ++zi;
    } else {
      red.kept.push_back(j);
    }
  }
  if (red.kept.empty()) {
    return red;
  }

  std::vector<int> pos(static_cast<size_t>(n_feat), -1);
  for (size_t i = 0; i < red.kept.size(); ++i) {
    pos[static_cast<size_t>(red.kept[i])] = static_cast<int>(i);
  }

  Matrix xk(p.n_samples(), static_cast<Eigen::Index>(red.kept.size()));
  for (size_t i = 0; i < red.kept.size(); ++i) {
    xk.col(static_cast<Eigen::Index>(i)) = p.x.col(red.kept[i]);
  }

  std::vector<Group> reduced;
  reduced.reserve(report.survivors.size());
  for (int id : report.survivors) {
    const Group& g = p.groups[id];
    std::vector<int> idx;
    idx.reserve(g.indices.size());
    for (int j : g.indices) {
      if (pos[static_cast<size_t>(j)] >= 0) {
        idx.push_back(pos[static_cast<size_t>(j)]);
      }
    }
    if (idx.empty()) continue;
    reduced.push_back(make_group(std::move(idx), g.weight));
  }
  // Distinct survivors can restrict onto the same index set; both
  // penalties still apply, so merge them instead of letting the set
  // builder drop one.
  std::sort(reduced.begin(), reduced.end(),
            [](const Group& a, const Group& b) { return a.indices < b.indices; });
  std::vector<Group> merged;
  for (Group& g : reduced) {
    if (!merged.empty() && merged.back().indices == g.indices) {
      merged.back().weight += g.weight;
    } else {
      merged.push_back(std::move(g));
    }
  }

  red.problem =
      assemble_problem(DesignMatrix(std::move(xk)), p.y,
                       GroupSet::build(std::move(merged), p.groups.window()),
                       p.kind, p.l1_ratio);
  return red;
}

double PathResult::total_screen_ms() const {
  double s = 0.0;
  for (const PathStep& st : steps) s += st.screen_ms;
  return s;
}

double PathResult::total_solve_ms() const {
  double s = 0.0;
  for (const PathStep& st : steps) s += st.solve_ms;
  return s;
}

namespace {

void check_path(const LambdaPath& path) {
  if (path.values.empty()) {
    throw InputError("empty lambda path");
  }
  for (size_t i = 0; i < path.values.size(); ++i) {
    if (!(path.values[i] > 0.0)) {
      throw InputError("path values must be positive");
    }
    if (i > 0 && !(path.values[i] < path.values[i - 1])) {
      throw InputError("path values must be strictly decreasing");
    }
  }
}

double now_ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PathResult run_sequential(const Problem& p, const LambdaPath& path, Rule rule,
                          int window, const SolverConfig& cfg,
                          double safe_eps) {
  check_path(path);
  const Eigen::Index n_feat = p.n_features();
  const int n_groups = p.groups.count();

  PathResult result;
  result.rule = rule;
  result.screening_used = true;
  result.anchor = std::isfinite(path.anchor)
                      ? path.anchor
                      : find_lambda_prime(p, 0.9, 100, rule, window, safe_eps)
                            .lambda_prime;

  Vector prev_beta = Vector::Zero(n_feat);
  double prev_lambda = result.anchor;
  bool screening_on = true;

  for (double lam : path.values) {
    PathStep step;
    step.lambda = lam;
    bool do_screen = screening_on && lam <= prev_lambda;

    if (do_screen) {
      Solution prev_sol;
      prev_sol.beta = prev_beta;
      prev_sol.lambda = prev_lambda;
      DualPoint theta = dual_point(p, prev_sol);
      ScreenReport report = screen(rule, p, lam, theta, window, safe_eps);
      step.screened = true;
      step.screen_ms = report.elapsed_ms;
      step.n_survivor_groups = static_cast<int>(report.survivors.size());
      step.discarded_features = report.discarded_features(p.groups);
      step.n_discarded_coeffs = static_cast<int>(step.discarded_features.size());
      if (step.n_survivor_groups == n_groups) {
        screening_on = false;  // discards nothing: stop screening after this
      }

      if (report.survivors.empty() ||
          step.n_discarded_coeffs == static_cast<int>(n_feat)) {
        // With overlap, discarded groups can cover every feature even while
        // some groups survive; either way all coefficients are certified zero.
        step.beta = Vector::Zero(n_feat);
        step.objective = 0.5 * p.y.squaredNorm();
        step.converged = true;
      } else if (step.n_discarded_coeffs == 0) {
        auto t0 = std::chrono::steady_clock::now();
        Solution sol = solve(p, lam, &prev_beta, cfg);
        step.solve_ms = now_ms_since(t0);
        step.beta = std::move(sol.beta);
        step.objective = sol.objective;
        step.iterations = sol.iterations;
        step.converged = sol.converged;
      } else {
        Reduction red = reduce_problem(p, report);
        Vector warm = red.restrict(prev_beta);
        auto t0 = std::chrono::steady_clock::now();
        Solution sol = solve(*red.problem, lam, &warm, cfg);
        step.solve_ms = now_ms_since(t0);
        step.beta = red.scatter(sol.beta, n_feat);
        step.objective = objective(p, step.beta, lam);
        step.iterations = sol.iterations;
        step.converged = sol.converged;
      }
    } else {
      auto t0 = std::chrono::steady_clock::now();
      Solution sol = solve(p, lam, &prev_beta, cfg);
      step.solve_ms = now_ms_since(t0);
      step.beta = std::move(sol.beta);
      step.objective = sol.objective;
      step.iterations = sol.iterations;
      step.converged = sol.converged;
      step.n_survivor_groups = n_groups;
    }

    bool ok = step.converged;
    prev_beta = step.beta;
    prev_lambda = lam;
    result.steps.push_back(std::move(step));
    if (!ok) {
      result.aborted = true;
      result.abort_message =
          "solver did not converge at lambda = " + std::to_string(lam);
      break;
    }
  }
  return result;
}

PathResult run_reference(const Problem& p, const LambdaPath& path,
                         const SolverConfig& cfg) {
  check_path(path);
  PathResult result;
  result.screening_used = false;

  Vector prev_beta = Vector::Zero(p.n_features());
  for (double lam : path.values) {
    PathStep step;
    step.lambda = lam;
    step.n_survivor_groups = p.groups.count();
    auto t0 = std::chrono::steady_clock::now();
    Solution sol = solve(p, lam, &prev_beta, cfg);
    step.solve_ms = now_ms_since(t0);
    step.beta = std::move(sol.beta);
    step.objective = sol.objective;
    step.iterations = sol.iterations;
    step.converged = sol.converged;

    bool ok = step.converged;
    prev_beta = step.beta;
    result.steps.push_back(std::move(step));
    if (!ok) {
      result.aborted = true;
      result.abort_message =
          "solver did not converge at lambda = " + std::to_string(lam);
      break;
    }
  }
  return result;
}

double rejection_ratio(const Problem& p, const std::vector<int>& discarded,
                       const Vector& reference_beta, double zero_tol) {
  if (reference_beta.size() != p.n_features()) {
    throw InputError("reference coefficient length mismatch");
  }
  if (zero_tol < 0.0) {
    throw InputError("zero tolerance must be non-negative");
  }
  for (int j : discarded) {
    if (std::abs(reference_beta[j]) > zero_tol) {
      throw SafetyViolation("screening discarded feature " +
                            std::to_string(j) +
                            " whose reference coefficient is " +
                            std::to_string(reference_beta[j]));
    }
  }
  Eigen::Index zeros = 0;
  for (Eigen::Index j = 0; j < reference_beta.size(); ++j) {
    if (std::abs(reference_beta[j]) <= zero_tol) ++zeros;
  }
  if (zeros == 0) {
    return discarded.empty() ? 1.0 : 0.0;  // nonempty is unreachable here
  }
  return static_cast<double>(discarded.size()) / static_cast<double>(zeros);
}

void evaluate_against_reference(PathResult& screened,
                                const PathResult& reference, const Problem& p,
                                double zero_tol) {
  if (screened.steps.size() > reference.steps.size()) {
    throw InputError("reference path is shorter than the screened path");
  }
  for (size_t i = 0; i < screened.steps.size(); ++i) {
    PathStep& step = screened.steps[i];
    const PathStep& ref = reference.steps[i];
    double rel = std::abs(step.lambda - ref.lambda) /
                 std::max(std::abs(step.lambda), 1e-30);
    if (rel > 1e-12) {
      throw InputError("screened and reference paths disagree on lambda");
    }
    Eigen::Index zeros = 0;
    for (Eigen::Index j = 0; j < ref.beta.size(); ++j) {
      if (std::abs(ref.beta[j]) <= zero_tol) ++zeros;
    }
    step.n_true_zero = static_cast<int>(zeros);
    step.rejection_ratio =
        rejection_ratio(p, step.discarded_features, ref.beta, zero_tol);
  }
}

void write_path_csv(std::ostream& os, const PathResult& result) {
  os << std::setprecision(17);
  std::string label =
      result.screening_used ? std::string(rule_name(result.rule)) : "none";
  if (!result.screening_used) {
    os << "lambda,rule,solve_ms,objective\n";
    for (const PathStep& s : result.steps) {
      os << s.lambda << ',' << label << ',' << s.solve_ms << ','
         << s.objective << '\n';
    }
    return;
  }
  os << "lambda,rule,n_survivor_groups,n_discarded_coeffs,"
        "n_true_zero_coeffs,rejection_ratio,screen_ms,solve_ms,objective\n";
  for (const PathStep& s : result.steps) {
    os << s.lambda << ',' << label << ',' << s.n_survivor_groups << ','
       << s.n_discarded_coeffs << ',';
    if (s.n_true_zero >= 0) os << s.n_true_zero;
    os << ',';
    if (!std::isnan(s.rejection_ratio)) os << s.rejection_ratio;
    os << ',' << s.screen_ms << ',' << s.solve_ms << ',' << s.objective
       << '\n';
  }
}

}  // namespace ogl
