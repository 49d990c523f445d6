#include <CLI11.hpp>

#include "ogl/datagen.hpp"
#include "ogl/io.hpp"
#include "ogl/model.hpp"
#include "ogl/path.hpp"
#include "ogl/screening.hpp"
#include "ogl/solver.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace ogl;

struct DataOpts {
  std::string x_path;
  std::string y_path;
  std::string groups_path;
  bool header = false;
  bool standardize = false;
};

struct PenaltyOpts {
  bool sparse = false;
  double l1_ratio = 1.0;
  int window = kDefaultWindow;
};

struct SolveOpts {
  double tol = 1e-10;
  int max_iters = 10000;
  bool fixed_step = false;
};

void add_data_options(CLI::App* cmd, DataOpts& d) {
  cmd->add_option("--x", d.x_path, "Design matrix CSV, one sample per row")
      ->required();
  cmd->add_option("--y", d.y_path, "Response CSV, one value per row")
      ->required();
  cmd->add_option("--groups", d.groups_path,
                  "Group file: one group per line, indices or a-b ranges")
      ->required();
  cmd->add_flag("--header", d.header, "Skip the first row of --x and --y");
  cmd->add_flag("--standardize", d.standardize,
                "Scale design columns to unit norm before fitting");
}

void add_penalty_options(CLI::App* cmd, PenaltyOpts& p) {
  cmd->add_flag("--sparse", p.sparse,
                "Add an l1 term by augmenting the groups with all singletons");
  cmd->add_option("--l1-ratio", p.l1_ratio,
                  "Weight of the l1 singletons relative to lambda")
      ->capture_default_str();
  cmd->add_option("--window", p.window,
                  "Subset search window for the ols rule")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_solver_options(CLI::App* cmd, SolveOpts& s) {
  cmd->add_option("--tol", s.tol, "Relative objective change tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", s.max_iters, "Outer iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--fixed-step", s.fixed_step,
                "Use the conservative fixed step instead of backtracking");
}

SolverConfig solver_config(const SolveOpts& s) {
  SolverConfig cfg;
  cfg.outer_tol = s.tol;
  cfg.max_outer_iters = s.max_iters;
  cfg.step_rule =
      s.fixed_step ? StepRule::kFixedLipschitz : StepRule::kBacktracking;
  return cfg;
}

Rule parse_rule(const std::string& name) {
  if (name == "gdpp") return Rule::kGdpp;
  if (name == "ols") return Rule::kOls;
  if (name == "sols") return Rule::kSols;
  throw InputError("unknown rule '" + name + "'");
}

Problem load_problem(const DataOpts& d, const PenaltyOpts& pen) {
  Matrix x = load_matrix_csv(d.x_path, d.header);
  Vector y = load_vector_csv(d.y_path, d.header);
  auto groups = load_groups(d.groups_path);
  if (d.standardize) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double n = x.col(j).norm();
      if (n > 0.0) x.col(j) /= n;
    }
  }
  PenaltyKind kind = pen.sparse ? PenaltyKind::kSparseOverlapping
                                : PenaltyKind::kOverlapping;
  return build_problem(DesignMatrix(std::move(x)), std::move(y), groups, kind,
                       pen.l1_ratio, pen.window);
}

// rule=sols only makes sense with the singleton-augmented penalty.
void reconcile_sols(Rule rule, PenaltyOpts& pen) {
  if (rule == Rule::kSols && !pen.sparse) {
    std::cerr << "note: rule 'sols' needs the sparse penalty; "
                 "enabling --sparse\n";
    pen.sparse = true;
  }
}

std::string reference_path_for(const std::string& out) {
  std::filesystem::path p(out);
  std::filesystem::path named =
      p.parent_path() / (p.stem().string() + "_reference" +
                         p.extension().string());
  return named.string();
}

void write_csv_file(const std::string& path, const PathResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  write_path_csv(out, result);
}

int run_synth(int n, int j, double sparsity, double noise,
              std::uint64_t seed, const std::string& x_out,
              const std::string& y_out, const std::string& beta_out) {
  SynthData data = synth_data(n, j, sparsity, noise, seed);
  save_matrix_csv(x_out, data.x);
  save_vector_csv(y_out, data.y);
  if (!beta_out.empty()) save_vector_csv(beta_out, data.beta_true);
  std::cout << "wrote " << n << "x" << j << " design to " << x_out
            << " and response to " << y_out << "\n";
  return 0;
}

int run_gen_groups(const std::string& kind, int j, int k, int overlap,
                   const std::vector<int>& tree_sizes,
                   const std::string& out) {
  std::vector<std::vector<int>> groups;
  if (kind == "nonoverlap") {
    groups = gen_nonoverlap_groups(j, k);
  } else if (kind == "overlap") {
    groups = gen_overlap_groups(j, k, overlap);
  } else if (kind == "tree") {
    groups = gen_tree_groups(j, tree_sizes);
  } else {
    throw InputError("unknown generator '" + kind + "'");
  }
  save_groups(out, groups);
  std::cout << "wrote " << groups.size() << " groups to " << out << "\n";
  return 0;
}

int run_lambda_prime(const DataOpts& data, PenaltyOpts pen,
                     const std::string& rule_name, double ratio,
                     int max_steps, double safe_eps) {
  Rule rule = parse_rule(rule_name);
  reconcile_sols(rule, pen);
  Problem p = load_problem(data, pen);
  LambdaPrimeResult res =
      find_lambda_prime(p, ratio, max_steps, rule, pen.window, safe_eps);
  if (res.hit_cap) {
    std::cerr << "warning: no survivors within " << max_steps
              << " steps; lambda' is the last value tried\n";
  }
  std::cout << std::setprecision(17);
  std::cout << "lambda_one = " << res.lambda1 << "\n"
            << "lambda_prime = " << res.lambda_prime << "\n"
            << "screening_steps = " << res.steps << "\n";
  return 0;
}

int run_solve(const DataOpts& data, const PenaltyOpts& pen,
              const SolveOpts& sopts, double lambda,
              const std::string& out) {
  Problem p = load_problem(data, pen);
  Solution sol = solve(p, lambda, nullptr, solver_config(sopts));
  if (!sol.converged) {
    std::cerr << "solver did not converge within " << sopts.max_iters
              << " iterations\n";
    return 3;
  }
  int nonzeros = 0;
  for (Eigen::Index i = 0; i < sol.beta.size(); ++i) {
    if (sol.beta[i] != 0.0) ++nonzeros;
  }
  std::cout << std::setprecision(17);
  std::cout << "objective = " << sol.objective << "\n"
            << "iterations = " << sol.iterations << "\n"
            << "nonzero_coefficients = " << nonzeros << "\n";
  if (!out.empty()) {
    save_vector_csv(out, sol.beta);
    std::cout << "wrote coefficients to " << out << "\n";
  }
  return 0;
}

int run_path(const DataOpts& data, PenaltyOpts pen, const SolveOpts& sopts,
             const std::string& rule_name, double ratio, int steps,
             const std::vector<double>& lambdas, double safe_eps,
             double zero_tol, bool no_reference, const std::string& out) {
  bool reference_only = rule_name == "none";
  Rule rule = reference_only ? Rule::kOls : parse_rule(rule_name);
  if (!reference_only) reconcile_sols(rule, pen);
  Problem p = load_problem(data, pen);
  SolverConfig cfg = solver_config(sopts);

  LambdaPath path;
  if (!lambdas.empty()) {
    path = LambdaPath::explicit_values(lambdas);
  } else {
    LambdaPrimeResult lp =
        find_lambda_prime(p, ratio, 100, rule, pen.window, safe_eps);
    path = LambdaPath::geometric(lp.lambda_prime, ratio, steps);
    std::cout << std::setprecision(17) << "lambda_prime = "
              << lp.lambda_prime << "\n";
  }

  if (reference_only) {
    PathResult ref = run_reference(p, path, cfg);
    if (ref.aborted) {
      std::cerr << ref.abort_message << "\n";
      return 3;
    }
    write_csv_file(out, ref);
    std::cout << "solve time = " << ref.total_solve_ms() << " ms\n"
              << "wrote " << ref.steps.size() << " rows to " << out << "\n";
    return 0;
  }

  PathResult screened =
      run_sequential(p, path, rule, pen.window, cfg, safe_eps);
  if (screened.aborted) {
    std::cerr << screened.abort_message << "\n";
    return 3;
  }

  std::optional<PathResult> reference;
  if (!no_reference) {
    reference = run_reference(p, path, cfg);
    if (reference->aborted) {
      std::cerr << reference->abort_message << "\n";
      return 3;
    }
    // fills the rejection-ratio columns; throws if a discard was unsafe
    evaluate_against_reference(screened, *reference, p, zero_tol);
  }

  write_csv_file(out, screened);
  double screened_ms =
      screened.total_screen_ms() + screened.total_solve_ms();
  std::cout << std::setprecision(6);
  std::cout << "screen time = " << screened.total_screen_ms() << " ms, "
            << "solve time = " << screened.total_solve_ms() << " ms\n";
  if (reference) {
    std::string ref_out = reference_path_for(out);
    write_csv_file(ref_out, *reference);
    double ref_ms = reference->total_solve_ms();
    std::cout << "reference solve time = " << ref_ms << " ms\n";
    if (screened_ms > 0.0) {
      std::cout << "speedup vs reference = " << ref_ms / screened_ms << "\n";
    }
    std::cout << "wrote reference rows to " << ref_out << "\n";
  }
  std::cout << "wrote " << screened.steps.size() << " rows to " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping group lasso with safe screening rules"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic regression instance");
  int synth_n = 0;
  int synth_j = 0;
  double synth_sparsity = 0.2;
  double synth_noise = 0.1;
  std::uint64_t synth_seed = 0;
  std::string synth_x;
  std::string synth_y;
  std::string synth_beta;
  synth->add_option("--n", synth_n, "Number of samples")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--j", synth_j, "Number of features")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--sparsity", synth_sparsity,
                    "Fraction of nonzero true coefficients")
      ->capture_default_str();
  synth->add_option("--noise", synth_noise, "Noise standard deviation")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
  synth->add_option("--x", synth_x, "Output path for the design CSV")
      ->required();
  synth->add_option("--y", synth_y, "Output path for the response CSV")
      ->required();
  synth->add_option("--beta", synth_beta,
                    "Optional output path for the true coefficients");

  // gen-groups
  auto* gen = app.add_subcommand("gen-groups",
                                 "Generate a group structure file");
  std::string gen_kind;
  int gen_j = 0;
  int gen_k = 20;
  int gen_overlap = 5;
  std::vector<int> gen_tree_sizes = {20, 15, 10, 5};
  std::string gen_out;
  gen->add_option("--gen", gen_kind, "Structure: nonoverlap, overlap or tree")
      ->required()
      ->check(CLI::IsMember({"nonoverlap", "overlap", "tree"}));
  gen->add_option("--j", gen_j, "Number of features")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k, "Block size")->capture_default_str();
  gen->add_option("--overlap", gen_overlap,
                  "Shared features between consecutive blocks")
      ->capture_default_str();
  gen->add_option("--tree-sizes", gen_tree_sizes,
                  "Comma separated block sizes per tree level")
      ->delimiter(',');
  gen->add_option("--out", gen_out, "Output group file")->required();

  // lambda-prime
  auto* lp = app.add_subcommand(
      "lambda-prime", "Find the largest path anchor with all-zero solution");
  DataOpts lp_data;
  PenaltyOpts lp_pen;
  std::string lp_rule = "ols";
  double lp_ratio = 0.9;
  int lp_max_steps = 100;
  double lp_safe_eps = 0.0;
  add_data_options(lp, lp_data);
  add_penalty_options(lp, lp_pen);
  lp->add_option("--rule", lp_rule, "Screening rule: gdpp, ols or sols")
      ->check(CLI::IsMember({"gdpp", "ols", "sols"}))
      ->capture_default_str();
  lp->add_option("--ratio", lp_ratio, "Geometric step of the search")
      ->capture_default_str();
  lp->add_option("--max-steps", lp_max_steps, "Search step cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  lp->add_option("--safe-eps", lp_safe_eps,
                 "Extra dual radius inflating every screening test")
      ->capture_default_str();

  // solve
  auto* sv = app.add_subcommand("solve", "Solve at a single lambda");
  DataOpts sv_data;
  PenaltyOpts sv_pen;
  SolveOpts sv_solver;
  double sv_lambda = 0.0;
  std::string sv_out;
  add_data_options(sv, sv_data);
  add_penalty_options(sv, sv_pen);
  add_solver_options(sv, sv_solver);
  sv->add_option("--lambda", sv_lambda, "Penalty strength")
      ->required()
      ->check(CLI::PositiveNumber);
  sv->add_option("--out", sv_out, "Output CSV for the coefficients");

  // path
  auto* pth = app.add_subcommand(
      "path", "Run a screened lambda path against the reference solver");
  DataOpts pth_data;
  PenaltyOpts pth_pen;
  SolveOpts pth_solver;
  std::string pth_rule = "ols";
  double pth_ratio = 0.9;
  int pth_steps = 30;
  std::vector<double> pth_lambdas;
  double pth_safe_eps = 0.0;
  double pth_zero_tol = 1e-6;
  bool pth_no_reference = false;
  std::string pth_out;
  add_data_options(pth, pth_data);
  add_penalty_options(pth, pth_pen);
  add_solver_options(pth, pth_solver);
  pth->add_option("--rule", pth_rule,
                  "Screening rule: gdpp, ols, sols, or none for a "
                  "reference-only run")
      ->check(CLI::IsMember({"gdpp", "ols", "sols", "none"}))
      ->capture_default_str();
  pth->add_option("--ratio", pth_ratio, "Geometric path ratio")
      ->capture_default_str();
  pth->add_option("--steps", pth_steps, "Number of path values")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pth->add_option("--lambdas", pth_lambdas,
                  "Comma separated explicit lambda values (descending)")
      ->delimiter(',');
  pth->add_option("--safe-eps", pth_safe_eps,
                  "Extra dual radius inflating every screening test")
      ->capture_default_str();
  pth->add_option("--zero-tol", pth_zero_tol,
                  "Magnitude below which a reference coefficient counts "
                  "as zero")
      ->capture_default_str();
  pth->add_flag("--no-reference", pth_no_reference,
                "Skip the reference run and the rejection-ratio columns");
  pth->add_option("--out", pth_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) {
      return run_synth(synth_n, synth_j, synth_sparsity, synth_noise,
                       synth_seed, synth_x, synth_y, synth_beta);
    }
    if (gen->parsed()) {
      return run_gen_groups(gen_kind, gen_j, gen_k, gen_overlap,
                            gen_tree_sizes, gen_out);
    }
    if (lp->parsed()) {
      return run_lambda_prime(lp_data, lp_pen, lp_rule, lp_ratio,
                              lp_max_steps, lp_safe_eps);
    }
    if (sv->parsed()) {
      return run_solve(sv_data, sv_pen, sv_solver, sv_lambda, sv_out);
    }
    if (pth->parsed()) {
      return run_path(pth_data, pth_pen, pth_solver, pth_rule, pth_ratio,
                      pth_steps, pth_lambdas, pth_safe_eps, pth_zero_tol,
                      pth_no_reference, pth_out);
    }
  } catch (const ogl::SafetyViolation& e) {
    std::cerr << "safety violation: " << e.what() << "\n";
    return 4;
  } catch (const ogl::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const ogl::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
