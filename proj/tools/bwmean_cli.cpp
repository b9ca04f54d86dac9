// bwmean: command-line front end for the Bures-Wasserstein library.
//
// Exit codes: 0 success, 1 input error, 2 solver non-convergence,
// 3 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bwmean/bwmean.hpp"
#include "bwmean/io.hpp"

namespace {

using bwmean::io::json;

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2, kVerifyFailed = 3 };

struct Output {
  std::string path;
  std::string format = "json";

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw bwmean::io::InputError(path + ": cannot open for writing");
    out << text;
  }

  void write(const json& j) const { write(j.dump(2) + "\n"); }
};

std::string matrix_text(const bwmean::ComplexMatrix& a) {
  std::ostringstream os;
  os.precision(12);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (k) os << "  ";
      os << a(i, k).real();
      if (a(i, k).imag() != 0.0) os << (a(i, k).imag() < 0 ? "-" : "+") << std::abs(a(i, k).imag()) << "i";
    }
    os << "\n";
  }
  return os.str();
}

bwmean::SpdMatrix load_matrix(const std::string& path) {
  return bwmean::io::spd_from_json(bwmean::io::read_json_file(path), path);
}

int cmd_mean(const std::string& ensemble_path, int max_iter, double tol, const Output& out) {
  const bwmean::Ensemble e = bwmean::io::ensemble_from_json(bwmean::io::read_json_file(ensemble_path));
  bwmean::SolverConfig cfg;
  cfg.max_iter = max_iter;
  cfg.residual_tol = tol;
  const bwmean::SolverReport r = bwmean::wasserstein_mean(e, cfg);
  if (out.format == "text") {
    std::ostringstream os;
    os.precision(12);
    os << "converged: " << (r.converged ? "true" : "false") << "\n"
       << "iterations: " << r.iterations << "\n"
       << "residual: " << r.residual << "\n"
       << "objective: " << r.objective << "\n"
       << "mean:\n"
       << matrix_text(r.mean.matrix());
    out.write(os.str());
  } else {
    out.write(bwmean::io::solver_report_to_json(r));
  }
  return r.converged ? kOk : kNotConverged;
}

int cmd_distance(const std::string& a_path, const std::string& b_path, const Output& out) {
  const bwmean::SpdMatrix a = load_matrix(a_path);
  const bwmean::SpdMatrix b = load_matrix(b_path);
  if (a.dim() != b.dim()) {
    throw bwmean::io::InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  }
  const double d = bwmean::bw_distance(a, b);
  if (out.format == "text") {
    std::ostringstream os;
    os.precision(17);
    os << d << "\n";
    out.write(os.str());
  } else {
    out.write(json{{"distance", d}});
  }
  return kOk;
}

int cmd_geodesic(const std::string& a_path, const std::string& b_path, double t,
                 const Output& out) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw bwmean::io::InputError("t: " + std::to_string(t) + " is outside [0, 1]");
  }
  const bwmean::SpdMatrix a = load_matrix(a_path);
  const bwmean::SpdMatrix b = load_matrix(b_path);
  if (a.dim() != b.dim()) {
    throw bwmean::io::InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  }
  const bwmean::SpdMatrix g = bwmean::geodesic(a, b, t);
  if (out.format == "text") {
    out.write(matrix_text(g.matrix()));
  } else {
    out.write(bwmean::io::matrix_to_json(g));
  }
  return kOk;
}

int cmd_generate(int m, int n, std::uint64_t seed, double eig_lo, double eig_hi, bool commuting,
                 const Output& out) {
  if (m <= 0) throw bwmean::io::InputError("m: must be positive");
  if (n <= 0) throw bwmean::io::InputError("n: must be positive");
  if (!(eig_lo > 0.0) || !(eig_lo <= eig_hi)) {
    throw bwmean::io::InputError("eig-lo/eig-hi: need 0 < eig-lo <= eig-hi");
  }
  bwmean::EnsembleSpec spec{m, static_cast<std::size_t>(n), eig_lo, eig_hi, commuting};
  const bwmean::Ensemble e = bwmean::random_ensemble(spec, seed);
  out.write(bwmean::io::ensemble_to_json(e));
  return kOk;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto sep = s.find_first_of(",:");
  try {
    if (sep == std::string::npos) {
      const auto lo = std::stoull(s);
      return {lo, lo + 1};
    }
    return {std::stoull(s.substr(0, sep)), std::stoull(s.substr(sep + 1))};
  } catch (const std::exception&) {
    throw bwmean::io::InputError("seeds: expected LO,HI");
  }
}

struct VerifyArgs {
  std::string plan_path;
  std::optional<std::string> checks;
  std::optional<std::string> seeds;
  std::vector<int> dims;
  std::optional<double> tol;
  std::optional<int> max_iter;
  bool no_equality_cases = false;
};

int cmd_verify(const VerifyArgs& args, const Output& out) {
  bwmean::SuitePlan plan;
  if (!args.plan_path.empty()) {
    plan = bwmean::io::plan_from_json(bwmean::io::read_json_file(args.plan_path));
  } else {
    plan.checks = bwmean::all_check_names();
  }
  if (args.checks) plan.checks = bwmean::io::parse_check_list(*args.checks);
  if (args.seeds) {
    const auto [lo, hi] = parse_seed_range(*args.seeds);
    if (lo > hi) throw bwmean::io::InputError("seeds: need LO <= HI");
    plan.seed_lo = lo;
    plan.seed_hi = hi;
  }
  if (!args.dims.empty()) {
    plan.dims.clear();
    for (int d : args.dims) {
      if (d <= 0) throw bwmean::io::InputError("dims: must be positive");
      plan.dims.push_back(d);
    }
  }
  if (args.tol) {
    if (!(*args.tol > 0.0)) throw bwmean::io::InputError("tol: must be positive");
    plan.tol.loewner_tol = *args.tol;
  }
  if (args.max_iter) plan.solver.max_iter = *args.max_iter;
  if (args.no_equality_cases) plan.equality_cases = false;

  const auto reports = bwmean::run_suite(plan);
  const auto summary = bwmean::summarize(reports);
  if (out.format == "text") {
    std::ostringstream os;
    os.precision(6);
    for (const auto& r : reports) {
      os << bwmean::to_string(r.status) << "  " << r.check_name << "  margin=" << r.margin;
      if (r.inputs.seed) os << "  seed=" << *r.inputs.seed;
      os << "  [" << r.inputs.source << "]";
      if (!r.message.empty()) os << "  " << r.message;
      os << "\n";
    }
    os << "passed " << summary.passed << ", failed " << summary.failed << ", skipped "
       << summary.skipped << "\n";
    out.write(os.str());
  } else {
    out.write(bwmean::io::suite_report_to_json(reports));
  }
  std::cerr << "verify: " << summary.passed << " passed, " << summary.failed << " failed, "
            << summary.skipped << " skipped\n";
  return summary.ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures-Wasserstein distances, geodesics, barycenters and inequality checks"};
  app.require_subcommand(1);

  Output out;
  auto add_output = [&out](CLI::App* sub) {
    sub->add_option("--out", out.path, "Write output to this file instead of stdout");
    sub->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  std::string ensemble_path;
  int max_iter = 200;
  double residual_tol = 1e-11;
  auto* mean = app.add_subcommand("mean", "Wasserstein mean of an ensemble file");
  mean->add_option("ensemble", ensemble_path, "Ensemble JSON")->required();
  mean->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  mean->add_option("--tol", residual_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  add_output(mean);

  std::string a_path;
  std::string b_path;
  auto* distance = app.add_subcommand("distance", "Bures-Wasserstein distance of two matrices");
  distance->add_option("a", a_path, "Matrix JSON")->required();
  distance->add_option("b", b_path, "Matrix JSON")->required();
  add_output(distance);

  double t = 0.5;
  auto* geodesic = app.add_subcommand("geodesic", "Point at parameter t on the geodesic A -> B");
  geodesic->add_option("a", a_path, "Matrix JSON")->required();
  geodesic->add_option("b", b_path, "Matrix JSON")->required();
  geodesic->add_option("--t", t, "Geodesic parameter in [0, 1]")->required();
  add_output(geodesic);

  int gen_m = 3;
  int gen_n = 3;
  std::uint64_t seed = 0;
  double eig_lo = 0.5;
  double eig_hi = 2.0;
  bool commuting = false;
  auto* generate = app.add_subcommand("generate", "Write a seeded random ensemble");
  generate->add_option("--m", gen_m, "Matrix dimension");
  generate->add_option("--n", gen_n, "Number of matrices");
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--eig-lo", eig_lo, "Smallest eigenvalue bound");
  generate->add_option("--eig-hi", eig_hi, "Largest eigenvalue bound");
  generate->add_flag("--commuting", commuting, "Share one eigenbasis across all matrices");
  add_output(generate);

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "Run the inequality verification suite");
  verify->add_option("--plan", vargs.plan_path, "Suite plan JSON");
  verify->add_option("--checks", vargs.checks, "Comma-separated check names, 'all' or 'none'");
  verify->add_option("--seeds", vargs.seeds, "Seed range LO,HI (half-open)");
  verify->add_option("--seed", vargs.seeds, "Single seed");
  verify->add_option("--dims", vargs.dims, "Base dimensions")->delimiter(',');
  verify->add_option("--tol", vargs.tol, "Loewner tolerance");
  verify->add_option("--max-iter", vargs.max_iter, "Solver iteration cap")
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--no-equality-cases", vargs.no_equality_cases,
                   "Skip the equality-case instances");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*mean) return cmd_mean(ensemble_path, max_iter, residual_tol, out);
    if (*distance) return cmd_distance(a_path, b_path, out);
    if (*geodesic) return cmd_geodesic(a_path, b_path, t, out);
    if (*generate) return cmd_generate(gen_m, gen_n, seed, eig_lo, eig_hi, commuting, out);
    if (*verify) return cmd_verify(vargs, out);
  } catch (const bwmean::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
