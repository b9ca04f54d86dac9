// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bwmean/bwmean.hpp"
#include "bwmean/io.hpp"
#include "../cli_util.hpp"

namespace {

using namespace bwmean;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects the first failure and summary statistics for one criterion.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && first_failure_.empty()) first_failure_ = what;
    if (!ok) ++failures_;
  }
  void note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? ", " : "") << s; }
  Outcome outcome() const {
    Outcome o;
    o.pass = failures_ == 0;
    o.detail = notes_.str();
    if (!o.pass) o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(failures_) +
                             " failure(s), first: " + first_failure_;
    return o;
  }

 private:
  int failures_ = 0;
  std::string first_failure_;
  std::ostringstream notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

constexpr std::array<Eigen::Index, 3> kDims{2, 3, 5};
constexpr std::array<std::size_t, 3> kSizes{2, 3, 5};

Outcome fixed_point_certificate() {
  Tally t;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int max_iters = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::Index m = kDims[seed % 3];
    const std::size_t n = kSizes[(seed / 3) % 3];
    const Ensemble e = random_ensemble({m, n, 0.2, 5.0, false}, seed);
    SolverConfig cfg;
    cfg.max_iter = 200;
    const SolverReport r = wasserstein_mean(e, cfg);
    const double res = residual(r.mean, e);
    worst = std::max(worst, res);
    max_iters = std::max(max_iters, r.iterations);
    t.require(r.converged && res <= 1e-10,
              "seed " + std::to_string(seed) + " residual " + fmt(res));
  }
  const double elapsed = seconds_since(t0);
  t.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  t.note("200 ensembles, max residual " + fmt(worst) + ", max iterations " +
         std::to_string(max_iters) + ", " + fmt(elapsed) + " s");
  return t.outcome();
}

Outcome commuting_closed_form_match() {
  Tally t;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index m = kDims[seed % 3];
    const std::size_t n = kSizes[(seed / 3) % 3];
    const Ensemble e = random_ensemble({m, n, 0.2, 5.0, true}, seed + 10000);
    const SolverReport r = wasserstein_mean(e);
    const double err = (r.mean.matrix() - commuting_closed_form(e).matrix()).norm();
    worst = std::max(worst, err);
    t.require(r.converged && err <= 1e-8, "seed " + std::to_string(seed) + " error " + fmt(err));
  }
  const Ensemble scalar(WeightVector({0.5, 0.5}),
                        {SpdMatrix::identity(2), 4.0 * SpdMatrix::identity(2)});
  const double err =
      (wasserstein_mean(scalar).mean.matrix() - 2.25 * ComplexMatrix::Identity(2, 2)).norm();
  t.require(err <= 1e-8, "(I, 4I) error " + fmt(err));
  t.note("100 ensembles, max error " + fmt(worst) + ", (I, 4I) -> 9/4 I error " + fmt(err));
  return t.outcome();
}

Outcome geometric_mean_properties() {
  Tally t;
  const ToleranceConfig tol;
  constexpr double kRel = 1e-9;
  const std::uint64_t seeds = 100;
  std::array<int, 7> counts{};
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    Rng rng(seed + 20000);
    const Eigen::Index m = kDims[seed % 3];
    const SpdMatrix a = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix g = geometric_mean(a, b);
    const std::string tag = " seed " + std::to_string(seed);

    // G1: (sA) # (tB) = sqrt(st) (A # B).
    const double s = 0.5 + static_cast<double>(seed % 4);
    const double u = 3.0 / s;
    t.require(rel_err(geometric_mean(s * a, u * b).matrix(), std::sqrt(s * u) * g.matrix()) <= kRel,
              "G1" + tag);
    ++counts[0];
    // G2: symmetry.
    t.require(rel_err(geometric_mean(b, a).matrix(), g.matrix()) <= kRel, "G2" + tag);
    ++counts[1];
    // G3: monotone in each argument.
    // Perturbations V V* scaled to the Frobenius norm of the base matrix.
    const ComplexMatrix va = random_ginibre(m, m, rng);
    const ComplexMatrix vb = random_ginibre(m, m, rng);
    const ComplexMatrix pa = va * va.adjoint();
    const ComplexMatrix pb = vb * vb.adjoint();
    const SpdMatrix c(ComplexMatrix(a.matrix() + (a.frobenius() / pa.norm()) * pa));
    const SpdMatrix d(ComplexMatrix(b.matrix() + (b.frobenius() / pb.norm()) * pb));
    const LoewnerResult mono = loewner_leq(g, geometric_mean(c, d), tol);
    t.require(mono.margin >= -1e-9 * mono.scale, "G3" + tag);
    ++counts[2];
    // G4: X*(A # B)X = (X*AX) # (X*BX).
    const ComplexMatrix x = random_ginibre(m, m, rng) + 2.0 * ComplexMatrix::Identity(m, m);
    t.require(rel_err(congruence(x, g).matrix(),
                      geometric_mean(congruence(x, a), congruence(x, b)).matrix()) <= kRel,
              "G4" + tag);
    ++counts[3];
    // G5: (A # B)^{-1} = A^{-1} # B^{-1}, inverse via LU.
    t.require(rel_err(g.matrix().partialPivLu().inverse(),
                      geometric_mean(inverse(a), inverse(b)).matrix()) <= kRel,
              "G5" + tag);
    ++counts[4];
    // G6: det(A # B) = sqrt(det A det B).
    t.require(std::abs(log_det(g) - 0.5 * (log_det(a) + log_det(b))) <= kRel * std::max(1.0, std::abs(log_det(g))),
              "G6" + tag);
    ++counts[5];
    // G7: harmonic <= geometric <= arithmetic.
    const WeightVector half({0.5, 0.5});
    const LoewnerResult lo = loewner_leq(harmonic_mean(half, {a, b}), g, tol);
    const LoewnerResult hi = loewner_leq(g, arithmetic_mean(half, {a, b}), tol);
    t.require(lo.margin >= -1e-9 * lo.scale && hi.margin >= -1e-9 * hi.scale, "G7" + tag);
    ++counts[6];
  }
  t.note("G1-G7 on " + std::to_string(*std::min_element(counts.begin(), counts.end())) +
         " instances each");
  return t.outcome();
}

Outcome determinantal_inequality() {
  Tally t;
  double min_margin = 1e300;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Ensemble e =
        random_ensemble({kDims[seed % 3], kSizes[(seed / 3) % 3], 0.2, 5.0, false}, seed + 30000);
    const CheckReport r = check_det_inequality(e, SolverConfig{});
    min_margin = std::min(min_margin, r.margin);
    t.require(r.margin > 0.0 && r.info_value("equality") == 0.0,
              "distinct seed " + std::to_string(seed) + " margin " + fmt(r.margin));
  }
  double max_eq = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpdMatrix a = random_spd(kDims[seed % 3], seed + 31000, 0.2, 5.0);
    const std::size_t n = kSizes[seed % 3];
    const Ensemble e(WeightVector::uniform(n), std::vector<SpdMatrix>(n, a));
    const CheckReport r = check_det_inequality(e, SolverConfig{});
    max_eq = std::max(max_eq, std::abs(r.margin));
    t.require(std::abs(r.margin) <= 1e-9 && r.info_value("equality") == 1.0,
              "identical seed " + std::to_string(seed) + " margin " + fmt(r.margin));
  }
  t.note("100 distinct: min margin " + fmt(min_margin) + "; 20 identical: max |margin| " +
         fmt(max_eq) + ", equality flag set");
  return t.outcome();
}

Outcome bounds() {
  Tally t;
  double min_margin = 1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Ensemble e =
        random_ensemble({kDims[seed % 3], kSizes[(seed / 3) % 3], 0.2, 5.0, false}, seed + 40000);
    const CheckReport r = check_bounds(e, SolverConfig{});
    min_margin = std::min(min_margin, r.margin);
    bool both = r.details.size() == 2;
    for (const auto& s : r.details) both = both && s.holds && s.margin >= -1e-8;
    t.require(both && r.passed(), "seed " + std::to_string(seed) + " margin " + fmt(r.margin));
  }
  t.note("200 ensembles, min margin " + fmt(min_margin));
  return t.outcome();
}

Outcome tensor_identity() {
  Tally t;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed + 50000);
    const Ensemble a = random_ensemble({2, 2 + seed % 2, 0.5, 2.0, false}, rng);
    const Ensemble b = random_ensemble({2, 2 + (seed / 2) % 2, 0.5, 2.0, false}, rng);
    const CheckReport r = check_tensor_identity(a, b, SolverConfig{});
    const double err = r.info_value("relative_error").value_or(1.0);
    worst = std::max(worst, err);
    t.require(r.passed() && err <= 1e-6, "seed " + std::to_string(seed) + " error " + fmt(err));
  }
  const double elapsed = seconds_since(t0);
  t.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  t.note("25 instances, max relative error " + fmt(worst) + ", " + fmt(elapsed) + " s");
  return t.outcome();
}

Outcome verify_suite() {
  Tally t;
  SuitePlan plan;
  plan.checks = all_check_names();
  const auto reports = run_suite(plan);
  std::size_t equality = 0;
  double worst_eq = 0.0;
  double min_gap = 1e300;
  for (const auto& r : reports) {
    const std::string tag = r.check_name + (r.inputs.seed ? " seed " + std::to_string(*r.inputs.seed)
                                                          : " [" + r.inputs.source + "]");
    t.require(r.passed() && r.margin >= -1e-8, tag + " margin " + fmt(r.margin));
    if (r.inputs.source == "equality-case") {
      ++equality;
      worst_eq = std::max(worst_eq, std::abs(r.margin));
      t.require(std::abs(r.margin) <= 1e-9, tag + " equality margin " + fmt(r.margin));
    }
    if (r.check_name == "self_duality_gap") {
      const double gap = r.info_value("gap").value_or(0.0);
      min_gap = std::min(min_gap, gap);
      t.require(gap > 1e-4, tag + " gap " + fmt(gap));
    }
  }
  const SuiteSummary s = summarize(reports);
  t.note(std::to_string(reports.size()) + " reports over " + std::to_string(plan.checks.size()) +
         " checks (" + std::to_string(s.passed) + " passed), " + std::to_string(equality) +
         " equality cases max |margin| " + fmt(worst_eq) + ", min self-duality gap " + fmt(min_gap));
  return t.outcome();
}

Outcome metric_sanity() {
  Tally t;
  double worst_sym = 0.0;
  double worst_tri = 1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed + 60000);
    const Eigen::Index m = kDims[seed % 3];
    const SpdMatrix a = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix c = random_spd(m, rng, 0.2, 5.0);
    const double ab = bw_distance(a, b);
    const double sym = std::abs(ab - bw_distance(b, a));
    const double tri = ab + bw_distance(b, c) - bw_distance(a, c);
    worst_sym = std::max(worst_sym, sym);
    worst_tri = std::min(worst_tri, tri);
    const std::string tag = "seed " + std::to_string(seed);
    t.require(sym <= 1e-10, tag + " symmetry " + fmt(sym));
    t.require(tri >= -1e-8, tag + " triangle slack " + fmt(tri));
  }
  double worst_speed = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed + 61000);
    const Eigen::Index m = kDims[seed % 3];
    const SpdMatrix a = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(m, rng, 0.2, 5.0);
    const std::string tag = "seed " + std::to_string(seed);
    t.require(geodesic(a, b, 0.0).matrix() == a.matrix(), tag + " endpoint t=0");
    t.require(geodesic(a, b, 1.0).matrix() == b.matrix(), tag + " endpoint t=1");
    const double d = bw_distance(a, b);
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double dev = std::abs(bw_distance(a, geodesic(a, b, s)) - s * d);
      worst_speed = std::max(worst_speed, dev);
      t.require(dev <= 1e-7, tag + " speed deviation " + fmt(dev));
    }
  }
  t.note("200 triples: max asymmetry " + fmt(worst_sym) + ", min triangle slack " + fmt(worst_tri) +
         "; 50 geodesics: endpoints exact, max speed deviation " + fmt(worst_speed));
  return t.outcome();
}

Outcome cli_round_trip() {
  Tally t;
  const std::string data = BWMEAN_DATA_DIR;
  std::vector<std::string> runs;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const fs::path dir = testing::scratch_dir("acceptance");
    const auto run = [&](const std::string& args) {
      return testing::run_command(BWMEAN_CLI, args, dir);
    };
    const std::string ens = (dir / "ensemble.json").string();
    const std::string mean = (dir / "mean.json").string();
    const std::string fixture_mean = (dir / "fixture_mean.json").string();
    const std::string report = (dir / "verify.json").string();
    t.require(run("generate --m 3 --n 4 --seed 7 --out " + ens).exit_code == 0, "generate exit");
    t.require(run("mean " + ens + " --out " + mean).exit_code == 0, "mean exit");
    t.require(run("mean " + data + "/two_point_commuting.json --out " + fixture_mean).exit_code == 0,
              "fixture mean exit");
    t.require(run("verify --seeds 0,5 --out " + report).exit_code == 0, "verify exit");
    runs.push_back(testing::slurp(ens) + testing::slurp(mean) + testing::slurp(fixture_mean) +
                   testing::slurp(report));
    fs::remove_all(dir);
  }
  t.require(runs[0] == runs[1], "outputs differ between runs");

  const struct {
    const char* file;
    const char* diagnostic;
  } corrupted[] = {{"bad_weights.json", "weights sum to"},
                   {"non_hermitian.json", "matrices[1]: not Hermitian"},
                   {"not_positive_definite.json", "matrices[0]"},
                   {"malformed.json", "malformed JSON at byte"}};
  const fs::path dir = testing::scratch_dir("acceptance");
  for (const auto& c : corrupted) {
    const auto r =
        testing::run_command(BWMEAN_CLI, "mean " + data + "/invalid/" + c.file, dir);
    t.require(r.exit_code == 1, std::string(c.file) + " exit " + std::to_string(r.exit_code));
    t.require(r.err.find(c.diagnostic) != std::string::npos,
              std::string(c.file) + " diagnostic: " + r.err);
  }
  fs::remove_all(dir);
  t.note("generate -> mean -> verify byte-identical across 2 runs; " +
         std::to_string(std::size(corrupted)) + " corrupted fixtures exit 1 with field diagnostics");
  return t.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fixed-point certificate", fixed_point_certificate},
      {"commuting closed form", commuting_closed_form_match},
      {"geometric mean properties G1-G7", geometric_mean_properties},
      {"determinantal inequality", determinantal_inequality},
      {"lower and upper bounds", bounds},
      {"tensor identity", tensor_identity},
      {"hadamard and positive-map suite", verify_suite},
      {"metric sanity", metric_sanity},
      {"CLI round-trip", cli_round_trip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
