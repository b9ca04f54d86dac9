#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bwmean/core.hpp"

namespace bwmean {

enum class CheckStatus { kPass, kFail, kSkipped, kError };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kSkipped: return "skipped";
    case CheckStatus::kError: return "error";
  }
  return "unknown";
}

/// Where the inputs of a check came from.
struct Provenance {
  std::string source = "generated";
  std::optional<std::uint64_t> seed;
  std::vector<Eigen::Index> dims;
  std::vector<std::vector<double>> weights;
};

/// One inequality inside a check. `margin` is lambda_min(rhs - lhs) for
/// Loewner comparisons, or a scalar gap for everything else.
struct SubCheck {
  std::string name;
  double margin = 0.0;
  bool holds = false;
};

struct CheckReport {
  std::string check_name;
  CheckStatus status = CheckStatus::kFail;
  bool holds = false;
  double margin = 0.0;
  /// The verdict is margin >= threshold; for Loewner checks threshold is
  /// -loewner_tol * scale.
  double threshold = 0.0;
  double scale = 1.0;
  ToleranceConfig tol;
  Provenance inputs;
  std::vector<SubCheck> details;
  /// Reported quantities that are not part of the verdict.
  std::vector<std::pair<std::string, double>> info;
  std::string message;

  bool passed() const { return status == CheckStatus::kPass; }
  bool failed() const { return status == CheckStatus::kFail || status == CheckStatus::kError; }

  std::optional<double> info_value(const std::string& key) const {
    for (const auto& [k, v] : info) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

/// Collects the inequalities of one check and derives a single verdict from
/// the worst margin against a shared threshold.
class ReportBuilder {
 public:
  ReportBuilder(std::string name, const ToleranceConfig& tol, Provenance inputs = {}) {
    report_.check_name = std::move(name);
    report_.tol = tol;
    report_.inputs = std::move(inputs);
  }

  /// Records lhs <= rhs.
  ReportBuilder& loewner(std::string name, const HermitianMatrix& lhs,
                         const HermitianMatrix& rhs) {
    const LoewnerResult r = loewner_leq(lhs, rhs, report_.tol);
    scale_ = std::max(scale_, r.scale);
    subs_.push_back({std::move(name), r.margin, false});
    return *this;
  }

  /// Records a scalar gap that must be nonnegative up to loewner_tol.
  ReportBuilder& scalar(std::string name, double gap) {
    subs_.push_back({std::move(name), gap, false});
    return *this;
  }

  ReportBuilder& info(std::string key, double value) {
    report_.info.emplace_back(std::move(key), value);
    return *this;
  }

  ReportBuilder& message(std::string msg) {
    report_.message = std::move(msg);
    return *this;
  }

  /// Overrides the tolerance-derived threshold (for checks whose margin is a
  /// relative error rather than an eigenvalue).
  ReportBuilder& threshold(double t) {
    threshold_ = t;
    return *this;
  }

  CheckReport finish() {
    report_.scale = scale_;
    report_.threshold = threshold_ ? *threshold_ : -report_.tol.loewner_tol * scale_;
    double worst = std::numeric_limits<double>::infinity();
    for (auto& s : subs_) {
      s.holds = s.margin >= report_.threshold;
      worst = std::min(worst, s.margin);
    }
    report_.details = std::move(subs_);
    report_.margin = report_.details.empty() ? 0.0 : worst;
    report_.holds = report_.margin >= report_.threshold;
    report_.status = report_.holds ? CheckStatus::kPass : CheckStatus::kFail;
    return std::move(report_);
  }

  CheckReport skip(std::string reason) {
    report_.status = CheckStatus::kSkipped;
    report_.holds = false;
    report_.margin = 0.0;
    report_.message = std::move(reason);
    report_.details = std::move(subs_);
    return std::move(report_);
  }

  CheckReport error(std::string reason) {
    report_.status = CheckStatus::kError;
    report_.holds = false;
    report_.margin = -std::numeric_limits<double>::infinity();
    report_.message = std::move(reason);
    report_.details = std::move(subs_);
    return std::move(report_);
  }

 private:
  CheckReport report_;
  std::vector<SubCheck> subs_;
  double scale_ = 1.0;
  std::optional<double> threshold_;
};

}  // namespace bwmean
