#pragma once

// JSON interchange for matrices, ensembles, positive maps, suite plans and
// reports. Loading validates and names the offending field on failure.
//
//   matrix:    {"dim": m, "re": [[...]], "im": [[...]]}     ("im" optional)
//   ensemble:  {"weights": [...], "matrices": [<matrix>, ...]}
//   map:       {"kind": "isometry", "v_re": [[...]], "v_im": [[...]]} | {"kind": "ando", "m": m}
//   plan:      {"checks": [...] | "all", "seeds": [lo, hi], "dims": [...], "tol": t}

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bwmean/barycenter.hpp"
#include "bwmean/core.hpp"
#include "bwmean/products.hpp"
#include "bwmean/report.hpp"
#include "bwmean/verify.hpp"

namespace bwmean::io {

using json = nlohmann::json;

/// Malformed or invalid input; the message names the field.
class InputError : public Error {
 public:
  using Error::Error;
};

namespace detail {

using bwmean::detail::concat;

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(concat(path, ": expected a number"));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(concat(path, ": not finite"));
  return v;
}

inline Eigen::Index positive_int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) {
    throw InputError(concat(path, ": expected a positive integer"));
  }
  return static_cast<Eigen::Index>(j.get<long long>());
}

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw InputError(concat(path.empty() ? "document" : path, ": expected an object"));
  const auto it = j.find(key);
  if (it == j.end()) {
    throw InputError(concat(path.empty() ? "" : path + ".", key, ": missing field"));
  }
  return *it;
}

inline std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

/// rows x cols array of numbers.
inline Eigen::MatrixXd real_grid(const json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& path) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InputError(concat(path, ": expected ", rows, " rows"));
  }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string rp = concat(path, "[", i, "]");
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(concat(rp, ": expected ", cols, " entries"));
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      out(i, k) = number_at(row[static_cast<std::size_t>(k)], concat(rp, "[", k, "]"));
    }
  }
  return out;
}

inline json grid_to_json(const Eigen::MatrixXd& g) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < g.cols(); ++k) row.push_back(g(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

inline json matrix_to_json(const ComplexMatrix& a) {
  json j;
  j["dim"] = a.rows();
  j["re"] = detail::grid_to_json(a.real());
  if (!a.imag().isZero(0.0)) j["im"] = detail::grid_to_json(a.imag());
  return j;
}

inline json matrix_to_json(const HermitianMatrix& a) { return matrix_to_json(a.matrix()); }
inline json matrix_to_json(const SpdMatrix& a) { return matrix_to_json(a.matrix()); }

/// Validates Hermitian symmetry with absolute tolerance 1e-12, then symmetrizes.
inline HermitianMatrix hermitian_from_json(const json& j, const std::string& path = "") {
  const Eigen::Index m = detail::positive_int_at(detail::field(j, "dim", path),
                                                 detail::join(path, "dim"));
  const Eigen::MatrixXd re = detail::real_grid(detail::field(j, "re", path), m, m,
                                               detail::join(path, "re"));
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(m, m);
  if (j.contains("im")) im = detail::real_grid(j["im"], m, m, detail::join(path, "im"));
  ComplexMatrix a(m, m);
  a.real() = re;
  a.imag() = im;
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw InputError(detail::concat(path.empty() ? "matrix" : path,
                                    ": not Hermitian (max |a_ij - conj(a_ji)| = ", asym, ")"));
  }
  return HermitianMatrix(a);
}

inline SpdMatrix spd_from_json(const json& j, const std::string& path = "") {
  HermitianMatrix h = hermitian_from_json(j, path);
  try {
    return SpdMatrix(std::move(h));
  } catch (const DomainError& ex) {
    throw InputError(detail::concat(path.empty() ? "matrix" : path, ": ", ex.what()));
  }
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

inline json ensemble_to_json(const Ensemble& e) {
  json j;
  j["weights"] = e.weights().values();
  json mats = json::array();
  for (const auto& a : e.matrices()) mats.push_back(matrix_to_json(a));
  j["matrices"] = std::move(mats);
  return j;
}

inline Ensemble ensemble_from_json(const json& j) {
  const json& jw = detail::field(j, "weights", "");
  if (!jw.is_array() || jw.empty()) throw InputError("weights: expected a non-empty array");
  std::vector<double> w;
  for (std::size_t i = 0; i < jw.size(); ++i) {
    w.push_back(detail::number_at(jw[i], detail::concat("weights[", i, "]")));
  }
  const json& jm = detail::field(j, "matrices", "");
  if (!jm.is_array() || jm.empty()) throw InputError("matrices: expected a non-empty array");
  if (jm.size() != w.size()) {
    throw InputError(detail::concat("matrices: ", jm.size(), " matrices for ", w.size(),
                                    " weights"));
  }
  std::vector<SpdMatrix> mats;
  for (std::size_t i = 0; i < jm.size(); ++i) {
    mats.push_back(spd_from_json(jm[i], detail::concat("matrices[", i, "]")));
  }
  try {
    return Ensemble(WeightVector(std::move(w)), std::move(mats));
  } catch (const Error& ex) {
    throw InputError(ex.what());
  }
}

// ---------------------------------------------------------------------------
// Positive maps
// ---------------------------------------------------------------------------

inline json map_to_json(const PositiveMapSpec& phi) {
  json j;
  if (phi.kind() == MapKind::kAndo) {
    j["kind"] = "ando";
    j["m"] = phi.ando_dim();
    return j;
  }
  j["kind"] = "isometry";
  j["v_re"] = detail::grid_to_json(phi.isometry_matrix().real());
  j["v_im"] = detail::grid_to_json(phi.isometry_matrix().imag());
  return j;
}

inline PositiveMapSpec map_from_json(const json& j) {
  const json& kind = detail::field(j, "kind", "");
  if (kind == "ando") return ando_map(detail::positive_int_at(detail::field(j, "m", ""), "m"));
  if (kind != "isometry") throw InputError("kind: expected \"isometry\" or \"ando\"");
  const json& vre = detail::field(j, "v_re", "");
  if (!vre.is_array() || vre.empty() || !vre[0].is_array()) {
    throw InputError("v_re: expected a non-empty 2-d array");
  }
  const auto rows = static_cast<Eigen::Index>(vre.size());
  const auto cols = static_cast<Eigen::Index>(vre[0].size());
  ComplexMatrix v(rows, cols);
  v.real() = detail::real_grid(vre, rows, cols, "v_re");
  v.imag() = j.contains("v_im") ? detail::real_grid(j["v_im"], rows, cols, "v_im")
                                : Eigen::MatrixXd::Zero(rows, cols);
  try {
    return PositiveMapSpec::isometry(std::move(v));
  } catch (const Error& ex) {
    throw InputError(detail::concat("v_re/v_im: ", ex.what()));
  }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json tolerance_to_json(const ToleranceConfig& t) {
  return {{"loewner_tol", t.loewner_tol}, {"residual_tol", t.residual_tol},
          {"relative", t.relative}};
}

inline json solver_report_to_json(const SolverReport& r) {
  return {{"iterations", r.iterations},
          {"residual", r.residual},
          {"objective", r.objective},
          {"converged", r.converged},
          {"mean", matrix_to_json(r.mean)}};
}

inline json provenance_to_json(const Provenance& p) {
  json j;
  j["source"] = p.source;
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  j["dims"] = p.dims;
  j["weights"] = p.weights;
  return j;
}

inline json check_report_to_json(const CheckReport& r) {
  json details = json::array();
  for (const auto& s : r.details) {
    details.push_back({{"name", s.name}, {"margin", s.margin}, {"holds", s.holds}});
  }
  json info = json::object();
  for (const auto& [k, v] : r.info) info[k] = v;
  return {{"check_name", r.check_name},
          {"status", to_string(r.status)},
          {"holds", r.holds},
          {"margin", r.margin},
          {"threshold", r.threshold},
          {"scale", r.scale},
          {"tolerance", tolerance_to_json(r.tol)},
          {"inputs", provenance_to_json(r.inputs)},
          {"details", std::move(details)},
          {"info", std::move(info)},
          {"message", r.message}};
}

inline json suite_report_to_json(const std::vector<CheckReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(check_report_to_json(r));
  return arr;
}

// ---------------------------------------------------------------------------
// Suite plans
// ---------------------------------------------------------------------------

/// Parses a check list: "all", "none", or comma-separated names.
inline std::vector<std::string> parse_check_list(const std::string& spec) {
  if (spec == "all") return all_check_names();
  std::vector<std::string> out;
  if (spec == "none" || spec.empty()) return out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!is_known_check(item)) throw InputError("checks: unknown check '" + item + "'");
    out.push_back(item);
  }
  return out;
}

inline SuitePlan plan_from_json(const json& j) {
  if (!j.is_object()) throw InputError("plan: expected an object");
  SuitePlan plan;
  const json& checks = detail::field(j, "checks", "");
  if (checks.is_string()) {
    plan.checks = parse_check_list(checks.get<std::string>());
  } else if (checks.is_array()) {
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (!checks[i].is_string()) {
        throw InputError(detail::concat("checks[", i, "]: expected a string"));
      }
      const auto name = checks[i].get<std::string>();
      if (!is_known_check(name)) {
        throw InputError(detail::concat("checks[", i, "]: unknown check '", name, "'"));
      }
      plan.checks.push_back(name);
    }
  } else {
    throw InputError("checks: expected an array of names or \"all\"");
  }
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() ||
        !s[1].is_number_unsigned() || s[0].get<std::uint64_t>() > s[1].get<std::uint64_t>()) {
      throw InputError("seeds: expected [lo, hi] with 0 <= lo <= hi");
    }
    plan.seed_lo = s[0].get<std::uint64_t>();
    plan.seed_hi = s[1].get<std::uint64_t>();
  }
  if (j.contains("dims")) {
    const json& d = j["dims"];
    if (!d.is_array() || d.empty()) throw InputError("dims: expected a non-empty array");
    plan.dims.clear();
    for (std::size_t i = 0; i < d.size(); ++i) {
      plan.dims.push_back(detail::positive_int_at(d[i], detail::concat("dims[", i, "]")));
    }
  }
  if (j.contains("tol")) {
    const double t = detail::number_at(j["tol"], "tol");
    if (!(t > 0.0)) throw InputError("tol: must be positive");
    plan.tol.loewner_tol = t;
  }
  if (j.contains("max_iter")) {
    plan.solver.max_iter =
        static_cast<int>(detail::positive_int_at(j["max_iter"], "max_iter"));
  }
  if (j.contains("equality_cases")) {
    if (!j["equality_cases"].is_boolean()) throw InputError("equality_cases: expected a boolean");
    plan.equality_cases = j["equality_cases"].get<bool>();
  }
  return plan;
}

inline json plan_to_json(const SuitePlan& plan) {
  return {{"checks", plan.checks},
          {"seeds", {plan.seed_lo, plan.seed_hi}},
          {"dims", plan.dims},
          {"tol", plan.tol.loewner_tol},
          {"max_iter", plan.solver.max_iter},
          {"equality_cases", plan.equality_cases}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw InputError(detail::concat(path, ": malformed JSON at byte ", ex.byte));
  }
}

}  // namespace bwmean::io
