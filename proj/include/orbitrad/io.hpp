#ifndef ORBITRAD_IO_HPP
#define ORBITRAD_IO_HPP

// Serialization: the matrix file format {"n", "re", "im"}, JSON views of
// optimizer, membership, Aluthge and suite results, and the CSV summary.
// Doubles are written so that they read back bit-identically.

#include "orbitrad/aluthge.hpp"
#include "orbitrad/orbit_hull.hpp"
#include "orbitrad/verify.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace orbitrad {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Matrices

inline Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rrow = Json::array(), irow = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return Json{{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "matrix JSON must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw Error(Errc::Parse, "matrix JSON needs integer 'n'");
  const auto n = j["n"].get<long long>();
  if (n < 1 || n > static_cast<long long>(kMaxDimension))
    throw Error(Errc::InvalidArgument, "matrix dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
  Matrix m(n, n);
  auto fill = [&](const char* key, bool imaginary) {
    if (!j.contains(key) || !j[key].is_array() || static_cast<long long>(j[key].size()) != n)
      throw Error(Errc::Parse, std::string("matrix JSON needs '") + key + "' with n rows");
    for (long long r = 0; r < n; ++r) {
      const Json& row = j[key][r];
      if (!row.is_array() || static_cast<long long>(row.size()) != n)
        throw Error(Errc::Parse, std::string("row ") + std::to_string(r) + " of '" + key + "' must have n entries");
      for (long long c = 0; c < n; ++c) {
        if (!row[c].is_number()) throw Error(Errc::Parse, std::string("non-numeric entry in '") + key + "'");
        const double v = row[c].get<double>();
        if (!std::isfinite(v)) throw Error(Errc::Parse, "non-finite matrix entry");
        if (imaginary)
          m(r, c).imag(v);
        else
          m(r, c) = Complex(v, 0.0);
      }
    }
  };
  fill("re", false);
  fill("im", true);
  return m;
}

inline Matrix parse_matrix(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("malformed JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_matrix(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------
// Results

inline Json to_json(const OptimizerConfig& c) {
  return Json{{"starts", c.starts},           {"max_iters", c.max_iters},   {"grad_tol", c.grad_tol},
              {"step_init", c.step_init},     {"armijo_c", c.armijo_c},     {"armijo_shrink", c.armijo_shrink},
              {"seed", c.seed},               {"warm_starts", c.warm_starts.size()}};
}

inline Json to_json(const RadiusResult& r) {
  Json j{{"value", r.value},
         {"phase", r.phase},
         {"best_start", r.best_start},
         {"maximizer", matrix_to_json(r.maximizer.matrix())},
         {"per_start_values", r.per_start_values},
         {"iterations_used", r.iterations_used}};
  Json flags = Json::array();
  for (bool b : r.converged_flags) flags.push_back(b);
  j["converged_flags"] = std::move(flags);
  return j;
}

inline Json to_json(const FwBudget& b) {
  return Json{{"max_fw_iters", b.max_fw_iters},
              {"member_tol", b.member_tol},
              {"corrective", b.corrective},
              {"corrective_iters", b.corrective_iters},
              {"lmo", to_json(b.lmo_cfg)}};
}

inline Json to_json(const MembershipOutcome& m, const FwBudget& budget) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms)
    atoms.push_back(Json{{"z", complex_to_json(a.z)}, {"unitary", matrix_to_json(a.unitary.matrix())}});
  Json j{{"verdict", verdict_name(m.verdict)},
         {"final_distance", m.final_distance},
         {"fw_gap", m.fw_gap},
         {"iterations", m.iterations},
         {"atom_weight", atom_weight(m.atoms)},
         {"atoms", std::move(atoms)},
         {"distance_history", m.distance_history},
         {"budget", to_json(budget)}};
  if (m.verdict != Verdict::Member) {
    j["certificate_c"] = matrix_to_json(m.certificate_c);
    j["separation_margin"] = m.separation_margin;
  }
  return j;
}

inline Json to_json(const AluthgeDecomposition& d) {
  return Json{{"lambda", d.lambda},
              {"unitary", matrix_to_json(d.unitary.matrix())},
              {"abs_t", matrix_to_json(d.abs_t.matrix())},
              {"transformed", matrix_to_json(d.transformed)},
              {"similarity_defect", d.similarity_defect}};
}

inline Json sequence_to_json(const AluthgeSequence& s) {
  Json arr = Json::array();
  for (const auto& m : s.sequence) arr.push_back(matrix_to_json(m));
  return arr;
}

inline Json to_json(const SuiteConfig& c) {
  return Json{{"trials", c.trials},
              {"n_min", c.n_min},
              {"n_max", c.n_max},
              {"seed", c.seed},
              {"radius", to_json(c.radius)},
              {"membership", to_json(c.membership)},
              {"grid_resolution", c.grid_resolution},
              {"grid_slack", c.grid_slack},
              {"optimizer_slack", c.optimizer_slack},
              {"escalation_factor", c.escalation_factor},
              {"witness_threshold", c.witness_threshold},
              {"max_degree", c.max_degree}};
}

inline Json to_json(const TrialRecord& r) {
  Json inputs = Json::object();
  for (const auto& [name, m] : r.inputs) inputs[name] = matrix_to_json(m);
  if (!r.polynomial.empty()) {
    Json coeffs = Json::array();
    for (const Complex& c : r.polynomial) coeffs.push_back(complex_to_json(c));
    inputs["polynomial"] = std::move(coeffs);
  }
  if (!std::isnan(r.lambda)) inputs["lambda"] = r.lambda;
  inputs["n"] = r.n;
  Json outputs{{"lhs", r.lhs}, {"rhs", r.rhs}, {"escalated", r.escalated}};
  if (!r.detail.empty()) outputs["detail"] = r.detail;
  for (const auto& [name, v] : r.metrics) outputs[name] = v;
  return Json{{"id", r.id},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)},
              {"margin", r.margin},
              {"verdict", outcome_name(r.outcome)}};
}

inline Json to_json(const Report& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back(Json{{"trial", f.trial}, {"descriptor", f.descriptor}, {"margin", f.margin}, {"artifacts", f.artifacts}});
  Json trials = Json::array();
  for (const auto& t : r.records) trials.push_back(to_json(t));
  return Json{{"suite", r.suite},
              {"seed", r.config.seed},
              {"config", to_json(r.config)},
              {"trial_count", r.trials},
              {"passes", r.passes},
              {"inconclusive", r.inconclusive},
              {"failures", std::move(failures)},
              {"wall_time", r.wall_time},
              {"trials", std::move(trials)}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline constexpr const char* kCsvHeader = "suite,trial,n,lambda,lhs,rhs,margin,verdict";

/// One row per trial; no timing data, so identical runs give identical bytes.
inline void write_csv_rows(const Report& r, std::ostream& out) {
  for (const auto& t : r.records)
    out << r.suite << ',' << t.id << ',' << t.n << ',' << format_double(t.lambda) << ',' << format_double(t.lhs)
        << ',' << format_double(t.rhs) << ',' << format_double(t.margin) << ',' << outcome_name(t.outcome) << '\n';
}

inline void write_csv(const Report& r, std::ostream& out) {
  out << kCsvHeader << '\n';
  write_csv_rows(r, out);
}

inline std::string csv_string(const Report& r) {
  std::ostringstream ss;
  write_csv(r, ss);
  return ss.str();
}

inline constexpr const char* kAluthgeCsvHeader = "iteration,normality_defect,spectrum_drift";

inline void write_aluthge_csv(const AluthgeSequence& s, std::ostream& out) {
  out << kAluthgeCsvHeader << '\n';
  for (std::size_t i = 0; i < s.normality_defects.size(); ++i)
    out << i << ',' << format_double(s.normality_defects[i]) << ',' << format_double(s.spectrum_drifts[i]) << '\n';
}

}  // namespace orbitrad

#endif  // ORBITRAD_IO_HPP
