#ifndef ORBITRAD_CLI_HPP
#define ORBITRAD_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 suite failure, 2 input error.

#include "orbitrad/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace orbitrad {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitInputError = 2;

/// Parses "2..4" or "3" into an inclusive dimension range.
inline std::pair<Eigen::Index, Eigen::Index> parse_dimension_range(const std::string& text) {
  auto to_index = [&](const std::string& s) -> Eigen::Index {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(Errc::Parse, "bad dimension range '" + text + "'");
    return static_cast<Eigen::Index>(v);
  };
  const auto dots = text.find("..");
  Eigen::Index lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = to_index(text);
  } else {
    lo = to_index(text.substr(0, dots));
    hi = to_index(text.substr(dots + 2));
  }
  if (lo < 1 || hi < lo || hi > static_cast<Eigen::Index>(kMaxDimension))
    throw Error(Errc::InvalidArgument, "dimension range must satisfy 1 <= lo <= hi <= " + std::to_string(kMaxDimension));
  return {lo, hi};
}

namespace detail {

/// Writes every input matrix of each failing trial next to the report and
/// records the paths, so failures can be re-run standalone.
inline void dump_failure_artifacts(Report& report, const std::string& report_path) {
  const std::filesystem::path base(report_path);
  const std::string stem = (base.parent_path() / base.stem()).string();
  for (auto& f : report.failures) {
    const TrialRecord& rec = report.records[f.trial];
    for (const auto& [name, m] : rec.inputs) {
      const std::string path = stem + "-" + report.suite + "-" + std::to_string(f.trial) + "-" + name + ".json";
      write_json_file(path, matrix_to_json(m));
      f.artifacts.push_back(path);
    }
  }
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unitary-orbit numerical radii, convex-hull membership and Aluthge transforms"};
  app.require_subcommand(1);

  // radius
  std::string c_path, a_path, oracle = "none";
  OptimizerConfig radius_cfg;
  bool radius_json = false;
  auto* radius = app.add_subcommand("radius", "Maximize |tau(C U A U*)| over unitaries");
  radius->add_option("C", c_path, "C matrix file")->required();
  radius->add_option("A", a_path, "A matrix file")->required();
  radius->add_option("--starts", radius_cfg.starts, "Number of ascent starts");
  radius->add_option("--max-iters", radius_cfg.max_iters, "Iteration cap per start");
  radius->add_option("--seed", radius_cfg.seed, "Random seed");
  radius->add_option("--oracle", oracle, "Cross-check oracle")->check(CLI::IsMember({"grid", "hermitian", "none"}));
  radius->add_flag("--json", radius_json, "Print the full result as JSON");

  // aluthge
  std::string t_path, out_path, csv_path;
  double lambda = 0.5;
  std::size_t iterate = 0;
  auto* al = app.add_subcommand("aluthge", "lambda-Aluthge transform of an invertible matrix");
  al->add_option("T", t_path, "T matrix file")->required();
  al->add_option("--lambda", lambda, "lambda in [0,1]")->required();
  al->add_option("--iterate", iterate, "Apply the transform k times");
  al->add_option("--out", out_path, "Write the transform or iterate sequence as JSON");
  al->add_option("--csv", csv_path, "Write iteration diagnostics CSV to a file");

  // membership
  std::string b_path;
  FwBudget budget;
  Seed membership_seed = 42;
  auto* mem = app.add_subcommand("membership", "Decide A in the absolutely convex hull of the orbit of B");
  mem->add_option("A", a_path, "A matrix file")->required();
  mem->add_option("B", b_path, "B matrix file")->required();
  mem->add_option("--budget", budget.max_fw_iters, "Frank-Wolfe iteration budget");
  mem->add_option("--tol", budget.member_tol, "Member distance tolerance");
  mem->add_option("--seed", membership_seed, "Random seed");
  mem->add_option("--out", out_path, "Also write the outcome JSON to a file");

  // witness
  OptimizerConfig witness_cfg;
  auto* wit = app.add_subcommand("witness", "Find U with [U A U*, B] != 0");
  wit->add_option("A", a_path, "A matrix file")->required();
  wit->add_option("B", b_path, "B matrix file")->required();
  wit->add_option("--starts", witness_cfg.starts, "Number of ascent starts");
  wit->add_option("--seed", witness_cfg.seed, "Random seed");

  // verify
  std::string suite, dims = "2..4";
  SuiteConfig suite_cfg;
  auto* ver = app.add_subcommand("verify", "Run randomized verification suites");
  ver->add_option("suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"t51", "p52", "p53", "c41", "t32", "all"}));
  ver->add_option("--trials", suite_cfg.trials, "Trials per suite");
  ver->add_option("--n", dims, "Dimension range, e.g. 2..4");
  ver->add_option("--seed", suite_cfg.seed, "Random seed");
  ver->add_option("--out", out_path, "Write the full JSON report");
  ver->add_option("--csv", csv_path, "Write the CSV summary to a file instead of stdout");

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of a matrix");
  spec->add_option("T", t_path, "T matrix file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*radius) {
      const Matrix c = read_matrix_file(c_path);
      const Matrix a = read_matrix_file(a_path);
      radius_cfg.validate();
      const RadiusResult r = c_numerical_radius(c, a, radius_cfg);
      if (radius_json) {
        Json j = to_json(r);
        if (oracle == "grid") j["grid_oracle"] = grid_oracle_2x2(c, a, 60);
        if (oracle == "hermitian") j["hermitian_oracle"] = hermitian_oracle(c, a);
        out << j.dump(2) << '\n';
      } else {
        out << format_double(r.value) << '\n';
        if (oracle == "grid") out << "grid_oracle " << format_double(grid_oracle_2x2(c, a, 60)) << '\n';
        if (oracle == "hermitian") out << "hermitian_oracle " << format_double(hermitian_oracle(c, a)) << '\n';
      }
      return kExitOk;
    }
    if (*al) {
      const Matrix t = read_matrix_file(t_path);
      if (!is_invertible(t)) throw Error(Errc::Singular, "T must be invertible");
      if (iterate == 0) {
        const Json j = to_json(aluthge(t, lambda));
        if (!out_path.empty()) write_json_file(out_path, j);
        out << j.dump(2) << '\n';
        return kExitOk;
      }
      if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::InvalidArgument, "lambda must lie in [0,1]");
      const AluthgeSequence s = iterate_aluthge(t, lambda, iterate);
      if (!out_path.empty()) write_json_file(out_path, sequence_to_json(s));
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error(Errc::InvalidArgument, "cannot write '" + csv_path + "'");
        write_aluthge_csv(s, f);
      } else {
        write_aluthge_csv(s, out);
      }
      if (s.truncated_at) err << "sequence truncated at singular iterate " << *s.truncated_at << '\n';
      return kExitOk;
    }
    if (*mem) {
      const Matrix a = read_matrix_file(a_path);
      const Matrix b = read_matrix_file(b_path);
      require_same_dim(a, b);
      if (!(budget.member_tol > 0.0)) throw Error(Errc::InvalidArgument, "--tol must be positive");
      budget.lmo_cfg.seed = membership_seed;
      Json j = to_json(fw_project(a, b, budget), budget);
      j["seed"] = membership_seed;
      if (!out_path.empty()) write_json_file(out_path, j);
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (*wit) {
      const Matrix a = read_matrix_file(a_path);
      const Matrix b = read_matrix_file(b_path);
      require_same_dim(a, b);
      witness_cfg.validate();
      const WitnessResult w = commutant_witness(a, b, witness_cfg);
      out << Json{{"commutator_norm", w.commutator_norm}, {"unitary", matrix_to_json(w.unitary.matrix())}}.dump(2)
          << '\n';
      return kExitOk;
    }
    if (*ver) {
      std::tie(suite_cfg.n_min, suite_cfg.n_max) = parse_dimension_range(dims);
      const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      std::vector<Report> reports;
      for (const auto& name : names) reports.push_back(run_named_suite(name, suite_cfg));

      bool failed = false;
      for (auto& r : reports) {
        failed = failed || !r.all_passed();
        if (!out_path.empty()) detail::dump_failure_artifacts(r, out_path);
        err << r.suite << ": " << r.passes << "/" << r.trials << " passed (" << r.inconclusive << " inconclusive, "
            << r.failures.size() << " failed)\n";
        for (const auto& f : r.failures) err << "  FAIL " << f.descriptor << " margin " << format_double(f.margin) << '\n';
      }
      if (!out_path.empty()) {
        if (reports.size() == 1) {
          write_json_file(out_path, to_json(reports.front()));
        } else {
          Json all = Json::array();
          for (const auto& r : reports) all.push_back(to_json(r));
          write_json_file(out_path, Json{{"reports", std::move(all)}});
        }
      }
      std::ofstream file;
      if (!csv_path.empty()) {
        file.open(csv_path);
        if (!file) throw Error(Errc::InvalidArgument, "cannot write '" + csv_path + "'");
      }
      std::ostream& csv = csv_path.empty() ? out : file;
      csv << kCsvHeader << '\n';
      for (const auto& r : reports) write_csv_rows(r, csv);
      return failed ? kExitSuiteFailure : kExitOk;
    }
    if (*spec) {
      const Matrix t = read_matrix_file(t_path);
      for (const Complex& z : eig_general(t)) out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

inline int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return cli_main(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace orbitrad

#endif  // ORBITRAD_CLI_HPP
