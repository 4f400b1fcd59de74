#include "oracles.hpp"
#include "orbitrad/cli.hpp"
#include "orbitrad/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace orbitrad;
using oracle::diag;
using oracle::mat2;

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orbitrad-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const Matrix& m) {
    const std::string p = path(name);
    write_json_file(p, matrix_to_json(m));
    return p;
  }
  std::string raw(const std::string& name, const std::string& text) {
    const std::string p = path(name);
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), "orbitrad");
    return cli_main(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

long count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(MatrixJson, RoundTripIsBitExact) {
  Rng rng(1);
  for (Eigen::Index n = 1; n <= 6; ++n) {
    const Matrix m = ginibre(n, rng) * 1e-3 + ginibre(n, rng) * 1e5;
    EXPECT_EQ(parse_matrix(matrix_to_json(m).dump()), m);
  }
}

TEST(MatrixJson, ParseErrors) {
  auto code = [](const std::string& text) {
    try {
      parse_matrix(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  EXPECT_EQ(code("{"), Errc::Parse);
  EXPECT_EQ(code("[]"), Errc::Parse);
  EXPECT_EQ(code(R"({"re":[[1]],"im":[[0]]})"), Errc::Parse);
  EXPECT_EQ(code(R"({"n":2,"re":[[1,0],[0,1]],"im":[[0,0]]})"), Errc::Parse);
  EXPECT_EQ(code(R"({"n":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]})"), Errc::Parse);
  EXPECT_EQ(code(R"({"n":1,"re":[["x"]],"im":[[0]]})"), Errc::Parse);
  EXPECT_THROW(parse_matrix(R"({"n":0,"re":[],"im":[]})"), Error);
  const Matrix m = parse_matrix(R"({"n":2,"re":[[1,2],[3,4]],"im":[[0,-1],[0.5,0]]})");
  EXPECT_EQ(m(0, 1), Complex(2.0, -1.0));
  EXPECT_EQ(m(1, 0), Complex(3.0, 0.5));
}

TEST(Csv, FormatAndHeader) {
  EXPECT_EQ(format_double(1.5), "1.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "");
  Report r;
  r.suite = "c41";
  TrialRecord rec;
  rec.n = 2;
  rec.lhs = 1.0;
  rec.rhs = 0.5;
  rec.margin = 0.5;
  r.records.push_back(rec);
  EXPECT_EQ(csv_string(r), "suite,trial,n,lambda,lhs,rhs,margin,verdict\nc41,0,2,,1,0.5,0.5,PASS\n");
}

TEST(ReportJson, Schema) {
  SuiteConfig cfg;
  cfg.trials = 2;
  cfg.n_min = cfg.n_max = 2;
  const Json j = to_json(suite_corollary41(cfg));
  for (const char* key : {"suite", "seed", "config", "trials", "passes", "failures", "wall_time"})
    EXPECT_TRUE(j.contains(key)) << key;
  ASSERT_EQ(j["trials"].size(), 2u);
  for (const char* key : {"id", "inputs", "outputs", "margin", "verdict"}) EXPECT_TRUE(j["trials"][0].contains(key));
  EXPECT_EQ(matrix_from_json(j["trials"][0]["inputs"]["C"]).rows(), 2);
}

TEST_F(CliTest, RadiusPrintsValue) {
  EXPECT_EQ(run({"radius", file("C.json", identity(2)), file("A.json", diag({1.0, 2.0}))}), 0);
  EXPECT_EQ(out_.str(), "1.5\n");
}

TEST_F(CliTest, RadiusWithOracles) {
  const std::string c = file("C.json", diag({1.0, 0.0})), a = file("A.json", diag({3.0, 1.0}));
  EXPECT_EQ(run({"radius", c, a, "--oracle", "hermitian", "--starts", "4", "--seed", "3"}), 0);
  EXPECT_NE(out_.str().find("hermitian_oracle 1.5"), std::string::npos);
  EXPECT_EQ(run({"radius", c, a, "--oracle", "grid", "--json"}), 0);
  const Json j = Json::parse(out_.str());
  EXPECT_NEAR(j["value"].get<double>(), 1.5, 1e-12);
  EXPECT_NEAR(j["grid_oracle"].get<double>(), 1.5, 2e-3);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  const std::string c2 = file("C2.json", identity(2)), c3 = file("C3.json", identity(3));
  EXPECT_EQ(run({"radius", c2, c3}), 2);
  EXPECT_NE(err_.str().find("DimensionMismatch"), std::string::npos);
  EXPECT_EQ(run({"radius", c2, raw("bad.json", "{ not json")}), 2);
  EXPECT_NE(err_.str().find("malformed JSON"), std::string::npos);
  EXPECT_EQ(run({"radius", c2, path("missing.json")}), 2);
  EXPECT_EQ(run({"radius", c2, c2, "--oracle", "bogus"}), 2);
  EXPECT_EQ(run({"radius", c3, c3, "--oracle", "grid"}), 2);
  EXPECT_EQ(run({"radius", c2, c2, "--starts", "0"}), 2);
  EXPECT_EQ(run({"aluthge", file("S.json", diag({1.0, 0.0})), "--lambda", "0.5"}), 2);
  EXPECT_NE(err_.str().find("Singular"), std::string::npos);
  EXPECT_EQ(run({"aluthge", c2, "--lambda", "2"}), 2);
  EXPECT_EQ(run({"verify", "t51", "--n", "4..2"}), 2);
  EXPECT_EQ(run({"verify", "zzz"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, Aluthge) {
  const std::string t = file("T.json", mat2(0.0, 2.0, 1.0, 0.0));
  EXPECT_EQ(run({"aluthge", t, "--lambda", "0.5", "--out", path("d.json")}), 0);
  const Matrix d = matrix_from_json(Json::parse(out_.str())["transformed"]);
  const double r2 = std::sqrt(2.0);
  EXPECT_LE((d - mat2(0.0, r2, r2, 0.0)).norm(), 1e-12);
  EXPECT_TRUE(fs::exists(path("d.json")));

  EXPECT_EQ(run({"aluthge", t, "--lambda", "0.5", "--iterate", "3", "--out", path("seq.json")}), 0);
  EXPECT_EQ(out_.str().substr(0, out_.str().find('\n')), "iteration,normality_defect,spectrum_drift");
  EXPECT_EQ(count_lines(out_.str()), 5);
  EXPECT_EQ(Json::parse(slurp(path("seq.json"))).size(), 4u);
  EXPECT_EQ(run({"aluthge", t, "--lambda", "0.25", "--iterate", "2", "--csv", path("diag.csv")}), 0);
  EXPECT_TRUE(out_.str().empty());
  EXPECT_NE(slurp(path("diag.csv")).find("iteration,"), std::string::npos);
}

TEST_F(CliTest, MembershipScaledCopyIsSeparated) {
  const std::string b = file("B.json", diag({1.0, 0.0})), a = file("A.json", diag({2.0, 0.0}));
  EXPECT_EQ(run({"membership", a, b, "--budget", "50", "--tol", "1e-3", "--out", path("m.json")}), 0);
  const Json j = Json::parse(out_.str());
  EXPECT_EQ(j["verdict"], "Separated");
  EXPECT_GE(j["separation_margin"].get<double>(), 0.5 - 1e-9);
  EXPECT_TRUE(j.contains("certificate_c"));
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(Json::parse(slurp(path("m.json"))), j);
}

TEST_F(CliTest, MembershipSelf) {
  const std::string b = file("B.json", mat2(1.0, 2.0, 0.0, Complex(0.0, 1.0)));
  EXPECT_EQ(run({"membership", b, b}), 0);
  const Json j = Json::parse(out_.str());
  EXPECT_EQ(j["verdict"], "Member");
  EXPECT_EQ(j["final_distance"], 0.0);
  EXPECT_EQ(j["atoms"].size(), 1u);
}

TEST_F(CliTest, Witness) {
  const std::string p = file("P.json", diag({1.0, 0.0}));
  EXPECT_EQ(run({"witness", p, p}), 0);
  EXPECT_GE(Json::parse(out_.str())["commutator_norm"].get<double>(), 0.4);
  EXPECT_EQ(run({"witness", file("S.json", 5.0 * identity(2)), p}), 0);
  EXPECT_LE(Json::parse(out_.str())["commutator_norm"].get<double>(), 1e-12);
}

TEST_F(CliTest, Spectrum) {
  EXPECT_EQ(run({"spectrum", file("T.json", diag({1.0, 2.0, 3.0}))}), 0);
  std::vector<Complex> values;
  std::istringstream lines(out_.str());
  std::string line;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    values.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  EXPECT_EQ(oracle::exhaustive_matching(values, {1.0, 2.0, 3.0}), 0.0);
}

TEST_F(CliTest, VerifySuiteReportAndDeterminism) {
  EXPECT_EQ(run({"verify", "t51", "--trials", "5", "--n", "2", "--seed", "7", "--out", path("r.json")}), 0);
  const std::string csv = out_.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(err_.str().find("t51: 5/5 passed"), std::string::npos);
  const Json report = Json::parse(slurp(path("r.json")));
  EXPECT_EQ(report["passes"], 5);
  EXPECT_EQ(report["seed"], 7);
  EXPECT_EQ(report["trials"].size(), 5u);

  EXPECT_EQ(run({"verify", "t51", "--trials", "5", "--n", "2", "--seed", "7", "--csv", path("again.csv")}), 0);
  EXPECT_EQ(slurp(path("again.csv")), csv);
}

TEST_F(CliTest, VerifyAll) {
  EXPECT_EQ(run({"verify", "all", "--trials", "2", "--n", "2..3", "--seed", "1", "--out", path("all.json")}), 0);
  const Json all = Json::parse(slurp(path("all.json")));
  EXPECT_EQ(all["reports"].size(), suite_names().size());
  EXPECT_EQ(count_lines(out_.str()), 1 + 2 * static_cast<long>(suite_names().size()));
}

TEST(DimensionRange, Parsing) {
  EXPECT_EQ(parse_dimension_range("2..4"), std::make_pair(Eigen::Index{2}, Eigen::Index{4}));
  EXPECT_EQ(parse_dimension_range("3"), std::make_pair(Eigen::Index{3}, Eigen::Index{3}));
  EXPECT_THROW(parse_dimension_range("a..4"), Error);
  EXPECT_THROW(parse_dimension_range("2..x"), Error);
  EXPECT_THROW(parse_dimension_range("0"), Error);
  EXPECT_THROW(parse_dimension_range("2..17"), Error);
}
