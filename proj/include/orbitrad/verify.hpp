#ifndef ORBITRAD_VERIFY_HPP
#define ORBITRAD_VERIFY_HPP

// Randomized verification suites for the C-numerical radius inequalities, the
// orbit-hull membership of f(Delta_lambda(T)), the norm-admissibility
// criterion for omega_C and the commutant rigidity of unitary orbits.
//
// Every PASS/FAIL decision uses an oracle, a rigorous bound, or an explicit
// slack stored with the trial. Both sides of an inequality are evaluated with
// identical optimizer budgets and seeds; a violation triggers a re-run of both
// sides with 8x the budget before it is recorded.

#include "orbitrad/aluthge.hpp"
#include "orbitrad/cnum.hpp"
#include "orbitrad/core.hpp"
#include "orbitrad/orbit_hull.hpp"
#include "orbitrad/unitary_opt.hpp"

#include <array>
#include <chrono>
#include <limits>
#include <string>
#include <utility>

namespace orbitrad {

// ---------------------------------------------------------------------------
// Commutant witness

/// h(U) = ||[U A U*, B]||_F^2.
class CommutatorProblem {
 public:
  CommutatorProblem(const Matrix& a, const Matrix& b) : a_(a), b_(b) {}

  double value(const Matrix& u) const { return commutator(u * a_ * u.adjoint(), b_).squaredNorm(); }

  ValueAndGradient evaluate(const Matrix& u) const {
    const Matrix m = u * a_ * u.adjoint();
    const Matrix k = commutator(m, b_);
    // dh(X) = 2 Re <K, [[X, M], B]> = <2 [[K, B*], M*], X>.
    const Matrix w = commutator(k, b_.adjoint());
    const Matrix g = 2.0 * commutator(w, m.adjoint());
    return {k.squaredNorm(), 0.5 * (g - g.adjoint())};
  }

 private:
  const Matrix& a_;
  const Matrix& b_;
};

struct WitnessResult {
  UnitaryMatrix unitary = UnitaryMatrix::identity(1);
  double commutator_norm = 0.0;  // ||[U A U*, B]||_F
};

/// Searches for U with [U A U*, B] != 0. A zero result over all starts is
/// evidence that A or B is scalar.
inline WitnessResult commutant_witness(const Matrix& a, const Matrix& b, const OptimizerConfig& cfg = {}) {
  require_operator(a, "A");
  require_operator(b, "B");
  require_same_dim(a, b);
  const CommutatorProblem problem(a, b);
  const auto outcomes = multistart_ascent(problem, a.rows(), cfg, [](double h) { return std::sqrt(h); });
  std::vector<double> values;
  for (const auto& o : outcomes) values.push_back(std::sqrt(problem.value(o.unitary)));
  const std::size_t best = best_index(values);
  return {UnitaryMatrix::checked(outcomes[best].unitary), values[best]};
}

// ---------------------------------------------------------------------------
// Reports

enum class Outcome { Pass, Fail, Inconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

struct TrialRecord {
  std::size_t id = 0;
  Eigen::Index n = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs + slack - lhs style quantity; >= 0 means the check held
  Outcome outcome = Outcome::Pass;
  std::string detail;  // e.g. membership verdict
  bool escalated = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, Matrix>> inputs;
  std::vector<Complex> polynomial;  // coefficients, when the instance uses one
};

struct SuiteConfig {
  std::size_t trials = 20;
  Eigen::Index n_min = 2;
  Eigen::Index n_max = 4;
  Seed seed = 42;
  OptimizerConfig radius;
  FwBudget membership;
  std::size_t grid_resolution = 60;
  double grid_slack = 3e-2;
  double optimizer_slack = 1e-6;
  std::size_t escalation_factor = 8;
  double witness_threshold = 1e-6;
  std::size_t max_degree = 3;
};

struct Failure {
  std::size_t trial = 0;
  std::string descriptor;
  double margin = 0.0;
  std::vector<std::string> artifacts;  // filled by writers that dump instances
};

struct Report {
  std::string suite;
  SuiteConfig config;
  std::size_t trials = 0;
  std::size_t passes = 0;  // includes inconclusive trials
  std::size_t inconclusive = 0;
  std::vector<Failure> failures;
  double wall_time = 0.0;
  std::vector<TrialRecord> records;

  bool all_passed() const { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// Instance sampling

inline constexpr std::array<double, 5> kSuiteLambdas{0.0, 0.25, 0.5, 0.75, 1.0};
inline constexpr double kSpectralFloor = 0.1;

/// Ginibre / sqrt(n), shifted by (1 + deficit) I when its smallest singular
/// value is below the floor; resampled if the shift does not help.
inline Matrix sample_invertible(Eigen::Index n, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix t = ginibre(n, rng) / std::sqrt(static_cast<double>(n));
    const Eigen::VectorXd s = singular_values(t);
    const double smallest = s(s.size() - 1);
    if (smallest >= kSpectralFloor) return t;
    t += (1.0 + (kSpectralFloor - smallest)) * identity(n);
    const Eigen::VectorXd s2 = singular_values(t);
    if (s2(s2.size() - 1) >= kSpectralFloor) return t;
  }
  throw Error(Errc::NoConvergence, "could not sample an invertible matrix");
}

inline Matrix sample_operator(Eigen::Index n, Rng& rng) {
  return ginibre(n, rng) / std::sqrt(static_cast<double>(n));
}

inline Eigen::Index sample_dimension(const SuiteConfig& cfg, Rng& rng) {
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
    throw Error(Errc::InvalidArgument, "dimension range must satisfy 1 <= n_min <= n_max");
  std::uniform_int_distribution<Eigen::Index> pick(cfg.n_min, cfg.n_max);
  return pick(rng);
}

inline double sample_lambda(Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kSuiteLambdas.size() - 1);
  return kSuiteLambdas[pick(rng)];
}

namespace detail {

template <class Trial>
Report run_suite(const std::string& name, const SuiteConfig& cfg, Trial&& trial) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.suite = name;
  report.config = cfg;
  report.trials = cfg.trials;
  report.records.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    TrialRecord rec = trial(i, rng);
    rec.id = i;
    report.records[i] = std::move(rec);
  });
  for (const auto& r : report.records) {
    if (r.outcome == Outcome::Fail) {
      std::string desc = name + " trial " + std::to_string(r.id) + " n=" + std::to_string(r.n);
      if (!std::isnan(r.lambda)) desc += " lambda=" + std::to_string(r.lambda);
      if (!r.detail.empty()) desc += " " + r.detail;
      report.failures.push_back({r.id, std::move(desc), r.margin, {}});
    } else {
      ++report.passes;
      if (r.outcome == Outcome::Inconclusive) ++report.inconclusive;
    }
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Compares omega_C(lhs_op) <= omega_C(rhs_op) with matched budgets, the
/// escalation re-run and, at n = 2, the grid oracle on both sides.
inline void compare_radii(TrialRecord& rec, const Matrix& c, const Matrix& lhs_op, const Matrix& rhs_op,
                          const SuiteConfig& cfg, Seed seed) {
  OptimizerConfig rc = cfg.radius;
  rc.seed = seed;
  double lhs = maximize_modulus(c, lhs_op, rc).value;
  double rhs = maximize_modulus(c, rhs_op, rc).value;
  if (lhs > rhs + cfg.optimizer_slack) {
    rec.escalated = true;
    const OptimizerConfig big = rc.escalated(cfg.escalation_factor);
    lhs = std::max(lhs, maximize_modulus(c, lhs_op, big).value);
    rhs = std::max(rhs, maximize_modulus(c, rhs_op, big).value);
  }
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.margin = rhs + cfg.optimizer_slack - lhs;
  bool ok = rec.margin >= 0.0;
  rec.metrics.emplace_back("optimizer_slack", cfg.optimizer_slack);
  rec.metrics.emplace_back("von_neumann_rhs", von_neumann_bound(c, rhs_op));
  if (c.rows() == 2) {
    const double lg = grid_oracle_2x2(c, lhs_op, cfg.grid_resolution);
    const double rg = grid_oracle_2x2(c, rhs_op, cfg.grid_resolution);
    const double grid_margin = rg + cfg.grid_slack - lg;
    rec.metrics.emplace_back("grid_lhs", lg);
    rec.metrics.emplace_back("grid_rhs", rg);
    rec.metrics.emplace_back("grid_slack", cfg.grid_slack);
    rec.metrics.emplace_back("grid_margin", grid_margin);
    ok = ok && grid_margin >= 0.0;
  }
  rec.outcome = ok ? Outcome::Pass : Outcome::Fail;
}

inline std::size_t sample_degree(const SuiteConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, cfg.max_degree);
  return pick(rng);
}

}  // namespace detail

/// omega_C(|T|^l B U |T|^{1-l}) <= omega_C(B T) for B commuting with T.
/// B is a random polynomial in T, which commutes with T exactly.
inline Report suite_theorem51(const SuiteConfig& cfg) {
  return detail::run_suite("t51", cfg, [&](std::size_t, Rng& rng) {
    TrialRecord rec;
    rec.n = sample_dimension(cfg, rng);
    const Matrix t = sample_invertible(rec.n, rng);
    const Polynomial g = random_polynomial(detail::sample_degree(cfg, rng), rng);
    const Matrix c = sample_operator(rec.n, rng);
    rec.lambda = sample_lambda(rng);
    const Seed opt_seed = rng();

    const Matrix b = poly_apply(g, t);
    const Polar polar = polar_decompose(t);
    const detail::PowerBasis powers(polar.modulus);
    const Matrix lhs_op = powers.power(rec.lambda) * b * polar.unitary.matrix() * powers.power(1.0 - rec.lambda);
    const Matrix rhs_op = b * t;
    detail::compare_radii(rec, c, lhs_op, rhs_op, cfg, opt_seed);
    rec.polynomial = g.coefficients();
    rec.inputs = {{"T", t}, {"B", b}, {"C", c}};
    return rec;
  });
}

/// omega_C(f(Delta_l(T))) <= omega_C(f(T)).
inline Report suite_prop52(const SuiteConfig& cfg) {
  return detail::run_suite("p52", cfg, [&](std::size_t, Rng& rng) {
    TrialRecord rec;
    rec.n = sample_dimension(cfg, rng);
    const Matrix t = sample_invertible(rec.n, rng);
    const Polynomial f = random_polynomial(detail::sample_degree(cfg, rng), rng);
    const Matrix c = sample_operator(rec.n, rng);
    rec.lambda = sample_lambda(rng);
    const Seed opt_seed = rng();

    const Matrix lhs_op = poly_apply(f, aluthge(t, rec.lambda).transformed);
    const Matrix rhs_op = poly_apply(f, t);
    detail::compare_radii(rec, c, lhs_op, rhs_op, cfg, opt_seed);
    rec.polynomial = f.coefficients();
    rec.inputs = {{"T", t}, {"C", c}};
    return rec;
  });
}

/// f(Delta_l(T)) lies in the closed absolutely convex hull of the orbit of f(T).
/// Separated is a failure; Undecided is inconclusive.
inline Report suite_prop53(const SuiteConfig& cfg) {
  return detail::run_suite("p53", cfg, [&](std::size_t, Rng& rng) {
    TrialRecord rec;
    rec.n = sample_dimension(cfg, rng);
    const Matrix t = sample_invertible(rec.n, rng);
    const Polynomial f = random_polynomial(detail::sample_degree(cfg, rng), rng);
    rec.lambda = sample_lambda(rng);
    FwBudget budget = cfg.membership;
    budget.lmo_cfg.seed = rng();

    const Matrix a = poly_apply(f, aluthge(t, rec.lambda).transformed);
    const Matrix b = poly_apply(f, t);
    const MembershipOutcome m = fw_project(a, b, budget);
    rec.lhs = m.final_distance;
    rec.rhs = budget.member_tol;
    rec.margin = budget.member_tol - m.final_distance;
    rec.detail = verdict_name(m.verdict);
    rec.outcome = m.verdict == Verdict::Member      ? Outcome::Pass
                  : m.verdict == Verdict::Separated ? Outcome::Fail
                                                    : Outcome::Inconclusive;
    const Matrix residual_c = (a - reconstruct_from_atoms(m.atoms, b)).adjoint();
    rec.metrics = {{"fw_iterations", static_cast<double>(m.iterations)},
                   {"atoms", static_cast<double>(m.atoms.size())},
                   {"atom_weight", atom_weight(m.atoms)},
                   {"fw_gap", m.fw_gap},
                   {"separation_margin", m.separation_margin},
                   {"residual_rigorous_margin", rigorous_margin(a, b, residual_c)},
                   {"residual_margin_floor", margin_floor(residual_c, a, b)}};
    rec.polynomial = f.coefficients();
    rec.inputs = {{"T", t}};
    return rec;
  });
}

/// Degenerate directions of the norm criterion for omega_C (scalar C, traceless
/// C) are checked against closed forms; admissible C must give
/// omega_C(A) >= |tau(C A)| and a value above 1e-8.
inline Report suite_corollary41(const SuiteConfig& cfg) {
  return detail::run_suite("c41", cfg, [&](std::size_t, Rng& rng) {
    TrialRecord rec;
    rec.n = sample_dimension(cfg, rng);
    const Eigen::Index n = rec.n;
    OptimizerConfig rc = cfg.radius;
    rc.seed = rng();

    // Scalar C = l I: omega_C(A) = |l| |tau(A)|, and 0 on traceless A.
    const Complex scalar = unit_disc_sample(rng) * 3.0;
    const Matrix a = sample_operator(n, rng);
    const Matrix c_scalar = scalar * identity(n);
    const double scalar_radius = c_numerical_radius(c_scalar, a, rc).value;
    const double scalar_expected = std::abs(scalar) * std::abs(normalized_trace(a));
    const double scalar_error = std::abs(scalar_radius - scalar_expected);
    const Matrix a_traceless = a - normalized_trace(a) * identity(n);
    const double scalar_traceless = c_numerical_radius(c_scalar, a_traceless, rc).value;

    // tau(C) = 0: omega_C(I) = 0.
    Matrix c_traceless = sample_operator(n, rng);
    c_traceless -= normalized_trace(c_traceless) * identity(n);
    const double traceless_at_identity = c_numerical_radius(c_traceless, identity(n), rc).value;

    // Admissible C.
    Matrix c_adm = sample_operator(n, rng);
    if (std::abs(normalized_trace(c_adm)) < 1e-3) c_adm += identity(n) / static_cast<double>(n);
    const Matrix a_adm = sample_operator(n, rng);
    const AdmissibilityVerdict verdict = norm_admissible(c_adm);
    const double radius = c_numerical_radius(c_adm, a_adm, rc).value;
    const double trace_bound = std::abs(normalized_trace_product(c_adm, a_adm));

    rec.lhs = radius;
    rec.rhs = trace_bound;
    rec.margin = radius - trace_bound;
    const bool ok = scalar_error <= 1e-9 && scalar_traceless <= 1e-10 && traceless_at_identity <= 1e-10 &&
                    verdict.is_norm && radius >= trace_bound - 1e-12 && radius > 1e-8;
    rec.outcome = ok ? Outcome::Pass : Outcome::Fail;
    rec.metrics = {{"scalar_error", scalar_error},
                   {"scalar_traceless_radius", scalar_traceless},
                   {"traceless_radius_at_identity", traceless_at_identity},
                   {"admissible_radius", radius}};
    rec.inputs = {{"C_scalar", c_scalar}, {"A", a}, {"C_traceless", c_traceless}, {"C", c_adm}, {"A_adm", a_adm}};
    return rec;
  });
}

/// Random non-scalar pairs must admit U with [U A U*, B] != 0.
inline Report suite_theorem32(const SuiteConfig& cfg) {
  return detail::run_suite("t32", cfg, [&](std::size_t, Rng& rng) {
    TrialRecord rec;
    rec.n = sample_dimension(cfg, rng);
    const Matrix a = sample_operator(rec.n, rng);
    const Matrix b = sample_operator(rec.n, rng);
    OptimizerConfig rc = cfg.radius;
    rc.seed = rng();
    const WitnessResult w = commutant_witness(a, b, rc);
    rec.lhs = w.commutator_norm;
    rec.rhs = cfg.witness_threshold;
    rec.margin = w.commutator_norm - cfg.witness_threshold;
    rec.outcome = rec.margin > 0.0 ? Outcome::Pass : Outcome::Fail;
    rec.metrics = {{"scalar_distance_A", norm_admissible(a).scalar_distance},
                   {"scalar_distance_B", norm_admissible(b).scalar_distance}};
    rec.inputs = {{"A", a}, {"B", b}};
    return rec;
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"t51", "p52", "p53", "c41", "t32"};
  return names;
}

inline Report run_named_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "t51") return suite_theorem51(cfg);
  if (name == "p52") return suite_prop52(cfg);
  if (name == "p53") return suite_prop53(cfg);
  if (name == "c41") return suite_corollary41(cfg);
  if (name == "t32") return suite_theorem32(cfg);
  throw Error(Errc::InvalidArgument, "unknown suite '" + name + "'");
}

}  // namespace orbitrad

#endif  // ORBITRAD_VERIFY_HPP
