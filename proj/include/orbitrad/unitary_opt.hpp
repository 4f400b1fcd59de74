#ifndef ORBITRAD_UNITARY_OPT_HPP
#define ORBITRAD_UNITARY_OPT_HPP

// Maximization of |tau(C U A U*)| over the unitary group.
//
// The ascent works on g(U) = |tau(C U A U*)|^2 along curves t -> e^{tX} U with
// X skew-Hermitian. Search directions are Polak-Ribiere conjugate gradients;
// steps are retracted with the unitary polar factor of (I + s X) U and
// accepted by Armijo backtracking, so g never decreases within a start. Several starts (identity, a diagonal phase unitary, caller
// supplied warm starts, then Haar samples) are reduced to the best value.

#include "orbitrad/core.hpp"
#include "orbitrad/parallel.hpp"

#include <functional>
#include <limits>
#include <numbers>
#include <optional>

namespace orbitrad {

struct IteratePoint {
  std::size_t start = 0;
  std::size_t iteration = 0;
  double objective = 0.0;  // current value of the maximized quantity
};

struct OptimizerConfig {
  std::size_t starts = 16;  // Haar starts, on top of the fixed ones
  std::size_t max_iters = 500;
  double grad_tol = 1e-9;
  double step_init = 0.1;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  Seed seed = 42;
  /// Extra starting points tried after the identity and phase starts.
  std::vector<UnitaryMatrix> warm_starts;
  /// Called for every accepted iterate (and each start point). Must be thread safe.
  std::function<void(const IteratePoint&)> observer;

  void validate() const {
    if (starts < 1) throw Error(Errc::InvalidArgument, "starts must be >= 1");
    if (max_iters < 1) throw Error(Errc::InvalidArgument, "max_iters must be >= 1");
    if (!(grad_tol > 0.0) || !(step_init > 0.0))
      throw Error(Errc::InvalidArgument, "tolerances and step must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0))
      throw Error(Errc::InvalidArgument, "Armijo parameters must lie in (0,1)");
  }

  /// Same seed, `factor` times the starts and iterations.
  OptimizerConfig escalated(std::size_t factor) const {
    OptimizerConfig c = *this;
    c.starts *= factor;
    c.max_iters *= factor;
    return c;
  }
};

struct AscentOutcome {
  Matrix unitary;
  double value = 0.0;  // objective g at `unitary`
  std::size_t iterations = 0;
  bool converged = false;
};

/// Evaluation of a smooth function on U(n) together with its Riemannian
/// gradient for the left-translation metric.
struct ValueAndGradient {
  double value;
  Matrix gradient;  // skew-Hermitian
};

/// Riemannian conjugate-gradient ascent with polar retraction and Armijo backtracking.
///
/// `Problem` provides `double value(const Matrix& U) const` and
/// `ValueAndGradient evaluate(const Matrix& U) const`. `report(iteration, g)`
/// is called for the start point and every accepted iterate.
///
/// Stops when the gradient norm drops below grad_tol, after 10 consecutive
/// relative improvements below 1e-14, when no step passes the Armijo test, or
/// at max_iters.
template <class Problem, class Report>
AscentOutcome riemannian_ascent(const Problem& problem, Matrix u, const OptimizerConfig& cfg,
                                Report&& report) {
  constexpr std::size_t kStallWindow = 10;
  constexpr double kStallRel = 1e-14;
  constexpr double kMinStep = 1e-20;

  const Matrix id = identity(u.rows());
  ValueAndGradient cur = problem.evaluate(u);
  report(0, cur.value);
  double step = cfg.step_init;
  std::size_t stall = 0;
  AscentOutcome out;

  Matrix direction = cur.gradient;
  std::size_t it = 0;
  for (; it < cfg.max_iters; ++it) {
    const double gnorm2 = cur.gradient.squaredNorm();
    if (std::sqrt(gnorm2) < cfg.grad_tol) {
      out.converged = true;
      break;
    }
    double slope = (cur.gradient.adjoint() * direction).trace().real();
    if (!(slope > 0.0)) {  // not an ascent direction: restart from the gradient
      direction = cur.gradient;
      slope = gnorm2;
    }
    double s = step;
    bool accepted = false;
    Matrix next;
    double next_value = 0.0;
    while (s >= kMinStep) {
      next = unitary_factor((id + s * direction) * u);
      next_value = problem.value(next);
      if (next_value >= cur.value + cfg.armijo_c * s * slope) {
        accepted = true;
        break;
      }
      s *= cfg.armijo_shrink;
    }
    if (!accepted) {
      if (direction != cur.gradient) {  // retry once along the plain gradient
        direction = cur.gradient;
        continue;
      }
      // No measurable ascent left: the gradient is at rounding level.
      out.converged = std::sqrt(gnorm2) <= 1e-6 * (1.0 + std::abs(cur.value));
      break;
    }
    const double rel = (next_value - cur.value) / std::max(std::abs(cur.value), 1e-300);
    u = std::move(next);
    ValueAndGradient upd = problem.evaluate(u);
    // Polak-Ribiere+ in the left trivialization, where all gradients share one Lie algebra.
    const double beta = std::max(0.0, (upd.gradient.adjoint() * (upd.gradient - cur.gradient)).trace().real() / gnorm2);
    direction = upd.gradient + beta * direction;
    cur = std::move(upd);
    report(it + 1, cur.value);
    stall = rel < kStallRel ? stall + 1 : 0;
    if (stall >= kStallWindow) {
      out.converged = true;
      ++it;
      break;
    }
    step = s / cfg.armijo_shrink;
  }
  out.unitary = std::move(u);
  out.value = cur.value;
  out.iterations = it;
  return out;
}

/// g(U) = |tau(C U A U*)|^2.
class OrbitModulusProblem {
 public:
  OrbitModulusProblem(const Matrix& c, const Matrix& a) : c_(c), a_(a) {}

  Complex objective(const Matrix& u) const {
    return normalized_trace_product(c_, u * a_ * u.adjoint());
  }
  double value(const Matrix& u) const { return std::norm(objective(u)); }

  ValueAndGradient evaluate(const Matrix& u) const {
    const Matrix m = u * a_ * u.adjoint();
    const Complex f = normalized_trace_product(c_, m);
    // dg(X) = 2 Re(conj f tau(X [M, C])) = <W, X> with W = (2/n) f [M, C]*.
    const Matrix w = (2.0 / static_cast<double>(u.rows())) * f * commutator(m, c_).adjoint();
    return {std::norm(f), 0.5 * (w - w.adjoint())};
  }

 private:
  const Matrix& c_;
  const Matrix& a_;
};

/// tau(C U A U*).
inline Complex orbit_objective(const Matrix& c, const Matrix& a, const UnitaryMatrix& u) {
  require_same_dim(c, a);
  require_same_dim(c, u.matrix());
  return OrbitModulusProblem(c, a).objective(u.matrix());
}

/// d/dt g(e^{tX} U) at t = 0 for g = |tau(C U A U*)|^2 and skew-Hermitian X.
inline double directional_derivative(const Matrix& c, const Matrix& a, const UnitaryMatrix& u,
                                     const Matrix& x) {
  require_same_dim(c, a);
  require_same_dim(c, u.matrix());
  require_same_dim(c, x);
  if (!(skew_defect(x) <= 1e-10)) throw Error(Errc::NotSkew, "||X + X*||_F > 1e-10");
  const Matrix m = u.conjugate(a);
  const Complex f = normalized_trace_product(c, m);
  const Complex df = normalized_trace_product(x, commutator(m, c));
  return 2.0 * (std::conj(f) * df).real();
}

struct RadiusResult {
  double value = 0.0;  // |tau(C U A U*)| at the maximizer
  UnitaryMatrix maximizer = UnitaryMatrix::identity(1);
  double phase = 0.0;  // arg tau(C U A U*) in [0, 2 pi)
  std::size_t best_start = 0;
  std::vector<double> per_start_values;
  std::vector<std::size_t> iterations_used;
  std::vector<bool> converged_flags;
};

inline double wrap_phase(double angle) {
  double p = std::fmod(angle, 2.0 * std::numbers::pi);
  if (p < 0.0) p += 2.0 * std::numbers::pi;
  if (p >= 2.0 * std::numbers::pi) p = 0.0;
  return p;
}

/// diag(e^{2 pi i k / n}): a fixed non-identity start that leaves diagonals in place.
inline UnitaryMatrix diagonal_phase_start(Eigen::Index n) {
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    d(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return UnitaryMatrix::checked(std::move(d));
}

/// Starting unitaries in start-index order: identity, phases, warm starts, Haar.
inline std::vector<UnitaryMatrix> start_points(Eigen::Index n, const OptimizerConfig& cfg) {
  std::vector<UnitaryMatrix> pts;
  pts.reserve(2 + cfg.warm_starts.size() + cfg.starts);
  pts.push_back(UnitaryMatrix::identity(n));
  pts.push_back(diagonal_phase_start(n));
  for (const auto& w : cfg.warm_starts) {
    if (w.dim() != n) throw Error(Errc::DimensionMismatch, "warm start dimension");
    pts.push_back(w);
  }
  for (std::size_t k = 0; k < cfg.starts; ++k) pts.push_back(haar_unitary(n, derive_seed(cfg.seed, k)));
  return pts;
}

/// Multi-start ascent for `problem`; returns the per-start outcomes in start order.
template <class Problem>
std::vector<AscentOutcome> multistart_ascent(const Problem& problem, Eigen::Index n,
                                             const OptimizerConfig& cfg,
                                             const std::function<double(double)>& to_objective) {
  cfg.validate();
  const std::vector<UnitaryMatrix> pts = start_points(n, cfg);
  std::vector<AscentOutcome> outcomes(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    auto report = [&](std::size_t iter, double g) {
      if (cfg.observer) cfg.observer(IteratePoint{k, iter, to_objective(g)});
    };
    outcomes[k] = riemannian_ascent(problem, pts[k].matrix(), cfg, report);
  });
  return outcomes;
}

/// Index of the best value; ties within 1e-12 go to the lowest index.
inline std::size_t best_index(const std::vector<double>& values) {
  // Ties within rounding go to the earliest start, so fixed starts win over Haar starts.
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best] + 1e-12) best = k;
  return best;
}

/// Certified lower bound of sup_U |tau(C U A U*)|: the value is attained at `maximizer`.
inline RadiusResult maximize_modulus(const Matrix& c, const Matrix& a, const OptimizerConfig& cfg = {}) {
  require_operator(c, "C");
  require_operator(a, "A");
  require_same_dim(c, a);
  const OrbitModulusProblem problem(c, a);
  const auto outcomes =
      multistart_ascent(problem, c.rows(), cfg, [](double g) { return std::sqrt(g); });

  RadiusResult r;
  std::vector<UnitaryMatrix> projected;
  projected.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    projected.push_back(UnitaryMatrix::checked(o.unitary));
    r.per_start_values.push_back(std::abs(problem.objective(projected.back().matrix())));
    r.iterations_used.push_back(o.iterations);
    r.converged_flags.push_back(o.converged);
  }
  r.best_start = best_index(r.per_start_values);
  r.maximizer = projected[r.best_start];
  const Complex f = problem.objective(r.maximizer.matrix());
  r.value = std::abs(f);
  r.phase = f == Complex(0.0, 0.0) ? 0.0 : wrap_phase(std::arg(f));
  return r;
}

/// Brute-force max of |tau(C U A U*)| over a K^3 grid of SU(2); U(2) phases cancel.
inline double grid_oracle_2x2(const Matrix& c, const Matrix& a, std::size_t k) {
  if (c.rows() != 2 || c.cols() != 2 || a.rows() != 2 || a.cols() != 2)
    throw Error(Errc::WrongDimension, "grid oracle requires 2x2 inputs");
  if (k < 8) throw Error(Errc::InvalidArgument, "grid resolution must be >= 8");
  const Eigen::Matrix2cd cc = c;
  const Eigen::Matrix2cd aa = a;
  const double dt = 0.5 * std::numbers::pi / static_cast<double>(k - 1);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(k);

  std::vector<Complex> phases(k);
  for (std::size_t j = 0; j < k; ++j) phases[j] = std::polar(1.0, dphi * static_cast<double>(j));

  double best = 0.0;
  for (std::size_t it = 0; it < k; ++it) {
    const double t = dt * static_cast<double>(it);
    const double ct = std::cos(t), st = std::sin(t);
    for (std::size_t i1 = 0; i1 < k; ++i1) {
      const Complex a0 = ct * phases[i1];
      for (std::size_t i2 = 0; i2 < k; ++i2) {
        const Complex b0 = st * phases[i2];
        Eigen::Matrix2cd u;
        u << a0, -std::conj(b0), b0, std::conj(a0);
        const Eigen::Matrix2cd m = u * aa * u.adjoint();
        const Complex tr = cc(0, 0) * m(0, 0) + cc(0, 1) * m(1, 0) + cc(1, 0) * m(0, 1) + cc(1, 1) * m(1, 1);
        best = std::max(best, 0.5 * std::abs(tr));
      }
    }
  }
  return best;
}

/// Closed form for Hermitian C, A: tau(C U A U*) is real and sweeps
/// [(1/n) sum lambda_dn(C) lambda_up(A), (1/n) sum lambda_dn(C) lambda_dn(A)].
inline double hermitian_oracle(const Matrix& c, const Matrix& a) {
  require_operator(c, "C");
  require_operator(a, "A");
  require_same_dim(c, a);
  const Eigen::VectorXd lc = eig_hermitian(c).values;
  const Eigen::VectorXd la = eig_hermitian(a).values;
  const double n = static_cast<double>(c.rows());
  const double aligned = lc.dot(la) / n;
  const double reversed = lc.dot(la.reverse()) / n;
  return std::max(std::abs(aligned), std::abs(reversed));
}

struct LmoResult {
  double theta = 0.0;
  UnitaryMatrix unitary = UnitaryMatrix::identity(1);
  double value = 0.0;  // Re Tr(R* e^{i theta} U B U*), unnormalized trace
};

/// Linear maximization of Re Tr(R* V) over V = e^{i theta} U B U*.
/// Equals n times the radius of B with respect to R*.
inline LmoResult lmo_orbit(const Matrix& r, const Matrix& b, const OptimizerConfig& cfg = {}) {
  require_same_dim(r, b);
  const Matrix r_adj = r.adjoint();
  const RadiusResult res = maximize_modulus(r_adj, b, cfg);
  LmoResult out;
  out.unitary = res.maximizer;
  out.value = static_cast<double>(r.rows()) * res.value;
  out.theta = res.value == 0.0 ? 0.0 : wrap_phase(-res.phase);
  return out;
}

}  // namespace orbitrad

#endif  // ORBITRAD_UNITARY_OPT_HPP
