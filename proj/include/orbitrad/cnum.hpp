#ifndef ORBITRAD_CNUM_HPP
#define ORBITRAD_CNUM_HPP

// C-numerical radius API, the norm-admissibility test for omega_C, dual norms
// with respect to the normalized trace pairing, and the reconstruction of a
// weakly unitarily invariant norm as a supremum of C-numerical radii.

#include "orbitrad/core.hpp"
#include "orbitrad/unitary_opt.hpp"

#include <functional>
#include <string>
#include <utility>

namespace orbitrad {

/// omega_C(A) = sup_U |tau(C U A U*)|, reported as the best value found (a lower bound).
inline RadiusResult c_numerical_radius(const Matrix& c, const Matrix& a, const OptimizerConfig& cfg = {}) {
  return maximize_modulus(c, a, cfg);
}

// ---------------------------------------------------------------------------
// Admissibility

enum class Admissibility { Admissible, ScalarC, TracelessC, Both };

inline const char* admissibility_name(Admissibility a) {
  switch (a) {
    case Admissibility::Admissible: return "Admissible";
    case Admissibility::ScalarC: return "ScalarC";
    case Admissibility::TracelessC: return "TracelessC";
    case Admissibility::Both: return "Both";
  }
  return "Unknown";
}

struct AdmissibilityVerdict {
  bool is_norm = false;
  Admissibility reason = Admissibility::Both;
  double scalar_distance = 0.0;  // ||C - tau(C) I||_F
  double trace_magnitude = 0.0;  // |tau(C)|
};

/// omega_C is a norm iff C is not scalar and tau(C) != 0.
inline AdmissibilityVerdict norm_admissible(const Matrix& c, double tol = 1e-10) {
  require_operator(c, "C");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tol must be positive");
  AdmissibilityVerdict v;
  const Complex t = normalized_trace(c);
  v.scalar_distance = (c - t * identity(c.rows())).norm();
  v.trace_magnitude = std::abs(t);
  const bool scalar = v.scalar_distance <= tol;
  const bool traceless = v.trace_magnitude <= tol;
  if (scalar && traceless)
    v.reason = Admissibility::Both;
  else if (scalar)
    v.reason = Admissibility::ScalarC;
  else if (traceless)
    v.reason = Admissibility::TracelessC;
  else
    v.reason = Admissibility::Admissible;
  v.is_norm = v.reason == Admissibility::Admissible;
  return v;
}

// ---------------------------------------------------------------------------
// Norm evaluators

class NormEvaluator {
 public:
  using Fn = std::function<double(const Matrix&)>;

  /// Registers `fn` after checking N(0) = 0 and N(alpha M) = |alpha| N(M) on
  /// seeded probes of dimension `probe_dim`.
  static NormEvaluator registered(std::string name, Fn fn, bool weakly_unitarily_invariant,
                                  Eigen::Index probe_dim = 3) {
    NormEvaluator n(std::move(name), std::move(fn), weakly_unitarily_invariant);
    n.check_probes(probe_dim);
    return n;
  }

  double operator()(const Matrix& m) const { return fn_(m); }
  const std::string& name() const noexcept { return name_; }
  bool weakly_unitarily_invariant() const noexcept { return wui_; }

 private:
  NormEvaluator(std::string name, Fn fn, bool wui) : name_(std::move(name)), fn_(std::move(fn)), wui_(wui) {}

  void check_probes(Eigen::Index n) const {
    if (fn_(Matrix::Zero(n, n)) != 0.0)
      throw Error(Errc::InvalidArgument, "norm '" + name_ + "' does not vanish at 0");
    Rng rng(0x5eedULL);
    const Complex scales[] = {Complex(-2.5, 0.0), Complex(0.0, 0.5), std::polar(3.0, 1.0)};
    for (int probe = 0; probe < 3; ++probe) {
      const Matrix m = ginibre(n, rng);
      const double base = fn_(m);
      for (const Complex& alpha : scales) {
        const double scaled = fn_(alpha * m);
        if (std::abs(scaled - std::abs(alpha) * base) > 1e-9 * (1.0 + std::abs(alpha) * base))
          throw Error(Errc::InvalidArgument, "norm '" + name_ + "' is not absolutely homogeneous");
      }
    }
  }

  std::string name_;
  Fn fn_;
  bool wui_;
};

inline NormEvaluator operator_norm_evaluator() {
  return NormEvaluator::registered("operator", [](const Matrix& m) { return operator_norm(m); }, true);
}

inline NormEvaluator frobenius_norm_evaluator() {
  return NormEvaluator::registered("frobenius", [](const Matrix& m) { return m.norm(); }, true);
}

/// (1/n) ||M||_1: the dual of the operator norm under the normalized trace.
inline NormEvaluator scaled_trace_norm_evaluator() {
  return NormEvaluator::registered(
      "trace/n", [](const Matrix& m) { return singular_values(m).sum() / static_cast<double>(m.rows()); }, true);
}

/// omega_C as a norm. The input is normalized before optimizing so the
/// evaluator is exactly homogeneous.
inline NormEvaluator c_radius_norm_evaluator(const Matrix& c, OptimizerConfig cfg = {}) {
  const AdmissibilityVerdict v = norm_admissible(c);
  if (!v.is_norm)
    throw Error(Errc::InvalidArgument, std::string("omega_C is not a norm: ") + admissibility_name(v.reason));
  cfg.observer = nullptr;
  auto fn = [c, cfg](const Matrix& m) {
    require_same_dim(c, m);
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return scale * maximize_modulus(c, m / scale, cfg).value;
  };
  return NormEvaluator::registered("omega_C", std::move(fn), true, c.rows());
}

// ---------------------------------------------------------------------------
// Dual norm

struct DualSearchConfig {
  std::size_t starts = 32;         // random starts besides the structured ones
  std::size_t refine_iters = 150;  // hill-climbing steps per start
  Seed seed = 42;
};

namespace detail {

/// Structured candidates built from T's singular value decomposition:
/// T*, the unitary polar factor of T*, each rank-one v_k u_k*, and I.
inline std::vector<Matrix> svd_candidates(const Matrix& t) {
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  std::vector<Matrix> out;
  out.push_back(t.adjoint());
  out.push_back(v * w.adjoint());
  for (Eigen::Index k = 0; k < t.rows(); ++k) out.push_back(v.col(k) * w.col(k).adjoint());
  out.push_back(identity(t.rows()));
  return out;
}

struct Climb {
  double score;
  Matrix x;
};

/// (1+1) evolution strategy maximizing a scale-invariant score over X.
template <class Score>
Climb hill_climb(Matrix x, std::size_t iters, Rng& rng, Score&& score) {
  double best = score(x);
  double sigma = 0.3;
  for (std::size_t it = 0; it < iters; ++it) {
    const double scale = x.norm();
    if (scale == 0.0) break;
    x /= scale;
    const Matrix trial = x + (sigma / static_cast<double>(x.rows())) * ginibre(x.rows(), rng);
    const double s = score(trial);
    if (s > best) {
      best = s;
      x = trial;
      sigma = std::min(sigma * 1.5, 2.0);
    } else {
      sigma *= 0.85;
      if (sigma < 1e-8) break;
    }
  }
  return {best, std::move(x)};
}

}  // namespace detail

/// Lower bound of |||T|||^# = sup{|tau(T X)| : |||X||| <= 1}.
inline double dual_norm_estimate(const NormEvaluator& norm, const Matrix& t, const DualSearchConfig& cfg = {}) {
  require_operator(t, "T");
  if (t.norm() == 0.0) return 0.0;
  auto ratio = [&](const Matrix& x) {
    const double nx = norm(x);
    if (nx == 0.0) {
      if (x.norm() == 0.0) return 0.0;
      throw Error(Errc::DegenerateNorm, "norm '" + norm.name() + "' vanishes at a nonzero matrix");
    }
    return std::abs(normalized_trace_product(t, x)) / nx;
  };

  std::vector<Matrix> candidates = detail::svd_candidates(t);
  Rng sampler(derive_seed(cfg.seed, 0));
  for (std::size_t k = 0; k < cfg.starts; ++k) candidates.push_back(ginibre(t.rows(), sampler));

  std::vector<double> best(candidates.size(), 0.0);
  parallel_for(candidates.size(), [&](std::size_t k) {
    Rng rng(derive_seed(cfg.seed, k + 1));
    best[k] = detail::hill_climb(candidates[k], cfg.refine_iters, rng, ratio).score;
  });
  return *std::max_element(best.begin(), best.end());
}

// ---------------------------------------------------------------------------
// Reconstruction |||T||| = sup_{|||X|||^# <= 1} omega_X(T)

struct ReconstructConfig {
  std::size_t random_candidates = 16;
  std::size_t refine_iters = 20;  // hill-climbing steps around the best candidate
  DualSearchConfig dual;
  OptimizerConfig radius;
  Seed seed = 42;
};

struct Reconstruction {
  double value = 0.0;
  Matrix best_candidate;  // rescaled to estimated dual norm 1
};

/// Candidates X are rescaled by their estimated dual norm, then omega_X(T) is
/// maximized; returns the best value found.
inline Reconstruction reconstruct_wui_norm_detailed(const NormEvaluator& norm, const Matrix& t,
                                                   const ReconstructConfig& cfg = {}) {
  require_operator(t, "T");
  if (!norm.weakly_unitarily_invariant())
    throw Error(Errc::InvalidArgument, "norm '" + norm.name() + "' is not weakly unitarily invariant");
  Reconstruction out;
  out.best_candidate = Matrix::Zero(t.rows(), t.cols());
  if (t.norm() == 0.0) return out;

  auto score = [&](const Matrix& x) {
    const double d = dual_norm_estimate(norm, x, cfg.dual);
    if (d == 0.0) return 0.0;
    return c_numerical_radius(x / d, t, cfg.radius).value;
  };

  std::vector<Matrix> candidates = detail::svd_candidates(t);
  Rng sampler(derive_seed(cfg.seed, 0));
  for (std::size_t k = 0; k < cfg.random_candidates; ++k) candidates.push_back(ginibre(t.rows(), sampler));

  std::vector<double> values(candidates.size(), 0.0);
  parallel_for(candidates.size(), [&](std::size_t k) { values[k] = score(candidates[k]); });
  const std::size_t best = best_index(values);
  out.value = values[best];
  out.best_candidate = candidates[best];

  if (cfg.refine_iters > 0) {
    Rng rng(derive_seed(cfg.seed, 1));
    detail::Climb refined = detail::hill_climb(out.best_candidate, cfg.refine_iters, rng, score);
    if (refined.score > out.value) {
      out.value = refined.score;
      out.best_candidate = std::move(refined.x);
    }
  }
  const double d = dual_norm_estimate(norm, out.best_candidate, cfg.dual);
  if (d > 0.0) out.best_candidate /= d;
  return out;
}

inline double reconstruct_wui_norm(const NormEvaluator& norm, const Matrix& t, const ReconstructConfig& cfg = {}) {
  return reconstruct_wui_norm_detailed(norm, t, cfg).value;
}

}  // namespace orbitrad

#endif  // ORBITRAD_CNUM_HPP
