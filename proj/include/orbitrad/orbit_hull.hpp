#ifndef ORBITRAD_ORBIT_HULL_HPP
#define ORBITRAD_ORBIT_HULL_HPP

// Membership of A in the closed absolutely convex hull
//   Gamma = closure{ sum z_i U_i B U_i* : sum |z_i| <= 1 }
// decided by Frank-Wolfe projection, with the orbit radius optimizer as the
// linear maximization oracle. In finite dimensions the weak-operator closure
// of this convex set coincides with its norm closure.
//
// Member verdicts carry an explicit atom list. Separated verdicts carry a
// certificate C with |tau(C A)| > (1/n) sum s_i(C) s_i(B) >= omega_C(B), which
// is rigorous regardless of how well the heuristic oracle performed.

#include "orbitrad/core.hpp"
#include "orbitrad/unitary_opt.hpp"

#include <optional>

namespace orbitrad {

struct HullAtom {
  Complex z;
  UnitaryMatrix unitary;
};

enum class Verdict { Member, Separated, Undecided };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::Separated: return "Separated";
    case Verdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

struct MembershipOutcome {
  Verdict verdict = Verdict::Undecided;
  std::vector<HullAtom> atoms;
  Matrix certificate_c;  // (A - X_final)*, meaningful when not Member
  double separation_margin = 0.0;
  double final_distance = 0.0;
  double fw_gap = 0.0;
  std::size_t iterations = 0;
  std::vector<double> distance_history;  // ||A - X_k||_F, one entry per iterate
};

inline OptimizerConfig default_lmo_config() {
  OptimizerConfig c;
  c.starts = 4;
  c.max_iters = 300;
  return c;
}

struct FwBudget {
  std::size_t max_fw_iters = 300;
  double member_tol = 1e-2;
  OptimizerConfig lmo_cfg = default_lmo_config();
  /// Re-optimize all atom weights after every Frank-Wolfe step.
  bool corrective = true;
  std::size_t corrective_iters = 200;
};

/// sum z_i U_i B U_i*
inline Matrix reconstruct_from_atoms(const std::vector<HullAtom>& atoms, const Matrix& b) {
  Matrix x = Matrix::Zero(b.rows(), b.cols());
  for (const auto& a : atoms) x += a.z * a.unitary.conjugate(b);
  return x;
}

inline double atom_weight(const std::vector<HullAtom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.z);
  return s;
}

// ---------------------------------------------------------------------------
// Separation certificates

struct SeparationCheck {
  double rigorous_margin = 0.0;  // |tau(C A)| - (1/n) sum s_i(C) s_i(B)
  double heuristic_gap = 0.0;    // radius_C(A) - radius_C(B), both lower bounds
  double lower_a = 0.0;          // |tau(C A)|
  double upper_b = 0.0;          // von Neumann bound for omega_C(B)
};

/// Rounding floor below which a positive rigorous margin is not trusted.
inline double margin_floor(const Matrix& c, const Matrix& a, const Matrix& b) {
  return 1e-10 * (1.0 + c.norm() * (a.norm() + b.norm()));
}

inline double rigorous_margin(const Matrix& a, const Matrix& b, const Matrix& c) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  return std::abs(normalized_trace_product(c, a)) - von_neumann_bound(c, b);
}

inline SeparationCheck separation_check(const Matrix& a, const Matrix& b, const Matrix& c,
                                        const OptimizerConfig& cfg = {}) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  SeparationCheck s;
  s.lower_a = std::abs(normalized_trace_product(c, a));
  s.upper_b = von_neumann_bound(c, b);
  s.rigorous_margin = s.lower_a - s.upper_b;
  s.heuristic_gap = maximize_modulus(c, a, cfg).value - maximize_modulus(c, b, cfg).value;
  return s;
}

namespace detail {

/// Euclidean projection of moduli onto {r >= 0, sum r <= 1}, phases kept.
inline Eigen::VectorXcd project_l1_ball(const Eigen::VectorXcd& z) {
  const Eigen::Index m = z.size();
  Eigen::VectorXd r = z.cwiseAbs();
  if (r.sum() <= 1.0) return z;
  std::vector<double> sorted(r.data(), r.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, shift = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  Eigen::VectorXcd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double mod = std::max(r(i) - shift, 0.0);
    out(i) = r(i) > 0.0 ? z(i) * (mod / r(i)) : Complex(0.0, 0.0);
  }
  return out;
}

/// min 1/2 z^H G z - Re(b^H z) over the complex l1 ball, by accelerated projected gradient.
inline Eigen::VectorXcd corrective_weights(const Matrix& gram, const Eigen::VectorXcd& b,
                                           Eigen::VectorXcd z, std::size_t iters) {
  const Eigen::Index m = z.size();
  // Largest eigenvalue by power iteration; the factor guards the estimate.
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m);
  double lipschitz = 0.0;
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXcd w = gram * v;
    const double nw = w.norm();
    if (nw == 0.0) return z;
    lipschitz = nw / v.norm();
    v = w / nw;
  }
  lipschitz *= 1.1;
  if (!(lipschitz > 0.0)) return z;

  Eigen::VectorXcd y = z;
  double t = 1.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const Eigen::VectorXcd next = project_l1_ball(y - (gram * y - b) / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - z);
    z = next;
    t = t_next;
  }
  return z;
}

}  // namespace detail

/// Frank-Wolfe projection of A onto Gamma(B) with exact line search.
///
/// Starts from whichever of 0 and B is closer to A. Each step asks the LMO for
/// the orbit atom e^{i theta} U B U* maximizing Re Tr(R* V) with R = A - X
/// (the zero vertex competes with it), then moves along the segment with the
/// exact minimizing step in [0,1]. With `corrective` set, atom weights are then
/// re-optimized and the result kept only if it lowers the distance.
inline MembershipOutcome fw_project(const Matrix& a, const Matrix& b, const FwBudget& budget = {}) {
  require_operator(a, "A");
  require_operator(b, "B");
  require_same_dim(a, b);
  if (!(budget.member_tol > 0.0)) throw Error(Errc::InvalidArgument, "member_tol must be positive");
  const Eigen::Index n = a.rows();

  MembershipOutcome out;
  std::vector<HullAtom> atoms;
  std::vector<Matrix> images;  // U_i B U_i*
  Matrix x = Matrix::Zero(n, n);
  if ((a - b).norm() < a.norm()) {
    atoms.push_back({Complex(1.0, 0.0), UnitaryMatrix::identity(n)});
    images.push_back(b);
    x = b;
  }
  double distance = (a - x).norm();
  out.distance_history.push_back(distance);

  std::optional<UnitaryMatrix> last_lmo;
  std::size_t k = 0;
  for (; k < budget.max_fw_iters && distance > budget.member_tol; ++k) {
    const Matrix r = a - x;
    OptimizerConfig lmo_cfg = budget.lmo_cfg;
    lmo_cfg.seed = derive_seed(budget.lmo_cfg.seed, k);
    if (last_lmo) lmo_cfg.warm_starts.push_back(*last_lmo);
    const LmoResult lmo = lmo_orbit(r, b, lmo_cfg);
    last_lmo = lmo.unitary;

    const double inner_x = (r.adjoint() * x).trace().real();
    const bool zero_vertex = lmo.value <= 0.0;
    const Complex phase = std::polar(1.0, lmo.theta);
    const Matrix vertex = zero_vertex ? Matrix::Zero(n, n) : Matrix(phase * lmo.unitary.conjugate(b));
    out.fw_gap = (zero_vertex ? 0.0 : lmo.value) - inner_x;
    if (out.fw_gap <= 1e-14 * (1.0 + r.norm() * b.norm())) break;

    const Matrix d = vertex - x;
    const double dd = d.squaredNorm();
    if (dd == 0.0) break;
    const double gamma = std::clamp((r.adjoint() * d).trace().real() / dd, 0.0, 1.0);
    if (gamma == 0.0) break;

    for (auto& atom : atoms) atom.z *= (1.0 - gamma);
    if (!zero_vertex) {
      atoms.push_back({gamma * phase, lmo.unitary});
      images.push_back(lmo.unitary.conjugate(b));
    }
    x = (x + gamma * d).eval();
    double next_distance = (a - x).norm();

    if (budget.corrective && atoms.size() > 1) {
      const Eigen::Index m = static_cast<Eigen::Index>(atoms.size());
      Matrix gram(m, m);
      Eigen::VectorXcd rhs(m), z(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        rhs(i) = (images[i].adjoint() * a).trace();
        z(i) = atoms[i].z;
        for (Eigen::Index j = i; j < m; ++j) {
          gram(i, j) = (images[i].adjoint() * images[j]).trace();
          gram(j, i) = std::conj(gram(i, j));
        }
      }
      const Eigen::VectorXcd zc = detail::corrective_weights(gram, rhs, z, budget.corrective_iters);
      Matrix xc = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < m; ++i) xc += zc(i) * images[i];
      const double dc = (a - xc).norm();
      if (dc < next_distance) {
        for (Eigen::Index i = 0; i < m; ++i) atoms[i].z = zc(i);
        x = std::move(xc);
        next_distance = dc;
        // Drop atoms whose weight was projected to zero.
        std::size_t keep = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          if (atoms[i].z == Complex(0.0, 0.0)) continue;
          if (keep != i) {
            atoms[keep] = std::move(atoms[i]);
            images[keep] = std::move(images[i]);
          }
          ++keep;
        }
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(keep), atoms.end());
        images.erase(images.begin() + static_cast<std::ptrdiff_t>(keep), images.end());
      }
    }
    distance = next_distance;
    out.distance_history.push_back(distance);
  }

  out.iterations = k;
  out.atoms = std::move(atoms);
  out.final_distance = (a - reconstruct_from_atoms(out.atoms, b)).norm();
  if (!out.distance_history.empty()) out.distance_history.back() = out.final_distance;
  if (out.final_distance <= budget.member_tol) {
    out.verdict = Verdict::Member;
    out.certificate_c = Matrix::Zero(n, n);
    return out;
  }
  out.certificate_c = (a - reconstruct_from_atoms(out.atoms, b)).adjoint();
  out.separation_margin = rigorous_margin(a, b, out.certificate_c);
  out.verdict = out.separation_margin > margin_floor(out.certificate_c, a, b) ? Verdict::Separated
                                                                              : Verdict::Undecided;
  return out;
}

// ---------------------------------------------------------------------------
// Dominance probe

struct ProbeEntry {
  std::string label;  // "sampled" or "residual"
  Matrix c;
  double rigorous_margin = 0.0;
  double heuristic_gap = 0.0;
  bool violation = false;  // rigorous_margin above the rounding floor
};

struct ProbeReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t heuristic_exceedances = 0;  // heuristic_gap > 1e-6
  std::vector<ProbeEntry> entries;
};

/// Compares omega_C(A) against omega_C(B) for sampled admissible C (Ginibre,
/// shifted by I/n when the trace is too small) and the residual direction C = A*.
inline ProbeReport radius_dominance_probe(const Matrix& a, const Matrix& b, std::size_t num_c,
                                          const OptimizerConfig& cfg = {}) {
  require_same_dim(a, b);
  const Eigen::Index n = a.rows();
  std::vector<std::pair<std::string, Matrix>> probes;
  Rng rng(derive_seed(cfg.seed, 0xC0FFEE));
  for (std::size_t k = 0; k < num_c; ++k) {
    Matrix c = ginibre(n, rng);
    if (std::abs(normalized_trace(c)) < 1e-3) c += identity(n) / static_cast<double>(n);
    probes.emplace_back("sampled", std::move(c));
  }
  if (a.norm() > 0.0) probes.emplace_back("residual", a.adjoint());

  ProbeReport report;
  report.entries.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t k) {
    ProbeEntry& e = report.entries[k];
    e.label = probes[k].first;
    e.c = probes[k].second;
    const SeparationCheck s = separation_check(a, b, e.c, cfg);
    e.rigorous_margin = s.rigorous_margin;
    e.heuristic_gap = s.heuristic_gap;
    e.violation = s.rigorous_margin > margin_floor(e.c, a, b);
  });
  report.trials = report.entries.size();
  for (const auto& e : report.entries) {
    report.violations += e.violation ? 1 : 0;
    report.heuristic_exceedances += e.heuristic_gap > 1e-6 ? 1 : 0;
  }
  return report;
}

}  // namespace orbitrad

#endif  // ORBITRAD_ORBIT_HULL_HPP
