#ifndef ORBITRAD_ALUTHGE_HPP
#define ORBITRAD_ALUTHGE_HPP

// lambda-Aluthge transforms Delta_lambda(T) = |T|^lambda U |T|^{1-lambda} of
// invertible matrices, iterated transforms and spectrum diagnostics.

#include "orbitrad/core.hpp"

#include <optional>

namespace orbitrad {

struct AluthgeDecomposition {
  double lambda = 0.0;
  UnitaryMatrix unitary;
  PositiveMatrix abs_t;
  Matrix transformed;
  double similarity_defect = 0.0;  // || |T|^{-lambda} Delta |T|^{lambda} - T ||_F
};

namespace detail {

/// Real powers of a positive definite matrix from one eigendecomposition.
/// Exponents 0 and 1 return I and P exactly.
class PowerBasis {
 public:
  explicit PowerBasis(const PositiveMatrix& p) : p_(p.matrix()), eig_(eig_hermitian(p.matrix())) {}

  Matrix power(double s) const {
    if (s == 0.0) return identity(p_.rows());
    if (s == 1.0) return p_;
    const Eigen::VectorXd powered = eig_.values.unaryExpr([s](double x) { return std::pow(x, s); });
    const Matrix& v = eig_.vectors.matrix();
    return v * powered.cast<Complex>().asDiagonal() * v.adjoint();
  }

 private:
  Matrix p_;
  HermitianEigen eig_;
};

}  // namespace detail

inline AluthgeDecomposition aluthge(const Matrix& t, double lambda) {
  require_operator(t, "T");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::InvalidArgument, "lambda must lie in [0,1]");
  Polar polar = polar_decompose(t);
  const detail::PowerBasis powers(polar.modulus);
  const Matrix left = powers.power(lambda);
  const Matrix right = powers.power(1.0 - lambda);
  Matrix transformed = left * polar.unitary.matrix() * right;
  const Matrix undo = powers.power(-lambda);
  const double defect = (undo * transformed * left - t).norm();
  return {lambda, std::move(polar.unitary), std::move(polar.modulus), std::move(transformed), defect};
}

/// Bottleneck distance between two eigenvalue multisets: the minimum over
/// bijections of the largest matched distance.
inline double match_spectra(const std::vector<Complex>& s1, const std::vector<Complex>& s2) {
  if (s1.size() != s2.size()) throw Error(Errc::SizeMismatch, "spectra have different sizes");
  const std::size_t n = s1.size();
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  std::vector<double> levels;
  levels.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dist[i][j] = std::abs(s1[i] - s2[j]);
      levels.push_back(dist[i][j]);
    }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Perfect matching using only edges with distance <= threshold (Kuhn's algorithm).
  auto perfect = [&](double threshold) {
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      auto augment = [&](auto&& self, std::size_t row) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
          if (seen[j] || dist[row][j] > threshold) continue;
          seen[j] = 1;
          if (owner[j] < 0 || self(self, static_cast<std::size_t>(owner[j]))) {
            owner[j] = static_cast<int>(row);
            return true;
          }
        }
        return false;
      };
      if (!augment(augment, i)) return false;
    }
    return true;
  };

  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect(levels[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return levels[lo];
}

inline double normality_defect(const Matrix& x) {
  return (x * x.adjoint() - x.adjoint() * x).norm();
}

struct AluthgeSequence {
  std::vector<Matrix> sequence;           // sequence[0] = T
  std::vector<double> normality_defects;  // ||[X, X*]||_F per element
  std::vector<double> spectrum_drifts;    // match_spectra(eig(X_j), eig(T))
  std::optional<std::size_t> truncated_at;  // index of the first singular iterate
};

/// Delta_lambda applied k times. Stops early (recording the index) if an
/// iterate becomes singular; a singular T itself is an error.
inline AluthgeSequence iterate_aluthge(const Matrix& t, double lambda, std::size_t k) {
  require_operator(t, "T");
  if (!is_invertible(t)) throw Error(Errc::Singular, "T is not invertible (truncation index 0)");
  AluthgeSequence out;
  const std::vector<Complex> base = eig_general(t);
  out.sequence.push_back(t);
  out.normality_defects.push_back(normality_defect(t));
  out.spectrum_drifts.push_back(0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const Matrix& cur = out.sequence.back();
    if (!is_invertible(cur)) {
      out.truncated_at = j;
      break;
    }
    Matrix next = aluthge(cur, lambda).transformed;
    out.normality_defects.push_back(normality_defect(next));
    out.spectrum_drifts.push_back(match_spectra(eig_general(next), base));
    out.sequence.push_back(std::move(next));
  }
  return out;
}

}  // namespace orbitrad

#endif  // ORBITRAD_ALUTHGE_HPP
