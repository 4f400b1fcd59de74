#ifndef ORBITRAD_CORE_HPP
#define ORBITRAD_CORE_HPP

// Dense model of the finite factor (M_n(C), tau): matrix arithmetic with the
// normalized trace, Hermitian/general eigensolvers, polar decomposition,
// fractional powers of positive matrices, Haar sampling and polynomials.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitrad {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Seed = std::uint64_t;
using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxDimension = 16;

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  NotUnitary,
  NotPositive,
  NotSkew,
  NoConvergence,
  Singular,
  ZeroPowerOfSingular,
  WrongDimension,
  SizeMismatch,
  DegenerateNorm,
  Parse,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::NotPositive: return "NotPositive";
    case Errc::NotSkew: return "NotSkew";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Singular: return "Singular";
    case Errc::ZeroPowerOfSingular: return "ZeroPowerOfSingular";
    case Errc::WrongDimension: return "WrongDimension";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::DegenerateNorm: return "DegenerateNorm";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// ---------------------------------------------------------------------------
// Validation helpers

inline void require_operator(const Matrix& m, const char* what = "matrix") {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw Error(Errc::InvalidArgument, std::string(what) + " must be square with n >= 1");
  if (!m.allFinite()) throw Error(Errc::InvalidArgument, std::string(what) + " has non-finite entries");
}

inline void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::DimensionMismatch, "dimensions " + std::to_string(a.rows()) + " and " +
                                             std::to_string(b.rows()) + " differ");
}

inline double hermitian_defect(const Matrix& m) { return (m - m.adjoint()).norm(); }
inline double skew_defect(const Matrix& m) { return (m + m.adjoint()).norm(); }

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

// ---------------------------------------------------------------------------
// Traces

/// tau(M) = (1/n) Tr(M); tau(I) = 1.
inline Complex normalized_trace(const Matrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

/// tau(X Y) without forming the product.
inline Complex normalized_trace_product(const Matrix& x, const Matrix& y) {
  return x.cwiseProduct(y.transpose()).sum() / static_cast<double>(x.rows());
}

// ---------------------------------------------------------------------------
// Strong types

class UnitaryMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  static UnitaryMatrix checked(Matrix u) {
    require_operator(u, "unitary");
    const double defect = (u * u.adjoint() - orbitrad::identity(u.rows())).norm();
    if (!(defect <= kTolerance))
      throw Error(Errc::NotUnitary, "||UU* - I||_F = " + std::to_string(defect));
    return UnitaryMatrix(std::move(u));
  }
  static UnitaryMatrix identity(Eigen::Index n) { return UnitaryMatrix(Matrix::Identity(n, n)); }

  const Matrix& matrix() const noexcept { return u_; }
  Eigen::Index dim() const noexcept { return u_.rows(); }
  Matrix adjoint() const { return u_.adjoint(); }
  /// U M U*
  Matrix conjugate(const Matrix& m) const { return u_ * m * u_.adjoint(); }

 private:
  explicit UnitaryMatrix(Matrix u) : u_(std::move(u)) {}
  Matrix u_;
};

class PositiveMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Symmetrizes after checking; the tolerance scales with max(1, ||P||_F).
  static PositiveMatrix checked(const Matrix& p) {
    require_operator(p, "positive matrix");
    const double scale = std::max(1.0, p.norm());
    if (!(hermitian_defect(p) <= kTolerance * scale))
      throw Error(Errc::NotPositive, "matrix is not Hermitian");
    Matrix h = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolerance * scale)
      throw Error(Errc::NotPositive, "smallest eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
    return PositiveMatrix(std::move(h));
  }

  const Matrix& matrix() const noexcept { return p_; }
  Eigen::Index dim() const noexcept { return p_.rows(); }

 private:
  explicit PositiveMatrix(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
};

// ---------------------------------------------------------------------------
// Eigensolvers

struct HermitianEigen {
  Eigen::VectorXd values;  // descending
  UnitaryMatrix vectors;
};

inline HermitianEigen eig_hermitian(const Matrix& h) {
  require_operator(h, "Hermitian input");
  if (!(hermitian_defect(h) <= 1e-8)) throw Error(Errc::NotHermitian, "||H - H*||_F > 1e-8");
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error(Errc::NoConvergence, "Hermitian eigensolver");
  Eigen::VectorXd values = es.eigenvalues().reverse();
  Matrix vectors = es.eigenvectors().rowwise().reverse();
  return {std::move(values), UnitaryMatrix::checked(std::move(vectors))};
}

/// Eigenvalue multiset of a general square matrix (n <= 16).
inline std::vector<Complex> eig_general(const Matrix& m) {
  require_operator(m);
  if (static_cast<std::size_t>(m.rows()) > kMaxDimension)
    throw Error(Errc::InvalidArgument, "eig_general supports n <= 16");
  Eigen::ComplexEigenSolver<Matrix> es;
  es.setMaxIterations(500 * m.rows());
  es.compute(m, false);
  if (es.info() != Eigen::Success) throw Error(Errc::NoConvergence, "QR iteration cap exceeded");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Singular values, descending.
inline Eigen::VectorXd singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

inline double operator_norm(const Matrix& m) { return singular_values(m)(0); }

/// Upper bound (1/n) sum_i s_i(X) s_i(Y) for sup_U |tau(X U Y U*)|.
inline double von_neumann_bound(const Matrix& x, const Matrix& y) {
  require_same_dim(x, y);
  return singular_values(x).dot(singular_values(y)) / static_cast<double>(x.rows());
}

// ---------------------------------------------------------------------------
// Polar decomposition and powers

struct Polar {
  UnitaryMatrix unitary;
  PositiveMatrix modulus;  // |T| = (T*T)^{1/2}
};

inline constexpr double kInvertibilityThreshold = 1e-10;

/// Smallest over largest singular value; 0 for the zero matrix.
inline double relative_smallest_singular_value(const Matrix& t) {
  const Eigen::VectorXd s = singular_values(t);
  return s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
}

inline bool is_invertible(const Matrix& t) {
  return relative_smallest_singular_value(t) >= kInvertibilityThreshold;
}

/// T = U |T| for invertible T.
inline Polar polar_decompose(const Matrix& t) {
  require_operator(t);
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(s.size() - 1) < kInvertibilityThreshold * s(0))
    throw Error(Errc::Singular, "smallest singular value below 1e-10 times the largest");
  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Matrix u = w * v.adjoint();
  Matrix p = v * s.cast<Complex>().asDiagonal() * v.adjoint();
  return {UnitaryMatrix::checked(std::move(u)), PositiveMatrix::checked(p)};
}

/// Unitary polar factor of an invertible matrix (the retraction used by the optimizers).
inline Matrix unitary_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// P^s for s in [0,1] computed in the eigenbasis of P.
inline PositiveMatrix fractional_power(const PositiveMatrix& p, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::InvalidArgument, "exponent must lie in [0,1]");
  if (s == 1.0) return p;
  const HermitianEigen e = eig_hermitian(p.matrix());
  if (s == 0.0) {
    if (e.values.minCoeff() < 1e-12)
      throw Error(Errc::ZeroPowerOfSingular, "P^0 requested for singular P");
    return PositiveMatrix::checked(orbitrad::identity(p.dim()));
  }
  Eigen::VectorXd powered = e.values.unaryExpr([s](double x) { return std::pow(std::max(x, 0.0), s); });
  const Matrix& v = e.vectors.matrix();
  return PositiveMatrix::checked(v * powered.cast<Complex>().asDiagonal() * v.adjoint());
}

// ---------------------------------------------------------------------------
// Randomness

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent child seed for stream `index` under `seed`.
inline Seed derive_seed(Seed seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Standard complex normal samples (E|z|^2 = 1).
inline Matrix ginibre(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  const Matrix g = ginibre(n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) moved into Q.
inline UnitaryMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const Matrix g = ginibre(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    const Complex phase = mod > 0.0 ? r(j, j) / mod : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return UnitaryMatrix::checked(std::move(q));
}

inline UnitaryMatrix haar_unitary(Eigen::Index n, Seed seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

// ---------------------------------------------------------------------------
// Polynomials

/// f(x) = sum_k coefficients[k] x^k; the constant term acts as c I.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty()) throw Error(Errc::InvalidArgument, "polynomial needs at least one coefficient");
    for (const Complex& z : c_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(Errc::InvalidArgument, "non-finite polynomial coefficient");
  }

  const std::vector<Complex>& coefficients() const noexcept { return c_; }

  /// Degree after dropping zero leading coefficients.
  std::size_t degree() const {
    std::size_t d = c_.size() - 1;
    while (d > 0 && c_[d] == Complex(0.0, 0.0)) --d;
    return d;
  }

  Complex operator()(Complex x) const {
    Complex acc = c_.back();
    for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

 private:
  std::vector<Complex> c_;
};

/// Horner evaluation of f(M).
inline Matrix poly_apply(const Polynomial& f, const Matrix& m) {
  require_operator(m);
  const auto& c = f.coefficients();
  const Matrix id = identity(m.rows());
  Matrix acc = c.back() * id;
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = (acc * m + c[k] * id).eval();
  return acc;
}

/// Uniform sample from the closed unit disc.
inline Complex unit_disc_sample(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, phi);
}

/// Random polynomial of exact degree `degree` with coefficients in the unit disc.
inline Polynomial random_polynomial(std::size_t degree, Rng& rng) {
  std::vector<Complex> c(degree + 1);
  for (auto& z : c) z = unit_disc_sample(rng);
  if (std::abs(c.back()) < 1e-3) c.back() = Complex(1.0, 0.0);
  return Polynomial(std::move(c));
}

}  // namespace orbitrad

#endif  // ORBITRAD_CORE_HPP
