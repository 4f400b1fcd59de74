#include "oracles.hpp"
#include "orbitrad/cnum.hpp"

#include <gtest/gtest.h>

using namespace orbitrad;
using oracle::diag;
using oracle::mat2;

TEST(CNumericalRadius, Examples) {
  Rng rng(1);
  const Matrix a = ginibre(3, rng);
  const Complex lambda(1.5, -2.0);
  EXPECT_NEAR(c_numerical_radius(lambda * identity(3), a).value, std::abs(lambda) * std::abs(oracle::trace_over_n(a)),
              1e-12);
  const Matrix c = ginibre(3, rng);
  EXPECT_NEAR(c_numerical_radius(c, identity(3)).value, std::abs(oracle::trace_over_n(c)), 1e-12);
  EXPECT_NEAR(c_numerical_radius(diag({1.0, 0.0}), mat2(0.0, 1.0, 0.0, 0.0)).value, 0.25, 1e-9);
}

TEST(CNumericalRadius, UnitaryInvarianceInBothArguments) {
  Rng rng(2);
  const Matrix c = ginibre(2, rng), a = ginibre(2, rng);
  const UnitaryMatrix v = haar_unitary(2, rng);
  const double base = c_numerical_radius(c, a).value;
  EXPECT_NEAR(c_numerical_radius(c, v.conjugate(a)).value, base, 1e-8);
  EXPECT_NEAR(c_numerical_radius(v.conjugate(c), a).value, base, 1e-8);
}

TEST(NormAdmissible, Examples) {
  const AdmissibilityVerdict s = norm_admissible(3.0 * identity(2));
  EXPECT_EQ(s.reason, Admissibility::ScalarC);
  EXPECT_FALSE(s.is_norm);
  const AdmissibilityVerdict t = norm_admissible(diag({1.0, -1.0}));
  EXPECT_EQ(t.reason, Admissibility::TracelessC);
  EXPECT_FALSE(t.is_norm);
  const AdmissibilityVerdict a = norm_admissible(diag({1.0, 0.0}));
  EXPECT_EQ(a.reason, Admissibility::Admissible);
  EXPECT_TRUE(a.is_norm);
  EXPECT_NEAR(a.trace_magnitude, 0.5, 1e-15);
  EXPECT_NEAR(a.scalar_distance, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(norm_admissible(Matrix::Zero(3, 3)).reason, Admissibility::Both);
  EXPECT_THROW(norm_admissible(identity(2), 0.0), Error);
}

TEST(NormAdmissible, DegenerateDirectionsVanish) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    Matrix a = ginibre(n, rng);
    a -= oracle::trace_over_n(a) * identity(n);
    const Matrix c_scalar = unit_disc_sample(rng) * identity(n);
    EXPECT_LE(c_numerical_radius(c_scalar, a).value, 1e-10);
    Matrix c = ginibre(n, rng);
    c -= oracle::trace_over_n(c) * identity(n);
    EXPECT_EQ(norm_admissible(c).reason, Admissibility::TracelessC);
    EXPECT_LE(c_numerical_radius(c, identity(n)).value, 1e-10);
  }
}

TEST(NormAdmissible, AdmissiblePositivity) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 2;
    Matrix c = ginibre(n, rng);
    if (std::abs(normalized_trace(c)) < 1e-3) c += identity(n) / static_cast<double>(n);
    ASSERT_TRUE(norm_admissible(c).is_norm);
    const Matrix a = ginibre(n, rng);
    const double r = c_numerical_radius(c, a).value;
    EXPECT_GE(r, std::abs(oracle::trace_over_n(c * a)) - 1e-12);
    EXPECT_GT(r, 1e-8);
  }
}

TEST(NormEvaluator, RegistrationChecks) {
  EXPECT_THROW(NormEvaluator::registered("shifted", [](const Matrix& m) { return m.norm() + 1.0; }, true), Error);
  EXPECT_THROW(NormEvaluator::registered("squared", [](const Matrix& m) { return m.squaredNorm(); }, true), Error);
  const NormEvaluator op = operator_norm_evaluator();
  EXPECT_EQ(op.name(), "operator");
  EXPECT_TRUE(op.weakly_unitarily_invariant());
  EXPECT_NEAR(op(diag({1.0, -3.0})), 3.0, 1e-14);
  EXPECT_NEAR(frobenius_norm_evaluator()(diag({3.0, 4.0})), 5.0, 1e-14);
  EXPECT_NEAR(scaled_trace_norm_evaluator()(diag({1.0, -3.0})), 2.0, 1e-14);
}

TEST(NormEvaluator, CRadiusNorm) {
  EXPECT_THROW(c_radius_norm_evaluator(identity(2)), Error);
  EXPECT_THROW(c_radius_norm_evaluator(diag({1.0, -1.0})), Error);
  const NormEvaluator w = c_radius_norm_evaluator(diag({1.0, 0.0}));
  EXPECT_NEAR(w(mat2(0.0, 1.0, 0.0, 0.0)), 0.25, 1e-9);
  EXPECT_EQ(w(Matrix::Zero(2, 2)), 0.0);
  EXPECT_THROW(w(identity(3)), Error);
  // Weak unitary invariance.
  Rng rng(5);
  const Matrix a = ginibre(2, rng);
  EXPECT_NEAR(w(haar_unitary(2, rng).conjugate(a)), w(a), 1e-8);
}

TEST(DualNorm, Examples) {
  const NormEvaluator op = operator_norm_evaluator();
  EXPECT_NEAR(dual_norm_estimate(op, identity(2)), 1.0, 1e-9);
  EXPECT_NEAR(dual_norm_estimate(op, diag({1.0, 0.0})), 0.5, 1e-9);
  EXPECT_EQ(dual_norm_estimate(op, Matrix::Zero(2, 2)), 0.0);
}

TEST(DualNorm, OperatorAndTraceNormsAreMutuallyDual) {
  // Closed forms under the normalized trace pairing: op# = (1/n)||.||_1, ((1/n)||.||_1)# = op,
  // and the Frobenius norm has dual (1/n)||.||_F.
  Rng rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Matrix t = ginibre(n, rng);
    const double nn = static_cast<double>(n);
    const double scaled_trace = oracle::von_neumann(t, identity(n));
    EXPECT_NEAR(dual_norm_estimate(operator_norm_evaluator(), t), scaled_trace, 1e-9 * (1.0 + scaled_trace));
    EXPECT_NEAR(dual_norm_estimate(scaled_trace_norm_evaluator(), t), operator_norm(t), 1e-9 * (1.0 + t.norm()));
    EXPECT_NEAR(dual_norm_estimate(frobenius_norm_evaluator(), t), t.norm() / nn, 1e-9 * (1.0 + t.norm()));
  }
}

TEST(DualNorm, DualityUpperBound) {
  Rng rng(7);
  const NormEvaluator op = operator_norm_evaluator();
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix t = ginibre(3, rng), x = ginibre(3, rng);
    const double dual = oracle::von_neumann(t, identity(3));  // closed form of the dual of the operator norm
    EXPECT_LE(std::abs(oracle::trace_over_n(t * x)), dual * op(x) * (1.0 + 1e-6));
    EXPECT_LE(dual_norm_estimate(op, t, {8, 50, 1}), dual * (1.0 + 1e-9));
  }
}

TEST(DualNorm, DegenerateNormIsReported) {
  // A seminorm that passes the registration probes but vanishes on off-diagonal matrices.
  const NormEvaluator diag_only = NormEvaluator::registered(
      "diag", [](const Matrix& m) { return m.diagonal().cwiseAbs().maxCoeff(); }, true, 2);
  try {
    dual_norm_estimate(diag_only, mat2(0.0, 1.0, 1.0, 0.0));
    FAIL() << "expected DegenerateNorm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateNorm);
  }
}

TEST(Reconstruction, Examples) {
  const NormEvaluator op = operator_norm_evaluator();
  const double at_identity = reconstruct_wui_norm(op, identity(2));
  EXPECT_LE(at_identity, 1.0 + 1e-9);
  EXPECT_GE(at_identity, 1.0 - 1e-9);
  // X = diag(1,-1) has dual norm 1 and gives omega_X(diag(1,-1)) = 1.
  const Matrix t = diag({1.0, -1.0});
  EXPECT_NEAR(c_numerical_radius(t / dual_norm_estimate(op, t), t).value, 1.0, 1e-9);
  const double r = reconstruct_wui_norm(op, t);
  EXPECT_GE(r, 0.9);
  EXPECT_LE(r, 1.0 + 1e-9);
  EXPECT_EQ(reconstruct_wui_norm(op, Matrix::Zero(2, 2)), 0.0);
}

TEST(Reconstruction, RequiresWeakUnitaryInvariance) {
  const NormEvaluator entry = NormEvaluator::registered(
      "max-entry", [](const Matrix& m) { return m.cwiseAbs().maxCoeff(); }, false);
  EXPECT_THROW(reconstruct_wui_norm(entry, identity(2)), Error);
}

TEST(Reconstruction, SandwichForFrobeniusNorm) {
  Rng rng(8);
  const NormEvaluator fro = frobenius_norm_evaluator();
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix t = ginibre(2, rng);
    const double r = reconstruct_wui_norm(fro, t);
    EXPECT_GE(r, 0.9 * t.norm());
    EXPECT_LE(r, t.norm() * (1.0 + 1e-6));
  }
}
