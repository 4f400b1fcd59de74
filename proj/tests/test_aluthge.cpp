#include "oracles.hpp"
#include "orbitrad/aluthge.hpp"

#include <gtest/gtest.h>

using namespace orbitrad;
using oracle::diag;
using oracle::mat2;

namespace {

const Matrix kT = mat2(0.0, 2.0, 1.0, 0.0);

Matrix random_invertible(Eigen::Index n, Rng& rng) {
  Matrix t = ginibre(n, rng);
  while (relative_smallest_singular_value(t) < 0.05) t = ginibre(n, rng);
  return t;
}

}  // namespace

TEST(Aluthge, Examples) {
  Rng rng(1);
  const Matrix t = random_invertible(3, rng);
  EXPECT_LE((aluthge(t, 0.0).transformed - t).norm(), 1e-12 * (1.0 + t.norm()));

  const double r2 = std::sqrt(2.0);
  EXPECT_LE((aluthge(kT, 0.5).transformed - mat2(0.0, r2, r2, 0.0)).norm(), 1e-12);

  const Matrix g = ginibre(3, rng);
  const Matrix p = g.adjoint() * g + identity(3);
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_LE((aluthge(p, lambda).transformed - p).norm(), 1e-10);
}

TEST(Aluthge, EndpointIdentities) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix t = random_invertible(2 + trial % 4, rng);
    const AluthgeDecomposition d0 = aluthge(t, 0.0);
    EXPECT_LE((d0.transformed - d0.unitary.matrix() * d0.abs_t.matrix()).norm(), 1e-12 * (1.0 + t.norm()));
    EXPECT_LE((d0.transformed - t).norm(), 1e-12 * (1.0 + t.norm()));
    const AluthgeDecomposition d1 = aluthge(t, 1.0);
    EXPECT_LE((d1.transformed - d1.abs_t.matrix() * d1.unitary.matrix()).norm(), 1e-12 * (1.0 + t.norm()));
  }
}

TEST(Aluthge, SimilarityAndSpectrum) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const Matrix t = random_invertible(n, rng);
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const AluthgeDecomposition d = aluthge(t, lambda);
      EXPECT_LE(d.similarity_defect, 1e-8 * (1.0 + t.norm()));
      EXPECT_LE(match_spectra(eig_general(d.transformed), eig_general(t)), 1e-7);
      // Reconstruction from the returned factors with independent powers.
      const Matrix left = fractional_power(d.abs_t, lambda).matrix();
      const Matrix right = fractional_power(d.abs_t, 1.0 - lambda).matrix();
      EXPECT_LE((left * d.unitary.matrix() * right - d.transformed).norm(), 1e-10 * (1.0 + t.norm()));
    }
  }
}

TEST(Aluthge, Errors) {
  EXPECT_THROW(aluthge(diag({1.0, 0.0}), 0.5), Error);
  try {
    aluthge(diag({1.0, 0.0}), 0.5);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Singular);
  }
  EXPECT_THROW(aluthge(identity(2), -0.1), Error);
  EXPECT_THROW(aluthge(identity(2), 1.5), Error);
}

TEST(IterateAluthge, NormalIsFixed) {
  Rng rng(4);
  const UnitaryMatrix v = haar_unitary(3, rng);
  const Matrix normal = v.conjugate(diag({Complex(1.0, 1.0), Complex(-2.0, 0.5), Complex(0.3, -1.0)}));
  const AluthgeSequence s = iterate_aluthge(normal, 0.5, 5);
  ASSERT_EQ(s.sequence.size(), 6u);
  for (const auto& m : s.sequence) EXPECT_LE((m - normal).norm(), 1e-9);
  for (double d : s.normality_defects) EXPECT_LE(d, 1e-9);
}

TEST(IterateAluthge, ZeroIterations) {
  const AluthgeSequence s = iterate_aluthge(kT, 0.5, 0);
  ASSERT_EQ(s.sequence.size(), 1u);
  EXPECT_EQ(s.sequence[0], kT);
  EXPECT_EQ(s.spectrum_drifts.size(), 1u);
  EXPECT_FALSE(s.truncated_at.has_value());
}

TEST(IterateAluthge, JordanBlockKeepsSpectrum) {
  const AluthgeSequence s = iterate_aluthge(mat2(1.0, 1.0, 0.0, 1.0), 0.5, 20);
  ASSERT_EQ(s.sequence.size(), 21u);
  for (double d : s.spectrum_drifts) EXPECT_LE(d, 1e-6);
  EXPECT_EQ(s.normality_defects.size(), 21u);
}

TEST(IterateAluthge, SequenceMatchesRepeatedTransform) {
  Rng rng(5);
  const Matrix t = random_invertible(3, rng);
  const AluthgeSequence s = iterate_aluthge(t, 0.25, 4);
  Matrix x = t;
  for (std::size_t j = 1; j <= 4; ++j) {
    x = aluthge(x, 0.25).transformed;
    EXPECT_LE((s.sequence[j] - x).norm(), 1e-12 * (1.0 + x.norm()));
  }
}

TEST(IterateAluthge, SingularInputIsAnError) {
  try {
    iterate_aluthge(diag({1.0, 0.0}), 0.5, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Singular);
  }
}

TEST(MatchSpectra, Examples) {
  const std::vector<Complex> s{Complex(1.0, 2.0), Complex(-0.5, 0.0), Complex(3.0, -1.0)};
  EXPECT_EQ(match_spectra(s, s), 0.0);
  EXPECT_LE(match_spectra({std::sqrt(2.0), -std::sqrt(2.0)}, eig_general(aluthge(kT, 0.5).transformed)), 1e-8);
  EXPECT_EQ(match_spectra({1.0, 2.0}, {2.0, 1.0}), 0.0);
  EXPECT_EQ(match_spectra({}, {}), 0.0);
  try {
    match_spectra({1.0}, {1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SizeMismatch);
  }
}

TEST(MatchSpectra, AgreesWithExhaustiveSearch) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<Complex> a(n), b(n);
    for (auto& z : a) z = unit_disc_sample(rng);
    for (auto& z : b) z = unit_disc_sample(rng);
    EXPECT_DOUBLE_EQ(match_spectra(a, b), oracle::exhaustive_matching(a, b));
  }
}

TEST(NormalityDefect, Examples) {
  EXPECT_EQ(normality_defect(diag({1.0, Complex(0.0, 2.0)})), 0.0);
  EXPECT_NEAR(normality_defect(mat2(0.0, 1.0, 0.0, 0.0)), std::sqrt(2.0), 1e-15);
}
