#include <gtest/gtest.h>

#include "qmi/operator_core.hpp"
#include "qmi/random.hpp"

using namespace qmi;

TEST(Hermitian, RejectsNonHermitianNamingEntry) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    HermitianOperator h(m);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "entries");
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
  }
}

TEST(Hermitian, RejectsNonSquare) { EXPECT_THROW(HermitianOperator(Matrix::Zero(2, 3)), DimensionError); }

TEST(Positive, RejectsNegativeSpectrum) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1e-6;
  EXPECT_THROW(PositiveOperator{m}, ValidationError);
}

TEST(Positive, ClampsTinyNegativeEigenvalues) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1e-12;
  const PositiveOperator p(m);
  EXPECT_GE(p.min_eigenvalue(), 0.0);
  EXPECT_EQ(p.rank(), 1);
}

TEST(Density, RejectsWrongTrace) {
  EXPECT_THROW(DensityOperator(Matrix(Matrix::Identity(2, 2))), ValidationError);
  EXPECT_NO_THROW(DensityOperator(Matrix(Matrix::Identity(2, 2) * 0.5)));
}

TEST(Density, PureStateHasRankOne) {
  Vector v(3);
  v << cplx(1, 0), cplx(0, 1), cplx(1, 1);
  v.normalize();
  const DensityOperator p = pure_state(v);
  EXPECT_EQ(p.rank(), 1);
  EXPECT_NEAR(p.max_eigenvalue(), 1.0, 1e-12);
  EXPECT_LT(max_abs(p.matrix() - v * v.adjoint()), 1e-12);
}

TEST(Tensor, PartialTraceRecoversFactors) {
  Rng rng(7);
  const DensityOperator a = random_density(2, rng);
  const DensityOperator b = random_density(3, rng);
  const Matrix ab = kron(a.matrix(), b.matrix());
  EXPECT_LT(max_abs(partial_trace(ab, {2, 3}, 1) - a.matrix()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(ab, {2, 3}, 0) - b.matrix()), 1e-12);
}

TEST(Tensor, ReduceToThreeFactors) {
  Rng rng(8);
  const DensityOperator a = random_density(2, rng), b = random_density(3, rng), c = random_density(2, rng);
  const Matrix abc = kron(kron(a.matrix(), b.matrix()), c.matrix());
  EXPECT_LT(max_abs(reduce_to(abc, {2, 3, 2}, 1) - b.matrix()), 1e-12);
  EXPECT_LT(max_abs(reduce_to(abc, {2, 3, 2}, 2) - c.matrix()), 1e-12);
}

TEST(Tensor, PositiveTensorSpectrumIsProduct) {
  const PositiveOperator a(Matrix(RealVector::Constant(2, 0.5).cast<cplx>().asDiagonal()));
  const PositiveOperator t = tensor(a, a);
  EXPECT_NEAR(t.trace(), 1.0, 1e-14);
  EXPECT_NEAR(t.max_eigenvalue(), 0.25, 1e-14);
}

TEST(Bipartite, RejectsBadDims) {
  EXPECT_THROW(BipartiteState(maximally_mixed(6), {2, 2}), DimensionError);
  EXPECT_NO_THROW(BipartiteState(maximally_mixed(6), {2, 3}));
}

TEST(Purification, ReducesToRho) {
  Rng rng(11);
  for (Index d : {2, 3, 5}) {
    const DensityOperator rho = random_density(d, rng, 2);
    const Vector full = purify(rho);
    EXPECT_LT(max_abs(partial_trace(Matrix(full * full.adjoint()), {d, d}, 1) - rho.matrix()), 1e-12);
    const CompactPurification p = purify_compact(rho);
    EXPECT_EQ(p.reference_dim, 2);
    const Matrix joint = p.vector * p.vector.adjoint();
    EXPECT_LT(max_abs(partial_trace(joint, {d, 2}, 1) - rho.matrix()), 1e-12);
    const Matrix ref = partial_trace(joint, {d, 2}, 0);
    EXPECT_LT(max_abs(ref - Matrix(p.reference_spectrum.cast<cplx>().asDiagonal())), 1e-12);
  }
}

TEST(Spectral, SqrtSquaresBack) {
  Rng rng(3);
  const DensityOperator rho = random_density(4, rng);
  const Matrix s = sqrt_op(rho).matrix();
  EXPECT_LT(max_abs(s * s - rho.matrix()), 1e-12);
}

TEST(Spectral, LogOnSupportVanishesOnKernel) {
  const DensityOperator rho = diagonal_state({0.5, 0.5, 0.0});
  const Matrix l = log_on_support(rho).matrix();
  EXPECT_NEAR(l(0, 0).real(), std::log(0.5), 1e-14);
  EXPECT_EQ(l(2, 2).real(), 0.0);
}

TEST(Distances, TraceDistanceOfOrthogonalPureStates) {
  EXPECT_NEAR(trace_distance(diagonal_state({1, 0}).matrix(), diagonal_state({0, 1}).matrix()), 2.0, 1e-14);
}

TEST(Distances, BuresSquaredBoundedByTraceNorm) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const DensityOperator a = random_density(3, rng), b = random_density(3, rng);
    const double beta = bures_distance(a, b);
    EXPECT_LE(beta * beta, trace_distance(a.matrix(), b.matrix()) + 1e-12);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-10);
  }
}

TEST(Random, HaarIsometryIsIsometric) {
  Rng rng(5);
  const Matrix v = haar_isometry(7, 3, rng);
  EXPECT_LT(max_abs(v.adjoint() * v - identity(3)), 1e-12);
}

TEST(Random, SeedsAreReproducible) {
  Rng r1(42), r2(42);
  EXPECT_EQ(max_abs(random_density(3, r1).matrix() - random_density(3, r2).matrix()), 0.0);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}
