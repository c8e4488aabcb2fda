#include <gtest/gtest.h>

#include "qmi/channels.hpp"
#include "qmi/entropy.hpp"

using namespace qmi;

TEST(KrausChannel, RejectsIncompleteSetWithResidual) {
  try {
    KrausChannel::validate({Matrix(identity(2) * 0.9)});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "kraus");
    EXPECT_NEAR(e.residual(), 0.19, 1e-12);
  }
}

TEST(KrausChannel, RejectsInconsistentShapes) {
  EXPECT_THROW(KrausChannel::validate({Matrix(identity(2)), Matrix(identity(3))}), ValidationError);
  EXPECT_THROW(KrausChannel::validate({}), ValidationError);
}

TEST(QuantumOperation, AcceptsTraceNonIncreasing) {
  EXPECT_NO_THROW(QuantumOperation::validate({Matrix(identity(2) * 0.5)}));
  EXPECT_THROW(QuantumOperation::validate({Matrix(identity(2) * 1.5)}), ValidationError);
}

TEST(Channels, StandardFamiliesAreComplete) {
  const std::vector<KrausChannel> family{channels::identity_channel(3), channels::dephasing(0.3),
                                         channels::depolarizing(3, 0.4), channels::erasure(0.2),
                                         channels::amplitude_damping(0.7), channels::isometric_embedding(2, 4),
                                         channels::constant(maximally_mixed(3), 2), random_channel(3, 2, 4, 9)};
  for (const auto& ch : family) EXPECT_LE(ch.completeness_residual(), 1e-12);
}

TEST(Channels, DepolarizingAction) {
  const double p = 0.4;
  const DensityOperator rho = diagonal_state({1.0, 0.0, 0.0});
  const Matrix out = channels::depolarizing(3, p).act(rho.matrix());
  const Matrix expect = (1 - p) * rho.matrix() + p * identity(3) / 3.0;
  EXPECT_LT(max_abs(out - expect), 1e-12);
}

TEST(Channels, ErasureAction) {
  const Matrix out = channels::erasure(0.25).act(maximally_mixed(2).matrix());
  EXPECT_NEAR(out(2, 2).real(), 0.25, 1e-14);
  EXPECT_NEAR(out(0, 0).real(), 0.375, 1e-14);
}

TEST(Dilation, IsometryAndMarginals) {
  const KrausChannel ch = random_channel(3, 4, 5, 17);
  const StinespringDilation v = dilate(ch);
  EXPECT_LT(v.isometry_residual(), 1e-12);
  Rng rng(2);
  const DensityOperator rho = random_density(3, rng);
  EXPECT_LT(max_abs(v.output(rho.matrix()) - ch.act(rho.matrix())), 1e-12);
  EXPECT_LT(max_abs(v.environment(rho.matrix()) - complement_output(ch, rho.matrix())), 1e-12);
  EXPECT_LT(max_abs(complement(ch).act(rho.matrix()) - complement_output(ch, rho.matrix())), 1e-12);
}

TEST(Complement, DephasingGramMatrix) {
  const double p = 0.25;
  const Matrix g = complement_output(channels::dephasing(p), maximally_mixed(2).matrix());
  EXPECT_NEAR(g(0, 0).real(), 1 - p, 1e-14);
  EXPECT_NEAR(g(1, 1).real(), p, 1e-14);
  EXPECT_NEAR(std::abs(g(0, 1)), 0.0, 1e-14);
}

TEST(Complement, PureInputSpectraCoincide) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const KrausChannel ch = random_channel(3, 3, 4, s);
    Rng rng(s + 77);
    const DensityOperator psi = pure_state(random_unit_vector(3, rng));
    const PositiveOperator b(ch.act(psi.matrix())), e(complement_output(ch, psi.matrix()));
    const Index n = std::min(b.dim(), e.dim());
    EXPECT_LT((b.eigenvalues().head(n) - e.eigenvalues().head(n)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Complement, DoubleComplementMatchesOutputSpectrum) {
  const KrausChannel ch = random_channel(2, 3, 2, 4);
  const KrausChannel cc = complement(complement(ch));
  Rng rng(4);
  const DensityOperator rho = random_density(2, rng);
  EXPECT_NEAR(entropy_S(PositiveOperator(cc.act(rho.matrix()))).nats,
              entropy_S(PositiveOperator(ch.act(rho.matrix()))).nats, 1e-10);
}

TEST(Construct, ComposeAndTensor) {
  const KrausChannel a = random_channel(2, 3, 2, 1), b = random_channel(3, 2, 3, 2);
  Rng rng(9);
  const DensityOperator rho = random_density(2, rng);
  EXPECT_LT(max_abs(compose(b, a).act(rho.matrix()) - b.act(a.act(rho.matrix()))), 1e-12);
  EXPECT_THROW(compose(a, a), DimensionError);
  const KrausChannel t = tensor_channel(a, b);
  EXPECT_EQ(t.dim_in(), 6);
  EXPECT_EQ(t.dim_out(), 6);
  EXPECT_LE(t.completeness_residual(), 1e-12);
}

TEST(Construct, MixtureActsAsConvexCombination) {
  const KrausChannel a = random_channel(2, 2, 2, 5), b = random_channel(2, 2, 3, 6);
  Rng rng(1);
  const DensityOperator rho = random_density(2, rng);
  const Matrix m = mix_channels(0.3, a, b).act(rho.matrix());
  EXPECT_LT(max_abs(m - 0.3 * a.act(rho.matrix()) - 0.7 * b.act(rho.matrix())), 1e-12);
}

TEST(Truncation, ProjectorChannel) {
  const HermitianOperator p = coordinate_projector(4, 2);
  const KrausChannel pi = truncation_channel(p, basis_vector(4, 0));
  EXPECT_LE(pi.completeness_residual(), 1e-12);
  const Matrix out = pi.act(maximally_mixed(4).matrix());
  EXPECT_NEAR(out(0, 0).real(), 0.75, 1e-14);
  EXPECT_THROW(truncation_channel(HermitianOperator(Matrix(identity(2) * 0.5)), basis_vector(2, 0)),
               ValidationError);
}

TEST(Truncation, KrausTruncateCompletion) {
  const KrausChannel ch = random_channel(3, 3, 5, 12);
  for (std::size_t n = 1; n <= ch.size(); ++n) {
    const KrausTruncation t = kraus_truncate(ch, n);
    EXPECT_EQ(t.operation.size(), n);
    EXPECT_LE(t.completion.completeness_residual(), 1e-9);
  }
  EXPECT_LT(max_abs(kraus_truncate(ch, ch.size()).remainder_root), 1e-6);
  EXPECT_THROW(kraus_truncate(ch, 0), DimensionError);
}

TEST(Truncation, KrausTruncateSmallOutput) {
  const KrausChannel ch = random_channel(4, 2, 6, 3);
  const KrausTruncation t = kraus_truncate(ch, 2);
  EXPECT_LE(t.completion.completeness_residual(), 1e-9);
}

TEST(Choi, MinimalKrausReproducesChannel) {
  const KrausChannel ch = random_channel(2, 3, 5, 8);
  const KrausChannel m = minimal_kraus(ch);
  EXPECT_LE(m.size(), 6u);
  Rng rng(3);
  const DensityOperator rho = random_density(2, rng);
  EXPECT_LT(max_abs(m.act(rho.matrix()) - ch.act(rho.matrix())), 1e-10);
}

TEST(Random, ChannelIsDeterministicPerSeed) {
  const KrausChannel a = random_channel(3, 3, 2, 5), b = random_channel(3, 3, 2, 5);
  EXPECT_EQ(max_abs(a[0] - b[0]), 0.0);
  EXPECT_THROW(random_channel(4, 1, 2, 0), DimensionError);
}
