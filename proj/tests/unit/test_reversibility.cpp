#include <gtest/gtest.h>

#include "qmi/reversibility.hpp"

using namespace qmi;

namespace {
constexpr double kDephasingGap = 0.5623351446130962;  // tests/oracles/run_oracles.py
}

TEST(Gap, UnitaryIsZero) {
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const KrausChannel u = channels::unitary(haar_unitary(3, rng));
    EXPECT_LE(reversibility_gap(u, random_density(3, rng)), 1e-10);
  }
}

TEST(Gap, DephasingOracle) {
  EXPECT_NEAR(reversibility_gap(channels::dephasing(0.25), maximally_mixed(2)), kDephasingGap, 1e-9);
}

TEST(Gap, ConstantChannelIsTwiceEntropy) {
  const KrausChannel c = channels::constant(diagonal_state({0.3, 0.7}), 2);
  EXPECT_NEAR(reversibility_gap(c, maximally_mixed(2)), 2 * std::log(2.0), 1e-9);
}

TEST(Gap, EqualsEntropyMinusCoherent) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(s);
    const KrausChannel ch = random_channel(3, 3, 2 + static_cast<Index>(s % 3), s);
    const DensityOperator rho = random_density(3, rng, 1 + static_cast<Index>(s % 3));
    EXPECT_NEAR(reversibility_gap(ch, rho), von_neumann_entropy(rho) - coherent_information(ch, rho), 1e-8);
  }
}

TEST(Product, Detection) {
  Rng rng(3);
  const DensityOperator a = random_density(2, rng), b = random_density(3, rng);
  const ProductTest p = is_product(BipartiteState(DensityOperator(kron(a.matrix(), b.matrix())), {2, 3}));
  EXPECT_TRUE(p.product);
  EXPECT_LE(p.defect, 1e-12);

  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ProductTest e = is_product(BipartiteState(pure_state(bell), {2, 2}));
  EXPECT_FALSE(e.product);
  EXPECT_NEAR(e.defect, 1.5, 1e-12);

  const ProductTest c = is_product(BipartiteState(diagonal_state({0.5, 0, 0, 0.5}), {2, 2}));
  EXPECT_FALSE(c.product);
  EXPECT_NEAR(c.defect, 1.0, 1e-12);  // trace norm; the trace distance is 1/2

  EXPECT_THROW(is_product(BipartiteState(maximally_mixed(8), {2, 2, 2})), DimensionError);
}

TEST(Decoder, UnitaryInverse) {
  Rng rng(8);
  const Matrix u = haar_unitary(3, rng);
  const DensityOperator rho = random_density(3, rng);
  const KrausChannel d = build_decoder(channels::unitary(u), rho);
  const RecoveryResiduals r = verify_reversibility_conditions(channels::unitary(u), d, rho);
  EXPECT_LE(r.eobr, 1e-7);
  EXPECT_LE(r.a1, 1e-7);
  EXPECT_LE(r.a3, 1e-7);
  EXPECT_LT(max_abs(d.act(rho.matrix()) - channels::unitary(u.adjoint()).act(rho.matrix())), 1e-10);
}

TEST(Decoder, IsometricEmbeddingRecoversAllStates) {
  Rng rng(10);
  const KrausChannel emb = channels::isometric_embedding(2, 5);
  const KrausChannel d = build_decoder(emb, maximally_mixed(2));
  for (int k = 0; k < 10; ++k) {
    const DensityOperator rho = random_density(2, rng);
    EXPECT_LT(max_abs(compose(d, emb).act(rho.matrix()) - rho.matrix()), 1e-10);
  }
}

TEST(Decoder, ReversibleOnSubspace) {
  // Dephasing is reversible on the rank-1 state |0><0| (gap 0), not on I/2.
  const DensityOperator zero = diagonal_state({1.0, 0.0});
  EXPECT_LE(reversibility_gap(channels::dephasing(0.25), zero), 1e-10);
  const KrausChannel d = build_decoder(channels::dephasing(0.25), zero);
  const RecoveryResiduals r = verify_reversibility_conditions(channels::dephasing(0.25), d, zero);
  EXPECT_LE(r.eobr, 1e-7);
  EXPECT_TRUE(r.consistent());
}

TEST(Decoder, ErrorCarriesGap) {
  try {
    build_decoder(channels::dephasing(0.25), maximally_mixed(2));
    FAIL() << "expected NotReversibleError";
  } catch (const NotReversibleError& e) {
    EXPECT_NEAR(e.gap(), kDephasingGap, 1e-9);
  }
}

TEST(Decoder, OrthogonalBlocksOfUnitaries) {
  // {sqrt(1-p) U1, sqrt(p) U2} with orthogonal ranges: the block index tells which U to undo.
  Rng rng(4);
  const KrausChannel mix = mix_channels(0.3, channels::unitary(haar_unitary(2, rng)),
                                        channels::unitary(haar_unitary(2, rng)));
  const KrausChannel lifted = block_embedding_lift(mix);
  const DensityOperator rho = random_density(2, rng);
  const ReversibilityVerdict v = assess_reversibility(lifted, rho);
  EXPECT_TRUE(v.reversible);
  ASSERT_TRUE(v.witness.has_value());
  const DensityOperator other = random_density(2, rng);
  EXPECT_LT(max_abs(compose(*v.witness, lifted).act(other.matrix()) - other.matrix()), 1e-7);
  EXPECT_FALSE(assess_reversibility(mix, rho).reversible);
}

TEST(Conditions, DephasingWithIdentityDecoder) {
  const double p = 0.25;
  const RecoveryResiduals r =
      verify_reversibility_conditions(channels::dephasing(p), channels::identity_channel(2), maximally_mixed(2));
  EXPECT_NEAR(r.a3, 2 * p, 1e-12);
  EXPECT_GT(r.a1, 1e-3);
  EXPECT_GT(r.eobr, 1e-3);
  EXPECT_TRUE(r.consistent());
}

TEST(Conditions, VerdictsAgreeAcrossCorpus) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(s);
    const bool reversible_case = s % 2 == 0;
    const KrausChannel ch = reversible_case ? channels::unitary(haar_unitary(3, rng)) : random_channel(3, 3, 2, s);
    const DensityOperator rho = random_density(3, rng);
    const KrausChannel d = decoder_from_alignment(ch, rho);
    const RecoveryResiduals r = verify_reversibility_conditions(ch, d, rho, s);
    EXPECT_TRUE(r.consistent()) << "seed " << s << " a1 " << r.a1 << " a3 " << r.a3 << " eobr " << r.eobr;
    EXPECT_EQ(r.eobr_pass(), reversible_case);
  }
}

TEST(Conditions, NecessityProbe) {
  // gap >= 1e-3 => no decoder in a random probe set recovers.
  const KrausChannel ch = channels::dephasing(0.25);
  const DensityOperator rho = maximally_mixed(2);
  ASSERT_GE(reversibility_gap(ch, rho), 1e-3);
  std::vector<KrausChannel> probes{decoder_from_alignment(ch, rho), channels::identity_channel(2)};
  for (std::uint64_t s = 0; s < 40; ++s) probes.push_back(random_channel(2, 2, 1 + static_cast<Index>(s % 4), s));
  for (const auto& d : probes) EXPECT_GE(verify_reversibility_conditions(ch, d, rho).eobr, 1e-4);
}
