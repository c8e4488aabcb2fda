#include <gtest/gtest.h>

#include "qmi/convergence.hpp"

using namespace qmi;

namespace {
PositiveOperator random_positive(Index d, Rng& rng, double scale = 1.0) {
  const Matrix g = complex_gaussian(d, d, rng);
  return PositiveOperator(Matrix(scale * g * g.adjoint() / static_cast<double>(d)));
}

const SweepRecord& last(const SweepReport& r, const std::string& q) {
  for (auto it = r.records.rbegin(); it != r.records.rend(); ++it)
    if (it->quantity == q) return *it;
  throw std::runtime_error("no record " + q);
}
} // namespace

TEST(Ladders, Validation) {
  EXPECT_NO_THROW(validate_ladder(coordinate_ladder(4), 4));
  ProjectorLadder bad = coordinate_ladder(3);
  std::swap(bad[0], bad[1]);
  EXPECT_THROW(validate_ladder(bad, 3), ValidationError);
  ProjectorLadder short_ladder(bad.begin(), bad.begin() + 1);
  EXPECT_THROW(validate_ladder(short_ladder, 3), ValidationError);
  EXPECT_THROW(validate_ladder({HermitianOperator(Matrix(0.5 * identity(2)))}, 2), ValidationError);
}

TEST(ProjectorTruncation, DiagonalPartialSums) {
  const std::vector<double> lam{0.4, 0.3, 0.2, 0.1};
  const PositiveOperator a(diagonal_state(lam));
  const SweepReport r = sweep_lemma1(a, PositiveOperator(identity(4)), coordinate_ladder(4));
  EXPECT_TRUE(r.ok());
  double s = 0.0, t = 0.0;
  for (int n = 1; n <= 4; ++n) {
    s += eta(lam[n - 1]);
    t += lam[n - 1];
    // H = S - eta(Tr)
    EXPECT_NEAR(r.records[2 * (n - 1)].value, s - eta(t), 1e-12);
  }
}

TEST(ProjectorTruncation, RandomPairsMonotone) {
  int violations = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(11, s));
    const PositiveOperator a = random_positive(8, rng), b = random_positive(8, rng);
    const bool spectral = s % 2 == 1;
    const SweepReport r = sweep_lemma1(a, b, spectral ? spectral_ladder(b) : coordinate_ladder(8));
    violations += static_cast<int>(r.violations.size());
  }
  EXPECT_EQ(violations, 0);
}

TEST(ProjectorTruncation, InfiniteTargetStaysConsistent) {
  // supp A not inside supp B: the limit is +inf and the sequence diverges.
  const PositiveOperator a(diagonal_state({0.5, 0.5}));
  const PositiveOperator b(diagonal_state({1.0, 0.0}));
  const SweepReport r = sweep_lemma1(a, b, coordinate_ladder(2));
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(std::isinf(last(r, "H(PAP||PBP)").value));
}

TEST(SpectralTruncation, IdentityAndBound) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(derive_seed(12, s));
    const Index d = 2 + static_cast<Index>(s % 4);
    const KrausChannel ch = random_channel(d, 1 + static_cast<Index>(s % 3) + 1, 1 + static_cast<Index>(s % 4), s);
    const DensityOperator rho = random_density(d, rng);
    const SweepReport r = sweep_lemma3(ch, rho);
    EXPECT_TRUE(r.ok()) << "seed " << s << ": " << (r.ok() ? "" : r.violations[0].what);
  }
}

TEST(SpectralTruncation, RankOneIsSingleTerm) {
  const SweepReport r = sweep_lemma3(channels::dephasing(0.2), diagonal_state({1.0, 0.0}));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(last(r, "I(rho_n)").n, 1);
  EXPECT_FALSE(r.notes.empty());
}

TEST(ChannelTruncation, TruncatedOutputsConverge) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(13, s));
    const KrausChannel ch = random_channel(3, 4, 2, s);
    const SweepReport r = sweep_lemma4(ch, random_density(3, rng));
    EXPECT_TRUE(r.ok()) << "seed " << s;
    EXPECT_EQ(last(r, "I(rho_n,Pi_n o Phi)").n, 4);
  }
}

TEST(FiniteRankDecomposition, IdentityAtEveryIndex) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(derive_seed(14, s));
    const Index d = 2 + static_cast<Index>(s % 3);
    const KrausChannel ch = random_channel(d, d, 2 + static_cast<Index>(s % 5), s);
    const DensityOperator rho = random_density(d, rng, s % 4 == 0 ? 1 : 0);
    const SweepReport r = sweep_theorem1_proof(ch, rho);
    EXPECT_TRUE(r.ok()) << "seed " << s << ": " << (r.ok() ? "" : r.violations[0].what);
    const double h = von_neumann_entropy(rho);
    EXPECT_NEAR(last(r, "X_n+Y_n").value, 2 * h, 1e-8);
    EXPECT_NEAR(last(r, "R_n").value, 0.0, 1e-12);
  }
}

TEST(FiniteRankDecomposition, DephasingByHand) {
  // Kraus {sqrt(3/4) I, sqrt(1/4) Z} on I/2: C_1 = (3/4) ln 2, R_1 = 1/4.
  const SweepReport r = sweep_theorem1_proof(channels::dephasing(0.25), maximally_mixed(2));
  ASSERT_TRUE(r.ok());
  const auto find = [&](int n, const std::string& q) {
    for (const auto& rec : r.records)
      if (rec.n == n && rec.quantity == q) return rec.value;
    return std::nan("");
  };
  EXPECT_NEAR(find(1, "C_n"), 0.75 * std::log(2.0), 1e-12);
  EXPECT_NEAR(find(1, "R_n"), 0.25, 1e-12);
  EXPECT_NEAR(find(2, "C_n"), std::log(2.0), 1e-12);
  EXPECT_NEAR(find(2, "D_n"), std::log(2.0), 1e-12);
}

TEST(DominatedLadder, CorridorOnSpectralAndScaledLadders) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    Rng rng(derive_seed(15, s));
    const Index d = 2 + static_cast<Index>(s % 5);
    const PositiveOperator a0 = random_density(d, rng);
    const PositiveOperator b = random_positive(d, rng, 1.0 + static_cast<double>(s % 3));
    const SweepReport sp = sweep_lemma8(a0, b, lemma8_spectral_ladder(a0));
    const SweepReport sc = sweep_lemma8(a0, b, lemma8_scaled_ladder(a0, 40));
    EXPECT_TRUE(sp.ok()) << "seed " << s << ": " << (sp.ok() ? "" : sp.violations[0].what);
    EXPECT_TRUE(sc.ok()) << "seed " << s << ": " << (sc.ok() ? "" : sc.violations[0].what);
  }
}

TEST(DominatedLadder, NonUnitTraceA0) {
  Rng rng(16);
  const PositiveOperator a0 = random_positive(3, rng, 2.5), b = random_positive(3, rng);
  EXPECT_TRUE(sweep_lemma8(a0, b, lemma8_scaled_ladder(a0, 30)).ok());
}

TEST(DominatedLadder, RejectsUndominatedLadder) {
  const PositiveOperator a0(diagonal_state({0.5, 0.5}));
  EXPECT_THROW(sweep_lemma8(a0, PositiveOperator(identity(2)), {PositiveOperator(diagonal_state({1.0, 0.0}))}),
               ValidationError);
}

TEST(AlmostConvexity, RandomTriples) {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  double worst = -infinity;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(derive_seed(17, s));
    const Index d = 2 + static_cast<Index>(s % 4);
    const Lemma7Check c =
        check_lemma7(random_density(d, rng), random_density(d, rng), random_positive(d, rng), grid);
    ASSERT_FALSE(c.skipped);
    worst = std::max(worst, c.max_violation);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(AlmostConvexity, SkipsUnsupported) {
  const Lemma7Check c = check_lemma7(diagonal_state({0.5, 0.5}), diagonal_state({1.0, 0.0}),
                                     PositiveOperator(diagonal_state({1.0, 0.0})), {0.5});
  EXPECT_TRUE(c.skipped);
}

TEST(KrausCompletions, CompletionsConverge) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(18, s));
    const Index din = 2 + static_cast<Index>(s % 2), dout = s % 3 == 0 ? 2 : 3;
    const KrausChannel ch = random_channel(din, dout, 4, s);
    const SweepReport r = sweep_example2(ch, random_density(din, rng));
    EXPECT_TRUE(r.ok()) << "seed " << s;
  }
}

TEST(Continuity, IdentityChannelIsTwiceEntropy) {
  const GibbsFamily fam{HermitianOperator(Matrix(RealVector::LinSpaced(4, 0.0, 3.0).cast<cplx>().asDiagonal()))};
  const std::vector<double> betas{1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
  const SweepReport r = continuity_on_energy_ball(channels::identity_channel(4), fam, betas);
  for (std::size_t k = 0; k + 3 < r.records.size(); k += 4)
    EXPECT_NEAR(r.records[k + 2].value, 2 * r.records[k + 1].value, 1e-9);
  EXPECT_NEAR(last(r, "I(rho_beta,Phi)").deviation, 0.0, 1e-15);
  ASSERT_EQ(r.notes.size(), 1u);
}

TEST(Continuity, ConstantLadderHasZeroDeviations) {
  const GibbsFamily fam{HermitianOperator(Matrix(RealVector::LinSpaced(3, 0.0, 2.0).cast<cplx>().asDiagonal()))};
  const SweepReport r = continuity_on_energy_ball(random_channel(3, 3, 2, 1), fam, {0.7, 0.7, 0.7});
  for (const auto& rec : r.records) EXPECT_EQ(rec.deviation, 0.0);
  EXPECT_THROW(continuity_on_energy_ball(random_channel(3, 3, 2, 1), fam, {0.5, 0.7}), ValidationError);
  EXPECT_THROW(continuity_on_energy_ball(random_channel(3, 3, 2, 1), fam, {0.0}), ValidationError);
}

TEST(Csv, Format) {
  SweepReport r;
  r.add(1, "q", 1.0 / 3.0, 0.5);
  r.add(2, "q", infinity, 0.5);
  EXPECT_EQ(to_csv(r), "n,quantity,value,target,deviation\n1,q,0.333333333,0.5,0.166666667\n2,q,inf,0.5,inf\n");
}
