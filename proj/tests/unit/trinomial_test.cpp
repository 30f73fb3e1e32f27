#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "anticorr/trinomial.hpp"
#include "oracles.hpp"

using namespace anticorr;

namespace {

std::vector<DetectorModel> detector_grid() {
    return {DetectorModel(0.3, 0.3, 0.4), DetectorModel(0.5, 0.2, 0.3),
            DetectorModel(0.1, 0.6, 0.3), DetectorModel(0.45, 0.45, 0.1),
            DetectorModel(0.5, 0.5, 0.0)};
}

} // namespace

// =============================================================================
// DetectorModel
// =============================================================================

TEST(DetectorModel, AcceptsValidTriple) {
    DetectorModel det(0.3, 0.3, 0.4);
    EXPECT_DOUBLE_EQ(det.p(), 0.3);
    EXPECT_DOUBLE_EQ(det.r(), 0.4);
}

TEST(DetectorModel, AcceptsZeroR) { EXPECT_NO_THROW(DetectorModel(0.5, 0.5, 0.0)); }

TEST(DetectorModel, RejectsBadSum) {
    EXPECT_THROW(DetectorModel(0.5, 0.5, 0.1), InvariantError);
    EXPECT_THROW(DetectorModel::from_pq(0.7, 0.4), InvariantError);
}

TEST(DetectorModel, RejectsOutOfRange) {
    EXPECT_THROW(DetectorModel(-0.1, 0.6, 0.5), InvariantError);
    EXPECT_THROW(DetectorModel(1.1, 0.0, -0.1), InvariantError);
    EXPECT_THROW(DetectorModel(std::nan(""), 0.5, 0.5), InvariantError);
}

TEST(DetectorModel, FromPqAbsorbsRoundoff) {
    auto det = DetectorModel::from_pq(0.7, 0.3);
    EXPECT_EQ(det.r(), 0.0);
}

// =============================================================================
// trinomial_pmf
// =============================================================================

TEST(TrinomialPmf, TwoTrialsAgainstOrderedEnumeration) {
    DetectorModel det(0.3, 0.3, 0.4);
    auto const pmf = oracle::enumerate_sequences(det, 2);
    long double const expected = pmf.at({1, 1});
    EXPECT_NEAR(static_cast<double>(expected), 0.18, 1e-15);
    EXPECT_NEAR(trinomial_pmf(det, 2, 1, 1), 0.18, 1e-15);
}

TEST(TrinomialPmf, EmptySequence) {
    EXPECT_DOUBLE_EQ(trinomial_pmf(DetectorModel(0.2, 0.5, 0.3), 0, 0, 0), 1.0);
}

TEST(TrinomialPmf, SingleTrial) {
    EXPECT_NEAR(trinomial_pmf(DetectorModel(0.5, 0.2, 0.3), 1, 1, 0), 0.5, 1e-15);
}

TEST(TrinomialPmf, ImpossibleCellIsZero) {
    EXPECT_EQ(trinomial_pmf(DetectorModel(0.3, 0.3, 0.4), 3, 2, 2), 0.0);
}

TEST(TrinomialPmf, ZeroProbabilityOutcomes) {
    DetectorModel det(0.0, 0.5, 0.5);
    EXPECT_EQ(trinomial_pmf(det, 4, 1, 0), 0.0);
    EXPECT_NEAR(trinomial_pmf(det, 4, 0, 2), 6.0 / 16.0, 1e-15);
}

TEST(TrinomialPmf, MatchesEnumerationUpToTen) {
    for (auto const& det : detector_grid()) {
        for (int n : {3, 6, 10}) {
            auto const pmf = oracle::enumerate_sequences(det, n);
            for (auto const& [mk, w] : pmf) {
                EXPECT_NEAR(trinomial_pmf(det, n, mk.first, mk.second), static_cast<double>(w),
                            1e-14)
                    << "n=" << n << " m=" << mk.first << " k=" << mk.second;
            }
        }
    }
}

TEST(TrinomialPmf, LargeNStaysFinite) {
    DetectorModel det(0.3, 0.3, 0.4);
    double const v = trinomial_pmf(det, 10000, 3000, 3000);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    // mode cell of a 2D lattice distribution with covariance det ~ n^2 (.21^2-.09^2)
    double const approx = 1.0 / (2.0 * M_PI * 10000.0 * std::sqrt(0.21 * 0.21 - 0.09 * 0.09));
    EXPECT_NEAR(v / approx, 1.0, 1e-3);
}

TEST(TrinomialPmf, RejectsNegativeArguments) {
    EXPECT_THROW(trinomial_pmf(DetectorModel(0.3, 0.3, 0.4), -1, 0, 0), InvariantError);
}

TEST(TrinomialPmf, NormalizationAndMarginals) {
    for (auto const& det : detector_grid()) {
        for (int n = 0; n <= 25; ++n) {
            double total = 0.0;
            for (int m = 0; m <= n; ++m) {
                double marginal = 0.0;
                for (int k = 0; m + k <= n; ++k) {
                    marginal += trinomial_pmf(det, n, m, k);
                }
                total += marginal;
                EXPECT_NEAR(marginal, static_cast<double>(oracle::binomial_pmf(n, det.p(), m)),
                            1e-12);
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

// =============================================================================
// sequence_gf
// =============================================================================

TEST(SequenceGf, NormalizedAtOne) {
    for (int n : {0, 1, 7, 300}) {
        EXPECT_NEAR(sequence_gf(DetectorModel(0.3, 0.3, 0.4), n, 1.0, 1.0), 1.0, 1e-13);
    }
}

TEST(SequenceGf, OriginGivesR) {
    EXPECT_DOUBLE_EQ(sequence_gf(DetectorModel(0.3, 0.3, 0.4), 1, 0.0, 0.0), 0.4);
}

TEST(SequenceGf, MatchesDoubleSumOverPmf) {
    std::vector<double> const grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    for (auto const& det : detector_grid()) {
        for (int n : {1, 4, 9}) {
            for (double x : grid) {
                for (double y : grid) {
                    double sum = 0.0;
                    for (int m = 0; m <= n; ++m) {
                        for (int k = 0; m + k <= n; ++k) {
                            sum += trinomial_pmf(det, n, m, k) * std::pow(x, m) * std::pow(y, k);
                        }
                    }
                    EXPECT_NEAR(sequence_gf(det, n, x, y), sum, 1e-10);
                }
            }
        }
    }
}

TEST(SequenceGf, ComplexArgumentOnUnitCircle) {
    DetectorModel det(0.3, 0.3, 0.4);
    std::complex<double> const x = std::polar(1.0, 0.7);
    std::complex<double> const y = std::polar(1.0, -1.3);
    std::complex<double> sum = 0.0;
    int const n = 6;
    for (int m = 0; m <= n; ++m) {
        for (int k = 0; m + k <= n; ++k) {
            sum += trinomial_pmf(det, n, m, k) * std::pow(x, m) * std::pow(y, k);
        }
    }
    auto const v = sequence_gf(det, n, x, y);
    EXPECT_NEAR(std::abs(v - sum), 0.0, 1e-13);
}

TEST(SequenceGf, RejectsArgumentsOutsideMargin) {
    EXPECT_THROW(sequence_gf(DetectorModel(0.3, 0.3, 0.4), 2, 1.5, 1.0), InvariantError);
}

// =============================================================================
// fixed_n_moments / enumerate_exact_moments
// =============================================================================

TEST(FixedNMoments, TwoThirdsAnticorrelation) {
    auto const s = fixed_n_moments(DetectorModel(0.4, 0.4, 0.2), 10);
    ASSERT_TRUE(s.corr.has_value());
    EXPECT_NEAR(*s.corr, -2.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.mean_a, 4.0, 1e-15);
    EXPECT_NEAR(s.var_a, 2.4, 1e-14);
    EXPECT_NEAR(s.cov, -1.6, 1e-14);
}

TEST(FixedNMoments, G2IsOneMinusInverseN) {
    auto const s = fixed_n_moments(DetectorModel(0.2, 0.5, 0.3), 5);
    ASSERT_TRUE(s.g2.has_value());
    EXPECT_DOUBLE_EQ(*s.g2, 0.8);
}

TEST(FixedNMoments, EqualEfficienciesReduceToPOverOneMinusP) {
    for (double p : {0.05, 0.2, 0.35, 0.49}) {
        for (int n : {1, 3, 40}) {
            auto const s = fixed_n_moments(DetectorModel::from_pq(p, p), n);
            EXPECT_NEAR(*s.corr, -p / (1.0 - p), 1e-14);
        }
    }
}

TEST(FixedNMoments, CorrIndependentOfN) {
    for (auto const& det : detector_grid()) {
        auto const a = fixed_n_moments(det, 2);
        auto const b = fixed_n_moments(det, 50);
        EXPECT_NEAR(*a.corr, *b.corr, 1e-12);
    }
}

TEST(FixedNMoments, CorrBoundaryAtZeroR) {
    auto const s = fixed_n_moments(DetectorModel(0.5, 0.5, 0.0), 7);
    EXPECT_EQ(*s.corr, -1.0);
    auto const u = fixed_n_moments(DetectorModel(0.3, 0.7, 0.0), 7);
    EXPECT_GT(*u.corr, -1.0 - 1e-15);
    EXPECT_LT(*u.corr, 0.0);
}

TEST(FixedNMoments, CorrNegativeWheneverBothFire) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double const p = unit(gen);
        double const q = (1.0 - p) * unit(gen);
        if (p * q == 0.0) {
            continue;
        }
        auto const s = fixed_n_moments(DetectorModel::from_pq(p, q), 1 + i % 17);
        ASSERT_TRUE(s.corr);
        EXPECT_GE(*s.corr, -1.0);
        EXPECT_LT(*s.corr, 0.0);
    }
}

TEST(FixedNMoments, DegenerateDetector) {
    auto const s = fixed_n_moments(DetectorModel(0.0, 0.5, 0.5), 7);
    EXPECT_FALSE(s.corr.has_value());
    EXPECT_FALSE(s.g2.has_value());
}

TEST(FixedNMoments, RejectsZeroLength) {
    EXPECT_THROW(fixed_n_moments(DetectorModel(0.3, 0.3, 0.4), 0), InvariantError);
}

TEST(EnumerateExactMoments, AgreesWithClosedForm) {
    for (auto const& det : detector_grid()) {
        for (int n : {1, 2, 10, 60}) {
            auto const enumerated = enumerate_exact_moments(det, n);
            auto const closed = fixed_n_moments(det, n);
            EXPECT_LT(max_relative_discrepancy(enumerated, closed), 1e-10) << "n=" << n;
        }
    }
}

TEST(EnumerateExactMoments, SingleTrialCovariance) {
    DetectorModel det(0.25, 0.35, 0.4);
    auto const s = enumerate_exact_moments(det, 1);
    EXPECT_NEAR(s.cov, -0.25 * 0.35, 1e-15);
}

TEST(EnumerateExactMoments, SilentDetector) {
    auto const s = enumerate_exact_moments(DetectorModel(0.0, 0.5, 0.5), 7);
    EXPECT_EQ(s.mean_a, 0.0);
    EXPECT_EQ(s.var_a, 0.0);
    EXPECT_FALSE(s.corr.has_value());
}

TEST(EnumerateExactMoments, MatchesOrderedSequenceOracle) {
    DetectorModel det(0.4, 0.4, 0.2);
    auto const mo = oracle::moments_of(oracle::enumerate_sequences(det, 10));
    auto const s = enumerate_exact_moments(det, 10);
    EXPECT_NEAR(*s.corr, static_cast<double>(*mo.corr()), 1e-13);
    EXPECT_NEAR(s.cov, static_cast<double>(mo.cov), 1e-13);
}

TEST(EnumerateExactMoments, GridGuard) {
    EXPECT_THROW(enumerate_exact_moments(DetectorModel(0.3, 0.3, 0.4), 201), InvariantError);
}

// =============================================================================
// max_relative_discrepancy
// =============================================================================

TEST(MaxRelativeDiscrepancy, MissingFieldIsInfinite) {
    MomentSummary a = make_summary(1, 1, 1, 1, 0.5, 1.5);
    MomentSummary b = a;
    b.g2.reset();
    EXPECT_TRUE(std::isinf(max_relative_discrepancy(a, b)));
    EXPECT_EQ(max_relative_discrepancy(a, a), 0.0);
}
