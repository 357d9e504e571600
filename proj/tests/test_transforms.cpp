#include <mulfs/fock.hpp>
#include <mulfs/random.hpp>
#include <mulfs/sym.hpp>
#include <mulfs/transforms.hpp>

#include "support/identities.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace mulfs;
using Constant = RandomSource::Constant;

namespace {

const AlgebraDescriptor scalar = AlgebraDescriptor::scalar();
const AlgebraDescriptor matrix2 = AlgebraDescriptor::matrix(2);

using namespace identity;

Args random_args(RandomSource& rng, const AlgebraDescriptor& desc, int n)
{
    Args b;
    for (int i = 0; i < n; ++i) b.push_back(rng.element(desc));
    return b;
}

Rational scalar_value(const MFSeries& s, int k) { return s[k].raw()[0]; }

MFSeries scalar_series(const std::vector<Rational>& coeffs) { return oracle::to_series(coeffs); }

void check_splitting(const Partition& pi, int m, int len, const Args& b, const Evaluator& outer, const Evaluator& inner)
{
    EXPECT_EQ(outer(pi, b), splitting_rhs(pi, m, len, b, outer, inner)) << to_string(pi) << " J=[" << m << "," << m + len - 1 << "]";
}

} // namespace

TEST(AlphaBracket, TableRows)
{
    RandomSource rng(1);
    const auto alpha = rng.series(matrix2, 3);
    const auto b = random_args(rng, matrix2, 3);
    const auto a1 = [&](const AlgebraElement& x) { return alpha[1]({x}); };
    EXPECT_EQ(alpha_bracket(alpha, parse_partition("(1,2)(3,4)", 4), b), a1(b[0]) * b[1] * a1(b[2]));
    EXPECT_EQ(alpha_bracket(alpha, parse_partition("(1,4)(2,3)", 4), b), a1(b[0] * a1(b[1]) * b[2]));
    const auto a0 = alpha.constant_term();
    EXPECT_EQ(alpha_bracket(alpha, singletons(4), b), a0 * b[0] * a0 * b[1] * a0 * b[2] * a0);
    EXPECT_EQ(alpha_bracket(alpha, full_partition(4), b), alpha[3](b));
}

TEST(AlphaBracket, IntervalPartitionFormula)
{
    RandomSource rng(2);
    const auto alpha = rng.series(matrix2, 5);
    for (int n = 0; n <= 5; ++n) {
        const auto b = random_args(rng, matrix2, n);
        for (const auto& pi : enumerate(n + 1, PartitionMode::ip)) {
            AlgebraElement expected = AlgebraElement::unit(matrix2);
            for (std::size_t j = 0; j < pi.blocks.size(); ++j) {
                const auto& block = pi.blocks[j];
                if (j > 0) expected = expected * b[static_cast<std::size_t>(block.front() - 2)];
                const int size = static_cast<int>(block.size());
                expected = expected * alpha[size - 1](range(b, block.front(), block.front() + size - 2));
            }
            EXPECT_EQ(alpha_bracket(alpha, pi, b), expected) << to_string(pi);
        }
    }
}

TEST(AlphaBracket, SplittingIdentity)
{
    RandomSource rng(3);
    const auto alpha = rng.series(matrix2, 4);
    const Evaluator eval = [&](const Partition& p, const Args& args) { return alpha_bracket(alpha, p, args); };
    int checked = 0;
    for (const auto& pi : enumerate(5, PartitionMode::nc)) {
        const auto b = random_args(rng, matrix2, 4);
        for_each_split(pi, [&](int m, int len) {
            check_splitting(pi, m, len, b, eval, eval);
            ++checked;
        });
    }
    EXPECT_GT(checked, 100);
}

TEST(AlphaAngle, TableRows)
{
    RandomSource rng(4);
    const auto alpha = rng.series(matrix2, 3, Constant::invertible);
    const auto b = random_args(rng, matrix2, 3);
    const auto a0 = alpha.constant_term();
    const auto a1 = [&](const AlgebraElement& x) { return alpha[1]({x}); };
    EXPECT_EQ(alpha_angle(alpha, parse_partition("(1,2)(2,3)(3,4)", 4), b), a1(b[0] * a1(b[1] * a1(b[2] * a0))));
    EXPECT_EQ(alpha_angle(alpha, parse_partition("(1,2,4)(2,3)", 4), b), alpha[2]({b[0] * a1(b[1] * a0), b[2] * a0}));
    EXPECT_EQ(alpha_angle(alpha, full_partition(4), b), alpha[3]({b[0] * a0, b[1] * a0, b[2] * a0}));
    EXPECT_THROW(alpha_angle(rng.series(matrix2, 3, Constant::zero), full_partition(4), b), SingularError);
}

TEST(AlphaAngle, SplittingIdentity)
{
    RandomSource rng(6);
    const auto alpha = rng.series(matrix2, 4, Constant::invertible);
    const Evaluator eval = [&](const Partition& p, const Args& args) { return alpha_angle(alpha, p, args); };
    int checked = 0;
    for (const auto& pi : enumerate(5, PartitionMode::ncl)) {
        const auto b = random_args(rng, matrix2, 4);
        for_each_split(pi, [&](int m, int len) {
            check_splitting(pi, m, len, b, eval, eval);
            ++checked;
        });
    }
    EXPECT_GT(checked, 100);
}

TEST(AlphaAngle, IndexedSplittingIdentity)
{
    RandomSource rng(7);
    const std::vector<MFSeries> family{rng.series(matrix2, 4, Constant::invertible), rng.series(matrix2, 4, Constant::invertible)};
    for (const auto& pi : enumerate(5, PartitionMode::ncl)) {
        const auto b = random_args(rng, matrix2, 4);
        for (const auto& iota : block_constant_maps(pi))
            for_each_split(pi, [&](int m, int len) {
                const auto j = interval(m, m + len - 1);
                const auto inner_map = restrict_map(iota, j), outer_map = restrict_map(iota, complement(j, pi.n));
                const Evaluator outer = [&](const Partition& p, const Args& args) {
                    return alpha_angle_indexed(family, p.n == pi.n ? iota : outer_map, p, args);
                };
                const Evaluator inner = [&](const Partition& p, const Args& args) { return alpha_angle_indexed(family, inner_map, p, args); };
                check_splitting(pi, m, len, b, outer, inner);
            });
    }
}

TEST(AlphaAngle, Decomposition)
{
    RandomSource rng(8);
    const auto alpha = rng.series(matrix2, 5, Constant::invertible);
    const std::vector<MFSeries> single{alpha};
    for (int points = 2; points <= 6; ++points)
        for (const auto& pi : enumerate(points, PartitionMode::ncl)) {
            const auto b = random_args(rng, matrix2, points - 1);
            const std::vector<int> ones(static_cast<std::size_t>(points), 1);
            EXPECT_EQ(alpha_angle(alpha, pi, b), factorized(single, ones, pi, b)) << to_string(pi);
        }
}

TEST(AlphaAngle, IndexedDecomposition)
{
    RandomSource rng(9);
    const std::vector<MFSeries> family{rng.series(matrix2, 4, Constant::invertible), rng.series(matrix2, 4, Constant::invertible)};
    for (const auto& pi : enumerate(5, PartitionMode::ncl)) {
        const auto b = random_args(rng, matrix2, 4);
        for (const auto& iota : block_constant_maps(pi))
            EXPECT_EQ(alpha_angle_indexed(family, iota, pi, b), factorized(family, iota, pi, b)) << to_string(pi);
    }
}

TEST(AlphaAngle, IndexedReductions)
{
    RandomSource rng(10);
    const std::vector<MFSeries> family{rng.series(matrix2, 3, Constant::invertible), rng.series(matrix2, 3, Constant::invertible)};
    const auto b = random_args(rng, matrix2, 3);
    const auto pi = parse_partition("(1,2,4)(2,3)", 4);
    EXPECT_TRUE(alpha_angle_indexed(family, {1, 1, 2, 1}, pi, b).is_zero());
    EXPECT_TRUE(alpha_angle_indexed(family, {1, 2, 2, 1}, pi, b).is_zero());
    for (const auto& p : enumerate(4, PartitionMode::ncl))
        for (int i : {1, 2})
            EXPECT_EQ(alpha_angle_indexed(family, std::vector<int>(4, i), p, b), alpha_angle(family[static_cast<std::size_t>(i - 1)], p, b));
}

TEST(AlphaAngle, ProductOfFreeMultiplicativeVariables)
{
    // Moments of X_1 X_2 as a sum over NCL(2n + 2) with alternating indices and unit slots.
    const FockSpace space{matrix2, 2};
    RandomSource rng(11);
    const std::vector<MFSeries> family{rng.series(matrix2, 5, Constant::invertible), rng.series(matrix2, 5, Constant::invertible)};
    const std::vector<FockOperator> factors{multiplicative_canonical(space, 1, family[0]), multiplicative_canonical(space, 2, family[1])};
    const auto phi = distribution_series(factors, 2);
    const auto one = AlgebraElement::unit(matrix2);
    for (int n = 0; n <= 2; ++n) {
        const auto b = random_args(rng, matrix2, n);
        Args slots{one};
        for (const auto& x : b) {
            slots.push_back(x);
            slots.push_back(one);
        }
        std::vector<int> f;
        for (int j = 1; j <= 2 * n + 2; ++j) f.push_back(j % 2 == 1 ? 1 : 2);
        AlgebraElement sum = AlgebraElement::zero(matrix2);
        for (const auto& pi : enumerate(2 * n + 2, PartitionMode::ncl)) sum += alpha_angle_indexed(family, f, pi, slots);
        EXPECT_EQ(phi[n](b), sum) << "n=" << n;
    }
}

TEST(MomentsFromR, ScalarExamples)
{
    const Rational r0(2, 3), r1(-1, 5), r2(7, 2);
    const auto m = moments_from_r(scalar_series({r0, r1, r2}), 2);
    EXPECT_EQ(scalar_value(m, 0), r0);
    EXPECT_EQ(scalar_value(m, 1), r1 + r0 * r0);
    EXPECT_EQ(scalar_value(m, 2), r2 + 3 * r0 * r1 + r0 * r0 * r0);

    std::vector<Rational> semicircle(8, Rational(0));
    semicircle[1] = 1;
    const auto catalan_moments = moments_from_r(scalar_series(semicircle), 7);
    for (int k = 1; k <= 4; ++k) {
        EXPECT_EQ(scalar_value(catalan_moments, 2 * k - 1), Rational(catalan(k)));
        EXPECT_EQ(scalar_value(catalan_moments, 2 * k - 2), 0);
    }
}

TEST(MomentsFromR, MatchesFockAdditiveVariable)
{
    const FockSpace space{matrix2, 1};
    RandomSource rng(12);
    for (int trial = 0; trial < 2; ++trial) {
        const auto alpha = rng.series(matrix2, 3);
        EXPECT_EQ(moments_from_r(alpha, 3), distribution_series(additive_canonical(space, 1, alpha), 3));
    }
}

TEST(MomentsFromT, ScalarExamples)
{
    RandomSource rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = rng.series(scalar, 3, Constant::invertible);
        const Rational a0 = scalar_value(a, 0), a1 = scalar_value(a, 1), a2 = scalar_value(a, 2), a3 = scalar_value(a, 3);
        const auto m = moments_from_t(a, 3);
        EXPECT_EQ(scalar_value(m, 0), a0);
        EXPECT_EQ(scalar_value(m, 1), a0 * a0 + a0 * a1);
        EXPECT_EQ(scalar_value(m, 2), a0 * a0 * a0 + 3 * a0 * a0 * a1 + a0 * a1 * a1 + a0 * a0 * a2);
        EXPECT_EQ(scalar_value(m, 3), a0 * a0 * a0 * a0 + 6 * a0 * a0 * a0 * a1 + 6 * a0 * a0 * a1 * a1 + 4 * a0 * a0 * a0 * a2 +
                                          a0 * a1 * a1 * a1 + 3 * a0 * a0 * a1 * a2 + a0 * a0 * a0 * a3);
    }
    const auto ones = moments_from_t(scalar_series(std::vector<Rational>(7, Rational(1))), 6);
    const std::vector<int> expected{1, 2, 6, 22, 90, 394, 1806};
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(scalar_value(ones, k), expected[static_cast<std::size_t>(k)]);
    EXPECT_THROW(moments_from_t(rng.series(matrix2, 2, Constant::zero), 2), SingularError);
}

TEST(MomentsFromT, MatchesFockMultiplicativeVariable)
{
    const FockSpace space{matrix2, 1};
    RandomSource rng(14);
    for (int trial = 0; trial < 2; ++trial) {
        const auto alpha = rng.series(matrix2, 3, Constant::invertible);
        EXPECT_EQ(moments_from_t(alpha, 3), distribution_series(multiplicative_canonical(space, 1, alpha), 3));
    }
}

TEST(RTransform, Examples)
{
    EXPECT_EQ(r_transform(MFSeries::zero(matrix2, 3)), MFSeries::zero(matrix2, 3));
    const auto semicircle = r_transform(scalar_series({0, 1, 0, 2, 0, 5}));
    EXPECT_EQ(oracle::to_poly(semicircle), (oracle::Poly{0, 1, 0, 0, 0, 0}));

    RandomSource rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const auto beta = rng.series(scalar, 5);
        const auto kappa = oracle::free_cumulants(oracle::to_poly(beta));
        const auto rt = r_transform(beta);
        for (int k = 0; k <= 5; ++k) EXPECT_EQ(scalar_value(rt, k), kappa[static_cast<std::size_t>(k)]);
    }
}

TEST(RTransform, RoundTripAndCharacterization)
{
    RandomSource rng(16);
    for (int trial = 0; trial < 3; ++trial) {
        const auto rho = rng.series(matrix2, 3);
        EXPECT_EQ(r_transform(r_inverse(rho, 3)), rho);
        const auto beta = rng.series(matrix2, 3);
        const auto rt = r_transform(beta);
        EXPECT_EQ(r_inverse(rt, 3), beta);
        EXPECT_TRUE(r_characterization_holds(beta, rt));
        // Component k of the transform enters the relation in degree k + 2.
        auto bump = MFSeries::zero(matrix2, 3);
        bump[1] = rng.multilinear(matrix2, 1);
        const auto wrong = rt + bump;
        if (!(wrong == rt)) EXPECT_FALSE(r_characterization_holds(beta, wrong));
    }
    const auto beta4 = rng.series(matrix2, 4);
    EXPECT_TRUE(r_characterization_holds(beta4, r_transform(beta4)));
}

TEST(TTransform, ScalarExample)
{
    RandomSource rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto beta = rng.series(scalar, 2, Constant::invertible);
        const Rational m1 = scalar_value(beta, 0), m2 = scalar_value(beta, 1), m3 = scalar_value(beta, 2);
        const auto tt = t_transform(beta);
        EXPECT_EQ(scalar_value(tt, 0), m1);
        EXPECT_EQ(scalar_value(tt, 1), m2 / m1 - m1);
        EXPECT_EQ(scalar_value(tt, 2), m3 / (m1 * m1) - m2 * m2 / (m1 * m1 * m1) - m2 / m1 + m1);
    }
}

TEST(TTransform, ConstantDistribution)
{
    RandomSource rng(18);
    const FockSpace space{matrix2, 1};
    const auto c = rng.invertible_element(matrix2);
    const auto beta = distribution_series(FockOperator::left(space, c), 3);
    const auto expected = MFSeries::constant(c, 3);
    EXPECT_EQ(t_transform(beta), expected);
    EXPECT_THROW(t_transform(rng.series(matrix2, 2, Constant::zero)), SingularError);
}

TEST(TTransform, RoundTripAndCharacterization)
{
    RandomSource rng(19);
    for (int trial = 0; trial < 3; ++trial) {
        const auto alpha = rng.series(matrix2, 3, Constant::unit);
        EXPECT_EQ(t_transform(t_inverse(alpha, 3)), alpha);
        const auto beta = rng.series(matrix2, 3, Constant::invertible);
        const auto tt = t_transform(beta);
        EXPECT_EQ(t_inverse(tt, 3), beta);
        EXPECT_TRUE(t_characterization_holds(beta, tt));
        auto bump = MFSeries::zero(matrix2, 3);
        bump[1] = rng.multilinear(matrix2, 1);
        const auto wrong = tt + bump;
        if (!(wrong == tt)) EXPECT_FALSE(t_characterization_holds(beta, wrong));
        EXPECT_EQ(s_transform(beta) * tt, MFSeries::one(matrix2, 3));
    }
}

TEST(Convolution, NeutralElements)
{
    const FockSpace space{matrix2, 1};
    RandomSource rng(20);
    const auto beta = rng.series(matrix2, 3, Constant::invertible);
    const auto zero_distribution = distribution_series(FockOperator::left(space, AlgebraElement::zero(matrix2)), 3);
    EXPECT_EQ(free_additive_convolution(beta, zero_distribution, 3), beta);
    const auto unit_distribution = distribution_series(FockOperator::left(space, AlgebraElement::unit(matrix2)), 3);
    EXPECT_EQ(free_multiplicative_convolution(beta, unit_distribution, 3), beta);
    EXPECT_EQ(free_multiplicative_convolution(unit_distribution, beta, 3), beta);
}

TEST(Convolution, SemicircleDoublesVariance)
{
    const auto semicircle = scalar_series({0, 1, 0, 2});
    EXPECT_EQ(oracle::to_poly(free_additive_convolution(semicircle, semicircle, 3)), (oracle::Poly{0, 2, 0, 8}));
}

TEST(Convolution, AdditiveMatchesFockSum)
{
    const FockSpace space{matrix2, 2};
    RandomSource rng(21);
    const auto beta1 = rng.series(matrix2, 3), beta2 = rng.series(matrix2, 3);
    const auto x = additive_canonical(space, 1, r_transform(beta1));
    const auto y = additive_canonical(space, 2, r_transform(beta2));
    EXPECT_EQ(distribution_series(x + y, 3), free_additive_convolution(beta1, beta2, 3));
}

TEST(Convolution, MultiplicativeMatchesFockProduct)
{
    const FockSpace space{matrix2, 2};
    RandomSource rng(22);
    const auto beta1 = rng.series(matrix2, 2, Constant::invertible), beta2 = rng.series(matrix2, 2, Constant::invertible);
    const std::vector<FockOperator> factors{multiplicative_canonical(space, 1, t_transform(beta1)),
                                            multiplicative_canonical(space, 2, t_transform(beta2))};
    EXPECT_EQ(distribution_series(factors, 2), free_multiplicative_convolution(beta1, beta2, 2));
}

TEST(Convolution, ScalarTwistIsAProduct)
{
    const FockSpace space{scalar, 2};
    RandomSource rng(23);
    const auto tx = rng.series(scalar, 3, Constant::invertible), ty = rng.series(scalar, 3, Constant::invertible);
    EXPECT_EQ(twisted_t_product(tx, ty), tx * ty);
    const std::vector<FockOperator> factors{multiplicative_canonical(space, 1, tx), multiplicative_canonical(space, 2, ty)};
    EXPECT_EQ(t_transform(distribution_series(factors, 3)), tx * ty);
}

TEST(ScalarMoments, Examples)
{
    const Rational a0(3, 2), a1(-2, 7), a2(5, 3);
    EXPECT_EQ(scalar_moments({a0}, 1), a0);
    EXPECT_EQ(scalar_moments({a0, a1, a2}, 3), a0 * a0 * a0 + 3 * a0 * a0 * a1 + a0 * a1 * a1 + a0 * a0 * a2);
    EXPECT_THROW(scalar_moments({0, 1}, 2), PreconditionViolation);

    RandomSource rng(24);
    const auto alpha = rng.series(scalar, 5, Constant::invertible);
    const auto coeffs = oracle::to_poly(alpha);
    const auto m = moments_from_t(alpha, 5);
    for (int n = 1; n <= 6; ++n) EXPECT_EQ(scalar_moments(coeffs, n), scalar_value(m, n - 1));
}

TEST(ScalarMoments, SchroderIdentities)
{
    const auto report = schroder_identities(8);
    EXPECT_EQ(report.size(), 32u);
    for (const auto& check : report) EXPECT_TRUE(check.pass) << check.identity << " n=" << check.n;
    EXPECT_EQ(schroder_generating_function(5)[4], 90);
    for (const auto& check : report)
        if (check.identity == "catalan-sum" && check.n == 6) EXPECT_EQ(check.actual, 394);
    const std::vector<int> counts{1, 2, 6, 22, 90, 394, 1806, 8558};
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(count_partitions(n, PartitionMode::ncl), static_cast<std::uint64_t>(counts[static_cast<std::size_t>(n - 1)]));
}

TEST(SymmetrizedDescent, ConvolutionDependsOnSymmetrizedInputs)
{
    RandomSource rng(25);
    for (const auto* desc : {&scalar, &matrix2}) {
        const auto beta1 = rng.series(*desc, 3), beta2 = rng.series(*desc, 3);
        const auto direct = symmetrize(free_additive_convolution(beta1, beta2, 3));
        EXPECT_EQ(symmetrize(free_additive_convolution(symmetrize(beta1), symmetrize(beta2), 3)), direct);
        EXPECT_EQ(symmetrize(r_transform(beta1)), symmetrize(r_transform(symmetrize(beta1))));
    }
}
