#include <gtest/gtest.h>

#include <random>

#include "csl/functional_equation.hpp"

using csl::Complex;

namespace {

csl::EvalConfig accelerated()
{
    csl::EvalConfig c;
    c.accelerate = true;
    c.accel_order = 30;
    return c;
}

} // namespace

TEST(HFactor, SymmetryPointIsOne)
{
    EXPECT_LE(std::abs(csl::h_factor({0.5, 0.0}) - 1.0), 1e-12);
}

TEST(HFactor, PolesThrow)
{
    EXPECT_THROW(csl::h_factor({1.0, 0.0}), csl::PoleError);
    EXPECT_THROW(csl::h_factor({2.0, 3e-7}), csl::PoleError);
    EXPECT_THROW(csl::h_factor({3.0, 0.0}), csl::PoleError);
    EXPECT_NO_THROW(csl::h_factor({1.0, 1e-3}));
}

// Frozen mpmath values of 2 Gamma(1-z) (2 pi)^{z-1} sin(pi z / 2).
TEST(HFactor, MatchesHighPrecisionOracle)
{
    struct Case {
        Complex z, want;
    };
    const Case cases[] = {
        {{0.5, 14.134725}, {-0.95056438431206088, -0.31052753706786236}},
        {{0.75, 5.0}, {0.84803159367546845, 0.63446529945221268}},
        {{0.2, -11.0}, {0.936131185692441, 0.72306808850780698}},
    };
    for (const auto& c : cases) {
        EXPECT_LE(std::abs(csl::h_factor(c.z) - c.want), 1e-12 * std::abs(c.want)) << csl::to_string(c.z);
    }
    const Complex z{0.5, 14.134725};
    EXPECT_LE(std::abs(csl::h_factor(z) * csl::h_factor(1.0 - z) - 1.0), 1e-10);
}

TEST(HFactor, Reciprocity)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(0.01, 0.99), im(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        const Complex z{re(rng), im(rng)};
        ASSERT_LE(std::abs(csl::h_factor(z) * csl::h_factor(1.0 - z) - 1.0), 1e-10) << csl::to_string(z);
    }
}

TEST(HFactor, UnitModulusOnCriticalLine)
{
    for (double t = 0.1; t <= 50.0; t += 0.37) {
        ASSERT_NEAR(std::abs(csl::h_factor({0.5, t})), 1.0, 1e-10) << t;
    }
}

TEST(HRatioFinite, UnitModulusOnCriticalLine)
{
    for (std::uint64_t n : {1u, 10u, 1000u}) {
        EXPECT_NEAR(std::abs(csl::h_ratio_finite({0.5, 14.134725}, n)), 1.0, 1e-15);
    }
}

TEST(HRatioFinite, OneAtSymmetryPoint)
{
    EXPECT_LE(std::abs(csl::h_ratio_finite({0.5, 0.0}, 1000) - 1.0), 1e-12);
}

TEST(HRatioFinite, ApproachesClosedForm)
{
    const Complex z{0.75, 5.0};
    const Complex limit = csl::h_factor(z);
    // Leading Euler-Maclaurin error: zeta_hat_n(s) ~ zeta(s) + n^{-s}/2. The 1 - z
    // side decays like n^{-1/4}, so |H_n - H| is still ~0.078 at n = 1e4.
    const auto cfg = csl::EvalConfig{};
    const Complex a = csl::zeta_hat_eta(z, cfg).value;
    const Complex b = csl::zeta_hat_eta(1.0 - z, cfg).value;
    double previous = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {10'000u, 30'000u, 100'000u}) {
        const Complex hn = csl::h_ratio_finite(z, n);
        const Complex predicted = (a + 0.5 * csl::complex_power(n, z)) / (b + 0.5 * csl::complex_power(n, 1.0 - z));
        EXPECT_LE(std::abs(hn - predicted), 1e-4) << n;
        EXPECT_LT(std::abs(hn - limit), previous);
        previous = std::abs(hn - limit);
    }
    EXPECT_LE(previous, 0.05);
}

TEST(HRatioFinite, Errors)
{
    EXPECT_THROW(csl::h_ratio_finite({0.0, 0.0}, 10), csl::SingularityError);
    EXPECT_THROW(csl::h_ratio_finite({1.0, 0.0}, 10), csl::SingularityError);
    EXPECT_THROW(csl::h_ratio_finite({0.5, 1.0}, 0), csl::DomainError);
}

TEST(FunctionalEquationResidual, AtFirstZero)
{
    const auto r = csl::functional_equation_residual({0.5, 14.134725142}, accelerated());
    EXPECT_LE(r.residual, 1e-8);
    EXPECT_LE(std::abs(r.lhs), 1e-8);
    EXPECT_EQ(r.residual, std::abs(r.lhs - r.rhs));
    EXPECT_EQ(r.config_used, accelerated());
}

TEST(FunctionalEquationResidual, OffLinePoint)
{
    const auto r = csl::functional_equation_residual({0.3, 8.0}, accelerated());
    EXPECT_LE(r.residual, 1e-8);
    // lhs against frozen mpmath zeta(0.3+8i)
    EXPECT_LE(std::abs(r.lhs - Complex{1.2611291424060331, 0.40789569911735878}), 1e-11);
}

TEST(FunctionalEquationResidual, SymmetryPoint)
{
    EXPECT_LE(csl::functional_equation_residual({0.5, 0.0}, accelerated()).residual, 1e-10);
}

TEST(FunctionalEquationResidual, OutsideStripRejected)
{
    EXPECT_THROW(csl::functional_equation_residual({1.2, 3.0}, accelerated()), csl::DomainError);
    EXPECT_THROW(csl::functional_equation_residual({0.0, 3.0}, accelerated()), csl::DomainError);
}

TEST(FunctionalEquationResidual, StripGrid)
{
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 0; j < 13; ++j) {
            const Complex z{0.1 * i, 2.5 * j};
            worst = std::max(worst, csl::functional_equation_residual(z, accelerated()).residual);
        }
    }
    EXPECT_LE(worst, 1e-8);
}
