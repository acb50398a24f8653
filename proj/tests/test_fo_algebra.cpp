#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <ellpoisson/fo_algebra.hpp>

using namespace ellpoisson;
using cd = std::complex<double>;

namespace
{

ThetaBasis<double> make(int n, cd tau)
{
    return ThetaBasis<double>(CurveParams<double>(tau, n));
}

} // namespace

TEST(FConstants, Symmetries)
{
    for (int n : {3, 5, 7}) {
        for (cd tau : {cd(0, 1), cd(0.3, 0.8)}) {
            const auto F = f_constants(make(n, tau));
            EXPECT_EQ(F(0, 0), cd(0));
            EXPECT_LT(F.symmetry_defect(), 1e-10) << n;
        }
    }
}

TEST(FConstants, VanishOnAntidiagonal)
{
    const auto B = make(3, cd(0, 1));
    const auto F = f_constants(B);
    EXPECT_LT(std::abs(F(1, 2)), 1e-12);
    const cd direct = B.d_at_zero(0) * B.at_zero(0) / (B.at_zero(1) * B.at_zero(2));
    EXPECT_LT(std::abs(F(1, 2) - direct), 1e-15);
    const cd ipn(0, std::acos(-1.0) * 3);
    EXPECT_LT(std::abs(F(0, 1) - (B.d_at_zero(1) / B.at_zero(1) - ipn)), 1e-15);
    EXPECT_EQ(F(2, 0), F(0, 2));
}

TEST(Relations, DirectSubstitution)
{
    const auto B = make(3, cd(0, 1));
    const cd eta(0.11, 0.07);
    const auto R = fo_relations(B, 1, eta);
    EXPECT_EQ(R.relation_count(), 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                continue;
            }
            const int s = mod_n(j - i, 3);
            const cd direct = B.at_zero(s) / (B.value(0, eta) * B.value(s, -eta));
            EXPECT_LT(std::abs(R(i, j, 0) - direct) / std::abs(direct), 1e-14);
            for (int r = 0; r < 3; ++r) {
                EXPECT_TRUE(is_finite(R(i, j, r)));
            }
        }
    }
    EXPECT_THROW(R(1, 1, 0), std::invalid_argument);
}

TEST(Relations, RejectsDegenerateInput)
{
    const auto B = make(3, cd(0, 1));
    EXPECT_THROW(fo_relations(B, 1, cd(1.0 / 3.0, 0)), degenerate_eta_error);
    EXPECT_THROW(fo_relations(B, 1, cd(0)), degenerate_eta_error);
    try {
        fo_relations(B, 1, cd(1.0 / 3.0, 0));
    } catch (const degenerate_eta_error &e) {
        EXPECT_NE(std::string(e.what()).find("r="), std::string::npos);
    }
    const auto B4 = make(4, cd(0, 1));
    EXPECT_THROW(fo_relations(B4, 2, cd(0.01)), std::invalid_argument);
    EXPECT_THROW(sklyanin_bracket(B4, 2), std::invalid_argument);
    try {
        sklyanin_bracket(B4, 2);
    } catch (const std::invalid_argument &e) {
        EXPECT_STREQ(e.what(), "gcd(n,k) must be 1");
    }
}

TEST(Sklyanin, FormulaIsSkewAsPrinted)
{
    // The printed formula for {x_j, x_i} is the negative of the one for {x_i, x_j}.
    for (auto [n, k] : {std::pair{3, 1}, {5, 2}, {7, 3}}) {
        const auto B = make(n, cd(0.3, 0.8));
        const auto b = sklyanin_bracket(B, k);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                const auto terms = sklyanin_terms(B, k, i, j);
                for (const auto &[key, v] : terms) {
                    EXPECT_LT(std::abs(v - b.coeff(i, j, key.first, key.second)), 1e-10);
                }
            }
        }
        EXPECT_EQ(b.coeff(2, 2, 0, 1), cd(0));
    }
}

TEST(Sklyanin, JacobiIdentity)
{
    for (auto [n, k] : {std::pair{3, 1}, {4, 1}, {5, 1}, {5, 2}, {7, 2}, {7, 3}, {4, 3}}) {
        EXPECT_LT(jacobi_defect(sklyanin_bracket(make(n, cd(0, 1)), k)), 1e-8) << n << "," << k;
    }
    EXPECT_LT(jacobi_defect(sklyanin_bracket(make(5, cd(0.3, 0.8)), 2)), 1e-8);
}

TEST(Sklyanin, CanonicalFormIsF)
{
    const auto B = make(3, cd(0, 1));
    const auto C = hn_canonical_extract(sklyanin_bracket(B, 1));
    EXPECT_LT(C.max_abs_difference(f_constants(B).as_hn_bracket()), 1e-10);
}

TEST(Semiclassical, TwoPointExtrapolation)
{
    // The two-point extrapolation leaves an O(η_1 η_2) error; at these η it sits near 2.4e-5.
    const auto B = make(3, cd(0, 1));
    const auto S = sklyanin_bracket(B, 1);
    const auto E = semiclassical_from_relations(B, 1, {cd(1e-3), cd(5e-4)});
    const double dev = E.max_abs_difference(S);
    EXPECT_LT(dev, 3e-5);
    // The raw single-η estimate is first order only.
    const auto raw = semiclassical_estimate(fo_relations(B, 1, cd(5e-4)));
    EXPECT_GT(raw.max_abs_difference(S), 10 * dev);
}

TEST(Semiclassical, ConvergenceOrder)
{
    const auto B = make(3, cd(0, 1));
    const auto S = sklyanin_bracket(B, 1);
    const std::vector<cd> etas{cd(1e-2), cd(1e-3), cd(1e-4)};
    const auto d = semiclassical_diagnostics(B, 1, etas);
    ASSERT_EQ(d.extrapolated.size(), 3u);
    std::vector<double> dev;
    for (const auto &e : d.extrapolated) {
        dev.push_back(e.max_abs_difference(S));
    }
    EXPECT_LT(dev[2], 1e-4);
    const double slope = (std::log(dev[0]) - std::log(dev[2])) / (std::log(1e-2) - std::log(1e-4));
    EXPECT_GE(slope, 1.0);
    // Raw estimates decay linearly in η.
    const double r0 = d.raw[0].max_abs_difference(S), r2 = d.raw[2].max_abs_difference(S);
    EXPECT_NEAR((std::log(r0) - std::log(r2)) / std::log(100.0), 1.0, 0.01);
    EXPECT_LT(semiclassical_from_relations(B, 1, etas).max_abs_difference(S), 1e-4);
}

TEST(Semiclassical, Errors)
{
    const auto B = make(3, cd(0, 1));
    EXPECT_THROW(semiclassical_from_relations(B, 1, {cd(1e-3), cd(1.0 / 3.0)}), degenerate_eta_error);
    EXPECT_THROW(semiclassical_from_relations(B, 1, {cd(1e-3)}), std::invalid_argument);
    EXPECT_THROW(semiclassical_from_relations(B, 1, {cd(1e-3), cd(1e-3)}), std::invalid_argument);
    // Points beyond the pole at 1/3 stop the increments from shrinking.
    EXPECT_THROW(semiclassical_from_relations(B, 1, {cd(0.01), cd(0.5), cd(0.6)}), verification_error);
}

TEST(Semiclassical, DependsOnK)
{
    const auto B = make(5, cd(0, 1));
    const std::vector<cd> etas{cd(1e-3), cd(5e-4)};
    const auto a = semiclassical_from_relations(B, 1, etas);
    const auto b = semiclassical_from_relations(B, 4, etas);
    EXPECT_GT(a.max_abs_difference(b), 1e-3);
    EXPECT_LT(semiclassical_from_relations(B, 2, etas).max_abs_difference(sklyanin_bracket(B, 2)), 1e-3);
}
