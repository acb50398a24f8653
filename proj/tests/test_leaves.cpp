#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <ellpoisson/leaves.hpp>

using namespace ellpoisson;
using cd = std::complex<double>;

TEST(EndDim, LocalExamples)
{
    EXPECT_EQ(end_dim_local({{1, 1}}), 1);
    EXPECT_EQ(end_dim_local({{1, 2}}), 4);
    EXPECT_EQ(end_dim_local({{2, 1}}), 2);
    // O_p ⊕ O_{2p}: 1 + 2 + 2·min(1,2).
    EXPECT_EQ(end_dim_local({{1, 1}, {2, 1}}), 5);
}

TEST(EndDim, SheafExamples)
{
    EXPECT_EQ(end_dim_sheaf(TorsionType{}), 1);
    EXPECT_EQ(end_dim_sheaf(TorsionType{{{{1, 1}}}}), 3);
    EXPECT_EQ(end_dim_sheaf(TorsionType{{{{1, 2}}}}), 7);
    EXPECT_THROW(end_dim_sheaf(TorsionType{{LocalType{{1, 0}}}}), std::invalid_argument);
}

TEST(LeafDimension, Examples)
{
    EXPECT_EQ(leaf_dimension(3, TorsionType{}).expected_dim, 6);
    EXPECT_EQ(leaf_dimension(3, TorsionType{{{{1, 1}}, {{1, 1}}}}).expected_dim, 2);
    EXPECT_EQ(leaf_dimension(3, TorsionType{{{{1, 2}}}}).expected_dim, 0);
    const auto r = leaf_dimension(3, TorsionType{{{{1, 3}}}});
    EXPECT_EQ(r.end_dim_torsion, 9);
    EXPECT_EQ(r.expected_dim, -6);
    EXPECT_FALSE(r.feasible);
    EXPECT_THROW(leaf_dimension(1, TorsionType{{{{1, 2}}}}), std::invalid_argument);
}

TEST(Strata, NEqualsOne)
{
    const auto s = enumerate_strata(1);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].l, 0);
    EXPECT_EQ(s[0].expected_dim, 2);
    EXPECT_EQ(s[1].l, 1);
    EXPECT_EQ(s[1].expected_dim, 0);
}

TEST(Strata, ProjectivePlaneTable)
{
    const auto s = enumerate_strata(3);
    std::vector<std::pair<int, long>> tagged;
    for (const auto &r : s) {
        if (!r.table_row.empty()) {
            tagged.push_back({r.l, r.expected_dim});
        }
    }
    const std::vector<std::pair<int, long>> want{{0, 6}, {1, 4}, {2, 2}, {2, 0}, {3, 0}};
    EXPECT_EQ(tagged, want);
    // O_{2p} is its own record with d_F = 2.
    const auto it = std::find_if(s.begin(), s.end(), [](const LeafRecord &r) { return r.label == "O_{2p}"; });
    ASSERT_NE(it, s.end());
    EXPECT_EQ(it->expected_dim, 2);
    EXPECT_TRUE(it->table_row.empty());
}

TEST(Strata, CountsMatchMultisetsOfPartitions)
{
    // Number of multisets of partitions with total size l: 1, 1, 3, 6, 14, 27, 58.
    const std::vector<std::size_t> per_l{1, 1, 3, 6, 14, 27, 58};
    const auto s = enumerate_strata(6);
    std::vector<std::size_t> count(7, 0);
    std::set<std::string> labels;
    for (const auto &r : s) {
        ++count[static_cast<std::size_t>(r.l)];
        labels.insert(r.label);
    }
    EXPECT_EQ(count, per_l);
    EXPECT_EQ(labels.size(), s.size());
}

TEST(Strata, Inequalities)
{
    for (int n = 1; n <= 6; ++n) {
        for (const auto &r : enumerate_strata(n)) {
            EXPECT_GE(end_dim_sheaf(r.torsion), 2 * r.l + 1) << r.label;
            if (r.feasible) {
                EXPECT_GE(r.expected_dim, 0);
                EXPECT_LE(r.expected_dim, 2 * n - 2 * r.l) << r.label;
            }
        }
    }
}

TEST(Divisor, TrivialCases)
{
    const cd tau(0.2, 1.1);
    DivisorDatum<double> D{{{cd(0.1, 0.2), 1}, {cd(0.4, 0.1), 2}}};
    auto c = divisor_constraint(3, cd(0), D, D, tau);
    EXPECT_TRUE(c.holds);
    EXPECT_LT(c.defect, 1e-15);
    // Equal sums modulo Γ.
    DivisorDatum<double> Z{{{cd(0.9, 0.4) + 1.0 + tau, 1}, {cd(0.0, 0.0), 2}}};
    c = divisor_constraint(3, cd(0), D, Z, tau);
    EXPECT_TRUE(c.holds) << c.defect;
    EXPECT_THROW(divisor_constraint(3, cd(0), D, DivisorDatum<double>{{{cd(0), 1}}}, tau), std::invalid_argument);
}

TEST(Divisor, ConstructedAndPerturbed)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const cd tau(0.3, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3;
        const cd eta(0.05 * u(rng), 0.05 * u(rng));
        DivisorDatum<double> D, Z;
        for (int k = 0; k < 3; ++k) {
            D.points.push_back({cd(u(rng), u(rng)), 1});
            Z.points.push_back({cd(u(rng), u(rng)), 1});
        }
        Z.points[0].first += D.sum() - Z.sum() - 3.0 * n * eta;
        // Lattice translates of individual points do not matter.
        Z.points[1].first += 2.0 - tau;
        const auto ok = divisor_constraint(n, eta, D, Z, tau);
        EXPECT_TRUE(ok.holds);
        EXPECT_LT(ok.defect, 1e-9);
        Z.points[2].first += 0.01;
        const auto bad = divisor_constraint(n, eta, D, Z, tau);
        EXPECT_FALSE(bad.holds);
        EXPECT_NEAR(bad.defect, 0.01, 1e-9);
    }
}

TEST(Divisor, CommonTranslationInvariance)
{
    const cd tau(0, 1);
    DivisorDatum<double> D{{{cd(0.1, 0.3), 1}, {cd(0.7, 0.2), 1}}};
    DivisorDatum<double> Z{{{cd(0.2, 0.1), 1}, {cd(0.4, 0.9), 1}}};
    const auto base = divisor_constraint(2, cd(0.01, 0.02), D, Z, tau);
    for (auto &p : D.points) {
        p.first += 3.0 + 2.0 * tau;
    }
    for (auto &p : Z.points) {
        p.first += 3.0 + 2.0 * tau;
    }
    EXPECT_NEAR(divisor_constraint(2, cd(0.01, 0.02), D, Z, tau).defect, base.defect, 1e-12);
}

TEST(Kronecker, Dims)
{
    EXPECT_EQ(kronecker_dims(1, 3), (std::array<int, 3>{3, 7, 3}));
    EXPECT_EQ(kronecker_dims(2, 0), (std::array<int, 3>{0, 2, 0}));
    EXPECT_EQ(kronecker_dims(3, 5), (std::array<int, 3>{5, 13, 5}));
    try {
        kronecker_dims(1, 3, 1);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("not specified"), std::string::npos);
    }
}
