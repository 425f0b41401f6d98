#include "patsp/polyhedra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace patsp;

TEST(FourierMotzkin, IntervalFromLiftedBox) {
    // {0 <= u <= x, x <= 1} projects to {0 <= x <= 1}.
    LinSys sys;
    const int x = sys.add_variable("x");
    const int u = sys.add_variable("u");
    sys.add_inequality({{u, Rat(1)}, {x, Rat(-1)}}, Rat(0), "u<=x");
    sys.add_inequality({{u, Rat(-1)}}, Rat(0), "u>=0");
    sys.add_inequality({{x, Rat(1)}}, Rat(1), "x<=1");
    const LinSys p = fourier_motzkin(sys, {"u"});
    ASSERT_EQ(p.num_variables(), 1);
    // Rational grid sweep: membership must match the interval exactly.
    for (int k = -8; k <= 16; ++k) {
        const Rat value = make_rat(k, 8);
        const bool inside = value >= 0 && value <= 1;
        EXPECT_EQ(p.contains(Point{value}), inside) << to_string(value);
    }
}

TEST(FourierMotzkin, EliminatingNothingIsEquivalent) {
    LinSys sys;
    const int x = sys.add_variable("x", true);
    const int y = sys.add_variable("y");
    sys.add_inequality({{x, Rat(1)}, {y, Rat(1)}}, Rat(3), "a");
    sys.add_inequality({{x, Rat(1)}, {y, Rat(-2)}}, Rat(1), "b");
    sys.add_inequality({{y, Rat(-1)}}, Rat(2), "c");
    const LinSys p = fourier_motzkin(sys, {});
    EXPECT_TRUE(equivalent(sys, p, {"x", "y"}));
}

TEST(FourierMotzkin, SubstitutesEqualities) {
    // x = u + w, u, w in [0,1] projects to x in [0,2].
    LinSys sys;
    const int x = sys.add_variable("x");
    const int u = sys.add_variable("u", true);
    const int w = sys.add_variable("w", true);
    sys.add_equality({{x, Rat(1)}, {u, Rat(-1)}, {w, Rat(-1)}}, Rat(0), "sum");
    sys.add_inequality({{u, Rat(1)}}, Rat(1), "u");
    sys.add_inequality({{w, Rat(1)}}, Rat(1), "w");
    const LinSys p = fourier_motzkin(sys, {"u", "w"});
    EXPECT_TRUE(p.contains(Point{Rat(2)}));
    EXPECT_TRUE(p.contains(Point{Rat(0)}));
    EXPECT_FALSE(p.contains(Point{make_rat(-1, 100)}));
    EXPECT_FALSE(p.contains(Point{make_rat(201, 100)}));
    EXPECT_EQ(p.inequalities().size(), 2U);
}

TEST(FourierMotzkin, InfeasibleProjectionStaysEmpty) {
    LinSys sys;
    const int x = sys.add_variable("x");
    const int u = sys.add_variable("u");
    sys.add_inequality({{u, Rat(1)}, {x, Rat(-1)}}, Rat(-1), "a");
    sys.add_inequality({{u, Rat(-1)}, {x, Rat(1)}}, Rat(0), "b");
    const LinSys p = fourier_motzkin(sys, {"u"});
    EXPECT_FALSE(is_feasible(p));
}

TEST(FourierMotzkin, SoundOnRandomSystems) {
    // Property: a point is in the FM projection iff the lifted system with
    // the point fixed is feasible.
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> small(-6, 6);
    for (int trial = 0; trial < 6; ++trial) {
        LinSys sys;
        const int nx = 2;
        const int nu = 3;
        for (int j = 0; j < nx; ++j) {
            sys.add_variable("x" + std::to_string(j));
        }
        for (int j = 0; j < nu; ++j) {
            sys.add_variable("u" + std::to_string(j), j == 0);
        }
        for (int j = 0; j < nx + nu; ++j) {
            sys.add_inequality({{j, Rat(1)}}, Rat(4), "ub" + std::to_string(j));
            sys.add_inequality({{j, Rat(-1)}}, Rat(4), "lb" + std::to_string(j));
        }
        for (int k = 0; k < 5; ++k) {
            Terms t;
            for (int j = 0; j < nx + nu; ++j) {
                t.emplace_back(j, Rat(coef(rng)));
            }
            sys.add_inequality(t, Rat(small(rng) + 3), "r" + std::to_string(k));
        }
        sys.add_equality({{2, Rat(1)}, {3, Rat(1)}, {0, Rat(-1)}}, Rat(0), "link");
        const LinSys p = fourier_motzkin(sys, {"u0", "u1", "u2"});
        for (int s = 0; s < 200; ++s) {
            Point pt{make_rat(small(rng), 1 + s % 3), make_rat(small(rng), 1 + s % 2)};
            LinSys fixed = sys;
            fixed.add_equality({{0, Rat(1)}}, pt[0], "fix0");
            fixed.add_equality({{1, Rat(1)}}, pt[1], "fix1");
            EXPECT_EQ(p.contains(pt), is_feasible(fixed)) << trial << " " << s;
        }
    }
}

TEST(Redundancy, DominatedBound) {
    LinSys sys;
    const int x = sys.add_variable("x");
    sys.add_inequality({{x, Rat(1)}}, Rat(1), "x<=1");
    sys.add_inequality({{x, Rat(1)}}, Rat(2), "x<=2");
    const auto r = is_redundant(sys, "x<=2");
    EXPECT_TRUE(r.redundant);
    EXPECT_EQ(r.dual.inequality, (std::vector<Rat>{Rat(1), Rat(0)}));
    const auto s = is_redundant(sys, "x<=1");
    EXPECT_FALSE(s.redundant);
    EXPECT_GT(s.witness[0], 1);
    EXPECT_LE(s.witness[0], 2);
}

TEST(Redundancy, UnboundedWitnessViolatesRow) {
    LinSys sys;
    const int x = sys.add_variable("x", true);
    sys.add_inequality({{x, Rat(1)}}, Rat(7), "cap");
    const auto r = is_redundant(sys, "cap");
    EXPECT_FALSE(r.redundant);
    EXPECT_FALSE(r.max_lhs.has_value());
    EXPECT_GT(r.witness[0], 7);
}

TEST(Redundancy, ErrorsOnInfeasibleSystemAndUnknownTag) {
    LinSys sys;
    const int x = sys.add_variable("x");
    sys.add_inequality({{x, Rat(1)}}, Rat(-1), "a");
    sys.add_inequality({{x, Rat(-1)}}, Rat(0), "b");
    EXPECT_THROW(is_redundant(sys, "a"), InfeasibleSystemError);
    EXPECT_THROW(is_redundant(sys, "zzz"), std::invalid_argument);
}

TEST(Redundancy, PruneKeepsOneOfEquivalentRows) {
    LinSys sys;
    const int x = sys.add_variable("x");
    sys.add_inequality({{x, Rat(1)}}, Rat(1), "first");
    sys.add_inequality({{x, Rat(2)}}, Rat(2), "second");
    sys.add_inequality({{x, Rat(-1)}}, Rat(0), "lower");
    const LinSys p = prune_redundant(sys);
    ASSERT_EQ(p.inequalities().size(), 2U);
    EXPECT_TRUE(p.has_tag("first"));
    EXPECT_TRUE(p.has_tag("lower"));
}

TEST(Inclusion, ReflexiveAndStrict) {
    LinSys big;
    const int x = big.add_variable("x", true);
    const int y = big.add_variable("y", true);
    big.add_inequality({{x, Rat(1)}, {y, Rat(1)}}, Rat(2), "sum");
    LinSys small = big;
    small.add_inequality({{x, Rat(1)}}, Rat(1), "x<=1");
    EXPECT_TRUE(includes(big, big, {"x", "y"}).included);
    EXPECT_TRUE(includes(small, big, {"x", "y"}).included);
    const auto r = includes(big, small, {"x", "y"});
    ASSERT_FALSE(r.included);
    EXPECT_EQ(r.failing_row, "x<=1");
    EXPECT_TRUE(big.contains(r.witness));
    EXPECT_FALSE(small.contains(r.witness));
}

TEST(Inclusion, ProjectsAuxiliaryVariablesOfTheRightSide) {
    // B = {(x,u): 0 <= u <= x <= 1} projects to [0,1]; A = [0,1/2].
    LinSys b;
    const int x = b.add_variable("x");
    const int u = b.add_variable("u", true);
    b.add_inequality({{u, Rat(1)}, {x, Rat(-1)}}, Rat(0), "u<=x");
    b.add_inequality({{x, Rat(1)}}, Rat(1), "x<=1");
    LinSys a;
    const int ax = a.add_variable("x");
    a.add_inequality({{ax, Rat(2)}}, Rat(1), "x<=1/2");
    a.add_inequality({{ax, Rat(-1)}}, Rat(0), "x>=0");
    EXPECT_TRUE(includes(a, b, {"x"}).included);
    const auto back = includes(b, a, {"x"});
    EXPECT_FALSE(back.included);
    EXPECT_GT(back.witness_on_vars.at("x"), make_rat(1, 2));
}
