#include "patsp/simplex.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace patsp;

namespace {

// Solves the square system M z = r exactly; returns nothing when singular.
std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> m, std::vector<Rat> r) {
    const std::size_t k = m.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && sgn(m[piv][col]) == 0) {
            ++piv;
        }
        if (piv == k) {
            return std::nullopt;
        }
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (std::size_t i = 0; i < k; ++i) {
            if (i == col || sgn(m[i][col]) == 0) {
                continue;
            }
            const Rat f = m[i][col] / m[col][col];
            for (std::size_t j = col; j < k; ++j) {
                m[i][j] -= f * m[col][j];
            }
            r[i] -= f * r[col];
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        r[i] /= m[i][i];
    }
    return r;
}

// Vertex-enumeration oracle for max c.x over a bounded polytope {Ax <= b}:
// every choice of `dim` tight rows gives a candidate vertex.
std::optional<Rat> brute_force_max(const std::vector<std::vector<Rat>> &a, const std::vector<Rat> &b,
                                   const std::vector<Rat> &c) {
    const std::size_t dim = c.size();
    const std::size_t m = a.size();
    std::optional<Rat> best;
    std::vector<std::size_t> pick(dim);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
        if (depth == dim) {
            std::vector<std::vector<Rat>> mm;
            std::vector<Rat> rr;
            for (auto p : pick) {
                mm.push_back(a[p]);
                rr.push_back(b[p]);
            }
            auto z = solve_square(mm, rr);
            if (!z) {
                return;
            }
            for (std::size_t i = 0; i < m; ++i) {
                Rat lhs = 0;
                for (std::size_t j = 0; j < dim; ++j) {
                    lhs += a[i][j] * (*z)[j];
                }
                if (lhs > b[i]) {
                    return;
                }
            }
            Rat val = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                val += c[j] * (*z)[j];
            }
            if (!best || val > *best) {
                best = val;
            }
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return best;
}

} // namespace

TEST(Simplex, BoxLp) {
    LinSys sys;
    const int x = sys.add_variable("x", true);
    sys.add_inequality({{x, Rat(1)}}, Rat(1), "ub");
    const auto r = solve_lp(sys, std::map<std::string, Rat>{{"x", Rat(1)}}, Sense::maximize);
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_EQ(r.value, 1);
    EXPECT_EQ(r.point[0], 1);
    const auto lo = solve_lp(sys, std::map<std::string, Rat>{{"x", Rat(1)}}, Sense::minimize);
    EXPECT_EQ(lo.value, 0);
}

TEST(Simplex, FreeLineIsUnbounded) {
    LinSys sys;
    const int x = sys.add_variable("x");
    const int y = sys.add_variable("y");
    sys.add_inequality({{x, Rat(1)}, {y, Rat(-1)}}, Rat(0), "a");
    sys.add_inequality({{x, Rat(-1)}, {y, Rat(1)}}, Rat(0), "b");
    const auto r = solve_lp(sys, std::map<std::string, Rat>{{"x", Rat(1)}, {"y", Rat(1)}}, Sense::maximize);
    ASSERT_EQ(r.status, LpStatus::unbounded);
    EXPECT_TRUE(check_unbounded_ray(sys, {{x, Rat(1)}, {y, Rat(1)}}, Sense::maximize, r.ray));
}

TEST(Simplex, InfeasibleGivesFarkasRay) {
    LinSys sys;
    const int x = sys.add_variable("x", true);
    const int y = sys.add_variable("y");
    sys.add_inequality({{x, Rat(1)}, {y, Rat(1)}}, Rat(-1), "a");
    sys.add_equality({{y, Rat(1)}}, Rat(2), "e");
    const auto r = solve_lp(sys, Terms{}, Sense::maximize);
    ASSERT_EQ(r.status, LpStatus::infeasible);
    EXPECT_TRUE(check_farkas_certificate(sys, r.multipliers));
    EXPECT_FALSE(is_feasible(sys));
}

TEST(Simplex, UnknownObjectiveVariableIsAnArgumentError) {
    LinSys sys;
    sys.add_variable("x");
    EXPECT_THROW(solve_lp(sys, std::map<std::string, Rat>{{"y", Rat(1)}}, Sense::maximize),
                 std::invalid_argument);
}

TEST(Simplex, EqualitiesWithNegativeRhsAndDependentRows) {
    LinSys sys;
    const int x = sys.add_variable("x", true);
    const int y = sys.add_variable("y", true);
    const int z = sys.add_variable("z");
    sys.add_equality({{x, Rat(1)}, {y, Rat(1)}}, Rat(1), "e1");
    sys.add_equality({{x, Rat(2)}, {y, Rat(2)}}, Rat(2), "e2");
    sys.add_equality({{z, Rat(1)}, {x, Rat(-1)}}, make_rat(-1, 2), "e3");
    const Terms obj{{z, Rat(3)}, {y, Rat(-1)}};
    const auto r = solve_lp(sys, obj, Sense::maximize);
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_EQ(r.value, make_rat(3, 2));
    EXPECT_TRUE(check_optimality_certificate(sys, obj, Sense::maximize, r));
}

TEST(Simplex, RandomPolytopesAgreeWithVertexEnumeration) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> rhs(0, 6);
    for (int trial = 0; trial < 150; ++trial) {
        const int dim = 2 + trial % 2;
        LinSys sys;
        std::vector<std::vector<Rat>> a;
        std::vector<Rat> b;
        for (int j = 0; j < dim; ++j) {
            sys.add_variable("x" + std::to_string(j));
        }
        // A box keeps every instance bounded.
        for (int j = 0; j < dim; ++j) {
            for (int s : {1, -1}) {
                std::vector<Rat> row(static_cast<std::size_t>(dim), Rat(0));
                row[static_cast<std::size_t>(j)] = s;
                a.push_back(row);
                b.push_back(Rat(5));
            }
        }
        const int extra = 2 + trial % 4;
        for (int k = 0; k < extra; ++k) {
            std::vector<Rat> row;
            for (int j = 0; j < dim; ++j) {
                row.push_back(Rat(coef(rng)));
            }
            a.push_back(row);
            b.push_back(Rat(rhs(rng)) - Rat(trial % 3 == 0 ? 3 : 0));
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            Terms t;
            for (int j = 0; j < dim; ++j) {
                t.emplace_back(j, a[i][static_cast<std::size_t>(j)]);
            }
            sys.add_inequality(t, b[i], "r" + std::to_string(i));
        }
        std::vector<Rat> c;
        Terms obj;
        for (int j = 0; j < dim; ++j) {
            c.push_back(Rat(coef(rng)));
            obj.emplace_back(j, c.back());
        }
        const auto expected = brute_force_max(a, b, c);
        for (auto rule : {PivotRule::dantzig_then_bland, PivotRule::bland}) {
            const auto r = solve_lp(sys, obj, Sense::maximize, rule);
            if (!expected) {
                EXPECT_EQ(r.status, LpStatus::infeasible) << trial;
            } else {
                ASSERT_EQ(r.status, LpStatus::optimal) << trial;
                EXPECT_EQ(r.value, *expected) << trial;
                EXPECT_TRUE(check_optimality_certificate(sys, obj, Sense::maximize, r));
            }
        }
    }
}

TEST(Simplex, Deterministic) {
    LinSys sys;
    for (int j = 0; j < 4; ++j) {
        sys.add_variable("x" + std::to_string(j), true);
    }
    // Many optimal vertices: any split of the budget is optimal.
    sys.add_inequality({{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}, {3, Rat(1)}}, Rat(2), "budget");
    const Terms obj{{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}, {3, Rat(1)}};
    const auto first = solve_lp(sys, obj, Sense::maximize);
    for (int k = 0; k < 5; ++k) {
        const auto again = solve_lp(sys, obj, Sense::maximize);
        EXPECT_EQ(again.point, first.point);
        EXPECT_EQ(again.multipliers.inequality, first.multipliers.inequality);
    }
}
