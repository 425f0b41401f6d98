#include "patsp/projection.hpp"
#include "patsp/simplex.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <random>

using namespace patsp;

namespace {

Point cover_point(const ArcSpace &space, const std::vector<int> &succ) {
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (int i = 1; i <= space.n(); ++i) {
        x[static_cast<std::size_t>(space.arc_index(i, succ[static_cast<std::size_t>(i)]))] = 1;
    }
    return x;
}

Point tour_point(const ArcSpace &space, const std::vector<int> &order) {
    std::vector<int> succ(static_cast<std::size_t>(space.n() + 1), 0);
    for (std::size_t p = 0; p < order.size(); ++p) {
        succ[static_cast<std::size_t>(order[p])] = order[(p + 1) % order.size()];
    }
    return cover_point(space, succ);
}

Rat x_at(const ArcSpace &space, const Point &x, int i, int j) {
    return x[static_cast<std::size_t>(space.arc_index(i, j))];
}

/// Random point of P_AP: a convex combination of a few cycle covers.
Point random_ap_point(const ArcSpace &space, std::mt19937_64 &rng) {
    const auto covers = enumerate_cycle_covers(space);
    const int parts = 1 + static_cast<int>(rng() % 3);
    std::vector<long> w;
    long total = 0;
    for (int p = 0; p < parts; ++p) {
        w.push_back(1 + static_cast<long>(rng() % 5));
        total += w.back();
    }
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (int p = 0; p < parts; ++p) {
        const Point c = cover_point(space, covers[rng() % covers.size()]);
        for (std::size_t a = 0; a < x.size(); ++a) {
            x[a] += c[a] * make_rat(w[static_cast<std::size_t>(p)], total);
        }
    }
    return x;
}

bool extended_feasible(const ArcSpace &space, const LinSys &sys, const Point &x) {
    LinSys pinned = sys;
    for (int a = 0; a < space.num_arcs(); ++a) {
        pinned.add_equality({{pinned.variable(x_name(space.arc(a))), Rat(1)}},
                            x[static_cast<std::size_t>(a)], "pin" + to_string(space.arc(a)));
    }
    return is_feasible(pinned);
}

std::string member_type(const MembershipResult &r) {
    return nlohmann::json::parse(r.certificate).at("type").get<std::string>();
}

} // namespace

TEST(LiftPotentials, TourUnderUniformParameter) {
    const ArcSpace space(4);
    const Point x = tour_point(space, {1, 2, 3, 4});
    const PotentialLift lift = lift_potentials(space, x, mtz_potential_rows(space, d_mtz(4)));
    ASSERT_TRUE(lift.feasible);
    EXPECT_EQ(lift.u[2], Rat(0));
    EXPECT_EQ(lift.u[3], make_rat(1, 3));
    EXPECT_EQ(lift.u[4], make_rat(2, 3));
    // The 4 -> 2 row is tight: u4 - u2 = 2/3 = 1 - 1/3.
    EXPECT_EQ(lift.u[4] - lift.u[2], 1 - make_rat(1, 3));
}

TEST(LiftPotentials, TwoSubtourGivesNegativeCycle) {
    const ArcSpace space(4);
    const Point x = cover_point(space, {0, 4, 3, 2, 1}); // (1,4)(2,3)
    const DVec d = d_mtz(4);
    const PotentialLift lift = lift_potentials(space, x, mtz_potential_rows(space, d));
    ASSERT_FALSE(lift.feasible);
    ASSERT_TRUE(lift.negative_cycle);
    EXPECT_EQ(*lift.negative_cycle, Cycle({2, 3}));
    EXPECT_EQ(x_at(space, x, 2, 3) + x_at(space, x, 3, 2), Rat(2));
    EXPECT_GT(Rat(2), 2 - d.cycle_sum(*lift.negative_cycle));
    EXPECT_EQ(lift.cycle_cost, -d.cycle_sum(*lift.negative_cycle));
}

TEST(LiftPotentials, UniformPointLiftsForInteriorParameters) {
    for (int n = 4; n <= 7; ++n) {
        const ArcSpace space(n);
        const Point x(static_cast<std::size_t>(space.num_arcs()), make_rat(1, n - 1));
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const DVec d = sample_interior_d(n, seed);
            EXPECT_TRUE(lift_potentials(space, x, mtz_potential_rows(space, d)).feasible);
            EXPECT_TRUE(lift_potentials(space, x, dl_potential_rows(space, d)).feasible);
        }
    }
}

TEST(LiftPotentials, AnchorChangesOnlyShiftForTours) {
    // Under d^MTZ the N1 part of a tour closes into a zero-cost cycle, which
    // pins the potentials up to a constant.
    const ArcSpace space(6);
    for (const Cycle &tour : enumerate_tours(space)) {
        const Point x = tour_point(space, std::vector<int>(tour.nodes().begin(), tour.nodes().end()));
        const PotentialRows rows = mtz_potential_rows(space, d_mtz(6));
        const PotentialLift a = lift_potentials(space, x, rows, 2);
        const PotentialLift b = lift_potentials(space, x, rows, 5);
        ASSERT_TRUE(a.feasible && b.feasible);
        const Rat shift = a.u[2] - b.u[2];
        for (int i = 3; i <= 6; ++i) {
            EXPECT_EQ(a.u[static_cast<std::size_t>(i)] - b.u[static_cast<std::size_t>(i)], shift);
        }
    }
}

TEST(LiftPotentials, RejectsMalformedRows) {
    const ArcSpace space(4);
    const Point x(12, Rat(0));
    PotentialRows rows = mtz_potential_rows(space, d_mtz(4));
    rows.beta.pop_back();
    EXPECT_THROW(lift_potentials(space, x, rows), std::invalid_argument);
    EXPECT_THROW(lift_potentials(space, x, mtz_potential_rows(space, d_mtz(4)), 1), std::invalid_argument);
}

TEST(LiftFlow, TourUnderUniformDemand) {
    const ArcSpace space(4);
    const Point x = tour_point(space, {1, 2, 3, 4});
    const FlowLift lift = lift_flow(space, x, uniform_b(4));
    ASSERT_TRUE(lift.feasible);
    EXPECT_EQ(lift.f[static_cast<std::size_t>(space.arc_index(1, 2))], Rat(1));
    EXPECT_EQ(lift.f[static_cast<std::size_t>(space.arc_index(2, 3))], make_rat(2, 3));
    EXPECT_EQ(lift.f[static_cast<std::size_t>(space.arc_index(3, 4))], make_rat(1, 3));
    EXPECT_EQ(lift.f[static_cast<std::size_t>(space.arc_index(4, 1))], Rat(0));
}

TEST(LiftFlow, SubtourGivesDeficientCut) {
    const ArcSpace space(4);
    const Point x = cover_point(space, {0, 4, 3, 2, 1});
    const FlowLift lift = lift_flow(space, x, scf_vertices(4)[0]);
    ASSERT_FALSE(lift.feasible);
    ASSERT_TRUE(lift.deficient);
    EXPECT_EQ(*lift.deficient, NodeSubset({2, 3}));
    EXPECT_EQ(lift.inflow, Rat(0));
    EXPECT_EQ(lift.demand, Rat(1));
}

TEST(LiftFlow, UnitDemandFollowsTourPrefix) {
    const ArcSpace space(6);
    const std::vector<int> order = {1, 4, 2, 6, 3, 5};
    const Point x = tour_point(space, order);
    for (int k = 2; k <= 6; ++k) {
        BVec b(6);
        b.set(k, Rat(1));
        const FlowLift lift = lift_flow(space, x, b);
        ASSERT_TRUE(lift.feasible);
        const auto stop = std::find(order.begin(), order.end(), k) - order.begin();
        for (std::size_t p = 0; p < order.size(); ++p) {
            const int i = order[p];
            const int j = order[(p + 1) % order.size()];
            const Rat expect = static_cast<long>(p) < stop ? Rat(1) : Rat(0);
            EXPECT_EQ(lift.f[static_cast<std::size_t>(space.arc_index(i, j))], expect);
        }
    }
}

TEST(LiftFlow, RejectsPointsOutsideAssignment) {
    const ArcSpace space(4);
    EXPECT_THROW(lift_flow(space, Point(12, Rat(0)), uniform_b(4)), std::invalid_argument);
}

TEST(Membership, ClosureWitnesses) {
    const ArcSpace space(5);
    const Cycle c({2, 3, 4});
    // 1/2 on C and its reverse, 1 on the complementary 2-cycle (1,5).
    Point x4(20, Rat(0));
    for (const Arc &arc : c.arcs()) {
        x4[static_cast<std::size_t>(space.arc_index(arc))] = make_rat(1, 2);
        x4[static_cast<std::size_t>(space.arc_index(arc.reversed()))] = make_rat(1, 2);
    }
    x4[static_cast<std::size_t>(space.arc_index(1, 5))] = 1;
    x4[static_cast<std::size_t>(space.arc_index(5, 1))] = 1;
    EXPECT_TRUE(membership(space, {.family = Family::cl_dl_on_vmtz}, x4).member);
    const MembershipResult out = membership(space, {.family = Family::cl_dl}, x4);
    ASSERT_FALSE(out.member);
    const auto cert = nlohmann::json::parse(out.certificate);
    EXPECT_EQ(cert["type"], "row");
    EXPECT_EQ(cert["data"]["lhs"], "5/2");
    EXPECT_EQ(cert["data"]["rhs"], "2");

    // 2/3 on C, 1/3 on its reverse.
    Point x3 = x4;
    for (const Arc &arc : c.arcs()) {
        x3[static_cast<std::size_t>(space.arc_index(arc))] = make_rat(2, 3);
        x3[static_cast<std::size_t>(space.arc_index(arc.reversed()))] = make_rat(1, 3);
    }
    EXPECT_TRUE(membership(space, {.family = Family::cl_mtz}, x3).member);
    const MembershipResult out3 = membership(space, {.family = Family::cl_dl_on_vmtz}, x3);
    ASSERT_FALSE(out3.member);
    const auto cert3 = nlohmann::json::parse(out3.certificate);
    EXPECT_EQ(cert3["data"]["lhs"], "7/3");
    EXPECT_EQ(cert3["data"]["rhs"], "2");
}

TEST(Membership, ToursBelongEverywhere) {
    const ArcSpace space(5);
    const Point x = tour_point(space, {1, 3, 5, 2, 4});
    std::vector<FormulationId> ids;
    for (Family f : all_families()) {
        if (is_parametric(f)) {
            continue;
        }
        ids.push_back({.family = f});
        ids.push_back({.family = f, .space = VarSpace::extended});
    }
    ids.push_back({.family = Family::d_mtz, .d = sample_interior_d(5, 1)});
    ids.push_back({.family = Family::d_dl, .d = sample_interior_d(5, 2)});
    ids.push_back({.family = Family::b_scf, .b = sample_interior_b(5, 3)});
    ids.push_back({.family = Family::ef_mtz, .d_list = mtz_vertices(5)});
    ids.push_back({.family = Family::ef_dl, .d_list = dl_vertices(5)});
    ids.push_back({.family = Family::ef_scf, .b_list = scf_vertices(5)});
    for (const FormulationId &id : ids) {
        const MembershipResult r = membership(space, id, x);
        EXPECT_TRUE(r.member) << id.label() << " " << r.certificate;
    }
}

TEST(Membership, PointOutsideAssignmentFailsOnRow) {
    const ArcSpace space(4);
    const MembershipResult r =
        membership(space, {.family = Family::d_mtz, .d = d_mtz(4)}, Point(12, Rat(0)));
    EXPECT_FALSE(r.member);
    EXPECT_EQ(member_type(r), "row");
}

TEST(Membership, OraclesAgreeWithExtendedLp) {
    const ArcSpace space(4);
    std::mt19937_64 rng(2024);
    int members = 0;
    int outsiders = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const DVec d = sample_interior_d(4, seed);
        const BVec b = sample_interior_b(4, seed);
        const std::vector<std::pair<FormulationId, LinSys>> cases = {
            {{.family = Family::d_mtz, .d = d}, build_q_mtz(space, d)},
            {{.family = Family::d_dl, .d = d}, build_q_dl(space, d)},
            {{.family = Family::b_scf, .b = b}, build_q_scf(space, b)},
        };
        for (const auto &[id, sys] : cases) {
            for (int trial = 0; trial < 100; ++trial) {
                const Point x = random_ap_point(space, rng);
                const bool member = membership(space, id, x).member;
                EXPECT_EQ(member, extended_feasible(space, sys, x)) << id.label();
                (member ? members : outsiders)++;
            }
        }
    }
    EXPECT_GT(members, 50);
    EXPECT_GT(outsiders, 50);
}

TEST(Membership, CertificatesViolateProjectedRows) {
    std::mt19937_64 rng(99);
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const DVec d = sample_interior_d(n, seed + 10);
            const BVec b = sample_interior_b(n, seed + 10);
            const LinSys pm = build_p_mtz(space, d);
            const LinSys pd = build_p_dl(space, d);
            const LinSys ps = build_p_scf(space, b);
            for (int trial = 0; trial < 30; ++trial) {
                const Point x = random_ap_point(space, rng);
                const PotentialLift m = lift_potentials(space, x, mtz_potential_rows(space, d));
                EXPECT_EQ(m.feasible, pm.contains(x));
                if (!m.feasible) {
                    const Row &row = pm.row("circuit" + m.negative_cycle->to_string());
                    EXPECT_EQ(row.lhs(x) - row.rhs, -m.cycle_cost);
                }
                const PotentialLift dl = lift_potentials(space, x, dl_potential_rows(space, d));
                EXPECT_EQ(dl.feasible, pd.contains(x));
                if (!dl.feasible) {
                    const Cycle &c = *dl.negative_cycle;
                    if (c.size() >= 3) {
                        const Row &row = pd.row("dlcycle" + c.to_string());
                        EXPECT_EQ(row.lhs(x) - row.rhs, -dl.cycle_cost);
                    } else {
                        // The two rows of a 2-cycle add up to a multiple of the pair row.
                        const int i = c.nodes()[0];
                        const int j = c.nodes()[1];
                        const Rat scale = 2 - d.at(i, j) - d.at(j, i);
                        const Row &row = pd.row("pair(" + std::to_string(i) + "," + std::to_string(j) + ")");
                        EXPECT_EQ(scale * (row.lhs(x) - row.rhs), -dl.cycle_cost);
                    }
                }
                const FlowLift f = lift_flow(space, x, b);
                EXPECT_EQ(f.feasible, ps.contains(x));
                if (!f.feasible && f.deficient->size() >= 2) {
                    const Row &row = ps.row("cut" + f.deficient->to_string());
                    EXPECT_EQ(row.lhs(x) - row.rhs, f.demand - f.inflow);
                }
            }
        }
    }
}

TEST(XJson, RoundTripAndErrors) {
    const ArcSpace space(4);
    const Point x = tour_point(space, {1, 3, 2, 4});
    EXPECT_EQ(x_from_json(space, x_to_json(space, x)), x);
    EXPECT_EQ(x_from_json(space, R"({"1,2": "1/2", "2,1": 1})")[static_cast<std::size_t>(space.arc_index(1, 2))],
              make_rat(1, 2));
    EXPECT_THROW(x_from_json(space, R"({"1,1": "1"})"), ParseError);
    EXPECT_THROW(x_from_json(space, R"({"1;2": "1"})"), ParseError);
    EXPECT_THROW(x_from_json(space, R"([1,2])"), ParseError);
    EXPECT_THROW(x_from_json(space, R"({"1,2": 0.5})"), ParseError);
}
