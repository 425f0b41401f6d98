#include "patsp/formulations.hpp"
#include "patsp/polyhedra.hpp"
#include "patsp/simplex.hpp"

#include <gtest/gtest.h>

using namespace patsp;

namespace {

Point cover_point(const ArcSpace &space, const std::vector<int> &succ) {
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (int i = 1; i <= space.n(); ++i) {
        x[static_cast<std::size_t>(space.arc_index(i, succ[static_cast<std::size_t>(i)]))] = 1;
    }
    return x;
}

/// The system with every x variable pinned to `x`.
LinSys pinned(const LinSys &sys, const ArcSpace &space, const Point &x) {
    LinSys out = sys;
    for (int a = 0; a < space.num_arcs(); ++a) {
        out.add_equality({{out.variable(x_name(space.arc(a))), Rat(1)}},
                         x[static_cast<std::size_t>(a)], "pin" + to_string(space.arc(a)));
    }
    return out;
}

bool is_tour(const std::vector<int> &succ) { return cover_cycles(succ).size() == 1; }

/// Independent count of the enumerated circuit rows: every cycle of N1.
std::size_t brute_cycle_count(int n) { return static_cast<std::size_t>(count_restricted_cycles(n)); }

} // namespace

TEST(Formulations, AssignmentShape) {
    const ArcSpace space(4);
    const LinSys ap = build_ap(space);
    EXPECT_EQ(ap.num_variables(), 12);
    EXPECT_EQ(ap.equalities().size(), 8U);
    EXPECT_EQ(ap.inequalities().size(), 12U);
    for (const Variable &v : ap.variables()) {
        EXPECT_TRUE(v.nonneg);
    }
    EXPECT_EQ(ap.var(space.arc_index(2, 3)).name, "x[2,3]");
    EXPECT_TRUE(ap.has_tag("AP-out(1)"));
    EXPECT_TRUE(ap.has_tag("AP-in(4)"));
}

TEST(Formulations, RowCounts) {
    const ArcSpace space(5);
    EXPECT_EQ(build_dfj_clique(space).inequalities().size(), 20U + 11U);
    EXPECT_EQ(build_dfj_cut(space).inequalities().size(), 20U + 11U);
    EXPECT_EQ(build_circuit(space).inequalities().size(), 20U + brute_cycle_count(5));
    // 8 triangles + 6 four-cycles, each with one row per arc, plus 6 pairs.
    EXPECT_EQ(build_pbar_dl(space).inequalities().size(), 20U + 24U + 24U + 6U);
    EXPECT_EQ(build_cl_dl_on_vmtz(space).inequalities().size(), 20U + 24U + 24U + 6U);
    EXPECT_EQ(build_p_dl(space, d_mtz(5)).inequalities().size(), 20U + 14U + 6U);
}

TEST(Formulations, AuxiliaryCounts) {
    for (int n = 4; n <= 6; ++n) {
        const ArcSpace space(n);
        const int arcs = n * (n - 1);
        EXPECT_EQ(build_mcf(space).num_variables(), arcs + (n - 1) * n * (n - 1));
        EXPECT_EQ(build_q_mtz(space, d_mtz(n)).num_variables(), arcs + n - 1);
        EXPECT_EQ(build_qbar_mtz(space).num_variables(), arcs + (n - 1) * (n - 1));
        EXPECT_EQ(build_qbar_dl(space).num_variables(), arcs + (n - 1) * (n - 2) * (n - 1));
        EXPECT_EQ(build_qbar_scf(space).num_variables(), arcs + (n - 1) * arcs);
        EXPECT_EQ(build_rmtz(space).num_variables(), arcs + (n - 1) * (n - 2));
    }
    const ArcSpace space(5);
    const LinSys ef = build_ef_mtz(space, mtz_vertices(5));
    EXPECT_EQ(ef.num_variables(), 20 + 4 * 4);
    EXPECT_TRUE(ef.find_variable("u[0][2]").has_value());
    EXPECT_TRUE(ef.find_variable("u[3][5]").has_value());
    EXPECT_EQ(ef.equalities().size(), 10U);
    EXPECT_THROW(build_ef_mtz(space, {}), std::invalid_argument);
    EXPECT_THROW(build_ef_scf(space, {}), std::invalid_argument);
}

TEST(Formulations, RejectsBadParameters) {
    const ArcSpace space(5);
    DVec d = d_mtz(5);
    d.set(2, 3, Rat(-1));
    EXPECT_THROW(build_q_mtz(space, d), std::invalid_argument);
    EXPECT_THROW(build_p_dl(space, d), std::invalid_argument);
    EXPECT_THROW(build_q_mtz(space, d_mtz(4)), std::invalid_argument);
    BVec b = uniform_b(5);
    b.set(3, Rat(-1));
    EXPECT_THROW(build_p_scf(space, b), std::invalid_argument);
    // Boundary parameters are allowed.
    EXPECT_NO_THROW(build_q_mtz(space, DVec(5)));
}

TEST(Formulations, IntegerPointsAreTours) {
    // With parameters inside D (resp. B) each system admits exactly the tours
    // among the cycle covers, in x-space and after lifting.
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        const DVec d = sample_interior_d(n, 7);
        const BVec b = sample_interior_b(n, 7);
        const std::vector<LinSys> systems = {
            build_p_mtz(space, d),    build_q_mtz(space, d),     build_p_dl(space, d),
            build_q_dl(space, d),     build_p_scf(space, b),     build_q_scf(space, b),
            build_p_scf(space, b, true), build_dfj_clique(space), build_dfj_cut(space),
            build_circuit(space),     build_weak_circuit(space), build_weak_clique(space),
            build_lifted_weak_circuit(space), build_rmtz(space), build_l1rmtz(space),
            build_mcf(space),         build_classic_mtz(space),  build_classic_dl(space),
            build_classic_scf(space), build_pbar_dl(space),      build_cl_dl_on_vmtz(space),
            build_qbar_mtz(space),    build_qbar_dl(space),      build_qbar_scf(space),
        };
        for (const auto &succ : enumerate_cycle_covers(space)) {
            const Point x = cover_point(space, succ);
            const bool tour = is_tour(succ);
            for (std::size_t s = 0; s < systems.size(); ++s) {
                EXPECT_EQ(is_feasible(pinned(systems[s], space, x)), tour)
                    << "n=" << n << " system " << s;
            }
        }
    }
}

TEST(Formulations, BoundaryParameterAdmitsSubtours) {
    // At d = 0 the circuit rows reduce to the upper bounds, so a subtour that
    // avoids node 1 survives; any interior d cuts it off.
    const ArcSpace space(5);
    const Point cover = cover_point(space, {0, 2, 1, 4, 5, 3}); // (1,2)(3,4,5)
    EXPECT_TRUE(build_p_mtz(space, DVec(5)).contains(cover));
    EXPECT_TRUE(is_feasible(pinned(build_q_mtz(space, DVec(5)), space, cover)));
    EXPECT_FALSE(build_p_mtz(space, d_mtz(5)).contains(cover));
}

TEST(Formulations, ProjectionsMatchExtendedForms) {
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        const std::vector<std::string> xs = x_names(space);
        for (std::uint64_t seed : {1U, 2U}) {
            const DVec d = sample_interior_d(n, seed);
            EXPECT_TRUE(equivalent(build_q_mtz(space, d), build_p_mtz(space, d), xs)) << n;
            EXPECT_TRUE(equivalent(build_q_dl(space, d), build_p_dl(space, d), xs)) << n;
        }
        EXPECT_TRUE(equivalent(build_q_mtz(space, d_mtz(n)), build_p_mtz(space, d_mtz(n)), xs));
        const BVec b = sample_interior_b(n, 3);
        EXPECT_TRUE(equivalent(build_q_scf(space, b), build_p_scf(space, b), xs)) << n;
    }
}

TEST(Formulations, ProjectionOnBoundaryParameter) {
    const ArcSpace space(4);
    const std::vector<std::string> xs = x_names(space);
    const DVec d = mtz_vertices(4)[1];
    EXPECT_TRUE(equivalent(build_q_mtz(space, d), build_p_mtz(space, d), xs));
    EXPECT_TRUE(equivalent(build_q_dl(space, d), build_p_dl(space, d), xs));
    const BVec b = scf_vertices(4)[0];
    EXPECT_TRUE(equivalent(build_q_scf(space, b), build_p_scf(space, b), xs));
    EXPECT_TRUE(equivalent(build_p_scf(space, b), build_p_scf(space, b, true), xs));
}

TEST(Formulations, ClassicsAreSpecialCases) {
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        const std::vector<std::string> xs = x_names(space);
        EXPECT_TRUE(equivalent(build_classic_mtz(space), build_q_mtz(space, d_mtz(n)), xs));
        EXPECT_TRUE(equivalent(build_classic_dl(space), build_q_dl(space, d_mtz(n)), xs));
        EXPECT_TRUE(equivalent(build_classic_scf(space), build_q_scf(space, uniform_b(n)), xs));
        EXPECT_TRUE(equivalent(build_weak_circuit(space), build_p_mtz(space, d_mtz(n)), xs));
        EXPECT_TRUE(equivalent(build_lifted_weak_circuit(space), build_p_dl(space, d_mtz(n)), xs));
        EXPECT_TRUE(equivalent(build_weak_clique(space), build_p_scf(space, uniform_b(n)), xs));
    }
}

TEST(Formulations, ClassicRowsMatchScaledRows) {
    // Dividing a classic row by n-1 (and rescaling u) gives the generalized
    // row at d = 1/(n-1).
    const int n = 6;
    const ArcSpace space(n);
    const LinSys classic = build_classic_mtz(space);
    const LinSys general = build_q_mtz(space, d_mtz(n));
    for (const Arc &arc : space.restricted_arcs()) {
        const Row &c = classic.row("MTZ(" + to_string(arc) + ")");
        const Row &g = general.row("genMTZ(" + to_string(arc) + ")");
        ASSERT_EQ(c.terms.size(), g.terms.size());
        for (std::size_t t = 0; t < c.terms.size(); ++t) {
            const bool is_x = c.terms[t].first < space.num_arcs();
            const Rat scale = is_x ? make_rat(1, n - 1) : Rat(1);
            EXPECT_EQ(c.terms[t].second * scale, g.terms[t].second);
        }
        EXPECT_EQ(c.rhs / (n - 1), g.rhs);
    }
}

TEST(Formulations, ClosuresMatchTheirExtendedForms) {
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        const std::vector<std::string> xs = x_names(space);
        EXPECT_TRUE(equivalent(build_qbar_mtz(space), build_pbar_mtz(space), xs)) << n;
        EXPECT_TRUE(equivalent(build_ef_mtz(space, mtz_vertices(n)), build_pbar_mtz(space), xs)) << n;
        EXPECT_TRUE(equivalent(build_rmtz(space), build_circuit(space), xs)) << n;
        EXPECT_TRUE(equivalent(build_ef_dl(space, mtz_vertices(n)), build_cl_dl_on_vmtz(space), xs))
            << n;
        EXPECT_TRUE(equivalent(build_l1rmtz(space), build_cl_dl_on_vmtz(space), xs)) << n;
        EXPECT_TRUE(equivalent(build_pbar_scf(space), build_pbar_scf(space, true), xs)) << n;
    }
    const ArcSpace space(4);
    const std::vector<std::string> xs = x_names(space);
    EXPECT_TRUE(equivalent(build_qbar_dl(space), build_pbar_dl(space), xs));
    EXPECT_TRUE(equivalent(build_ef_dl(space, dl_vertices(4)), build_pbar_dl(space), xs));
    EXPECT_TRUE(equivalent(build_qbar_scf(space), build_pbar_scf(space), xs));
    EXPECT_TRUE(equivalent(build_mcf(space), build_dfj_clique(space), xs));
}

TEST(Formulations, DispatchAndValidation) {
    const ArcSpace space(4);
    FormulationId id;
    id.family = Family::d_mtz;
    EXPECT_THROW(build(space, id), std::invalid_argument);
    id.d = d_mtz(4);
    EXPECT_EQ(build(space, id).num_variables(), 12);
    id.space = VarSpace::extended;
    EXPECT_EQ(build(space, id).num_variables(), 15);
    id.b = uniform_b(4);
    EXPECT_THROW(build(space, id), std::invalid_argument);

    FormulationId ef;
    ef.family = Family::ef_mtz;
    EXPECT_THROW(build(space, ef), std::invalid_argument);
    ef.d_list = mtz_vertices(4);
    const LinSys projected = build(space, ef, {.prune = true});
    EXPECT_EQ(projected.num_variables(), 12);
    EXPECT_TRUE(equivalent(projected, build_circuit(space), x_names(space)));

    for (Family f : all_families()) {
        EXPECT_EQ(parse_family(to_string(f)), f);
    }
    EXPECT_THROW(parse_family("nope"), std::invalid_argument);
}

TEST(Formulations, PruningDropsFullLengthRows) {
    const ArcSpace space(5);
    const LinSys pruned = build(space, {.family = Family::circuit}, {.prune = true});
    for (const Cycle &c : enumerate_cycles(space, 4, 4)) {
        EXPECT_FALSE(pruned.has_tag("circuit" + c.to_string()));
    }
    for (const Cycle &c : enumerate_cycles(space, 2, 3)) {
        EXPECT_TRUE(pruned.has_tag("circuit" + c.to_string()));
    }
    EXPECT_TRUE(equivalent(pruned, build_circuit(space), x_names(space)));
}

TEST(Formulations, JsonRoundTrip) {
    const ArcSpace space(4);
    const LinSys sys = build_q_dl(space, sample_interior_d(4, 5));
    const LinSys back = linsys_from_json(to_json(sys));
    ASSERT_EQ(back.num_variables(), sys.num_variables());
    ASSERT_EQ(back.num_rows(), sys.num_rows());
    for (const Row &r : sys.inequalities()) {
        EXPECT_EQ(back.row(r.tag).terms, r.terms);
        EXPECT_EQ(back.row(r.tag).rhs, r.rhs);
    }
    EXPECT_EQ(to_json(back), to_json(sys));
    EXPECT_THROW(linsys_from_json("{\"variables\":[]"), ParseError);
    EXPECT_THROW(linsys_from_json(R"({"variables":[],"equalities":[{"tag":"a","terms":{"y":"1"},"rhs":"0"}],"inequalities":[]})"),
                 ParseError);
}
