#include "patsp/analysis.hpp"
#include "patsp/projection.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <random>

using namespace patsp;

namespace {

void expect_verified(const PropositionReport &r) {
    EXPECT_EQ(r.verdict, Verdict::verified) << r.id << "\n" << text_table({r});
    EXPECT_FALSE(recheck(r).has_value()) << r.id << ": " << recheck(r).value_or("");
}

Point random_costs(const ArcSpace &space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Point c;
    for (int a = 0; a < space.num_arcs(); ++a) {
        c.push_back(Rat(1 + static_cast<long>(rng() % 100)));
    }
    return c;
}

std::string stat(const PropositionReport &r, const std::string &key) { return r.stats.at(key); }

} // namespace

TEST(Reports, JsonRoundTripAndRecheck) {
    const PropositionReport r = verify_local_hull(HullFamily::mtz, make_rat(1, 3), make_rat(1, 4));
    expect_verified(r);
    const std::string text = to_json(r);
    EXPECT_EQ(to_json(report_from_json(text)), text);
    EXPECT_EQ(text.find("runtime"), std::string::npos);
    EXPECT_NE(to_json(r, true).find("runtime_seconds"), std::string::npos);
    EXPECT_THROW(report_from_json("{\"id\":1}"), ParseError);

    // Shrinking every multiplier of an implied certificate breaks it.
    PropositionReport tampered = r;
    bool changed = false;
    for (std::string &c : tampered.certificates) {
        auto j = nlohmann::ordered_json::parse(c);
        if (j["kind"] == "implied" && !j["multipliers"].empty()) {
            for (auto &[k, v] : j["multipliers"].items()) {
                v = to_string(parse_rat(v.get<std::string>()) / 2);
            }
            c = j.dump();
            changed = true;
            break;
        }
    }
    ASSERT_TRUE(changed);
    EXPECT_TRUE(recheck(tampered).has_value());
}

TEST(Reports, TextTableListsFailures) {
    PropositionReport r;
    r.id = "demo";
    r.n = 5;
    r.add_check("first", true);
    r.add_check("second", false, "why");
    r.conclude();
    EXPECT_EQ(r.verdict, Verdict::refuted);
    const std::string table = text_table({r}, false);
    EXPECT_NE(table.find("refuted"), std::string::npos);
    EXPECT_NE(table.find("failed: second (why)"), std::string::npos);
    PropositionReport empty;
    empty.conclude();
    EXPECT_EQ(empty.verdict, Verdict::skipped);
}

TEST(Inclusion, CertificatesAndWitnesses) {
    const ArcSpace space(5);
    const SystemRef circuit = formulation_ref(space, {.family = Family::circuit});
    const SystemRef ap = formulation_ref(space, {.family = Family::ap});
    const InclusionCheck in = certify_inclusion(circuit, ap.sys);
    EXPECT_TRUE(in.included);
    EXPECT_FALSE(in.certificates.empty());
    const InclusionCheck out = certify_inclusion(ap, circuit.sys);
    ASSERT_FALSE(out.included);
    EXPECT_EQ(out.failing_row.rfind("circuit", 0), 0U);
    const Point w = ap.sys.point_from(out.witness);
    EXPECT_TRUE(ap.sys.contains(w));
    EXPECT_GT(circuit.sys.row(out.failing_row).lhs(w), circuit.sys.row(out.failing_row).rhs);
}

TEST(Inclusion, ComparePairWitnessesReverify) {
    const ArcSpace space(5);
    const Comparison c = compare_pair(space, {.family = Family::cl_scf}, {.family = Family::cl_mtz});
    EXPECT_EQ(c.relation, Relation::a_inside_b);
    ASSERT_TRUE(c.b_not_a);
    EXPECT_TRUE(membership(space, {.family = Family::cl_mtz}, *c.b_not_a).member);
    EXPECT_FALSE(membership(space, {.family = Family::cl_scf}, *c.b_not_a).member);
    const Comparison same = compare_pair(space, {.family = Family::dfj_cut}, {.family = Family::dfj_clique});
    EXPECT_EQ(same.relation, Relation::equal);
}

TEST(Propositions, ProjectionAndValidity) {
    for (int n = 4; n <= 5; ++n) {
        const ArcSpace space(n);
        const DVec d = sample_interior_d(n, 11);
        const BVec b = sample_interior_b(n, 11);
        for (const FormulationId &id : std::vector<FormulationId>{
                 {.family = Family::d_mtz, .d = d}, {.family = Family::d_dl, .d = d}, {.family = Family::b_scf, .b = b}}) {
            expect_verified(verify_validity(space, id));
            if (n == 4) {
                expect_verified(verify_projection(space, id));
            }
        }
    }
    const PropositionReport v = verify_validity(ArcSpace(5), {.family = Family::d_mtz, .d = d_mtz(5)});
    EXPECT_EQ(stat(v, "tours_accepted"), "24");
    EXPECT_EQ(stat(v, "subtour_covers_rejected"), "20");
}

TEST(Propositions, ProjectionAtFiveNodes) {
    const ArcSpace space(5);
    expect_verified(verify_projection(space, {.family = Family::d_mtz, .d = sample_interior_d(5, 2)}));
    expect_verified(verify_projection(space, {.family = Family::b_scf, .b = scf_vertices(5)[1]}));
}

TEST(Propositions, FacetCensusCounts) {
    const ArcSpace space(5);
    const DVec d = sample_interior_d(5, 3);
    // Interior d: the 6 two-cycles and 8 three-cycles of N1 = {2,3,4,5}.
    const PropositionReport mtz = facet_census(space, CensusFamily::mtz, &d, nullptr);
    expect_verified(mtz);
    EXPECT_EQ(stat(mtz, "facets"), "14");
    EXPECT_EQ(stat(mtz, "rows"), "20");
    const PropositionReport dl = facet_census(space, CensusFamily::dl, &d, nullptr);
    expect_verified(dl);
    EXPECT_EQ(stat(dl, "facets"), "14");
    // At a vertex d^k only the cycles through k with |C| <= 3 keep a facet:
    // three 2-cycles and six 3-cycles.
    const DVec dk = mtz_vertices(5)[0];
    const PropositionReport vertex = facet_census(space, CensusFamily::mtz, &dk, nullptr);
    expect_verified(vertex);
    EXPECT_EQ(stat(vertex, "facets"), "9");
    // b^k: subsets of N1 with at least two nodes, containing k, other than N1.
    const BVec bk = scf_vertices(5)[2];
    const PropositionReport scf = facet_census(space, CensusFamily::scf, nullptr, &bk);
    expect_verified(scf);
    EXPECT_EQ(stat(scf, "facets"), "6");
    const BVec b = sample_interior_b(5, 3);
    const PropositionReport scf_in = facet_census(space, CensusFamily::scf, nullptr, &b);
    expect_verified(scf_in);
    EXPECT_EQ(stat(scf_in, "rows"), "11");
    EXPECT_EQ(stat(scf_in, "facets"), "10");
}

TEST(Propositions, LocalHulls) {
    const std::vector<std::pair<Rat, Rat>> pairs = {
        {make_rat(1, 3), make_rat(1, 4)}, {Rat(0), Rat(0)}, {make_rat(1, 2), make_rat(1, 2)},
        {make_rat(2, 5), make_rat(3, 5)}, {make_rat(1, 7), Rat(0)}};
    for (const auto &[dij, dji] : pairs) {
        expect_verified(verify_local_hull(HullFamily::mtz, dij, dji));
        expect_verified(verify_local_hull(HullFamily::dl, dij, dji));
    }
}

TEST(Propositions, ClosuresAtFourNodes) {
    const ArcSpace space(4);
    for (ClosureFamily f : {ClosureFamily::mtz, ClosureFamily::dl, ClosureFamily::scf, ClosureFamily::dl_on_vmtz}) {
        expect_verified(verify_closure(space, f, 1));
    }
}

TEST(Propositions, ClosuresAtFiveNodes) {
    const ArcSpace space(5);
    for (ClosureFamily f : {ClosureFamily::mtz, ClosureFamily::dl, ClosureFamily::scf, ClosureFamily::dl_on_vmtz}) {
        const PropositionReport r = verify_closure(space, f, 2);
        expect_verified(r);
        EXPECT_NE(stat(r, "boundary_probes"), "0");
    }
}

TEST(Propositions, ChainWitnessValues) {
    const ArcSpace space(5);
    const LinSys ap = build_ap(space);
    for (int item = 3; item <= 5; ++item) {
        EXPECT_TRUE(ap.contains(chain_witness(space, item, 3))) << item;
    }
    const ArcSpace seven(7);
    for (int c = 3; c <= 5; ++c) {
        for (int item = 3; item <= 5; ++item) {
            EXPECT_TRUE(build_ap(seven).contains(chain_witness(seven, item, c))) << item << " " << c;
        }
    }
    // Item 5 at n = 5: 12/5 on the arcs inside {2,3,4}.
    const Point x = chain_witness(space, 5, 3);
    Rat inside;
    for (int a : arcs_within(space, NodeSubset({2, 3, 4}))) {
        inside += x[static_cast<std::size_t>(a)];
    }
    EXPECT_EQ(inside, make_rat(12, 5));
    EXPECT_THROW(chain_witness(space, 3, 4), std::invalid_argument);
    EXPECT_THROW(chain_witness(space, 6, 3), std::invalid_argument);
}

TEST(Propositions, ChainAtFourAndFive) {
    const auto four = verify_chain(ArcSpace(4));
    ASSERT_EQ(four.size(), 5U);
    expect_verified(four[0]);
    expect_verified(four[1]);
    for (std::size_t k = 2; k < 5; ++k) {
        EXPECT_EQ(four[k].verdict, Verdict::skipped);
    }
    for (const auto &r : verify_chain(ArcSpace(5))) {
        if (r.id == "chain-collapse") {
            EXPECT_EQ(r.verdict, Verdict::skipped);
        } else {
            expect_verified(r);
        }
    }
}

TEST(Propositions, ChainAtSix) {
    for (const auto &r : verify_chain(ArcSpace(6))) {
        if (r.id != "chain-collapse") {
            expect_verified(r);
        }
    }
}

TEST(Propositions, DominanceRigidityIncomparability) {
    const ArcSpace space(5);
    expect_verified(verify_mtz_dominance(space, sample_interior_d(5, 4)));
    expect_verified(verify_mtz_dominance(space, d_mtz(5) * make_rat(1, 2)));
    const PropositionReport rigid = verify_mtz_rigidity(space, 9, 3);
    expect_verified(rigid);
    EXPECT_EQ(stat(rigid, "samples"), "3");
    expect_verified(verify_dl_incomparability(space, 5, 2));
    expect_verified(verify_scf_incomparability(space, 5, 2));
}

TEST(Optimization, BoundTableIsMonotone) {
    const ArcSpace space(5);
    const std::vector<FormulationId> ids = {
        {.family = Family::ap},
        {.family = Family::d_mtz, .d = d_mtz(5)},
        {.family = Family::cl_mtz},
        {.family = Family::cl_dl_on_vmtz},
        {.family = Family::cl_dl},
        {.family = Family::cl_scf},
        {.family = Family::scf},
    };
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const BoundTable t = lp_bound_table(space, random_costs(space, seed), ids);
        EXPECT_TRUE(t.monotone());
        ASSERT_EQ(t.rows.size(), ids.size());
        EXPECT_LE(t.rows[0].value, t.rows[5].value);
    }
    const BoundTable zero = lp_bound_table(space, Point(20, Rat(0)), ids);
    for (const BoundRow &r : zero.rows) {
        EXPECT_EQ(r.value, Rat(0)) << r.label;
    }
    EXPECT_THROW(lp_bound_table(space, Point(3), ids), std::invalid_argument);
}

TEST(Optimization, BranchAndBoundMatchesEnumeration) {
    // c_ij = i + j: every tour costs twice the node sum.
    const ArcSpace four(4);
    Point sum_costs;
    for (const Arc &arc : four.arcs()) {
        sum_costs.push_back(Rat(arc.tail + arc.head));
    }
    EXPECT_EQ(solve_atsp(four, sum_costs, {.family = Family::circuit}, SolveStrategy::enumerate).value, Rat(20));
    EXPECT_EQ(solve_atsp(four, sum_costs, {.family = Family::circuit}, SolveStrategy::branch_and_bound).value,
              Rat(20));
    for (int n = 5; n <= 6; ++n) {
        const ArcSpace space(n);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const Point c = random_costs(space, seed * 17 + static_cast<std::uint64_t>(n));
            const SolveResult exact = solve_atsp(space, c, {.family = Family::ap}, SolveStrategy::enumerate);
            for (const FormulationId &id : std::vector<FormulationId>{
                     {.family = Family::circuit},
                     {.family = Family::dfj_cut},
                     {.family = Family::d_mtz, .d = d_mtz(n)},
                     {.family = Family::b_scf, .b = uniform_b(n)}}) {
                const SolveResult bb = solve_atsp(space, c, id, SolveStrategy::branch_and_bound);
                EXPECT_EQ(bb.value, exact.value) << id.label();
                EXPECT_EQ(bb.tour.size(), n);
                Rat v;
                for (const Arc &arc : bb.tour.arcs()) {
                    v += c[static_cast<std::size_t>(space.arc_index(arc))];
                }
                EXPECT_EQ(v, bb.value);
            }
        }
    }
}

TEST(Propositions, DlIncomparabilityNeedsAShortLongCycle) {
    // At n = 4 every cycle with three arcs spans N1, so its row is no facet
    // and the perturbed formulation coincides with the original one.
    const PropositionReport r = verify_dl_incomparability(ArcSpace(4), 5, 1);
    EXPECT_EQ(r.verdict, Verdict::refuted);
    EXPECT_FALSE(recheck(r).has_value());
    const DVec d = sample_interior_d(4, 5);
    const Perturbation p = antisymmetric_perturbation(d, 5, true, PerturbationSupport::triangle);
    EXPECT_TRUE(p.has_nonzero_long_cycle);
    EXPECT_EQ(compare_pair(ArcSpace(4), {.family = Family::d_dl, .d = d}, {.family = Family::d_dl, .d = d + p.delta})
                  .relation,
              Relation::equal);
}
