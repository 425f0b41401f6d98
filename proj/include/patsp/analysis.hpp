#ifndef PATSP_ANALYSIS_HPP
#define PATSP_ANALYSIS_HPP

#include "patsp/formulations.hpp"
#include "patsp/graph.hpp"
#include "patsp/linsys.hpp"
#include "patsp/parameters.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace patsp {

enum class Verdict { verified, refuted, skipped };
std::string to_string(Verdict verdict);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Outcome of one machine-checked statement. Certificates are JSON objects
/// that `recheck` can verify without repeating any search:
///   member   {system, point, member}
///   row      {system, tag, point, lhs, rhs}
///   implied  {system, row: {terms, rhs}, multipliers, exclude?}
///   facet    {system, tag, witness, strict}
/// where `system` is {"n", "formulation"} or {"linsys"}.
struct PropositionReport {
    std::string id;
    int n = 0;
    /// JSON object describing the parameters used.
    std::string params = "{}";
    Verdict verdict = Verdict::skipped;
    std::string reason;
    std::vector<Check> checks;
    std::vector<std::string> certificates;
    std::map<std::string, std::string> stats;
    double runtime_seconds = 0;

    void add_check(std::string name, bool passed, std::string detail = {});
    /// verified when there is at least one check and all passed.
    void conclude();
    void skip(std::string why);
};

/// Runtime is left out unless asked for, so that reports are reproducible.
std::string to_json(const PropositionReport &report, bool with_runtime = false);
PropositionReport report_from_json(const std::string &text);
std::string text_table(const std::vector<PropositionReport> &reports, bool with_runtime = true);

/// Re-verifies every certificate of a report; returns the first problem.
std::optional<std::string> recheck(const PropositionReport &report);

// ---------------------------------------------------------------------------
// Inclusion and comparison.

/// A system together with how `recheck` can rebuild it.
struct SystemRef {
    LinSys sys;
    std::string ref_json;
};

SystemRef formulation_ref(const ArcSpace &space, const FormulationId &id);
SystemRef inline_ref(LinSys sys);

struct InclusionCheck {
    bool included = false;
    std::string failing_row;
    /// A point of `a` (over x names) violating `failing_row`.
    std::map<std::string, Rat> witness;
    std::vector<std::string> certificates;
};

/// proj(a) within b on the variables b mentions. Every row of b must use only
/// variables of a. On success each row of b comes with an `implied`
/// certificate over a.
InclusionCheck certify_inclusion(const SystemRef &a, const LinSys &b);

enum class Relation { equal, a_inside_b, b_inside_a, incomparable };
std::string to_string(Relation relation);

struct Comparison {
    Relation relation = Relation::equal;
    /// In A and not in B, resp. in B and not in A (x over arc indices).
    std::optional<Point> a_not_b;
    std::optional<Point> b_not_a;
    std::vector<std::string> certificates;
};

/// Compares the x-projections of two formulations. Witness points are
/// re-verified with membership() before returning.
Comparison compare_pair(const ArcSpace &space, const FormulationId &a, const FormulationId &b);

// ---------------------------------------------------------------------------
// Propositions.

/// proj(Q) = P for one parameter (family d_mtz, d_dl or b_scf).
PropositionReport verify_projection(const ArcSpace &space, const FormulationId &id);

/// Integer points of P_AP inside the formulation are exactly the tours.
PropositionReport verify_validity(const ArcSpace &space, const FormulationId &id);

enum class CensusFamily { mtz, dl, scf };

/// Facet-hood (non-redundant and strict at the uniform point) of every family
/// row, compared against the expected predicate. Stats: rows, facets,
/// mismatches.
PropositionReport facet_census(const ArcSpace &space, CensusFamily family, const DVec *d,
                               const BVec *b);

enum class HullFamily { mtz, dl };

/// Projects the disjunctive lift of the local set over arc ij and checks
/// mutual inclusion with the stated hull rows.
PropositionReport verify_local_hull(HullFamily family, const Rat &d_ij, const Rat &d_ji);

enum class ClosureFamily { mtz, dl, scf, dl_on_vmtz };
std::string to_string(ClosureFamily family);

/// The stated closure system, and the intersection over the canonical vertices.
FormulationId closure_id(ClosureFamily family);
FormulationId vertex_intersection_id(int n, ClosureFamily family);

/// (i) intersection over canonical vertices equals the stated closure;
/// (ii) the closure lies in P(param) for sampled interior parameters;
/// (iii) points on closure rows lie in every sampled P(param), and points just
/// beyond a closure row are cut off by a sampled parameter or a vertex.
PropositionReport verify_closure(const ArcSpace &space, ClosureFamily family, std::uint64_t seed);

/// Chain witnesses on C = (2, ..., c+1) with the remaining nodes on the
/// cycle (1, c+2, ..., n). item: 3, 4 or 5.
Point chain_witness(const ArcSpace &space, int item, int c);

/// Inclusions of the closure chain, their collapse at n = 4, and the three
/// strictness witnesses for every 3 <= |C| <= n-2.
std::vector<PropositionReport> verify_chain(const ArcSpace &space);

/// d + eps*1 with eps = min_C (1 - sum_C d) / (2|C|) gives a strictly smaller
/// formulation.
PropositionReport verify_mtz_dominance(const ArcSpace &space, const DVec &d);

/// Inclusion P(d^MTZ + delta) in P(d^MTZ) forces equality, over `count`
/// sampled anti-symmetric delta keeping d^MTZ + delta in D.
PropositionReport verify_mtz_rigidity(const ArcSpace &space, std::uint64_t seed, int count);

/// P_DL(d) and P_DL(d + delta) are incomparable for anti-symmetric delta with
/// a nonzero long cycle.
PropositionReport verify_dl_incomparability(const ArcSpace &space, std::uint64_t seed, int count);

/// P_SCF(b) and P_SCF(b') are incomparable for distinct b, b' in B.
PropositionReport verify_scf_incomparability(const ArcSpace &space, std::uint64_t seed, int count);

// ---------------------------------------------------------------------------
// Optimization.

struct BoundRow {
    std::string label;
    Rat value;
};

struct BoundTable {
    std::vector<BoundRow> rows;
    /// Pairs (tighter, looser) whose bounds break a proven inclusion.
    std::vector<std::pair<std::string, std::string>> violations;
    bool monotone() const { return violations.empty(); }
};

/// Exact LP minimum of c.x over each formulation, then a check of every known
/// inclusion among the listed formulations. x-space rows are generated lazily,
/// which leaves the optimum unchanged.
BoundTable lp_bound_table(const ArcSpace &space, const Point &costs,
                          const std::vector<FormulationId> &ids);

enum class SolveStrategy { enumerate, branch_and_bound };

struct SolveResult {
    Cycle tour;
    Rat value;
    /// Branch-and-bound nodes processed (tours scanned when enumerating).
    long nodes = 0;
};

/// Exact ATSP optimum. Branch-and-bound takes its bounds from the LP over the
/// formulation's x-space rows, added lazily; its integer points must be tours.
SolveResult solve_atsp(const ArcSpace &space, const Point &costs, const FormulationId &id,
                       SolveStrategy strategy);

/// Every report of the desk-scale sweep at size n, in a fixed order. The
/// collapse report is only included at n = 4.
std::vector<PropositionReport> verify_paper(int n, std::uint64_t seed);

} // namespace patsp

#endif
