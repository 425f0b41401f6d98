#ifndef PATSP_PROJECTION_HPP
#define PATSP_PROJECTION_HPP

#include "patsp/formulations.hpp"
#include "patsp/graph.hpp"
#include "patsp/linsys.hpp"
#include "patsp/parameters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace patsp {

/// x over arc indices, as produced by build_ap's catalog.
Point x_from_json(const ArcSpace &space, const std::string &text);
/// {"i,j": "p/q"} with every arc present.
std::string x_to_json(const ArcSpace &space, const Point &x);

/// Rows u_i - u_j + alpha_ij . x <= beta_ij for ij in A1; alpha[pos] and
/// beta[pos] are indexed by restricted-arc position, alpha terms by arc index.
struct PotentialRows {
    std::vector<Terms> alpha;
    std::vector<Rat> beta;
};

PotentialRows mtz_potential_rows(const ArcSpace &space, const DVec &d);
PotentialRows dl_potential_rows(const ArcSpace &space, const DVec &d);

struct PotentialLift {
    bool feasible = false;
    /// Indexed by node (entries 0 and 1 unused); u[anchor] = 0.
    std::vector<Rat> u;
    /// Otherwise: a cycle of A1 with negative cost beta - alpha . x.
    std::optional<Cycle> negative_cycle;
    Rat cycle_cost;
};

/// Bellman-Ford from `anchor` on arc costs c_ij = beta_ij - alpha_ij . x, with
/// u = -dist. Lifts are checked exactly before returning.
PotentialLift lift_potentials(const ArcSpace &space, const Point &x, const PotentialRows &rows,
                              int anchor = 2);

struct FlowLift {
    bool feasible = false;
    /// Flow per arc index.
    Point f;
    /// Otherwise: S in N1 with inflow sum x(delta-(S)) < b(S).
    std::optional<NodeSubset> deficient;
    Rat inflow;
    Rat demand;
};

/// Decides 0 <= f <= x with out - in = -b_i on N1. Requires x in P_AP.
FlowLift lift_flow(const ArcSpace &space, const Point &x, const BVec &b);

struct MembershipResult {
    bool member = false;
    /// {"type": "lift"|"negcycle"|"cut"|"row"|"farkas", "data": ...}
    std::string certificate;
};

/// Exact membership of x in the x-projection of a formulation. Parametric
/// families use the combinatorial oracles above; other extended systems are
/// decided by LP with x fixed; x-space systems by row evaluation.
MembershipResult membership(const ArcSpace &space, const FormulationId &id, const Point &x);

} // namespace patsp

#endif
