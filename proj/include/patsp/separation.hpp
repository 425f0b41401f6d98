#ifndef PATSP_SEPARATION_HPP
#define PATSP_SEPARATION_HPP

#include "patsp/graph.hpp"
#include "patsp/linsys.hpp"
#include "patsp/parameters.hpp"

#include <optional>
#include <string>

namespace patsp {

/// A violated row of one of the projected families. `tag` is the tag the
/// same row carries in the corresponding built system.
struct ViolatedRow {
    std::string family;
    std::string tag;
    std::optional<Cycle> cycle;
    std::optional<NodeSubset> subset;
    /// The lifted arc kl for closure DL rows, the node k for V_MTZ rows.
    std::optional<Arc> arc;
    std::optional<int> node;
    /// ">=" rows are cut rows; all others are "<=".
    bool at_least = false;
    Rat lhs;
    Rat rhs;

    Rat violation() const { return at_least ? rhs - lhs : lhs - rhs; }
};

std::string to_json(const ViolatedRow &row);

/// Circuit rows sum_C x <= |C| - 1: shortest cycle on weights 1 - x.
std::optional<ViolatedRow> separate_circuit(const ArcSpace &space, const Point &x);
/// Circuit rows sum_C x <= |C| - sum_C d: exhaustive over C1.
std::optional<ViolatedRow> separate_circuit(const ArcSpace &space, const Point &x, const DVec &d);

/// Cut rows x(delta+(S)) >= 1: a max-flow from every k in N1 to node 1.
std::optional<ViolatedRow> separate_cut(const ArcSpace &space, const Point &x);
/// Cut rows x(delta+(S)) >= b(S): exhaustive over S1.
std::optional<ViolatedRow> separate_cut(const ArcSpace &space, const Point &x, const BVec &b);

enum class DlMode {
    /// Closure rows over the DL vertices: one row per (C, kl in C).
    v_dl,
    /// Rows over the MTZ vertices: one row per (C, k in C).
    v_mtz,
    /// The rows of a single parameter d: one row per C.
    param,
};

/// Exhaustive over cycles with |C| >= 3 and the pair rows. `d` is required
/// in param mode and ignored otherwise.
std::optional<ViolatedRow> separate_dl_lifted(const ArcSpace &space, const Point &x, DlMode mode,
                                              const DVec *d = nullptr);

/// A cycle with d-weight above 1, if any (exhaustive; capped).
std::optional<Cycle> separate_dbar(const DVec &d);

} // namespace patsp

#endif
