#ifndef PATSP_POLYHEDRA_HPP
#define PATSP_POLYHEDRA_HPP

#include "patsp/linsys.hpp"
#include "patsp/simplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace patsp {

/// Raised when an operation needs a feasible system and got an empty one.
class InfeasibleSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FmOptions {
    /// LP-prune redundant rows after every elimination step.
    bool prune = true;
    /// Abort (CapacityError) when an intermediate step exceeds this many rows.
    std::size_t max_rows = 50000;
};

/// Projects `sys` onto the variables it keeps, eliminating `eliminate`.
/// Equalities touching eliminated variables are substituted out first, sign
/// restrictions on eliminated variables become explicit rows, and the rest is
/// Fourier-Motzkin elimination, run separately on each block of eliminated
/// variables that share rows.
LinSys fourier_motzkin(const LinSys &sys, const std::vector<std::string> &eliminate,
                       const FmOptions &options = {});

/// Projection onto exactly `keep`, in that catalog order.
LinSys project_onto(const LinSys &sys, const std::vector<std::string> &keep,
                    const FmOptions &options = {});

struct RedundancyResult {
    bool redundant = false;
    /// max of the row's LHS over the other rows (absent when unbounded).
    std::optional<Rat> max_lhs;
    /// Non-redundant: a point feasible for the other rows that violates this one.
    Point witness;
    /// Redundant: multipliers on the other rows (this row's slot is 0) whose
    /// combination dominates the row.
    RowMultipliers dual;
};

/// Decides whether the inequality `tag` is implied by the remaining rows.
/// Throws InfeasibleSystemError on an empty system.
RedundancyResult is_redundant(const LinSys &sys, const std::string &tag);

/// Removes LP-redundant inequalities one at a time, keeping the first of any
/// group of equivalent rows. An infeasible system is returned unchanged.
LinSys prune_redundant(const LinSys &sys);

struct InclusionResult {
    bool included = false;
    /// Tag of the first row of B that fails over A.
    std::string failing_row;
    /// Point of A (over A's catalog) violating that row.
    Point witness;
    /// The same witness restricted to on_vars, keyed by name.
    std::map<std::string, Rat> witness_on_vars;
};

/// Decides proj(A) subset-of proj(B) on `on_vars`: each row of B is checked by
/// maximizing (and for equalities also minimizing) its LHS over A. Rows of B
/// must mention only on_vars; when B carries other variables it is first
/// projected with fourier_motzkin. Throws InfeasibleSystemError if A is empty.
InclusionResult includes(const LinSys &a, const LinSys &b, const std::vector<std::string> &on_vars);

/// Both inclusions hold.
bool equivalent(const LinSys &a, const LinSys &b, const std::vector<std::string> &on_vars);

} // namespace patsp

#endif
