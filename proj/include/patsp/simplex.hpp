#ifndef PATSP_SIMPLEX_HPP
#define PATSP_SIMPLEX_HPP

#include "patsp/linsys.hpp"

#include <map>
#include <string>
#include <vector>

namespace patsp {

enum class Sense { minimize, maximize };
enum class LpStatus { optimal, unbounded, infeasible };

std::string to_string(LpStatus status);

/// Multipliers on the rows of a LinSys, in row order. Inequality multipliers
/// are nonnegative, equality multipliers are free.
///
/// For an optimal result they certify the bound: with c' = c for
/// maximization and c' = -c for minimization, y^T E + z^T G dominates c'
/// (>= on nonnegative variables, == on free ones) and y.e + z.g equals the
/// optimum of max c'x. For an infeasible result they form a Farkas ray:
/// y^T E + z^T G is >= 0 on nonnegative variables, 0 on free ones, and
/// y.e + z.g < 0.
struct RowMultipliers {
    std::vector<Rat> equality;
    std::vector<Rat> inequality;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    /// Optimal objective value in the requested sense.
    Rat value;
    /// Optimal point; a feasible point when unbounded.
    Point point;
    /// Improving recession direction when unbounded.
    Point ray;
    RowMultipliers multipliers;
};

enum class PivotRule {
    /// Largest reduced cost, falling back to Bland's rule after any
    /// degenerate pivot. Terminates for the same reason Bland's rule does.
    dantzig_then_bland,
    bland,
};

/// Exact two-phase primal simplex. Every returned certificate is re-checked
/// exactly before returning; a failed check throws std::logic_error.
LpResult solve_lp(const LinSys &sys, const Terms &objective, Sense sense,
                  PivotRule rule = PivotRule::dantzig_then_bland);

LpResult solve_lp(const LinSys &sys, const std::map<std::string, Rat> &objective, Sense sense,
                  PivotRule rule = PivotRule::dantzig_then_bland);

/// True when the rows and sign restrictions admit a point.
bool is_feasible(const LinSys &sys);

/// Exact checks of the certificate semantics above.
bool check_optimality_certificate(const LinSys &sys, const Terms &objective, Sense sense,
                                  const LpResult &result);
bool check_farkas_certificate(const LinSys &sys, const RowMultipliers &mult);
bool check_unbounded_ray(const LinSys &sys, const Terms &objective, Sense sense,
                         const Point &ray);

} // namespace patsp

#endif
