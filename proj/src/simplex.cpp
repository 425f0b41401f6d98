#include "patsp/simplex.hpp"

#include <optional>
#include <stdexcept>

namespace patsp {

std::string to_string(LpStatus status) {
    switch (status) {
    case LpStatus::optimal:
        return "optimal";
    case LpStatus::unbounded:
        return "unbounded";
    case LpStatus::infeasible:
        return "infeasible";
    }
    return "unknown";
}

namespace {

enum class ColumnKind { plus, minus, slack, artificial };

struct Column {
    ColumnKind kind;
    int ref; // variable index for plus/minus, row index otherwise
};

/// Dense tableau in standard form: rows are B^-1 [A | b], plus a reduced-cost
/// row whose last entry is minus the current objective.
class Tableau {
public:
    Tableau(const LinSys &sys, PivotRule rule) : sys_(sys), rule_(rule) {
        const auto eqs = sys.equalities();
        const auto ins = sys.inequalities();
        m_ = static_cast<int>(eqs.size() + ins.size());
        for (int v = 0; v < sys.num_variables(); ++v) {
            plus_col_.push_back(static_cast<int>(cols_.size()));
            cols_.push_back({ColumnKind::plus, v});
            if (!sys.var(v).nonneg) {
                minus_col_.push_back(static_cast<int>(cols_.size()));
                cols_.push_back({ColumnKind::minus, v});
            } else {
                minus_col_.push_back(-1);
            }
        }
        flip_.assign(static_cast<std::size_t>(m_), false);
        identity_col_.assign(static_cast<std::size_t>(m_), -1);
        for (int i = 0; i < m_; ++i) {
            const Row &r = row_of(i);
            flip_[static_cast<std::size_t>(i)] = sgn(r.rhs) < 0;
        }
        for (int i = 0; i < m_; ++i) {
            if (!is_equality(i)) {
                slack_col_.push_back(static_cast<int>(cols_.size()));
                cols_.push_back({ColumnKind::slack, i});
            } else {
                slack_col_.push_back(-1);
            }
        }
        for (int i = 0; i < m_; ++i) {
            if (is_equality(i) || flip_[static_cast<std::size_t>(i)]) {
                identity_col_[static_cast<std::size_t>(i)] = static_cast<int>(cols_.size());
                cols_.push_back({ColumnKind::artificial, i});
            } else {
                identity_col_[static_cast<std::size_t>(i)] = slack_col_[static_cast<std::size_t>(i)];
            }
        }
        ncols_ = static_cast<int>(cols_.size());
        width_ = ncols_ + 1;
        cells_.assign(static_cast<std::size_t>(m_ + 1) * static_cast<std::size_t>(width_), Rat(0));
        basis_.assign(static_cast<std::size_t>(m_), -1);
        for (int i = 0; i < m_; ++i) {
            const Row &r = row_of(i);
            const bool f = flip_[static_cast<std::size_t>(i)];
            for (const auto &[v, c] : r.terms) {
                at(i, plus_col_[static_cast<std::size_t>(v)]) = f ? Rat(-c) : c;
                if (int mc = minus_col_[static_cast<std::size_t>(v)]; mc >= 0) {
                    at(i, mc) = f ? c : Rat(-c);
                }
            }
            if (int sc = slack_col_[static_cast<std::size_t>(i)]; sc >= 0) {
                at(i, sc) = f ? -1 : 1;
            }
            at(i, identity_col_[static_cast<std::size_t>(i)]) = 1;
            at(i, ncols_) = f ? Rat(-r.rhs) : r.rhs;
            basis_[static_cast<std::size_t>(i)] = identity_col_[static_cast<std::size_t>(i)];
        }
    }

    LpResult solve(const Terms &objective, Sense sense) {
        // Internally minimize cost . z, where max c'x == -min cost . z.
        std::vector<Rat> cost(static_cast<std::size_t>(ncols_), Rat(0));
        for (const auto &[v, c] : objective) {
            if (v < 0 || v >= sys_.num_variables()) {
                throw std::out_of_range("objective refers to variable index " + std::to_string(v));
            }
            const Rat cp = sense == Sense::maximize ? Rat(c) : Rat(-c);
            cost[static_cast<std::size_t>(plus_col_[static_cast<std::size_t>(v)])] -= cp;
            if (int mc = minus_col_[static_cast<std::size_t>(v)]; mc >= 0) {
                cost[static_cast<std::size_t>(mc)] += cp;
            }
        }

        LpResult result;
        // Phase I
        std::vector<Rat> phase1(static_cast<std::size_t>(ncols_), Rat(0));
        bool any_artificial = false;
        for (int j = 0; j < ncols_; ++j) {
            if (cols_[static_cast<std::size_t>(j)].kind == ColumnKind::artificial) {
                phase1[static_cast<std::size_t>(j)] = 1;
                any_artificial = true;
            }
        }
        if (any_artificial) {
            set_objective(phase1);
            if (!run()) {
                throw std::logic_error("phase I cannot be unbounded");
            }
            if (sgn(at(m_, ncols_)) != 0) {
                result.status = LpStatus::infeasible;
                result.multipliers = farkas(phase1);
                return result;
            }
            drive_out_artificials();
        }
        // Phase II
        set_objective(cost);
        if (auto entering = run_until_unbounded()) {
            result.status = LpStatus::unbounded;
            result.point = current_point();
            result.ray = ray(*entering);
            return result;
        }
        result.status = LpStatus::optimal;
        result.point = current_point();
        result.value = at(m_, ncols_);
        if (sense == Sense::minimize) {
            result.value = -result.value;
        }
        result.multipliers = optimal_duals(cost, sense);
        return result;
    }

private:
    Rat &at(int i, int j) {
        return cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(j)];
    }

    bool is_equality(int i) const {
        return i < static_cast<int>(sys_.equalities().size());
    }

    const Row &row_of(int i) const {
        const auto ne = static_cast<int>(sys_.equalities().size());
        return i < ne ? sys_.equalities()[static_cast<std::size_t>(i)]
                      : sys_.inequalities()[static_cast<std::size_t>(i - ne)];
    }

    void set_objective(const std::vector<Rat> &cost) {
        for (int j = 0; j < ncols_; ++j) {
            at(m_, j) = cost[static_cast<std::size_t>(j)];
        }
        at(m_, ncols_) = 0;
        for (int i = 0; i < m_; ++i) {
            const Rat &cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
            if (sgn(cb) == 0) {
                continue;
            }
            for (int j = 0; j <= ncols_; ++j) {
                if (sgn(at(i, j)) != 0) {
                    at(m_, j) -= cb * at(i, j);
                }
            }
        }
    }

    void pivot(int r, int q) {
        const Rat p = at(r, q);
        std::vector<int> nz;
        for (int j = 0; j <= ncols_; ++j) {
            Rat &cell = at(r, j);
            if (sgn(cell) != 0) {
                cell /= p;
                nz.push_back(j);
            }
        }
        Rat factor;
        for (int i = 0; i <= m_; ++i) {
            if (i == r || sgn(at(i, q)) == 0) {
                continue;
            }
            factor = at(i, q);
            for (int j : nz) {
                at(i, j) -= factor * at(r, j);
            }
        }
        basis_[static_cast<std::size_t>(r)] = q;
    }

    bool can_enter(int j) const {
        return cols_[static_cast<std::size_t>(j)].kind != ColumnKind::artificial;
    }

    /// Runs simplex iterations; returns false on unboundedness.
    bool run() { return !run_until_unbounded(); }

    /// Returns the entering column that proved unboundedness, if any.
    std::optional<int> run_until_unbounded() {
        bool bland = rule_ == PivotRule::bland;
        for (;;) {
            int q = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (!can_enter(j) || sgn(at(m_, j)) >= 0) {
                    continue;
                }
                if (q < 0) {
                    q = j;
                    if (bland) {
                        break;
                    }
                } else if (at(m_, j) < at(m_, q)) {
                    q = j;
                }
            }
            if (q < 0) {
                return std::nullopt;
            }
            int r = -1;
            Rat best;
            Rat ratio;
            for (int i = 0; i < m_; ++i) {
                if (sgn(at(i, q)) <= 0) {
                    continue;
                }
                ratio = at(i, ncols_) / at(i, q);
                if (r < 0 || ratio < best ||
                    (ratio == best && basis_[static_cast<std::size_t>(i)] <
                                          basis_[static_cast<std::size_t>(r)])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r < 0) {
                return q;
            }
            if (sgn(best) == 0) {
                bland = true;
            }
            pivot(r, q);
        }
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])].kind !=
                ColumnKind::artificial) {
                continue;
            }
            for (int j = 0; j < ncols_; ++j) {
                if (can_enter(j) && sgn(at(i, j)) != 0) {
                    pivot(i, j);
                    break;
                }
            }
            // A row with no candidate column is linearly dependent and keeps
            // its zero-valued artificial.
        }
    }

    Point current_point() {
        std::vector<Rat> z(static_cast<std::size_t>(ncols_), Rat(0));
        for (int i = 0; i < m_; ++i) {
            z[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = at(i, ncols_);
        }
        return to_variables(z);
    }

    Point to_variables(const std::vector<Rat> &z) const {
        Point x(static_cast<std::size_t>(sys_.num_variables()), Rat(0));
        for (int v = 0; v < sys_.num_variables(); ++v) {
            x[static_cast<std::size_t>(v)] = z[static_cast<std::size_t>(plus_col_[static_cast<std::size_t>(v)])];
            if (int mc = minus_col_[static_cast<std::size_t>(v)]; mc >= 0) {
                x[static_cast<std::size_t>(v)] -= z[static_cast<std::size_t>(mc)];
            }
        }
        return x;
    }

    Point ray(int q) {
        std::vector<Rat> dz(static_cast<std::size_t>(ncols_), Rat(0));
        dz[static_cast<std::size_t>(q)] = 1;
        for (int i = 0; i < m_; ++i) {
            dz[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = -at(i, q);
        }
        return to_variables(dz);
    }

    /// Simplex multipliers y_i = cost(id_i) - reduced(id_i) on internal rows.
    std::vector<Rat> internal_duals(const std::vector<Rat> &cost) {
        std::vector<Rat> y(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const int id = identity_col_[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = cost[static_cast<std::size_t>(id)] - at(m_, id);
        }
        return y;
    }

    RowMultipliers to_rows(const std::vector<Rat> &internal, bool negate) const {
        RowMultipliers out;
        for (int i = 0; i < m_; ++i) {
            Rat mu = internal[static_cast<std::size_t>(i)];
            if (negate) {
                mu = -mu;
            }
            if (flip_[static_cast<std::size_t>(i)]) {
                mu = -mu;
            }
            (is_equality(i) ? out.equality : out.inequality).push_back(std::move(mu));
        }
        return out;
    }

    RowMultipliers farkas(const std::vector<Rat> &phase1) {
        return to_rows(internal_duals(phase1), true);
    }

    RowMultipliers optimal_duals(const std::vector<Rat> &cost, Sense) {
        return to_rows(internal_duals(cost), true);
    }

    const LinSys &sys_;
    PivotRule rule_;
    int m_ = 0;
    int ncols_ = 0;
    int width_ = 0;
    std::vector<Column> cols_;
    std::vector<int> plus_col_;
    std::vector<int> minus_col_;
    std::vector<int> slack_col_;
    std::vector<int> identity_col_;
    std::vector<bool> flip_;
    std::vector<Rat> cells_;
    std::vector<int> basis_;
};

/// a_j = sum of multipliers times column j of the rows.
std::vector<Rat> combine_rows(const LinSys &sys, const RowMultipliers &mult, Rat &rhs) {
    std::vector<Rat> a(static_cast<std::size_t>(sys.num_variables()), Rat(0));
    rhs = 0;
    auto add = [&](std::span<const Row> rows, const std::vector<Rat> &mu) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (sgn(mu[i]) == 0) {
                continue;
            }
            for (const auto &[v, c] : rows[i].terms) {
                a[static_cast<std::size_t>(v)] += mu[i] * c;
            }
            rhs += mu[i] * rows[i].rhs;
        }
    };
    add(sys.equalities(), mult.equality);
    add(sys.inequalities(), mult.inequality);
    return a;
}

bool shapes_match(const LinSys &sys, const RowMultipliers &mult) {
    if (mult.equality.size() != sys.equalities().size() ||
        mult.inequality.size() != sys.inequalities().size()) {
        return false;
    }
    for (const Rat &z : mult.inequality) {
        if (sgn(z) < 0) {
            return false;
        }
    }
    return true;
}

Rat dot(const Terms &terms, std::span<const Rat> x) {
    Rat total = 0;
    for (const auto &[v, c] : terms) {
        total += c * x[static_cast<std::size_t>(v)];
    }
    return total;
}

} // namespace

bool check_farkas_certificate(const LinSys &sys, const RowMultipliers &mult) {
    if (!shapes_match(sys, mult)) {
        return false;
    }
    Rat rhs;
    const auto a = combine_rows(sys, mult, rhs);
    for (int v = 0; v < sys.num_variables(); ++v) {
        const int s = sgn(a[static_cast<std::size_t>(v)]);
        if (sys.var(v).nonneg ? s < 0 : s != 0) {
            return false;
        }
    }
    return sgn(rhs) < 0;
}

bool check_optimality_certificate(const LinSys &sys, const Terms &objective, Sense sense,
                                  const LpResult &result) {
    if (result.status != LpStatus::optimal || !sys.contains(result.point) ||
        !shapes_match(sys, result.multipliers)) {
        return false;
    }
    if (dot(objective, result.point) != result.value) {
        return false;
    }
    Rat rhs;
    auto a = combine_rows(sys, result.multipliers, rhs);
    for (const auto &[v, c] : objective) {
        a[static_cast<std::size_t>(v)] -= sense == Sense::maximize ? Rat(c) : Rat(-c);
    }
    for (int v = 0; v < sys.num_variables(); ++v) {
        const int s = sgn(a[static_cast<std::size_t>(v)]);
        if (sys.var(v).nonneg ? s < 0 : s != 0) {
            return false;
        }
    }
    return rhs == (sense == Sense::maximize ? result.value : Rat(-result.value));
}

bool check_unbounded_ray(const LinSys &sys, const Terms &objective, Sense sense,
                         const Point &ray) {
    if (ray.size() != static_cast<std::size_t>(sys.num_variables())) {
        return false;
    }
    for (int v = 0; v < sys.num_variables(); ++v) {
        if (sys.var(v).nonneg && sgn(ray[static_cast<std::size_t>(v)]) < 0) {
            return false;
        }
    }
    for (const Row &r : sys.equalities()) {
        if (sgn(r.lhs(ray)) != 0) {
            return false;
        }
    }
    for (const Row &r : sys.inequalities()) {
        if (sgn(r.lhs(ray)) > 0) {
            return false;
        }
    }
    const int s = sgn(dot(objective, ray));
    return sense == Sense::maximize ? s > 0 : s < 0;
}

LpResult solve_lp(const LinSys &sys, const Terms &objective, Sense sense, PivotRule rule) {
    const Terms obj = normalize_terms(objective);
    Tableau tableau(sys, rule);
    LpResult result = tableau.solve(obj, sense);
    bool ok = false;
    switch (result.status) {
    case LpStatus::optimal:
        ok = check_optimality_certificate(sys, obj, sense, result);
        break;
    case LpStatus::infeasible:
        ok = check_farkas_certificate(sys, result.multipliers);
        break;
    case LpStatus::unbounded:
        ok = sys.contains(result.point) && check_unbounded_ray(sys, obj, sense, result.ray);
        break;
    }
    if (!ok) {
        throw std::logic_error("simplex produced a certificate that fails exact verification");
    }
    return result;
}

LpResult solve_lp(const LinSys &sys, const std::map<std::string, Rat> &objective, Sense sense,
                  PivotRule rule) {
    Terms terms;
    for (const auto &[name, c] : objective) {
        terms.emplace_back(sys.variable(name), c);
    }
    return solve_lp(sys, terms, sense, rule);
}

bool is_feasible(const LinSys &sys) {
    return solve_lp(sys, Terms{}, Sense::maximize).status != LpStatus::infeasible;
}

} // namespace patsp
