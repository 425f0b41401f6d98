#include "patsp/polyhedra.hpp"

#include "patsp/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace patsp {

namespace {

Rat dot(const Terms &terms, std::span<const Rat> x) {
    Rat total = 0;
    for (const auto &[v, c] : terms) {
        total += c * x[static_cast<std::size_t>(v)];
    }
    return total;
}

/// Point on the feasible half-line point + t*ray that exceeds `rhs` for the
/// linear form `terms` (which must increase along the ray).
Point push_along_ray(const Terms &terms, const Rat &rhs, Point point, const Point &ray) {
    const Rat slope = dot(terms, ray);
    Rat t = (rhs - dot(terms, point)) / slope;
    if (sgn(t) < 0) {
        t = 0;
    }
    t += 1;
    for (std::size_t k = 0; k < point.size(); ++k) {
        point[k] += t * ray[k];
    }
    return point;
}

struct WorkRow {
    Terms terms;
    Rat rhs;
    std::string tag;
    std::vector<std::uint64_t> history;
};

/// Scales a row by a positive factor so its coefficients are coprime integers.
void make_primitive(Terms &terms, Rat &rhs) {
    if (terms.empty()) {
        return;
    }
    mpz_class lcm_den = 1;
    for (const auto &t : terms) {
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.second.get_den_mpz_t());
    }
    mpz_class g = 0;
    for (const auto &t : terms) {
        mpz_class num = t.second.get_num() * (lcm_den / t.second.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    const Rat scale = Rat(lcm_den) / Rat(g);
    if (scale == 1) {
        return;
    }
    for (auto &t : terms) {
        t.second *= scale;
    }
    rhs *= scale;
}

Rat coefficient(const Terms &terms, int var) {
    auto it = std::lower_bound(terms.begin(), terms.end(), var,
                               [](const auto &t, int v) { return t.first < v; });
    return it != terms.end() && it->first == var ? it->second : Rat(0);
}

/// terms_a * fa + terms_b * fb.
Terms combine(const Terms &a, const Rat &fa, const Terms &b, const Rat &fb) {
    Terms out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.emplace_back(a[i].first, a[i].second * fa);
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, b[j].second * fb);
            ++j;
        } else {
            Rat c = a[i].second * fa + b[j].second * fb;
            if (sgn(c) != 0) {
                out.emplace_back(a[i].first, std::move(c));
            }
            ++i;
            ++j;
        }
    }
    return out;
}

std::size_t popcount(const std::vector<std::uint64_t> &bits) {
    std::size_t total = 0;
    for (auto w : bits) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

std::vector<std::uint64_t> unite(const std::vector<std::uint64_t> &a,
                                 const std::vector<std::uint64_t> &b) {
    std::vector<std::uint64_t> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = a[k] | b[k];
    }
    return out;
}

struct TermsLess {
    bool operator()(const Terms &a, const Terms &b) const {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(), [](const auto &x, const auto &y) {
                if (x.first != y.first) {
                    return x.first < y.first;
                }
                return x.second < y.second;
            });
    }
};

/// Keeps one row per coefficient vector (the tightest); drops trivial rows.
/// Returns false when a row 0 <= negative appears.
bool dedupe(std::vector<WorkRow> &rows) {
    std::map<Terms, std::size_t, TermsLess> seen;
    std::vector<WorkRow> out;
    for (auto &r : rows) {
        if (r.terms.empty()) {
            if (sgn(r.rhs) < 0) {
                return false;
            }
            continue;
        }
        auto [it, fresh] = seen.emplace(r.terms, out.size());
        if (fresh) {
            out.push_back(std::move(r));
        } else if (r.rhs < out[it->second].rhs) {
            out[it->second] = std::move(r);
        }
    }
    rows = std::move(out);
    return true;
}

class Eliminator {
public:
    Eliminator(const LinSys &sys, std::vector<bool> eliminated, const FmOptions &options)
        : sys_(sys), eliminated_(std::move(eliminated)), options_(options) {}

    LinSys run() {
        std::vector<WorkRow> ineqs;
        std::vector<WorkRow> eqs;
        for (const Row &r : sys_.equalities()) {
            eqs.push_back({r.terms, r.rhs, r.tag, {}});
        }
        for (const Row &r : sys_.inequalities()) {
            ineqs.push_back({r.terms, r.rhs, r.tag, {}});
        }
        for (int v = 0; v < sys_.num_variables(); ++v) {
            if (eliminated_[static_cast<std::size_t>(v)] && sys_.var(v).nonneg) {
                ineqs.push_back({{{v, Rat(-1)}}, Rat(0), "nonneg(" + sys_.var(v).name + ")", {}});
            }
        }
        if (!substitute(eqs, ineqs)) {
            return infeasible_output();
        }

        std::vector<WorkRow> pass;
        std::vector<std::vector<WorkRow>> blocks = split_blocks(ineqs, pass);
        context_ = pass;
        for (auto &r : eqs) {
            kept_equalities_.push_back(r);
        }

        std::vector<WorkRow> result = pass;
        for (auto &block : blocks) {
            auto projected = eliminate_block(std::move(block));
            if (!projected) {
                return infeasible_output();
            }
            for (auto &r : *projected) {
                context_.push_back(r);
                result.push_back(std::move(r));
            }
        }
        LinSys out = make_output(kept_equalities_, result);
        return options_.prune ? prune_redundant(out) : out;
    }

private:
    bool is_elim(int v) const { return eliminated_[static_cast<std::size_t>(v)]; }

    std::string fresh_tag() { return "fm:" + std::to_string(counter_++); }

    /// Gaussian substitution of every equality that touches an eliminated
    /// variable. Returns false on an inconsistent equality.
    bool substitute(std::vector<WorkRow> &eqs, std::vector<WorkRow> &ineqs) {
        for (;;) {
            std::size_t pick = eqs.size();
            int var = -1;
            for (std::size_t k = 0; k < eqs.size() && pick == eqs.size(); ++k) {
                for (const auto &[v, c] : eqs[k].terms) {
                    if (is_elim(v)) {
                        pick = k;
                        var = v;
                        break;
                    }
                }
            }
            if (pick == eqs.size()) {
                break;
            }
            WorkRow pivot = std::move(eqs[pick]);
            eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(pick));
            const Rat a = coefficient(pivot.terms, var);
            auto apply = [&](WorkRow &r) {
                const Rat c = coefficient(r.terms, var);
                if (sgn(c) == 0) {
                    return;
                }
                const Rat f = -c / a;
                r.terms = combine(r.terms, Rat(1), pivot.terms, f);
                r.rhs += f * pivot.rhs;
                make_primitive(r.terms, r.rhs);
                r.tag = fresh_tag();
            };
            for (auto &r : eqs) {
                apply(r);
            }
            for (auto &r : ineqs) {
                apply(r);
            }
            for (auto &r : eqs) {
                if (r.terms.empty() && sgn(r.rhs) != 0) {
                    return false;
                }
            }
            std::erase_if(eqs, [](const WorkRow &r) { return r.terms.empty(); });
        }
        return dedupe(ineqs);
    }

    /// Groups rows by connected blocks of eliminated variables.
    std::vector<std::vector<WorkRow>> split_blocks(std::vector<WorkRow> &rows,
                                                   std::vector<WorkRow> &pass) {
        const auto nv = static_cast<std::size_t>(sys_.num_variables());
        std::vector<int> parent(nv);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v) {
                parent[static_cast<std::size_t>(v)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        for (const auto &r : rows) {
            int first = -1;
            for (const auto &[v, c] : r.terms) {
                if (!is_elim(v)) {
                    continue;
                }
                if (first < 0) {
                    first = v;
                } else {
                    parent[static_cast<std::size_t>(find(v))] = find(first);
                }
            }
        }
        std::map<int, std::size_t> block_of_root;
        std::vector<std::vector<WorkRow>> blocks;
        for (auto &r : rows) {
            int root = -1;
            for (const auto &[v, c] : r.terms) {
                if (is_elim(v)) {
                    root = find(v);
                    break;
                }
            }
            if (root < 0) {
                pass.push_back(std::move(r));
                continue;
            }
            auto [it, fresh] = block_of_root.emplace(root, blocks.size());
            if (fresh) {
                blocks.emplace_back();
            }
            blocks[it->second].push_back(std::move(r));
        }
        return blocks;
    }

    std::optional<std::vector<WorkRow>> eliminate_block(std::vector<WorkRow> rows) {
        const std::size_t words = (rows.size() + 63) / 64;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            rows[k].history.assign(words, 0);
            rows[k].history[k / 64] |= std::uint64_t{1} << (k % 64);
        }
        std::set<int> vars;
        for (const auto &r : rows) {
            for (const auto &[v, c] : r.terms) {
                if (is_elim(v)) {
                    vars.insert(v);
                }
            }
        }
        std::size_t steps = 0;
        while (!vars.empty()) {
            int best = -1;
            std::size_t best_cost = 0;
            for (int v : vars) {
                std::size_t pos = 0;
                std::size_t neg = 0;
                for (const auto &r : rows) {
                    const int s = sgn(coefficient(r.terms, v));
                    pos += s > 0 ? 1 : 0;
                    neg += s < 0 ? 1 : 0;
                }
                const std::size_t cost = pos * neg;
                if (best < 0 || cost < best_cost) {
                    best = v;
                    best_cost = cost;
                }
            }
            vars.erase(best);
            ++steps;
            std::vector<WorkRow> pos;
            std::vector<WorkRow> neg;
            std::vector<WorkRow> next;
            for (auto &r : rows) {
                const int s = sgn(coefficient(r.terms, best));
                (s > 0 ? pos : s < 0 ? neg : next).push_back(std::move(r));
            }
            for (const auto &p : pos) {
                const Rat a = coefficient(p.terms, best);
                for (const auto &q : neg) {
                    auto history = unite(p.history, q.history);
                    // Chernikov's rule: a combination of more than steps+1
                    // original rows is implied by the others.
                    if (popcount(history) > steps + 1) {
                        continue;
                    }
                    const Rat b = -coefficient(q.terms, best);
                    WorkRow r{combine(p.terms, b, q.terms, a), p.rhs * b + q.rhs * a, fresh_tag(),
                              std::move(history)};
                    make_primitive(r.terms, r.rhs);
                    next.push_back(std::move(r));
                }
            }
            if (!dedupe(next)) {
                return std::nullopt;
            }
            if (next.size() > options_.max_rows) {
                throw CapacityError("Fourier-Motzkin step produced " + std::to_string(next.size()) +
                                    " rows (limit " + std::to_string(options_.max_rows) + ")");
            }
            if (options_.prune) {
                if (!prune_block(next)) {
                    return std::nullopt;
                }
            }
            rows = std::move(next);
        }
        return rows;
    }

    /// LP-prunes `rows` against themselves plus the already-settled rows.
    /// Returns false when the block together with its context is empty.
    bool prune_block(std::vector<WorkRow> &rows) {
        LinSys lp;
        for (int v = 0; v < sys_.num_variables(); ++v) {
            lp.add_variable(sys_.var(v).name, sys_.var(v).nonneg && !is_elim(v));
        }
        for (const auto &r : kept_equalities_) {
            lp.add_equality(r.terms, r.rhs, "ctx:" + r.tag);
        }
        for (std::size_t k = 0; k < context_.size(); ++k) {
            lp.add_inequality(context_[k].terms, context_[k].rhs, "ctx:" + std::to_string(k));
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            lp.add_inequality(rows[k].terms, rows[k].rhs, "row:" + std::to_string(k));
        }
        if (!is_feasible(lp)) {
            return false;
        }
        std::vector<bool> drop(rows.size(), false);
        for (std::size_t k = rows.size(); k-- > 0;) {
            const std::string tag = "row:" + std::to_string(k);
            if (is_redundant(lp, tag).redundant) {
                lp = lp.without_inequality(tag);
                drop[k] = true;
            }
        }
        std::vector<WorkRow> kept;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!drop[k]) {
                kept.push_back(std::move(rows[k]));
            }
        }
        rows = std::move(kept);
        return true;
    }

    LinSys output_catalog(std::vector<int> &map) const {
        LinSys out;
        map.assign(static_cast<std::size_t>(sys_.num_variables()), -1);
        for (int v = 0; v < sys_.num_variables(); ++v) {
            if (!is_elim(v)) {
                map[static_cast<std::size_t>(v)] = out.add_variable(sys_.var(v).name, sys_.var(v).nonneg);
            }
        }
        return out;
    }

    LinSys make_output(const std::vector<WorkRow> &eqs, const std::vector<WorkRow> &ineqs) const {
        std::vector<int> map;
        LinSys out = output_catalog(map);
        auto remap = [&](const Terms &terms) {
            Terms t;
            for (const auto &[v, c] : terms) {
                t.emplace_back(map[static_cast<std::size_t>(v)], c);
            }
            return t;
        };
        for (const auto &r : eqs) {
            out.add_equality(remap(r.terms), r.rhs, r.tag);
        }
        for (const auto &r : ineqs) {
            out.add_inequality(remap(r.terms), r.rhs, r.tag);
        }
        return out;
    }

    LinSys infeasible_output() const {
        std::vector<int> map;
        LinSys out = output_catalog(map);
        out.add_inequality({}, Rat(-1), "fm:infeasible");
        return out;
    }

    const LinSys &sys_;
    std::vector<bool> eliminated_;
    FmOptions options_;
    std::vector<WorkRow> context_;
    std::vector<WorkRow> kept_equalities_;
    std::size_t counter_ = 0;
};

} // namespace

LinSys fourier_motzkin(const LinSys &sys, const std::vector<std::string> &eliminate,
                       const FmOptions &options) {
    std::vector<bool> flags(static_cast<std::size_t>(sys.num_variables()), false);
    for (const auto &name : eliminate) {
        flags[static_cast<std::size_t>(sys.variable(name))] = true;
    }
    return Eliminator(sys, std::move(flags), options).run();
}

LinSys project_onto(const LinSys &sys, const std::vector<std::string> &keep,
                    const FmOptions &options) {
    std::set<std::string> keep_set(keep.begin(), keep.end());
    for (const auto &name : keep) {
        sys.variable(name);
    }
    std::vector<std::string> eliminate;
    for (const auto &v : sys.variables()) {
        if (!keep_set.contains(v.name)) {
            eliminate.push_back(v.name);
        }
    }
    LinSys projected = fourier_motzkin(sys, eliminate, options);
    // Reorder the catalog to follow `keep`.
    LinSys out;
    std::vector<int> map(static_cast<std::size_t>(projected.num_variables()));
    for (const auto &name : keep) {
        const int from = projected.variable(name);
        map[static_cast<std::size_t>(from)] = out.add_variable(name, projected.var(from).nonneg);
    }
    auto remap = [&](const Terms &terms) {
        Terms t;
        for (const auto &[v, c] : terms) {
            t.emplace_back(map[static_cast<std::size_t>(v)], c);
        }
        return t;
    };
    for (const Row &r : projected.equalities()) {
        out.add_equality(remap(r.terms), r.rhs, r.tag);
    }
    for (const Row &r : projected.inequalities()) {
        out.add_inequality(remap(r.terms), r.rhs, r.tag);
    }
    return out;
}

RedundancyResult is_redundant(const LinSys &sys, const std::string &tag) {
    if (!sys.has_tag(tag) || sys.is_equality(tag)) {
        throw std::invalid_argument("no inequality tagged " + tag);
    }
    if (!is_feasible(sys)) {
        throw InfeasibleSystemError("redundancy is undefined for an infeasible system");
    }
    const Row &row = sys.row(tag);
    const LinSys others = sys.without_inequality(tag);
    const LpResult lp = solve_lp(others, row.terms, Sense::maximize);
    RedundancyResult out;
    if (lp.status == LpStatus::unbounded) {
        out.witness = push_along_ray(row.terms, row.rhs, lp.point, lp.ray);
        return out;
    }
    out.max_lhs = lp.value;
    if (lp.value > row.rhs) {
        out.witness = lp.point;
        return out;
    }
    out.redundant = true;
    out.dual.equality = lp.multipliers.equality;
    const auto ins = sys.inequalities();
    std::size_t k = 0;
    for (const Row &r : ins) {
        out.dual.inequality.push_back(r.tag == tag ? Rat(0) : lp.multipliers.inequality[k++]);
    }
    return out;
}

LinSys prune_redundant(const LinSys &sys) {
    if (!is_feasible(sys)) {
        return sys;
    }
    LinSys current = sys;
    const auto ins = sys.inequalities();
    for (std::size_t k = ins.size(); k-- > 0;) {
        if (is_redundant(current, ins[k].tag).redundant) {
            current = current.without_inequality(ins[k].tag);
        }
    }
    return current;
}

InclusionResult includes(const LinSys &a, const LinSys &b, const std::vector<std::string> &on_vars) {
    std::set<std::string> on(on_vars.begin(), on_vars.end());
    for (const auto &name : on_vars) {
        a.variable(name);
    }
    bool extra = false;
    for (const auto &v : b.variables()) {
        extra = extra || !on.contains(v.name);
    }
    std::vector<std::string> b_keep;
    for (const auto &name : on_vars) {
        if (b.find_variable(name)) {
            b_keep.push_back(name);
        }
    }
    const LinSys bp = extra ? project_onto(b, b_keep) : b;
    if (!is_feasible(a)) {
        throw InfeasibleSystemError("inclusion needs a feasible left-hand system");
    }

    // Sign restrictions of B's catalog count as rows too.
    std::vector<Row> rows(bp.inequalities().begin(), bp.inequalities().end());
    for (const auto &v : bp.variables()) {
        if (v.nonneg) {
            rows.push_back({{{bp.variable(v.name), Rat(-1)}}, Rat(0), "nonneg(" + v.name + ")"});
        }
    }
    auto to_a = [&](const Terms &terms) {
        Terms t;
        for (const auto &[v, c] : terms) {
            t.emplace_back(a.variable(bp.var(v).name), c);
        }
        return normalize_terms(std::move(t));
    };
    InclusionResult out;
    auto fail = [&](const std::string &tag, Point witness) {
        out.failing_row = tag;
        out.witness = std::move(witness);
        for (const auto &name : on_vars) {
            out.witness_on_vars.emplace(name, out.witness[static_cast<std::size_t>(a.variable(name))]);
        }
        return out;
    };
    auto check = [&](const Terms &terms, const Rat &rhs) -> std::optional<Point> {
        const LpResult lp = solve_lp(a, terms, Sense::maximize);
        if (lp.status == LpStatus::unbounded) {
            return push_along_ray(terms, rhs, lp.point, lp.ray);
        }
        if (lp.value > rhs) {
            return lp.point;
        }
        return std::nullopt;
    };
    for (const Row &r : bp.equalities()) {
        const Terms t = to_a(r.terms);
        if (auto w = check(t, r.rhs)) {
            return fail(r.tag, std::move(*w));
        }
        Terms neg = t;
        for (auto &term : neg) {
            term.second = -term.second;
        }
        if (auto w = check(neg, -r.rhs)) {
            return fail(r.tag, std::move(*w));
        }
    }
    for (const Row &r : rows) {
        if (auto w = check(to_a(r.terms), r.rhs)) {
            return fail(r.tag, std::move(*w));
        }
    }
    out.included = true;
    return out;
}

bool equivalent(const LinSys &a, const LinSys &b, const std::vector<std::string> &on_vars) {
    return includes(a, b, on_vars).included && includes(b, a, on_vars).included;
}

} // namespace patsp
