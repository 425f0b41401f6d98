#include "patsp/formulations.hpp"

#include "patsp/polyhedra.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace patsp {

std::string x_name(int i, int j) {
    return "x[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

std::string x_name(const Arc &arc) { return x_name(arc.tail, arc.head); }

std::vector<std::string> x_names(const ArcSpace &space) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(space.num_arcs()));
    for (const Arc &arc : space.arcs()) {
        names.push_back(x_name(arc));
    }
    return names;
}

namespace {

std::string node_tag(const std::string &family, int i) {
    return family + "(" + std::to_string(i) + ")";
}

std::string arc_tag(const std::string &family, int i, int j) {
    return family + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string arc_tag(const std::string &family, const Arc &arc) {
    return arc_tag(family, arc.tail, arc.head);
}

/// Index of x[i,j]; every system here starts from build_ap so x sits first.
int xi(const ArcSpace &space, int i, int j) { return space.arc_index(i, j); }

Rat rat(long num, long den = 1) { return make_rat(num, den); }

void check_d(const ArcSpace &space, const DVec &d) {
    if (d.n() != space.n()) {
        throw std::invalid_argument("parameter d is over " + std::to_string(d.n()) +
                                    " nodes, digraph has " + std::to_string(space.n()));
    }
    for (const Arc &arc : space.restricted_arcs()) {
        if (d.at(arc.tail, arc.head) < 0) {
            throw std::invalid_argument("parameter d has negative entry on arc (" +
                                        to_string(arc) + ")");
        }
    }
}

void check_b(const ArcSpace &space, const BVec &b) {
    if (b.n() != space.n()) {
        throw std::invalid_argument("parameter b is over " + std::to_string(b.n()) +
                                    " nodes, digraph has " + std::to_string(space.n()));
    }
    for (int i = 2; i <= space.n(); ++i) {
        if (b.at(i) < 0) {
            throw std::invalid_argument("parameter b has negative entry at node " +
                                        std::to_string(i));
        }
    }
}

Terms sum_over(const std::vector<int> &arc_indices, const Rat &coef) {
    Terms t;
    for (int a : arc_indices) {
        t.emplace_back(a, coef);
    }
    return t;
}

Terms cycle_terms(const ArcSpace &space, const Cycle &c) {
    Terms t;
    for (const Arc &arc : c.arcs()) {
        t.emplace_back(space.arc_index(arc), Rat(1));
    }
    return t;
}

void add_pair_rows(const ArcSpace &space, LinSys &s) {
    for (int i = 2; i <= space.n(); ++i) {
        for (int j = i + 1; j <= space.n(); ++j) {
            s.add_inequality({{xi(space, i, j), Rat(1)}, {xi(space, j, i), Rat(1)}}, Rat(1),
                             arc_tag("pair", i, j));
        }
    }
}

/// Potential variables u[prefix][i] for i in N1 appended to s.
std::vector<int> add_potentials(const ArcSpace &space, LinSys &s, const std::string &prefix,
                                bool nonneg) {
    std::vector<int> u(static_cast<std::size_t>(space.n() + 1), -1);
    for (int i = 2; i <= space.n(); ++i) {
        u[static_cast<std::size_t>(i)] = s.add_variable("u" + prefix + "[" + std::to_string(i) + "]", nonneg);
    }
    return u;
}

void add_mtz_rows(const ArcSpace &space, LinSys &s, const std::vector<int> &u, const DVec &d,
                  const std::string &tag_prefix) {
    for (const Arc &arc : space.restricted_arcs()) {
        const int i = arc.tail;
        const int j = arc.head;
        Terms t = {{u[static_cast<std::size_t>(i)], Rat(1)},
                   {u[static_cast<std::size_t>(j)], Rat(-1)},
                   {xi(space, i, j), Rat(1)}};
        s.add_inequality(normalize_terms(std::move(t)), 1 - d.at(i, j),
                         tag_prefix + arc_tag("genMTZ", arc));
    }
}

void add_dl_rows(const ArcSpace &space, LinSys &s, const std::vector<int> &u, const DVec &d,
                 const std::string &tag_prefix) {
    for (const Arc &arc : space.restricted_arcs()) {
        const int i = arc.tail;
        const int j = arc.head;
        Terms t = {{u[static_cast<std::size_t>(i)], Rat(1)},
                   {u[static_cast<std::size_t>(j)], Rat(-1)},
                   {xi(space, i, j), Rat(1)},
                   {xi(space, j, i), 1 - d.at(i, j) - d.at(j, i)}};
        s.add_inequality(normalize_terms(std::move(t)), 1 - d.at(i, j),
                         tag_prefix + arc_tag("genDL", arc));
    }
}

/// Flow block f<prefix>[i,j] >= 0 on all arcs with out - in = -b_i on N1 and f <= x.
void add_scf_block(const ArcSpace &space, LinSys &s, const BVec &b, const std::string &prefix,
                   const std::string &tag_prefix) {
    std::vector<int> f(static_cast<std::size_t>(space.num_arcs()));
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Arc &arc = space.arc(a);
        f[static_cast<std::size_t>(a)] =
            s.add_variable("f" + prefix + "[" + to_string(arc) + "]", true);
    }
    for (int i = 2; i <= space.n(); ++i) {
        Terms t;
        for (int a = 0; a < space.num_arcs(); ++a) {
            const Arc &arc = space.arc(a);
            if (arc.tail == i) {
                t.emplace_back(f[static_cast<std::size_t>(a)], Rat(1));
            } else if (arc.head == i) {
                t.emplace_back(f[static_cast<std::size_t>(a)], Rat(-1));
            }
        }
        s.add_equality(normalize_terms(std::move(t)), -b.at(i), tag_prefix + node_tag("balance", i));
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        s.add_inequality(normalize_terms({{f[static_cast<std::size_t>(a)], Rat(1)}, {a, Rat(-1)}}),
                         Rat(0), tag_prefix + arc_tag("cap", space.arc(a)));
    }
}

std::vector<std::string> default_labels(std::size_t count, std::vector<std::string> labels) {
    if (count == 0) {
        throw std::invalid_argument("Ef needs at least one parameter");
    }
    if (labels.empty()) {
        for (std::size_t t = 0; t < count; ++t) {
            labels.push_back(std::to_string(t));
        }
    }
    if (labels.size() != count) {
        throw std::invalid_argument("Ef label count does not match parameter count");
    }
    return labels;
}

} // namespace

LinSys build_ap(const ArcSpace &space) {
    LinSys s;
    for (const Arc &arc : space.arcs()) {
        s.add_variable(x_name(arc), true);
    }
    const int n = space.n();
    for (int i = 1; i <= n; ++i) {
        Terms t;
        for (int j = 1; j <= n; ++j) {
            if (j != i) {
                t.emplace_back(xi(space, i, j), Rat(1));
            }
        }
        s.add_equality(normalize_terms(std::move(t)), Rat(1), node_tag("AP-out", i));
    }
    for (int j = 1; j <= n; ++j) {
        Terms t;
        for (int i = 1; i <= n; ++i) {
            if (i != j) {
                t.emplace_back(xi(space, i, j), Rat(1));
            }
        }
        s.add_equality(normalize_terms(std::move(t)), Rat(1), node_tag("AP-in", j));
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        s.add_inequality({{a, Rat(1)}}, Rat(1), arc_tag("ub", space.arc(a)));
    }
    return s;
}

LinSys build_q_mtz(const ArcSpace &space, const DVec &d) {
    check_d(space, d);
    LinSys s = build_ap(space);
    add_mtz_rows(space, s, add_potentials(space, s, "", false), d, "");
    return s;
}

LinSys build_p_mtz(const ArcSpace &space, const DVec &d) {
    check_d(space, d);
    LinSys s = build_ap(space);
    for (const Cycle &c : enumerate_cycles(space)) {
        s.add_inequality(cycle_terms(space, c), c.size() - d.cycle_sum(c), "circuit" + c.to_string());
    }
    return s;
}

LinSys build_q_dl(const ArcSpace &space, const DVec &d) {
    check_d(space, d);
    LinSys s = build_ap(space);
    add_dl_rows(space, s, add_potentials(space, s, "", false), d, "");
    return s;
}

LinSys build_p_dl(const ArcSpace &space, const DVec &d) {
    check_d(space, d);
    LinSys s = build_ap(space);
    for (const Cycle &c : enumerate_cycles(space, 3, space.n() - 1)) {
        Terms t;
        for (const Arc &arc : c.arcs()) {
            const int i = arc.tail;
            const int j = arc.head;
            t.emplace_back(xi(space, i, j), Rat(1));
            t.emplace_back(xi(space, j, i), 1 - d.at(i, j) - d.at(j, i));
        }
        s.add_inequality(normalize_terms(std::move(t)), c.size() - d.cycle_sum(c),
                         "dlcycle" + c.to_string());
    }
    add_pair_rows(space, s);
    return s;
}

LinSys build_q_scf(const ArcSpace &space, const BVec &b) {
    check_b(space, b);
    LinSys s = build_ap(space);
    add_scf_block(space, s, b, "", "");
    return s;
}

LinSys build_p_scf(const ArcSpace &space, const BVec &b, bool clique_form) {
    check_b(space, b);
    LinSys s = build_ap(space);
    for (const NodeSubset &S : enumerate_subsets(space)) {
        const Rat bs = b.subset_sum(S);
        if (clique_form) {
            s.add_inequality(sum_over(arcs_within(space, S), Rat(1)), S.size() - bs,
                             "clique" + S.to_string());
        } else {
            s.add_inequality(sum_over(delta_plus(space, S), Rat(-1)), -bs, "cut" + S.to_string());
        }
    }
    return s;
}

LinSys build_dfj_clique(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const NodeSubset &S : enumerate_subsets(space)) {
        s.add_inequality(sum_over(arcs_within(space, S), Rat(1)), Rat(S.size() - 1),
                         "clique" + S.to_string());
    }
    return s;
}

LinSys build_dfj_cut(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const NodeSubset &S : enumerate_subsets(space)) {
        s.add_inequality(sum_over(delta_plus(space, S), Rat(-1)), Rat(-1), "cut" + S.to_string());
    }
    return s;
}

LinSys build_circuit(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const Cycle &c : enumerate_cycles(space)) {
        s.add_inequality(cycle_terms(space, c), Rat(c.size() - 1), "circuit" + c.to_string());
    }
    return s;
}

LinSys build_weak_circuit(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const long m = space.n() - 1;
    for (const Cycle &c : enumerate_cycles(space)) {
        s.add_inequality(cycle_terms(space, c), c.size() - rat(c.size(), m),
                         "wcircuit" + c.to_string());
    }
    return s;
}

LinSys build_weak_clique(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const long m = space.n() - 1;
    for (const NodeSubset &S : enumerate_subsets(space)) {
        s.add_inequality(sum_over(arcs_within(space, S), Rat(1)), S.size() - rat(S.size(), m),
                         "wclique" + S.to_string());
    }
    return s;
}

LinSys build_lifted_weak_circuit(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const long n = space.n();
    const Rat lift = rat(n - 3, n - 1);
    for (const Cycle &c : enumerate_cycles(space, 3, space.n() - 1)) {
        Terms t = cycle_terms(space, c);
        for (const Arc &arc : c.arcs()) {
            t.emplace_back(space.arc_index(arc.reversed()), lift);
        }
        s.add_inequality(normalize_terms(std::move(t)), c.size() - rat(c.size(), n - 1),
                         "lwcircuit" + c.to_string());
    }
    add_pair_rows(space, s);
    return s;
}

namespace {

LinSys build_rmtz_impl(const ArcSpace &space, bool lifted) {
    LinSys s = build_ap(space);
    const int n = space.n();
    std::vector<std::vector<int>> v(static_cast<std::size_t>(n + 1),
                                    std::vector<int>(static_cast<std::size_t>(n + 1), -1));
    for (int k = 2; k <= n; ++k) {
        for (int i = 2; i <= n; ++i) {
            if (i != k) {
                v[k][i] = s.add_variable("v[" + std::to_string(k) + "," + std::to_string(i) + "]", true);
            }
        }
    }
    for (const Arc &arc : space.restricted_arcs()) {
        const int i = arc.tail;
        const int j = arc.head;
        for (int k = 2; k <= n; ++k) {
            if (k == i || k == j) {
                continue;
            }
            Terms t = {{xi(space, i, j), Rat(1)}, {v[k][i], Rat(1)}, {v[k][j], Rat(-1)}};
            if (lifted) {
                t.emplace_back(xi(space, j, i), Rat(1));
            }
            s.add_inequality(normalize_terms(std::move(t)), Rat(1),
                             "rmtz(" + std::to_string(k) + ";" + to_string(arc) + ")");
        }
    }
    for (const Arc &arc : space.restricted_arcs()) {
        const int i = arc.tail;
        const int j = arc.head;
        s.add_inequality(normalize_terms({{xi(space, i, j), Rat(1)}, {v[i][j], Rat(-1)}}), Rat(0),
                         arc_tag("prec", arc));
        s.add_inequality(normalize_terms({{xi(space, i, j), Rat(1)}, {v[j][i], Rat(1)}}), Rat(1),
                         arc_tag("antiprec", arc));
    }
    for (int k = 2; k <= n; ++k) {
        for (int i = 2; i <= n; ++i) {
            if (i != k) {
                s.add_inequality({{v[k][i], Rat(1)}}, Rat(1), arc_tag("vub", k, i));
            }
        }
    }
    return s;
}

} // namespace

LinSys build_rmtz(const ArcSpace &space) { return build_rmtz_impl(space, false); }

LinSys build_l1rmtz(const ArcSpace &space) { return build_rmtz_impl(space, true); }

LinSys build_mcf(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const int n = space.n();
    for (int k = 2; k <= n; ++k) {
        const std::string ks = std::to_string(k);
        std::vector<int> f(static_cast<std::size_t>(space.num_arcs()));
        for (int a = 0; a < space.num_arcs(); ++a) {
            f[static_cast<std::size_t>(a)] =
                s.add_variable("f[" + ks + "][" + to_string(space.arc(a)) + "]", true);
        }
        for (int i = 1; i <= n; ++i) {
            Terms t;
            for (int a = 0; a < space.num_arcs(); ++a) {
                const Arc &arc = space.arc(a);
                if (arc.tail == i) {
                    t.emplace_back(f[static_cast<std::size_t>(a)], Rat(1));
                } else if (arc.head == i) {
                    t.emplace_back(f[static_cast<std::size_t>(a)], Rat(-1));
                }
            }
            const Rat rhs = i == 1 ? Rat(1) : (i == k ? Rat(-1) : Rat(0));
            s.add_equality(normalize_terms(std::move(t)), rhs, "[" + ks + "]" + node_tag("balance", i));
        }
        for (int a = 0; a < space.num_arcs(); ++a) {
            s.add_inequality(normalize_terms({{f[static_cast<std::size_t>(a)], Rat(1)}, {a, Rat(-1)}}),
                             Rat(0), "[" + ks + "]" + arc_tag("cap", space.arc(a)));
        }
    }
    return s;
}

LinSys build_classic_mtz(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const std::vector<int> u = add_potentials(space, s, "", false);
    const long n = space.n();
    for (const Arc &arc : space.restricted_arcs()) {
        Terms t = {{u[static_cast<std::size_t>(arc.tail)], Rat(1)},
                   {u[static_cast<std::size_t>(arc.head)], Rat(-1)},
                   {space.arc_index(arc), Rat(n - 1)}};
        s.add_inequality(normalize_terms(std::move(t)), Rat(n - 2), arc_tag("MTZ", arc));
    }
    return s;
}

LinSys build_classic_dl(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const std::vector<int> u = add_potentials(space, s, "", false);
    const long n = space.n();
    for (const Arc &arc : space.restricted_arcs()) {
        Terms t = {{u[static_cast<std::size_t>(arc.tail)], Rat(1)},
                   {u[static_cast<std::size_t>(arc.head)], Rat(-1)},
                   {space.arc_index(arc), Rat(n - 1)},
                   {space.arc_index(arc.reversed()), Rat(n - 3)}};
        s.add_inequality(normalize_terms(std::move(t)), Rat(n - 2), arc_tag("DL", arc));
    }
    return s;
}

LinSys build_classic_scf(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const long n = space.n();
    std::vector<int> f(static_cast<std::size_t>(space.num_arcs()));
    for (int a = 0; a < space.num_arcs(); ++a) {
        f[static_cast<std::size_t>(a)] = s.add_variable("f[" + to_string(space.arc(a)) + "]", true);
    }
    for (int i = 1; i <= n; ++i) {
        Terms t;
        for (int a = 0; a < space.num_arcs(); ++a) {
            const Arc &arc = space.arc(a);
            if (arc.tail == i) {
                t.emplace_back(f[static_cast<std::size_t>(a)], Rat(1));
            } else if (arc.head == i) {
                t.emplace_back(f[static_cast<std::size_t>(a)], Rat(-1));
            }
        }
        s.add_equality(normalize_terms(std::move(t)), i == 1 ? Rat(n - 1) : Rat(-1),
                       node_tag("balance", i));
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        s.add_inequality(normalize_terms({{f[static_cast<std::size_t>(a)], Rat(1)}, {a, Rat(1 - n)}}),
                         Rat(0), arc_tag("cap", space.arc(a)));
    }
    return s;
}

LinSys build_pbar_mtz(const ArcSpace &space) { return build_circuit(space); }

LinSys build_pbar_dl(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const Cycle &c : enumerate_cycles(space, 3, space.n() - 1)) {
        Terms base;
        for (const Arc &arc : c.arcs()) {
            base.emplace_back(space.arc_index(arc), Rat(1));
            base.emplace_back(space.arc_index(arc.reversed()), Rat(1));
        }
        for (const Arc &arc : c.arcs()) {
            Terms t = base;
            t.emplace_back(space.arc_index(arc.reversed()), Rat(-1));
            s.add_inequality(normalize_terms(std::move(t)), Rat(c.size() - 1),
                             "dlclosure" + c.to_string() + "[" + to_string(arc) + "]");
        }
    }
    add_pair_rows(space, s);
    return s;
}

LinSys build_pbar_scf(const ArcSpace &space, bool clique_form) {
    return clique_form ? build_dfj_clique(space) : build_dfj_cut(space);
}

LinSys build_cl_dl_on_vmtz(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const Cycle &c : enumerate_cycles(space, 3, space.n() - 1)) {
        Terms base;
        for (const Arc &arc : c.arcs()) {
            base.emplace_back(space.arc_index(arc), Rat(1));
            base.emplace_back(space.arc_index(arc.reversed()), Rat(1));
        }
        for (int k : c.nodes()) {
            Terms t = base;
            t.emplace_back(xi(space, k, c.predecessor(k)), Rat(-1));
            t.emplace_back(xi(space, c.successor(k), k), Rat(-1));
            s.add_inequality(normalize_terms(std::move(t)), Rat(c.size() - 1),
                             "dlvmtz" + c.to_string() + "[" + std::to_string(k) + "]");
        }
    }
    add_pair_rows(space, s);
    return s;
}

LinSys build_qbar_mtz(const ArcSpace &space) {
    LinSys s = build_ap(space);
    const int n = space.n();
    for (int k = 2; k <= n; ++k) {
        const std::string ks = std::to_string(k);
        std::vector<int> v(static_cast<std::size_t>(n + 1), -1);
        for (int i = 2; i <= n; ++i) {
            v[static_cast<std::size_t>(i)] = s.add_variable("v[" + ks + "," + std::to_string(i) + "]");
        }
        for (const Arc &arc : space.restricted_arcs()) {
            const int i = arc.tail;
            const int j = arc.head;
            Terms t = {{v[static_cast<std::size_t>(i)], Rat(1)},
                       {v[static_cast<std::size_t>(j)], Rat(-1)},
                       {xi(space, i, j), Rat(1)}};
            s.add_inequality(normalize_terms(std::move(t)), i == k ? Rat(0) : Rat(1),
                             "[" + ks + "]" + arc_tag("genMTZ", arc));
        }
    }
    return s;
}

LinSys build_qbar_dl(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (const Arc &kl : space.restricted_arcs()) {
        const std::string label = "[" + to_string(kl) + "]";
        const std::vector<int> u = add_potentials(space, s, label, true);
        for (const Arc &arc : space.restricted_arcs()) {
            const int i = arc.tail;
            const int j = arc.head;
            Terms t = {{u[static_cast<std::size_t>(i)], Rat(1)},
                       {u[static_cast<std::size_t>(j)], Rat(-1)},
                       {xi(space, i, j), Rat(1)}};
            Rat rhs(1);
            if (arc == kl) {
                rhs = 0;
            } else if (arc == kl.reversed()) {
                // u_l - u_k <= 1 - x_lk
            } else {
                t.emplace_back(xi(space, j, i), Rat(1));
            }
            s.add_inequality(normalize_terms(std::move(t)), rhs, label + arc_tag("genDL", arc));
        }
    }
    return s;
}

LinSys build_qbar_scf(const ArcSpace &space) {
    LinSys s = build_ap(space);
    for (int k = 2; k <= space.n(); ++k) {
        BVec unit(space.n());
        unit.set(k, Rat(1));
        const std::string label = "[" + std::to_string(k) + "]";
        add_scf_block(space, s, unit, label, label);
    }
    return s;
}

LinSys build_ef_mtz(const ArcSpace &space, const std::vector<DVec> &params,
                    std::vector<std::string> labels) {
    labels = default_labels(params.size(), std::move(labels));
    LinSys s = build_ap(space);
    for (std::size_t t = 0; t < params.size(); ++t) {
        check_d(space, params[t]);
        const std::string label = "[" + labels[t] + "]";
        add_mtz_rows(space, s, add_potentials(space, s, label, false), params[t], label);
    }
    return s;
}

LinSys build_ef_dl(const ArcSpace &space, const std::vector<DVec> &params,
                   std::vector<std::string> labels) {
    labels = default_labels(params.size(), std::move(labels));
    LinSys s = build_ap(space);
    for (std::size_t t = 0; t < params.size(); ++t) {
        check_d(space, params[t]);
        const std::string label = "[" + labels[t] + "]";
        add_dl_rows(space, s, add_potentials(space, s, label, false), params[t], label);
    }
    return s;
}

LinSys build_ef_scf(const ArcSpace &space, const std::vector<BVec> &params,
                    std::vector<std::string> labels) {
    labels = default_labels(params.size(), std::move(labels));
    LinSys s = build_ap(space);
    for (std::size_t t = 0; t < params.size(); ++t) {
        check_b(space, params[t]);
        const std::string label = "[" + labels[t] + "]";
        add_scf_block(space, s, params[t], label, label);
    }
    return s;
}

namespace {

struct FamilyName {
    Family family;
    const char *name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::ap, "ap"},
    {Family::d_mtz, "d-mtz"},
    {Family::d_dl, "d-dl"},
    {Family::b_scf, "b-scf"},
    {Family::dfj_clique, "dfj-clique"},
    {Family::dfj_cut, "dfj-cut"},
    {Family::circuit, "circuit"},
    {Family::weak_circuit, "weak-circuit"},
    {Family::weak_clique, "weak-clique"},
    {Family::lifted_weak_circuit, "lifted-weak-circuit"},
    {Family::rmtz, "rmtz"},
    {Family::l1rmtz, "l1rmtz"},
    {Family::mcf, "mcf"},
    {Family::cl_mtz, "cl-mtz"},
    {Family::cl_dl, "cl-dl"},
    {Family::cl_scf, "cl-scf"},
    {Family::ef_mtz, "ef-mtz"},
    {Family::ef_dl, "ef-dl"},
    {Family::ef_scf, "ef-scf"},
    {Family::cl_dl_on_vmtz, "cl-dl-on-vmtz"},
    {Family::mtz, "mtz"},
    {Family::dl, "dl"},
    {Family::scf, "scf"},
};

} // namespace

std::string to_string(Family family) {
    for (const FamilyName &f : kFamilyNames) {
        if (f.family == family) {
            return f.name;
        }
    }
    throw std::logic_error("unnamed formulation family");
}

Family parse_family(const std::string &text) {
    for (const FamilyName &f : kFamilyNames) {
        if (text == f.name) {
            return f.family;
        }
    }
    std::string known;
    for (const FamilyName &f : kFamilyNames) {
        known += known.empty() ? "" : ", ";
        known += f.name;
    }
    throw std::invalid_argument("unknown formulation '" + text + "' (known: " + known + ")");
}

std::vector<Family> all_families() {
    std::vector<Family> out;
    for (const FamilyName &f : kFamilyNames) {
        out.push_back(f.family);
    }
    return out;
}

bool is_parametric(Family family) {
    switch (family) {
    case Family::d_mtz:
    case Family::d_dl:
    case Family::b_scf:
    case Family::ef_mtz:
    case Family::ef_dl:
    case Family::ef_scf:
        return true;
    default:
        return false;
    }
}

void validate(const FormulationId &id) {
    const bool wants_d = id.family == Family::d_mtz || id.family == Family::d_dl;
    const bool wants_b = id.family == Family::b_scf;
    const bool wants_dlist = id.family == Family::ef_mtz || id.family == Family::ef_dl;
    const bool wants_blist = id.family == Family::ef_scf;
    const std::string name = to_string(id.family);
    if (wants_d != id.d.has_value()) {
        throw std::invalid_argument(wants_d ? name + " needs a d parameter"
                                            : name + " takes no d parameter");
    }
    if (wants_b != id.b.has_value()) {
        throw std::invalid_argument(wants_b ? name + " needs a b parameter"
                                            : name + " takes no b parameter");
    }
    if (wants_dlist == id.d_list.empty()) {
        throw std::invalid_argument(wants_dlist ? name + " needs a non-empty d list"
                                                : name + " takes no d list");
    }
    if (wants_blist == id.b_list.empty()) {
        throw std::invalid_argument(wants_blist ? name + " needs a non-empty b list"
                                                : name + " takes no b list");
    }
}

std::string FormulationId::label() const {
    std::string out = to_string(family);
    if (space == VarSpace::extended) {
        out += "/ext";
    }
    return out;
}

LinSys build(const ArcSpace &space, const FormulationId &id, const BuildOptions &options) {
    validate(id);
    const bool ext = id.space == VarSpace::extended;
    LinSys s;
    switch (id.family) {
    case Family::ap:
        s = build_ap(space);
        break;
    case Family::d_mtz:
        s = ext ? build_q_mtz(space, *id.d) : build_p_mtz(space, *id.d);
        break;
    case Family::d_dl:
        s = ext ? build_q_dl(space, *id.d) : build_p_dl(space, *id.d);
        break;
    case Family::b_scf:
        s = ext ? build_q_scf(space, *id.b) : build_p_scf(space, *id.b, options.clique_form);
        break;
    case Family::dfj_clique:
        s = build_dfj_clique(space);
        break;
    case Family::dfj_cut:
        s = build_dfj_cut(space);
        break;
    case Family::circuit:
        s = build_circuit(space);
        break;
    case Family::weak_circuit:
        s = build_weak_circuit(space);
        break;
    case Family::weak_clique:
        s = build_weak_clique(space);
        break;
    case Family::lifted_weak_circuit:
        s = build_lifted_weak_circuit(space);
        break;
    case Family::rmtz:
        s = ext ? build_rmtz(space) : build_circuit(space);
        break;
    case Family::l1rmtz:
        s = ext ? build_l1rmtz(space) : build_cl_dl_on_vmtz(space);
        break;
    case Family::mcf:
        s = ext ? build_mcf(space) : build_pbar_scf(space, options.clique_form);
        break;
    case Family::cl_mtz:
        s = ext ? build_qbar_mtz(space) : build_pbar_mtz(space);
        break;
    case Family::cl_dl:
        s = ext ? build_qbar_dl(space) : build_pbar_dl(space);
        break;
    case Family::cl_scf:
        s = ext ? build_qbar_scf(space) : build_pbar_scf(space, options.clique_form);
        break;
    case Family::ef_mtz:
        s = build_ef_mtz(space, id.d_list);
        break;
    case Family::ef_dl:
        s = build_ef_dl(space, id.d_list);
        break;
    case Family::ef_scf:
        s = build_ef_scf(space, id.b_list);
        break;
    case Family::cl_dl_on_vmtz:
        s = ext ? build_ef_dl(space, mtz_vertices(space.n())) : build_cl_dl_on_vmtz(space);
        break;
    case Family::mtz:
        s = ext ? build_classic_mtz(space) : build_weak_circuit(space);
        break;
    case Family::dl:
        s = ext ? build_classic_dl(space) : build_lifted_weak_circuit(space);
        break;
    case Family::scf:
        s = ext ? build_classic_scf(space) : build_weak_clique(space);
        break;
    }
    if (!ext && (id.family == Family::ef_mtz || id.family == Family::ef_dl ||
                 id.family == Family::ef_scf)) {
        s = build_ap(space);
        const std::size_t count = id.family == Family::ef_scf ? id.b_list.size() : id.d_list.size();
        for (std::size_t t = 0; t < count; ++t) {
            const LinSys block = id.family == Family::ef_mtz  ? build_p_mtz(space, id.d_list[t])
                                 : id.family == Family::ef_dl ? build_p_dl(space, id.d_list[t])
                                                              : build_p_scf(space, id.b_list[t], options.clique_form);
            for (const Row &r : block.inequalities()) {
                if (r.tag.rfind("ub(", 0) != 0) {
                    s.add_inequality(r.terms, r.rhs, "[" + std::to_string(t) + "]" + r.tag);
                }
            }
        }
    }
    if (options.prune) {
        s = prune_redundant(s);
    }
    return s;
}

std::string to_json(const FormulationId &id) {
    nlohmann::ordered_json out;
    out["family"] = to_string(id.family);
    out["space"] = id.space == VarSpace::extended ? "extended" : "x";
    if (id.d) {
        out["d"] = nlohmann::ordered_json::parse(to_json(*id.d));
    }
    if (id.b) {
        out["b"] = nlohmann::ordered_json::parse(to_json(*id.b));
    }
    for (const DVec &d : id.d_list) {
        out["d_list"].push_back(nlohmann::ordered_json::parse(to_json(d)));
    }
    for (const BVec &b : id.b_list) {
        out["b_list"].push_back(nlohmann::ordered_json::parse(to_json(b)));
    }
    return out.dump();
}

FormulationId formulation_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("formulation id is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family")) {
        throw ParseError("formulation id needs a \"family\" field");
    }
    FormulationId id;
    try {
        id.family = parse_family(j.at("family").get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    const std::string space = j.value("space", "x");
    if (space != "x" && space != "extended") {
        throw ParseError("space must be \"x\" or \"extended\"");
    }
    id.space = space == "extended" ? VarSpace::extended : VarSpace::x_only;
    if (j.contains("d")) {
        id.d = d_from_json(j["d"].dump());
    }
    if (j.contains("b")) {
        id.b = b_from_json(j["b"].dump());
    }
    if (j.contains("d_list")) {
        for (const auto &d : j["d_list"]) {
            id.d_list.push_back(d_from_json(d.dump()));
        }
    }
    if (j.contains("b_list")) {
        for (const auto &b : j["b_list"]) {
            id.b_list.push_back(b_from_json(b.dump()));
        }
    }
    return id;
}

} // namespace patsp
