#include "patsp/projection.hpp"

#include "patsp/simplex.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace patsp {

using nlohmann::ordered_json;

Point x_from_json(const ArcSpace &space, const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("x file is not JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError("x file must be a JSON object keyed by \"i,j\"");
    }
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (const auto &[key, value] : j.items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) {
            throw ParseError("bad arc key '" + key + "'");
        }
        int tail = 0;
        int head = 0;
        try {
            tail = std::stoi(key.substr(0, comma));
            head = std::stoi(key.substr(comma + 1));
        } catch (const std::exception &) {
            throw ParseError("bad arc key '" + key + "'");
        }
        if (!space.is_node(tail) || !space.is_node(head) || tail == head) {
            throw ParseError("arc key '" + key + "' is not an arc on " + std::to_string(space.n()) +
                             " nodes");
        }
        Rat v;
        if (value.is_string()) {
            v = parse_rat(value.get<std::string>());
        } else if (value.is_number_integer()) {
            v = Rat(value.get<long>());
        } else {
            throw ParseError("value for '" + key + "' must be an integer or a \"p/q\" string");
        }
        x[static_cast<std::size_t>(space.arc_index(tail, head))] = v;
    }
    return x;
}

std::string x_to_json(const ArcSpace &space, const Point &x) {
    ordered_json out = ordered_json::object();
    for (int a = 0; a < space.num_arcs(); ++a) {
        out[to_string(space.arc(a))] = to_string(x.at(static_cast<std::size_t>(a)));
    }
    return out.dump();
}

PotentialRows mtz_potential_rows(const ArcSpace &space, const DVec &d) {
    PotentialRows rows;
    for (const Arc &arc : space.restricted_arcs()) {
        rows.alpha.push_back({{space.arc_index(arc), Rat(1)}});
        rows.beta.push_back(1 - d.at(arc.tail, arc.head));
    }
    return rows;
}

PotentialRows dl_potential_rows(const ArcSpace &space, const DVec &d) {
    PotentialRows rows;
    for (const Arc &arc : space.restricted_arcs()) {
        const Rat back = 1 - d.at(arc.tail, arc.head) - d.at(arc.head, arc.tail);
        rows.alpha.push_back(normalize_terms(
            {{space.arc_index(arc), Rat(1)}, {space.arc_index(arc.reversed()), back}}));
        rows.beta.push_back(1 - d.at(arc.tail, arc.head));
    }
    return rows;
}

namespace {

Rat dot(const Terms &terms, const Point &x) {
    Rat s;
    for (const auto &[a, c] : terms) {
        s += c * x.at(static_cast<std::size_t>(a));
    }
    return s;
}

} // namespace

PotentialLift lift_potentials(const ArcSpace &space, const Point &x, const PotentialRows &rows,
                              int anchor) {
    const int m = space.num_restricted_arcs();
    if (static_cast<int>(rows.alpha.size()) != m || static_cast<int>(rows.beta.size()) != m) {
        throw std::invalid_argument("potential rows must cover every arc of A1");
    }
    if (static_cast<int>(x.size()) != space.num_arcs()) {
        throw std::invalid_argument("x has the wrong length");
    }
    if (anchor < 2 || anchor > space.n()) {
        throw std::invalid_argument("anchor must be a node of N1");
    }
    const int n = space.n();
    std::vector<Rat> cost(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        cost[static_cast<std::size_t>(p)] = rows.beta[static_cast<std::size_t>(p)] -
                                            dot(rows.alpha[static_cast<std::size_t>(p)], x);
    }
    std::vector<std::optional<Rat>> dist(static_cast<std::size_t>(n + 1));
    std::vector<int> pred(static_cast<std::size_t>(n + 1), 0);
    dist[static_cast<std::size_t>(anchor)] = Rat(0);
    int relaxed = 0;
    for (int round = 0; round < n - 1; ++round) {
        relaxed = 0;
        for (int p = 0; p < m; ++p) {
            const Arc &arc = space.restricted_arc(p);
            const auto &di = dist[static_cast<std::size_t>(arc.tail)];
            if (!di) {
                continue;
            }
            const Rat cand = *di + cost[static_cast<std::size_t>(p)];
            auto &dj = dist[static_cast<std::size_t>(arc.head)];
            if (!dj || cand < *dj) {
                dj = cand;
                pred[static_cast<std::size_t>(arc.head)] = arc.tail;
                relaxed = arc.head;
            }
        }
        if (relaxed == 0) {
            break;
        }
    }
    PotentialLift out;
    if (relaxed != 0) {
        // n-1 rounds cover every simple path on |N1| = n-1 nodes; a change in
        // the last of them means a negative cycle is reachable.
        int v = relaxed;
        for (int step = 0; step < n; ++step) {
            v = pred[static_cast<std::size_t>(v)];
        }
        std::vector<int> back = {v};
        for (int w = pred[static_cast<std::size_t>(v)]; w != v; w = pred[static_cast<std::size_t>(w)]) {
            back.push_back(w);
        }
        std::reverse(back.begin(), back.end());
        Cycle c(back);
        Rat total;
        for (const Arc &arc : c.arcs()) {
            total += cost[static_cast<std::size_t>(space.restricted_index(arc.tail, arc.head))];
        }
        if (total >= 0) {
            throw std::logic_error("Bellman-Ford produced a non-negative cycle");
        }
        out.negative_cycle = c;
        out.cycle_cost = total;
        return out;
    }
    out.feasible = true;
    out.u.assign(static_cast<std::size_t>(n + 1), Rat(0));
    for (int i = 2; i <= n; ++i) {
        out.u[static_cast<std::size_t>(i)] = -*dist[static_cast<std::size_t>(i)];
    }
    for (int p = 0; p < m; ++p) {
        const Arc &arc = space.restricted_arc(p);
        if (out.u[static_cast<std::size_t>(arc.tail)] - out.u[static_cast<std::size_t>(arc.head)] >
            cost[static_cast<std::size_t>(p)]) {
            throw std::logic_error("potential lift fails row " + to_string(arc));
        }
    }
    return out;
}

namespace {

Rat inflow(const ArcSpace &space, const Point &x, const NodeSubset &s) {
    Rat total;
    for (int a : delta_minus(space, s)) {
        total += x[static_cast<std::size_t>(a)];
    }
    return total;
}

std::optional<NodeSubset> find_deficient(const ArcSpace &space, const Point &x, const BVec &b,
                                         const std::vector<Rat> &y) {
    std::set<Rat> levels;
    for (int i = 2; i <= space.n(); ++i) {
        if (y[static_cast<std::size_t>(i)] > 0) {
            levels.insert(y[static_cast<std::size_t>(i)]);
        }
    }
    for (const Rat &t : levels) {
        NodeSubset s;
        for (int i = 2; i <= space.n(); ++i) {
            if (y[static_cast<std::size_t>(i)] >= t) {
                s.insert(i);
            }
        }
        if (inflow(space, x, s) < b.subset_sum(s)) {
            return s;
        }
    }
    for (const NodeSubset &s : enumerate_subsets(space, 1, space.n() - 1)) {
        if (inflow(space, x, s) < b.subset_sum(s)) {
            return s;
        }
    }
    return std::nullopt;
}

} // namespace

FlowLift lift_flow(const ArcSpace &space, const Point &x, const BVec &b) {
    if (static_cast<int>(x.size()) != space.num_arcs()) {
        throw std::invalid_argument("x has the wrong length");
    }
    if (b.n() != space.n()) {
        throw std::invalid_argument("b is over a different number of nodes");
    }
    if (const auto v = build_ap(space).worst_violation(x)) {
        throw std::invalid_argument("x is not in P_AP (row " + v->tag + ")");
    }
    LinSys sys;
    for (const Arc &arc : space.arcs()) {
        sys.add_variable("f[" + to_string(arc) + "]", true);
    }
    for (int i = 2; i <= space.n(); ++i) {
        Terms t;
        for (int a = 0; a < space.num_arcs(); ++a) {
            if (space.arc(a).tail == i) {
                t.emplace_back(a, Rat(1));
            } else if (space.arc(a).head == i) {
                t.emplace_back(a, Rat(-1));
            }
        }
        sys.add_equality(normalize_terms(std::move(t)), -b.at(i), "balance(" + std::to_string(i) + ")");
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        sys.add_inequality({{a, Rat(1)}}, x[static_cast<std::size_t>(a)], "cap(" + to_string(space.arc(a)) + ")");
    }
    const LpResult r = solve_lp(sys, Terms{}, Sense::maximize);
    FlowLift out;
    if (r.status != LpStatus::infeasible) {
        out.feasible = true;
        out.f = r.point;
        return out;
    }
    std::vector<Rat> y(static_cast<std::size_t>(space.n() + 1), Rat(0));
    for (int i = 2; i <= space.n(); ++i) {
        y[static_cast<std::size_t>(i)] = r.multipliers.equality[static_cast<std::size_t>(i - 2)];
    }
    const auto s = find_deficient(space, x, b, y);
    if (!s) {
        throw std::logic_error("flow LP infeasible but every cut condition holds");
    }
    out.deficient = *s;
    out.inflow = inflow(space, x, *s);
    out.demand = b.subset_sum(*s);
    return out;
}

namespace {

ordered_json nodes_json(std::span<const int> nodes) {
    ordered_json a = ordered_json::array();
    for (int v : nodes) {
        a.push_back(v);
    }
    return a;
}

ordered_json potential_json(const PotentialLift &lift, const std::string &prefix) {
    ordered_json data = ordered_json::object();
    if (lift.feasible) {
        for (std::size_t i = 2; i < lift.u.size(); ++i) {
            data["u" + prefix + "[" + std::to_string(i) + "]"] = to_string(lift.u[i]);
        }
        return {{"type", "lift"}, {"data", data}};
    }
    data["cycle"] = nodes_json(lift.negative_cycle->nodes());
    data["cost"] = to_string(lift.cycle_cost);
    return {{"type", "negcycle"}, {"data", data}};
}

ordered_json flow_json(const ArcSpace &space, const FlowLift &lift, const std::string &prefix) {
    ordered_json data = ordered_json::object();
    if (lift.feasible) {
        for (int a = 0; a < space.num_arcs(); ++a) {
            data["f" + prefix + "[" + to_string(space.arc(a)) + "]"] =
                to_string(lift.f[static_cast<std::size_t>(a)]);
        }
        return {{"type", "lift"}, {"data", data}};
    }
    data["subset"] = nodes_json(lift.deficient->nodes());
    data["inflow"] = to_string(lift.inflow);
    data["demand"] = to_string(lift.demand);
    return {{"type", "cut"}, {"data", data}};
}

ordered_json row_json(const RowViolation &v) {
    return {{"type", "row"},
            {"data", {{"tag", v.tag}, {"lhs", to_string(v.lhs)}, {"rhs", to_string(v.rhs)}}}};
}

std::pair<bool, ordered_json> decide_d(const ArcSpace &space, Family family, const DVec &d,
                                       const Point &x, const std::string &prefix) {
    const PotentialRows rows =
        family == Family::d_mtz || family == Family::ef_mtz ? mtz_potential_rows(space, d)
                                                            : dl_potential_rows(space, d);
    const PotentialLift lift = lift_potentials(space, x, rows);
    return {lift.feasible, potential_json(lift, prefix)};
}

std::pair<bool, ordered_json> decide_b(const ArcSpace &space, const BVec &b, const Point &x,
                                       const std::string &prefix) {
    const FlowLift lift = lift_flow(space, x, b);
    return {lift.feasible, flow_json(space, lift, prefix)};
}

std::pair<bool, ordered_json> decide_by_lp(const ArcSpace &space, const LinSys &extended,
                                           const Point &x) {
    LinSys pinned = extended;
    for (int a = 0; a < space.num_arcs(); ++a) {
        pinned.add_equality({{pinned.variable(x_name(space.arc(a))), Rat(1)}},
                            x[static_cast<std::size_t>(a)], "fix" + x_name(space.arc(a)));
    }
    const LpResult r = solve_lp(pinned, Terms{}, Sense::maximize);
    ordered_json data = ordered_json::object();
    if (r.status != LpStatus::infeasible) {
        for (int v = space.num_arcs(); v < pinned.num_variables(); ++v) {
            data[pinned.var(v).name] = to_string(r.point[static_cast<std::size_t>(v)]);
        }
        return {true, {{"type", "lift"}, {"data", data}}};
    }
    const auto eqs = pinned.equalities();
    const auto ineqs = pinned.inequalities();
    for (std::size_t k = 0; k < eqs.size(); ++k) {
        if (sgn(r.multipliers.equality[k]) != 0) {
            data[eqs[k].tag] = to_string(r.multipliers.equality[k]);
        }
    }
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
        if (sgn(r.multipliers.inequality[k]) != 0) {
            data[ineqs[k].tag] = to_string(r.multipliers.inequality[k]);
        }
    }
    return {false, {{"type", "farkas"}, {"data", data}}};
}

} // namespace

MembershipResult membership(const ArcSpace &space, const FormulationId &id, const Point &x) {
    validate(id);
    if (static_cast<int>(x.size()) != space.num_arcs()) {
        throw std::invalid_argument("x has the wrong length");
    }
    MembershipResult out;
    if (const auto v = build_ap(space).worst_violation(x)) {
        out.certificate = row_json(*v).dump();
        return out;
    }
    std::pair<bool, ordered_json> verdict;
    switch (id.family) {
    case Family::d_mtz:
    case Family::d_dl:
        verdict = decide_d(space, id.family, *id.d, x, "");
        break;
    case Family::b_scf:
        verdict = decide_b(space, *id.b, x, "");
        break;
    case Family::ef_mtz:
    case Family::ef_dl:
    case Family::ef_scf: {
        const std::size_t count =
            id.family == Family::ef_scf ? id.b_list.size() : id.d_list.size();
        ordered_json blocks = ordered_json::array();
        verdict.first = true;
        for (std::size_t t = 0; t < count; ++t) {
            const std::string prefix = "[" + std::to_string(t) + "]";
            auto [ok, cert] = id.family == Family::ef_scf
                                  ? decide_b(space, id.b_list[t], x, prefix)
                                  : decide_d(space, id.family, id.d_list[t], x, prefix);
            if (!ok) {
                cert["data"]["block"] = t;
                verdict = {false, cert};
                break;
            }
            blocks.push_back(cert["data"]);
        }
        if (verdict.first) {
            verdict.second = {{"type", "lift"}, {"data", {{"blocks", blocks}}}};
        }
        break;
    }
    default:
        if (id.space == VarSpace::extended) {
            verdict = decide_by_lp(space, build(space, id), x);
        } else {
            const LinSys sys = build(space, id);
            if (const auto v = sys.worst_violation(x)) {
                verdict = {false, row_json(*v)};
            } else {
                verdict = {true, {{"type", "row"}, {"data", nullptr}}};
            }
        }
        break;
    }
    out.member = verdict.first;
    out.certificate = verdict.second.dump();
    return out;
}

} // namespace patsp
