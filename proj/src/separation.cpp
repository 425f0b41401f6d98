#include "patsp/separation.hpp"

#include <json.hpp>

#include <deque>
#include <stdexcept>

namespace patsp {

std::string to_json(const ViolatedRow &row) {
    nlohmann::ordered_json out;
    out["family"] = row.family;
    out["tag"] = row.tag;
    if (row.cycle) {
        out["cycle"] = std::vector<int>(row.cycle->nodes().begin(), row.cycle->nodes().end());
    }
    if (row.subset) {
        out["subset"] = row.subset->nodes();
    }
    if (row.arc) {
        out["arc"] = {row.arc->tail, row.arc->head};
    }
    if (row.node) {
        out["node"] = *row.node;
    }
    out["sense"] = row.at_least ? ">=" : "<=";
    out["lhs"] = to_string(row.lhs);
    out["rhs"] = to_string(row.rhs);
    out["violation"] = to_string(row.violation());
    return out.dump();
}

namespace {

void check_point(const ArcSpace &space, const Point &x) {
    if (static_cast<int>(x.size()) != space.num_arcs()) {
        throw std::invalid_argument("x has the wrong length");
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Rat &v = x[static_cast<std::size_t>(a)];
        if (v < 0 || v > 1) {
            throw std::invalid_argument("x[" + to_string(space.arc(a)) + "] = " + to_string(v) +
                                        " lies outside [0,1]");
        }
    }
}

const Rat &xv(const ArcSpace &space, const Point &x, int i, int j) {
    return x[static_cast<std::size_t>(space.arc_index(i, j))];
}

Rat cycle_x(const ArcSpace &space, const Point &x, const Cycle &c) {
    Rat s;
    for (const Arc &arc : c.arcs()) {
        s += x[static_cast<std::size_t>(space.arc_index(arc))];
    }
    return s;
}

/// Keeps the first row with the largest positive violation.
void consider(std::optional<ViolatedRow> &best, ViolatedRow candidate) {
    const Rat v = candidate.violation();
    if (v > 0 && (!best || v > best->violation())) {
        best = std::move(candidate);
    }
}

} // namespace

std::optional<ViolatedRow> separate_circuit(const ArcSpace &space, const Point &x) {
    check_point(space, x);
    const int n = space.n();
    const auto N = static_cast<std::size_t>(n + 1);
    std::vector<std::vector<Rat>> dist(N, std::vector<Rat>(N));
    std::vector<std::vector<int>> next(N, std::vector<int>(N, 0));
    for (int i = 2; i <= n; ++i) {
        for (int j = 2; j <= n; ++j) {
            if (i != j) {
                dist[i][j] = 1 - xv(space, x, i, j);
                next[i][j] = j;
            }
        }
    }
    for (int k = 2; k <= n; ++k) {
        for (int i = 2; i <= n; ++i) {
            for (int j = 2; j <= n; ++j) {
                if (i == j || i == k || j == k) {
                    continue;
                }
                const Rat via = dist[i][k] + dist[k][j];
                if (via < dist[i][j]) {
                    dist[i][j] = via;
                    next[i][j] = next[i][k];
                }
            }
        }
    }
    std::optional<Rat> best_len;
    std::optional<Cycle> best;
    for (int i = 2; i <= n; ++i) {
        for (int j = 2; j <= n; ++j) {
            if (i == j) {
                continue;
            }
            const Rat len = 1 - xv(space, x, i, j) + dist[j][i];
            std::vector<int> nodes = {i};
            for (int v = j; v != i; v = next[v][i]) {
                nodes.push_back(v);
            }
            Cycle c(nodes);
            if (!best_len || len < *best_len || (len == *best_len && c < *best)) {
                best_len = len;
                best = c;
            }
        }
    }
    if (!best || *best_len >= 1) {
        return std::nullopt;
    }
    ViolatedRow row;
    row.family = "circuit";
    row.tag = "circuit" + best->to_string();
    row.cycle = *best;
    row.lhs = cycle_x(space, x, *best);
    row.rhs = best->size() - 1;
    if (row.lhs != best->size() - *best_len) {
        throw std::logic_error("shortest cycle length does not match its x-sum");
    }
    return row;
}

std::optional<ViolatedRow> separate_circuit(const ArcSpace &space, const Point &x, const DVec &d) {
    check_point(space, x);
    std::optional<ViolatedRow> best;
    for (const Cycle &c : enumerate_cycles(space)) {
        ViolatedRow row;
        row.family = "circuit";
        row.tag = "circuit" + c.to_string();
        row.cycle = c;
        row.lhs = cycle_x(space, x, c);
        row.rhs = c.size() - d.cycle_sum(c);
        consider(best, std::move(row));
    }
    return best;
}

namespace {

/// Edmonds-Karp from `source` to `sink` on capacities x; returns the set of
/// nodes reachable from `source` in the final residual graph.
NodeSubset min_cut_side(const ArcSpace &space, const Point &x, int source, int sink) {
    const int n = space.n();
    const auto N = static_cast<std::size_t>(n + 1);
    std::vector<std::vector<Rat>> residual(N, std::vector<Rat>(N));
    for (const Arc &arc : space.arcs()) {
        residual[arc.tail][arc.head] = xv(space, x, arc.tail, arc.head);
    }
    while (true) {
        std::vector<int> parent(N, 0);
        parent[source] = source;
        std::deque<int> queue = {source};
        while (!queue.empty() && parent[sink] == 0) {
            const int v = queue.front();
            queue.pop_front();
            for (int w = 1; w <= n; ++w) {
                if (parent[w] == 0 && residual[v][w] > 0) {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if (parent[sink] == 0) {
            NodeSubset side;
            for (int v = 1; v <= n; ++v) {
                if (parent[v] != 0) {
                    side.insert(v);
                }
            }
            return side;
        }
        Rat push = residual[parent[sink]][sink];
        for (int v = sink; v != source; v = parent[v]) {
            push = std::min(push, residual[parent[v]][v]);
        }
        for (int v = sink; v != source; v = parent[v]) {
            residual[parent[v]][v] -= push;
            residual[v][parent[v]] += push;
        }
    }
}

Rat out_sum(const ArcSpace &space, const Point &x, const NodeSubset &s) {
    Rat total;
    for (int a : delta_plus(space, s)) {
        total += x[static_cast<std::size_t>(a)];
    }
    return total;
}

ViolatedRow cut_row(const ArcSpace &space, const Point &x, const NodeSubset &s, Rat rhs) {
    ViolatedRow row;
    row.family = "cut";
    row.tag = "cut" + s.to_string();
    row.subset = s;
    row.at_least = true;
    row.lhs = out_sum(space, x, s);
    row.rhs = std::move(rhs);
    return row;
}

} // namespace

std::optional<ViolatedRow> separate_cut(const ArcSpace &space, const Point &x) {
    check_point(space, x);
    std::optional<ViolatedRow> best;
    for (int k = 2; k <= space.n(); ++k) {
        const NodeSubset s = min_cut_side(space, x, k, 1);
        consider(best, cut_row(space, x, s, Rat(1)));
    }
    return best;
}

std::optional<ViolatedRow> separate_cut(const ArcSpace &space, const Point &x, const BVec &b) {
    check_point(space, x);
    std::optional<ViolatedRow> best;
    for (const NodeSubset &s : enumerate_subsets(space)) {
        consider(best, cut_row(space, x, s, b.subset_sum(s)));
    }
    return best;
}

std::optional<ViolatedRow> separate_dl_lifted(const ArcSpace &space, const Point &x, DlMode mode,
                                              const DVec *d) {
    check_point(space, x);
    if (mode == DlMode::param && d == nullptr) {
        throw std::invalid_argument("parameter mode needs d");
    }
    std::optional<ViolatedRow> best;
    for (const Cycle &c : enumerate_cycles(space, 3, space.n() - 1)) {
        Rat both;
        for (const Arc &arc : c.arcs()) {
            both += xv(space, x, arc.tail, arc.head) + xv(space, x, arc.head, arc.tail);
        }
        const Rat rhs = c.size() - 1;
        if (mode == DlMode::v_dl) {
            for (const Arc &arc : c.arcs()) {
                ViolatedRow row;
                row.family = "dl-closure";
                row.tag = "dlclosure" + c.to_string() + "[" + to_string(arc) + "]";
                row.cycle = c;
                row.arc = arc;
                row.lhs = both - xv(space, x, arc.head, arc.tail);
                row.rhs = rhs;
                consider(best, std::move(row));
            }
        } else if (mode == DlMode::v_mtz) {
            for (int k : c.nodes()) {
                ViolatedRow row;
                row.family = "dl-vmtz";
                row.tag = "dlvmtz" + c.to_string() + "[" + std::to_string(k) + "]";
                row.cycle = c;
                row.node = k;
                row.lhs = both - xv(space, x, k, c.predecessor(k)) - xv(space, x, c.successor(k), k);
                row.rhs = rhs;
                consider(best, std::move(row));
            }
        } else {
            ViolatedRow row;
            row.family = "dl";
            row.tag = "dlcycle" + c.to_string();
            row.cycle = c;
            row.lhs = both;
            for (const Arc &arc : c.arcs()) {
                row.lhs -= (d->at(arc.tail, arc.head) + d->at(arc.head, arc.tail)) *
                           xv(space, x, arc.head, arc.tail);
            }
            row.rhs = c.size() - d->cycle_sum(c);
            consider(best, std::move(row));
        }
    }
    for (int i = 2; i <= space.n(); ++i) {
        for (int j = i + 1; j <= space.n(); ++j) {
            ViolatedRow row;
            row.family = "pair";
            row.tag = "pair(" + std::to_string(i) + "," + std::to_string(j) + ")";
            row.cycle = Cycle({i, j});
            row.lhs = xv(space, x, i, j) + xv(space, x, j, i);
            row.rhs = 1;
            consider(best, std::move(row));
        }
    }
    return best;
}

std::optional<Cycle> separate_dbar(const DVec &d) {
    const DMembership m = d_membership(d);
    if (m.worst_cycle && m.worst_sum > 1) {
        return m.worst_cycle;
    }
    return std::nullopt;
}

} // namespace patsp
