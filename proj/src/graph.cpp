#include "patsp/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace patsp {

std::string to_string(const Arc &arc) {
    return std::to_string(arc.tail) + "," + std::to_string(arc.head);
}

ArcSpace::ArcSpace(int n) : n_(n) {
    if (n < 4) {
        throw std::invalid_argument("complete digraph needs n >= 4 nodes, got " +
                                    std::to_string(n));
    }
    if (n > 31) {
        throw std::invalid_argument("node subsets are limited to n <= 31");
    }
    arcs_.reserve(static_cast<std::size_t>(num_arcs()));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i != j) {
                arcs_.push_back({i, j});
                if (i != 1 && j != 1) {
                    restricted_.push_back({i, j});
                }
            }
        }
    }
}

int ArcSpace::arc_index(int tail, int head) const {
    if (!is_node(tail) || !is_node(head) || tail == head) {
        throw std::out_of_range("no arc (" + std::to_string(tail) + "," +
                                std::to_string(head) + ") in digraph on " +
                                std::to_string(n_) + " nodes");
    }
    return (tail - 1) * (n_ - 1) + (head < tail ? head - 1 : head - 2);
}

int ArcSpace::restricted_index(int tail, int head) const {
    if (tail < 2 || head < 2 || tail > n_ || head > n_ || tail == head) {
        throw std::out_of_range("no restricted arc (" + std::to_string(tail) + "," +
                                std::to_string(head) + ")");
    }
    return (tail - 2) * (n_ - 2) + (head < tail ? head - 2 : head - 3);
}

NodeSubset::NodeSubset(std::initializer_list<int> nodes) {
    for (int v : nodes) {
        insert(v);
    }
}

int NodeSubset::size() const { return std::popcount(mask_); }

std::vector<int> NodeSubset::nodes() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

std::string NodeSubset::to_string() const {
    std::string out = "{";
    bool first = true;
    for (int v : nodes()) {
        if (!first) {
            out += ",";
        }
        out += std::to_string(v);
        first = false;
    }
    return out + "}";
}

std::strong_ordering NodeSubset::operator<=>(const NodeSubset &other) const {
    if (auto c = size() <=> other.size(); c != 0) {
        return c;
    }
    return nodes() <=> other.nodes();
}

Cycle::Cycle(std::vector<int> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw std::invalid_argument("a cycle needs at least two nodes");
    }
    auto sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("cycle nodes must be distinct");
    }
    std::rotate(nodes_.begin(), std::min_element(nodes_.begin(), nodes_.end()), nodes_.end());
}

std::vector<Arc> Cycle::arcs() const {
    std::vector<Arc> out;
    out.reserve(nodes_.size());
    for (std::size_t p = 0; p < nodes_.size(); ++p) {
        out.push_back({nodes_[p], nodes_[(p + 1) % nodes_.size()]});
    }
    return out;
}

int Cycle::position(int node) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), node);
    return it == nodes_.end() ? -1 : static_cast<int>(it - nodes_.begin());
}

bool Cycle::contains_node(int node) const { return position(node) >= 0; }

bool Cycle::contains_arc(int tail, int head) const {
    return contains_node(tail) && successor(tail) == head;
}

int Cycle::successor(int node) const {
    const int p = position(node);
    if (p < 0) {
        throw std::out_of_range("node " + std::to_string(node) + " not on cycle " + to_string());
    }
    return nodes_[static_cast<std::size_t>(p + 1) % nodes_.size()];
}

int Cycle::predecessor(int node) const {
    const int p = position(node);
    if (p < 0) {
        throw std::out_of_range("node " + std::to_string(node) + " not on cycle " + to_string());
    }
    return nodes_[static_cast<std::size_t>(p + size() - 1) % nodes_.size()];
}

Cycle Cycle::reversed() const {
    return Cycle(std::vector<int>(nodes_.rbegin(), nodes_.rend()));
}

std::string Cycle::to_string() const {
    std::string out = "(";
    for (std::size_t p = 0; p < nodes_.size(); ++p) {
        if (p > 0) {
            out += ",";
        }
        out += std::to_string(nodes_[p]);
    }
    return out + ")";
}

std::strong_ordering Cycle::operator<=>(const Cycle &other) const {
    if (auto c = nodes_.size() <=> other.nodes_.size(); c != 0) {
        return c;
    }
    return nodes_ <=> other.nodes_;
}

Cycle reverse_cycle(const Cycle &cycle) { return cycle.reversed(); }

namespace {

// Extends `path` (which starts at its minimum node) with larger nodes only, so
// every cycle is produced exactly once, from its canonical rotation.
void extend_paths(int n, int min_len, int max_len, std::vector<int> &path,
                  std::vector<bool> &used, std::vector<Cycle> &out) {
    const int len = static_cast<int>(path.size());
    if (len >= min_len && len >= 2) {
        // 2-cycles are generated once: the path (s,t) closes to the same
        // cycle as its reverse.
        out.emplace_back(path);
    }
    if (len == max_len) {
        return;
    }
    for (int v = path.front() + 1; v <= n; ++v) {
        if (!used[static_cast<std::size_t>(v)]) {
            used[static_cast<std::size_t>(v)] = true;
            path.push_back(v);
            extend_paths(n, min_len, max_len, path, used, out);
            path.pop_back();
            used[static_cast<std::size_t>(v)] = false;
        }
    }
}

} // namespace

std::vector<Cycle> enumerate_cycles(const ArcSpace &space, int min_len, int max_len) {
    const int n = space.n();
    if (min_len < 2 || max_len > n - 1 || min_len > max_len) {
        throw std::invalid_argument("cycle length range [" + std::to_string(min_len) + "," +
                                    std::to_string(max_len) + "] invalid for n=" +
                                    std::to_string(n));
    }
    if (n > kMaxEnumerationNodes) {
        throw CapacityError("cycle enumeration refused for n=" + std::to_string(n) +
                            " (limit " + std::to_string(kMaxEnumerationNodes) + ")");
    }
    std::vector<Cycle> out;
    std::vector<int> path;
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    for (int start = 2; start <= n; ++start) {
        path.assign(1, start);
        used[static_cast<std::size_t>(start)] = true;
        extend_paths(n, min_len, max_len, path, used, out);
        used[static_cast<std::size_t>(start)] = false;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cycle> enumerate_cycles(const ArcSpace &space) {
    return enumerate_cycles(space, 2, space.n() - 1);
}

std::vector<NodeSubset> enumerate_subsets(const ArcSpace &space, int min_size, int max_size) {
    const int n = space.n();
    if (min_size < 1 || max_size > n - 1 || min_size > max_size) {
        throw std::invalid_argument("subset size range invalid for n=" + std::to_string(n));
    }
    if (n > kMaxEnumerationNodes) {
        throw CapacityError("subset enumeration refused for n=" + std::to_string(n) +
                            " (limit " + std::to_string(kMaxEnumerationNodes) + ")");
    }
    std::vector<NodeSubset> out;
    // Bits 2..n carry N1; iterate over all masks of those bits.
    const std::uint32_t full = ((1U << (n + 1)) - 1U) & ~3U;
    for (std::uint32_t m = full;; m = (m - 1) & full) {
        NodeSubset s(m);
        if (s.size() >= min_size && s.size() <= max_size) {
            out.push_back(s);
        }
        if (m == 0) {
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeSubset> enumerate_subsets(const ArcSpace &space) {
    return enumerate_subsets(space, 2, space.n() - 1);
}

namespace {

void check_proper(const ArcSpace &space, const NodeSubset &subset) {
    const std::uint32_t all = ((1U << (space.n() + 1)) - 1U) & ~1U;
    if (subset.empty() || (subset.mask() & ~all) != 0 || subset.mask() == all) {
        throw std::invalid_argument("subset " + subset.to_string() +
                                    " must be nonempty and proper in N");
    }
}

} // namespace

std::vector<int> delta_plus(const ArcSpace &space, const NodeSubset &subset) {
    check_proper(space, subset);
    std::vector<int> out;
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Arc &arc = space.arc(a);
        if (subset.contains(arc.tail) && !subset.contains(arc.head)) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<int> delta_minus(const ArcSpace &space, const NodeSubset &subset) {
    check_proper(space, subset);
    std::vector<int> out;
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Arc &arc = space.arc(a);
        if (!subset.contains(arc.tail) && subset.contains(arc.head)) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<int> arcs_within(const ArcSpace &space, const NodeSubset &subset) {
    std::vector<int> out;
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Arc &arc = space.arc(a);
        if (subset.contains(arc.tail) && subset.contains(arc.head)) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<Cycle> enumerate_tours(const ArcSpace &space) {
    const int n = space.n();
    if (n > kMaxTourEnumerationNodes) {
        throw CapacityError("tour enumeration refused for n=" + std::to_string(n) +
                            " (limit " + std::to_string(kMaxTourEnumerationNodes) + ")");
    }
    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 2);
    std::vector<Cycle> out;
    do {
        std::vector<int> seq{1};
        seq.insert(seq.end(), rest.begin(), rest.end());
        out.emplace_back(std::move(seq));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

std::vector<std::vector<int>> enumerate_cycle_covers(const ArcSpace &space) {
    const int n = space.n();
    if (n > kMaxTourEnumerationNodes) {
        throw CapacityError("cycle cover enumeration refused for n=" + std::to_string(n));
    }
    std::vector<int> perm(static_cast<std::size_t>(n + 1));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool derangement = true;
        for (int i = 1; i <= n && derangement; ++i) {
            derangement = perm[static_cast<std::size_t>(i)] != i;
        }
        if (derangement) {
            out.push_back(perm);
        }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return out;
}

std::vector<Cycle> cover_cycles(const std::vector<int> &successor) {
    const int n = static_cast<int>(successor.size()) - 1;
    std::vector<bool> seen(successor.size(), false);
    std::vector<Cycle> out;
    for (int start = 1; start <= n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) {
            continue;
        }
        std::vector<int> seq;
        for (int v = start; !seen[static_cast<std::size_t>(v)];
             v = successor[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = true;
            seq.push_back(v);
        }
        out.emplace_back(std::move(seq));
    }
    return out;
}

std::uint64_t count_restricted_cycles(int n) {
    std::uint64_t total = 0;
    const int m = n - 1;
    for (int k = 2; k <= m; ++k) {
        std::uint64_t binom = 1;
        for (int t = 1; t <= k; ++t) {
            binom = binom * static_cast<std::uint64_t>(m - k + t) / static_cast<std::uint64_t>(t);
        }
        std::uint64_t fact = 1;
        for (int t = 2; t < k; ++t) {
            fact *= static_cast<std::uint64_t>(t);
        }
        total += binom * fact;
    }
    return total;
}

} // namespace patsp
