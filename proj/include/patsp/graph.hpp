#ifndef PATSP_GRAPH_HPP
#define PATSP_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace patsp {

/// Raised when an exhaustive enumeration would exceed the desk-scale limits.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hard limit on n for enumerating all cycles or subsets of N1.
inline constexpr int kMaxEnumerationNodes = 12;
/// Hard limit on n for enumerating all tours or cycle covers.
inline constexpr int kMaxTourEnumerationNodes = 10;

struct Arc {
    int tail = 0;
    int head = 0;

    Arc reversed() const { return {head, tail}; }
    auto operator<=>(const Arc &) const = default;
};

std::string to_string(const Arc &arc);

/// Complete digraph on nodes 1..n with a dense arc numbering.
///
/// Arcs are numbered row-major by tail, skipping the diagonal. The restricted
/// arc set A1 (both ends in N1 = {2..n}) has its own dense numbering, used by
/// d-vectors.
class ArcSpace {
public:
    explicit ArcSpace(int n);

    int n() const { return n_; }
    int num_arcs() const { return n_ * (n_ - 1); }
    int num_restricted_arcs() const { return (n_ - 1) * (n_ - 2); }

    int arc_index(int tail, int head) const;
    int arc_index(const Arc &arc) const { return arc_index(arc.tail, arc.head); }
    const Arc &arc(int index) const { return arcs_.at(static_cast<std::size_t>(index)); }
    std::span<const Arc> arcs() const { return arcs_; }

    /// Position of (tail, head) within A1; both ends must lie in N1.
    int restricted_index(int tail, int head) const;
    const Arc &restricted_arc(int pos) const {
        return restricted_.at(static_cast<std::size_t>(pos));
    }
    std::span<const Arc> restricted_arcs() const { return restricted_; }

    bool is_node(int i) const { return i >= 1 && i <= n_; }

    bool operator==(const ArcSpace &other) const { return n_ == other.n_; }

private:
    int n_;
    std::vector<Arc> arcs_;
    std::vector<Arc> restricted_;
};

/// Subset of N as a bitmask (bit i set iff node i is a member).
class NodeSubset {
public:
    NodeSubset() = default;
    explicit NodeSubset(std::uint32_t mask) : mask_(mask) {}
    NodeSubset(std::initializer_list<int> nodes);

    bool contains(int node) const { return (mask_ >> node) & 1U; }
    void insert(int node) { mask_ |= (1U << node); }
    int size() const;
    bool empty() const { return mask_ == 0; }
    std::uint32_t mask() const { return mask_; }
    std::vector<int> nodes() const;
    std::string to_string() const;

    /// Orders by size, then lexicographically by sorted members.
    std::strong_ordering operator<=>(const NodeSubset &other) const;
    bool operator==(const NodeSubset &other) const { return mask_ == other.mask_; }

private:
    std::uint32_t mask_ = 0;
};

/// Directed cycle stored as a node sequence rotated so its smallest node leads.
class Cycle {
public:
    explicit Cycle(std::vector<int> nodes);

    std::span<const int> nodes() const { return nodes_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    std::vector<Arc> arcs() const;

    bool contains_node(int node) const;
    bool contains_arc(int tail, int head) const;
    int successor(int node) const;
    int predecessor(int node) const;
    Cycle reversed() const;

    std::string to_string() const;

    /// Orders by length, then lexicographically by node sequence.
    std::strong_ordering operator<=>(const Cycle &other) const;
    bool operator==(const Cycle &other) const { return nodes_ == other.nodes_; }

private:
    int position(int node) const;

    std::vector<int> nodes_;
};

Cycle reverse_cycle(const Cycle &cycle);

/// All cycles with arcs in A1 and length in [min_len, max_len], each once, in
/// canonical order.
std::vector<Cycle> enumerate_cycles(const ArcSpace &space, int min_len, int max_len);

/// All cycles of C1 (lengths 2..n-1).
std::vector<Cycle> enumerate_cycles(const ArcSpace &space);

/// All subsets S of N1 with min_size <= |S| <= max_size, in canonical order.
std::vector<NodeSubset> enumerate_subsets(const ArcSpace &space, int min_size, int max_size);

/// The family S1: subsets of N1 with at least two nodes.
std::vector<NodeSubset> enumerate_subsets(const ArcSpace &space);

/// Arc indices of delta+(S) = {ij : i in S, j not in S}.
std::vector<int> delta_plus(const ArcSpace &space, const NodeSubset &subset);
/// Arc indices of delta-(S) = {ij : i not in S, j in S}.
std::vector<int> delta_minus(const ArcSpace &space, const NodeSubset &subset);
/// Arc indices of A(S).
std::vector<int> arcs_within(const ArcSpace &space, const NodeSubset &subset);

/// Hamiltonian cycles on N, each starting at node 1.
std::vector<Cycle> enumerate_tours(const ArcSpace &space);

/// Successor arrays (index 1..n, entry 0 unused) of every cycle cover of the
/// complete digraph, i.e. every integer point of the assignment polytope.
std::vector<std::vector<int>> enumerate_cycle_covers(const ArcSpace &space);

/// Splits a successor array into its directed cycles.
std::vector<Cycle> cover_cycles(const std::vector<int> &successor);

/// Closed-form |C1| = sum_{k=2}^{n-1} C(n-1,k) (k-1)!.
std::uint64_t count_restricted_cycles(int n);

} // namespace patsp

#endif
