#ifndef PATSP_PARAMETERS_HPP
#define PATSP_PARAMETERS_HPP

#include "patsp/graph.hpp"
#include "patsp/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace patsp {

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter vector over A1 (the arcs with both ends in N1).
class DVec {
public:
    /// All-zero vector.
    explicit DVec(int n);
    DVec(int n, std::vector<Rat> entries);

    int n() const { return space_.n(); }
    const ArcSpace &space() const { return space_; }
    const Rat &at(int tail, int head) const;
    void set(int tail, int head, Rat value);
    const std::vector<Rat> &entries() const { return entries_; }

    Rat cycle_sum(const Cycle &cycle) const;
    DVec operator+(const DVec &other) const;
    DVec operator*(const Rat &scale) const;
    bool operator==(const DVec &other) const { return entries_ == other.entries_; }

private:
    ArcSpace space_;
    std::vector<Rat> entries_;
};

/// Parameter vector over N1, stored for nodes 2..n.
class BVec {
public:
    explicit BVec(int n);
    BVec(int n, std::vector<Rat> entries);

    int n() const { return n_; }
    const Rat &at(int node) const;
    void set(int node, Rat value);
    const std::vector<Rat> &entries() const { return entries_; }
    Rat subset_sum(const NodeSubset &subset) const;
    bool operator==(const BVec &other) const { return entries_ == other.entries_; }

private:
    int n_;
    std::vector<Rat> entries_;
};

/// d^MTZ: every entry 1/(n-1).
DVec d_mtz(int n);
/// b with every entry 1/(n-1), the classic single-commodity parameter.
BVec uniform_b(int n);

enum class Membership { interior, boundary, outside };
std::string to_string(Membership m);

struct DMembership {
    /// interior: in D; boundary: in the closure but some entry is 0.
    Membership status = Membership::outside;
    /// A cycle of maximum d-weight (first in canonical order among ties).
    std::optional<Cycle> worst_cycle;
    Rat worst_sum;
    /// Smallest entry and where it sits.
    Rat min_entry;
    Arc min_arc;
};

/// Exhaustive max-weight-cycle search. Throws CapacityError above the
/// enumeration cap, since separating over the closure of D is NP-hard.
DMembership d_membership(const DVec &d);

struct BMembership {
    Membership status = Membership::outside;
    Rat sum;
    Rat min_entry;
};

BMembership b_membership(const BVec &b);

/// d^k (d^k_ij = 1 iff i = k) for k in N1.
std::vector<DVec> mtz_vertices(int n);
/// Unit vectors d^kl for kl in A1, in arc order.
std::vector<DVec> dl_vertices(int n);
/// Unit vectors b^k for k in N1.
std::vector<BVec> scf_vertices(int n);

/// Deterministic interior point of D: positive integer weights scaled so the
/// heaviest cycle weighs exactly 1/2.
DVec sample_interior_d(int n, std::uint64_t seed);
/// Deterministic interior point of B: positive integers normalized to sum 1.
BVec sample_interior_b(int n, std::uint64_t seed);

enum class PerturbationSupport {
    /// epsilon on one directed triangle of N1, negated on its reverse.
    triangle,
    /// delta_ij = p_i - p_j: every cycle sum vanishes.
    potential,
    /// A potential difference plus a dense random anti-symmetric part.
    dense,
};

struct Perturbation {
    DVec delta;
    /// d + delta lies in D (checked by d_membership).
    bool stays_in_d = false;
    /// Some cycle with at least three arcs has nonzero delta-sum.
    bool has_nonzero_long_cycle = false;
    std::optional<Cycle> nonzero_cycle;
};

/// Nonzero anti-symmetric delta for d. With `stay_in_d` the scale is halved
/// until d + delta is in D; after a bounded number of attempts (fresh random
/// supports each time) a SamplingError is raised.
Perturbation antisymmetric_perturbation(const DVec &d, std::uint64_t seed, bool stay_in_d,
                                        PerturbationSupport support = PerturbationSupport::triangle);

/// Fills in the flags of a given anti-symmetric delta relative to d.
Perturbation describe_perturbation(const DVec &d, DVec delta);

std::string to_json(const DVec &d);
std::string to_json(const BVec &b);
/// Parses {"kind":"d"|"b","entries":{...}}; `n` is inferred from the keys.
DVec d_from_json(const std::string &text);
BVec b_from_json(const std::string &text);

} // namespace patsp

#endif
