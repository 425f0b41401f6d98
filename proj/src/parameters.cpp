#include "patsp/parameters.hpp"

#include <json.hpp>

#include <random>

namespace patsp {

namespace {

/// Portable uniform draw in [lo, hi]: modulo keeps results identical across
/// standard libraries, unlike std::uniform_int_distribution.
long draw(std::mt19937_64 &rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

void require_n(int n) {
    ArcSpace check(n);
    (void)check;
}

} // namespace

DVec::DVec(int n)
    : space_(n), entries_(static_cast<std::size_t>(space_.num_restricted_arcs()), Rat(0)) {}

DVec::DVec(int n, std::vector<Rat> entries) : space_(n), entries_(std::move(entries)) {
    if (entries_.size() != static_cast<std::size_t>(space_.num_restricted_arcs())) {
        throw std::invalid_argument("d-vector needs one entry per arc of A1");
    }
}

const Rat &DVec::at(int tail, int head) const {
    return entries_[static_cast<std::size_t>(space_.restricted_index(tail, head))];
}

void DVec::set(int tail, int head, Rat value) {
    entries_[static_cast<std::size_t>(space_.restricted_index(tail, head))] = std::move(value);
}

Rat DVec::cycle_sum(const Cycle &cycle) const {
    Rat total = 0;
    for (const Arc &a : cycle.arcs()) {
        total += at(a.tail, a.head);
    }
    return total;
}

DVec DVec::operator+(const DVec &other) const {
    if (other.n() != n()) {
        throw std::invalid_argument("d-vectors of different size");
    }
    DVec out = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        out.entries_[k] += other.entries_[k];
    }
    return out;
}

DVec DVec::operator*(const Rat &scale) const {
    DVec out = *this;
    for (auto &e : out.entries_) {
        e *= scale;
    }
    return out;
}

BVec::BVec(int n) : n_(n), entries_(static_cast<std::size_t>(n - 1), Rat(0)) { require_n(n); }

BVec::BVec(int n, std::vector<Rat> entries) : n_(n), entries_(std::move(entries)) {
    require_n(n);
    if (entries_.size() != static_cast<std::size_t>(n - 1)) {
        throw std::invalid_argument("b-vector needs one entry per node of N1");
    }
}

const Rat &BVec::at(int node) const {
    if (node < 2 || node > n_) {
        throw std::out_of_range("node " + std::to_string(node) + " not in N1");
    }
    return entries_[static_cast<std::size_t>(node - 2)];
}

void BVec::set(int node, Rat value) {
    if (node < 2 || node > n_) {
        throw std::out_of_range("node " + std::to_string(node) + " not in N1");
    }
    entries_[static_cast<std::size_t>(node - 2)] = std::move(value);
}

Rat BVec::subset_sum(const NodeSubset &subset) const {
    Rat total = 0;
    for (int v : subset.nodes()) {
        total += at(v);
    }
    return total;
}

DVec d_mtz(int n) {
    DVec d(n);
    return DVec(n, std::vector<Rat>(d.entries().size(), make_rat(1, n - 1)));
}

BVec uniform_b(int n) {
    require_n(n);
    return BVec(n, std::vector<Rat>(static_cast<std::size_t>(n - 1), make_rat(1, n - 1)));
}

std::string to_string(Membership m) {
    switch (m) {
    case Membership::interior:
        return "interior";
    case Membership::boundary:
        return "boundary";
    case Membership::outside:
        return "outside";
    }
    return "unknown";
}

namespace {

struct HeaviestCycle {
    const DVec &d;
    int n;
    std::vector<int> path;
    std::vector<bool> used;
    std::optional<Cycle> best;
    Rat best_sum;

    void consider(const Rat &sum) {
        if (best && sum < best_sum) {
            return;
        }
        Cycle c(path);
        if (!best || sum > best_sum || c < *best) {
            best = std::move(c);
            best_sum = sum;
        }
    }

    void extend(const Rat &sum) {
        const int last = path.back();
        if (path.size() >= 2) {
            consider(sum + d.at(last, path.front()));
        }
        if (static_cast<int>(path.size()) == n - 1) {
            return;
        }
        for (int v = path.front() + 1; v <= n; ++v) {
            if (!used[static_cast<std::size_t>(v)]) {
                used[static_cast<std::size_t>(v)] = true;
                path.push_back(v);
                extend(sum + d.at(last, v));
                path.pop_back();
                used[static_cast<std::size_t>(v)] = false;
            }
        }
    }
};

} // namespace

DMembership d_membership(const DVec &d) {
    const int n = d.n();
    if (n > kMaxEnumerationNodes) {
        throw CapacityError("membership in the closure of D is decided by enumerating every cycle "
                            "of N1, refused for n=" + std::to_string(n) + " (limit " +
                            std::to_string(kMaxEnumerationNodes) +
                            "); separation over that polytope is NP-hard, so no polynomial "
                            "oracle is offered");
    }
    DMembership out;
    const auto &arcs = d.space().restricted_arcs();
    out.min_entry = d.entries().front();
    out.min_arc = arcs.front();
    for (std::size_t k = 1; k < arcs.size(); ++k) {
        if (d.entries()[k] < out.min_entry) {
            out.min_entry = d.entries()[k];
            out.min_arc = arcs[k];
        }
    }
    HeaviestCycle search{d, n, {}, std::vector<bool>(static_cast<std::size_t>(n + 1), false), {}, {}};
    for (int s = 2; s <= n; ++s) {
        search.path.assign(1, s);
        search.used[static_cast<std::size_t>(s)] = true;
        search.extend(Rat(0));
        search.used[static_cast<std::size_t>(s)] = false;
    }
    out.worst_cycle = search.best;
    out.worst_sum = search.best_sum;
    if (sgn(out.min_entry) < 0 || out.worst_sum > 1) {
        out.status = Membership::outside;
    } else if (sgn(out.min_entry) == 0) {
        out.status = Membership::boundary;
    } else {
        out.status = Membership::interior;
    }
    return out;
}

BMembership b_membership(const BVec &b) {
    BMembership out;
    out.min_entry = b.entries().front();
    for (const Rat &e : b.entries()) {
        out.sum += e;
        if (e < out.min_entry) {
            out.min_entry = e;
        }
    }
    if (sgn(out.min_entry) < 0 || out.sum != 1) {
        out.status = Membership::outside;
    } else if (sgn(out.min_entry) == 0) {
        out.status = Membership::boundary;
    } else {
        out.status = Membership::interior;
    }
    return out;
}

std::vector<DVec> mtz_vertices(int n) {
    std::vector<DVec> out;
    for (int k = 2; k <= n; ++k) {
        DVec d(n);
        for (int j = 2; j <= n; ++j) {
            if (j != k) {
                d.set(k, j, Rat(1));
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DVec> dl_vertices(int n) {
    std::vector<DVec> out;
    DVec zero(n);
    for (const Arc &a : zero.space().restricted_arcs()) {
        DVec d(n);
        d.set(a.tail, a.head, Rat(1));
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<BVec> scf_vertices(int n) {
    std::vector<BVec> out;
    for (int k = 2; k <= n; ++k) {
        BVec b(n);
        b.set(k, Rat(1));
        out.push_back(std::move(b));
    }
    return out;
}

DVec sample_interior_d(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DVec raw(n);
    std::vector<Rat> entries;
    for (std::size_t k = 0; k < raw.entries().size(); ++k) {
        entries.emplace_back(draw(rng, 1, 1000));
    }
    raw = DVec(n, std::move(entries));
    const Rat heaviest = d_membership(raw).worst_sum;
    return raw * (Rat(1) / (2 * heaviest));
}

BVec sample_interior_b(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Rat> entries;
    Rat total = 0;
    for (int k = 2; k <= n; ++k) {
        entries.emplace_back(draw(rng, 1, 1000));
        total += entries.back();
    }
    for (auto &e : entries) {
        e /= total;
    }
    return BVec(n, std::move(entries));
}

Perturbation describe_perturbation(const DVec &d, DVec delta) {
    if (delta.n() != d.n()) {
        throw std::invalid_argument("perturbation size differs from d");
    }
    bool nonzero = false;
    for (const Arc &a : delta.space().restricted_arcs()) {
        if (delta.at(a.tail, a.head) + delta.at(a.head, a.tail) != 0) {
            throw std::invalid_argument("perturbation is not anti-symmetric at " + to_string(a));
        }
        nonzero = nonzero || sgn(delta.at(a.tail, a.head)) != 0;
    }
    if (!nonzero) {
        throw std::invalid_argument("perturbation is zero");
    }
    Perturbation out{std::move(delta), false, false, std::nullopt};
    if (d.n() >= 4) {
        for (const Cycle &c : enumerate_cycles(d.space(), 3, d.n() - 1)) {
            if (sgn(out.delta.cycle_sum(c)) != 0) {
                out.has_nonzero_long_cycle = true;
                out.nonzero_cycle = c;
                break;
            }
        }
    }
    out.stays_in_d = d_membership(d + out.delta).status == Membership::interior;
    return out;
}

namespace {

DVec triangle_delta(int n, std::mt19937_64 &rng, const Rat &eps) {
    std::vector<int> nodes;
    for (int v = 2; v <= n; ++v) {
        nodes.push_back(v);
    }
    std::vector<int> pick;
    while (pick.size() < 3) {
        const auto k = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(nodes.size()) - 1));
        pick.push_back(nodes[k]);
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(k));
    }
    DVec delta(n);
    for (std::size_t k = 0; k < 3; ++k) {
        const int a = pick[k];
        const int b = pick[(k + 1) % 3];
        delta.set(a, b, eps);
        delta.set(b, a, -eps);
    }
    return delta;
}

DVec potential_delta(int n, std::mt19937_64 &rng) {
    std::vector<long> p(static_cast<std::size_t>(n + 1), 0);
    bool constant = true;
    while (constant) {
        for (int v = 2; v <= n; ++v) {
            p[static_cast<std::size_t>(v)] = draw(rng, -5, 5);
        }
        for (int v = 3; v <= n; ++v) {
            constant = constant && p[static_cast<std::size_t>(v)] == p[2];
        }
    }
    DVec delta(n);
    for (const Arc &a : delta.space().restricted_arcs()) {
        delta.set(a.tail, a.head,
                  Rat(p[static_cast<std::size_t>(a.tail)] - p[static_cast<std::size_t>(a.head)]));
    }
    return delta;
}

DVec random_antisymmetric(int n, std::mt19937_64 &rng) {
    DVec delta(n);
    for (const Arc &a : delta.space().restricted_arcs()) {
        if (a.tail < a.head) {
            const Rat v(draw(rng, -5, 5));
            delta.set(a.tail, a.head, v);
            delta.set(a.head, a.tail, -v);
        }
    }
    return delta;
}

bool in_d(const DVec &d) { return d_membership(d).status == Membership::interior; }

constexpr int kHalvings = 40;
constexpr int kAttempts = 20;

} // namespace

Perturbation antisymmetric_perturbation(const DVec &d, std::uint64_t seed, bool stay_in_d,
                                        PerturbationSupport support) {
    const int n = d.n();
    std::mt19937_64 rng(seed);
    const Rat base = make_rat(1, 4 * (n - 1));
    switch (support) {
    case PerturbationSupport::triangle: {
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            Rat eps = base * make_rat(draw(rng, 1, 4), 4);
            DVec unit = triangle_delta(n, rng, Rat(1));
            if (!stay_in_d) {
                return describe_perturbation(d, unit * eps);
            }
            for (int h = 0; h < kHalvings; ++h, eps /= 2) {
                if (in_d(d + unit * eps)) {
                    return describe_perturbation(d, unit * eps);
                }
            }
        }
        throw SamplingError("no triangle perturbation keeps d inside D");
    }
    case PerturbationSupport::potential:
    case PerturbationSupport::dense: {
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            DVec pot = potential_delta(n, rng);
            Rat s = base / 5;
            if (stay_in_d) {
                int h = 0;
                while (h < kHalvings && !in_d(d + pot * s)) {
                    s /= 2;
                    ++h;
                }
                if (h == kHalvings) {
                    continue;
                }
            }
            DVec delta = pot * s;
            if (support == PerturbationSupport::dense) {
                const DVec noise = random_antisymmetric(n, rng) * (s / 5);
                Rat t = 1;
                bool found = !stay_in_d;
                for (int h = 0; h < kHalvings && !found; ++h, t /= 2) {
                    found = in_d(d + delta + noise * t);
                    if (found) {
                        break;
                    }
                }
                if (found) {
                    delta = delta + noise * t;
                }
            }
            return describe_perturbation(d, delta);
        }
        throw SamplingError("no potential perturbation keeps d inside D");
    }
    }
    throw std::invalid_argument("unknown perturbation support");
}

std::string to_json(const DVec &d) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const Arc &a : d.space().restricted_arcs()) {
        entries[to_string(a)] = to_string(d.at(a.tail, a.head));
    }
    nlohmann::ordered_json out;
    out["kind"] = "d";
    out["entries"] = entries;
    return out.dump();
}

std::string to_json(const BVec &b) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (int k = 2; k <= b.n(); ++k) {
        entries[std::to_string(k)] = to_string(b.at(k));
    }
    nlohmann::ordered_json out;
    out["kind"] = "b";
    out["entries"] = entries;
    return out.dump();
}

namespace {

nlohmann::json parse_param(const std::string &text, const std::string &kind) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed parameter JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("entries") ||
        !j["entries"].is_object()) {
        throw ParseError("parameter JSON needs \"kind\" and an \"entries\" object");
    }
    if (j["kind"] != kind) {
        throw ParseError("expected parameter kind \"" + kind + "\"");
    }
    return j;
}

int parse_node(const std::string &text) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception &) {
        throw ParseError("bad node label \"" + text + "\"");
    }
    if (used != text.size() || v < 1) {
        throw ParseError("bad node label \"" + text + "\"");
    }
    return v;
}

Rat entry_value(const nlohmann::json &value) {
    if (value.is_string()) {
        return parse_rat(value.get<std::string>());
    }
    if (value.is_number_integer()) {
        return Rat(value.get<long>());
    }
    throw ParseError("parameter entries must be \"p/q\" strings or integers");
}

} // namespace

DVec d_from_json(const std::string &text) {
    const auto j = parse_param(text, "d");
    std::vector<std::tuple<int, int, Rat>> items;
    int n = 0;
    for (const auto &[key, value] : j["entries"].items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) {
            throw ParseError("arc key \"" + key + "\" is not of the form i,j");
        }
        const int i = parse_node(key.substr(0, comma));
        const int h = parse_node(key.substr(comma + 1));
        n = std::max({n, i, h});
        items.emplace_back(i, h, entry_value(value));
    }
    DVec d(n);
    std::vector<bool> seen(d.entries().size(), false);
    for (auto &[i, h, v] : items) {
        int k = 0;
        try {
            k = d.space().restricted_index(i, h);
        } catch (const std::out_of_range &) {
            throw ParseError("arc " + std::to_string(i) + "," + std::to_string(h) + " is not in A1");
        }
        seen[static_cast<std::size_t>(k)] = true;
        d.set(i, h, v);
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (!seen[k]) {
            throw ParseError("missing entry for arc " + to_string(d.space().restricted_arc(static_cast<int>(k))));
        }
    }
    return d;
}

BVec b_from_json(const std::string &text) {
    const auto j = parse_param(text, "b");
    std::vector<std::pair<int, Rat>> items;
    int n = 0;
    for (const auto &[key, value] : j["entries"].items()) {
        const int v = parse_node(key);
        if (v < 2) {
            throw ParseError("node 1 carries no b entry");
        }
        n = std::max(n, v);
        items.emplace_back(v, entry_value(value));
    }
    BVec b(n);
    if (items.size() != static_cast<std::size_t>(n - 1)) {
        throw ParseError("b needs exactly one entry per node 2..n");
    }
    for (auto &[v, value] : items) {
        b.set(v, value);
    }
    return b;
}

} // namespace patsp
