#include "patsp/analysis.hpp"

#include "patsp/polyhedra.hpp"
#include "patsp/projection.hpp"
#include "patsp/simplex.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace patsp {

using json = nlohmann::ordered_json;

std::string to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::verified:
        return "verified";
    case Verdict::refuted:
        return "refuted";
    case Verdict::skipped:
        return "skipped";
    }
    return "?";
}

void PropositionReport::add_check(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
}

void PropositionReport::conclude() {
    if (checks.empty()) {
        verdict = Verdict::skipped;
        if (reason.empty()) {
            reason = "no checks ran";
        }
        return;
    }
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    verdict = ok ? Verdict::verified : Verdict::refuted;
}

void PropositionReport::skip(std::string why) {
    verdict = Verdict::skipped;
    reason = std::move(why);
}

std::string to_json(const PropositionReport &report, bool with_runtime) {
    json out;
    out["id"] = report.id;
    out["n"] = report.n;
    out["params"] = json::parse(report.params);
    out["verdict"] = to_string(report.verdict);
    if (!report.reason.empty()) {
        out["reason"] = report.reason;
    }
    out["checks"] = json::array();
    for (const Check &c : report.checks) {
        json cj = {{"name", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) {
            cj["detail"] = c.detail;
        }
        out["checks"].push_back(cj);
    }
    out["stats"] = json::object();
    for (const auto &[k, v] : report.stats) {
        out["stats"][k] = v;
    }
    out["certificates"] = json::array();
    for (const std::string &c : report.certificates) {
        out["certificates"].push_back(json::parse(c));
    }
    if (with_runtime) {
        out["runtime_seconds"] = report.runtime_seconds;
    }
    return out.dump();
}

PropositionReport report_from_json(const std::string &text) {
    try {
        const json j = json::parse(text);
        PropositionReport r;
        r.id = j.at("id").get<std::string>();
        r.n = j.at("n").get<int>();
        r.params = j.at("params").dump();
        const std::string v = j.at("verdict").get<std::string>();
        if (v == "verified") {
            r.verdict = Verdict::verified;
        } else if (v == "refuted") {
            r.verdict = Verdict::refuted;
        } else if (v == "skipped") {
            r.verdict = Verdict::skipped;
        } else {
            throw ParseError("unknown verdict '" + v + "'");
        }
        r.reason = j.value("reason", "");
        for (const auto &c : j.at("checks")) {
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                                c.value("detail", "")});
        }
        for (const auto &[k, val] : j.at("stats").items()) {
            r.stats[k] = val.get<std::string>();
        }
        for (const auto &c : j.at("certificates")) {
            r.certificates.push_back(c.dump());
        }
        r.runtime_seconds = j.value("runtime_seconds", 0.0);
        return r;
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

std::string text_table(const std::vector<PropositionReport> &reports, bool with_runtime) {
    std::size_t width = 11;
    for (const auto &r : reports) {
        width = std::max(width, r.id.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width)) << "proposition" << "  n  "
        << std::setw(9) << "verdict" << "  checks";
    if (with_runtime) {
        out << "   time(s)";
    }
    out << "  note\n";
    for (const auto &r : reports) {
        const auto passed = std::count_if(r.checks.begin(), r.checks.end(),
                                          [](const Check &c) { return c.passed; });
        std::ostringstream counts;
        counts << passed << "/" << r.checks.size();
        out << std::left << std::setw(static_cast<int>(width)) << r.id << "  " << std::setw(3) << (r.n > 0 ? std::to_string(r.n) : "-")
            << std::setw(9) << to_string(r.verdict) << "  " << std::setw(6) << counts.str();
        if (with_runtime) {
            out << "  " << std::right << std::setw(8) << std::fixed << std::setprecision(2)
                << r.runtime_seconds << std::left;
        }
        std::string note = r.reason;
        for (const Check &c : r.checks) {
            if (!c.passed) {
                note = "failed: " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
                break;
            }
        }
        out << "  " << note << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Certificates.

namespace {

json named_point(const LinSys &sys, const Point &p) {
    json out = json::object();
    for (int v = 0; v < sys.num_variables(); ++v) {
        if (sgn(p[static_cast<std::size_t>(v)]) != 0) {
            out[sys.var(v).name] = to_string(p[static_cast<std::size_t>(v)]);
        }
    }
    return out;
}

std::map<std::string, Rat> map_from_json(const nlohmann::json &j) {
    std::map<std::string, Rat> out;
    for (const auto &[k, v] : j.items()) {
        out[k] = parse_rat(v.get<std::string>());
    }
    return out;
}

json x_point_json(const ArcSpace &space, const Point &x) {
    json out = json::object();
    for (int a = 0; a < space.num_arcs(); ++a) {
        if (sgn(x[static_cast<std::size_t>(a)]) != 0) {
            out[x_name(space.arc(a))] = to_string(x[static_cast<std::size_t>(a)]);
        }
    }
    return out;
}

Point x_from_names(const ArcSpace &space, const std::map<std::string, Rat> &values) {
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (int a = 0; a < space.num_arcs(); ++a) {
        const auto it = values.find(x_name(space.arc(a)));
        if (it != values.end()) {
            x[static_cast<std::size_t>(a)] = it->second;
        }
    }
    return x;
}

/// Systems rebuilt during one recheck() call, keyed by their reference.
thread_local std::map<std::string, LinSys> *rebuild_cache = nullptr;

LinSys rebuild_uncached(const nlohmann::json &ref) {
    if (ref.contains("formulation")) {
        return build(ArcSpace(ref.at("n").get<int>()), formulation_from_json(ref.at("formulation").dump()));
    }
    return linsys_from_json(ref.at("linsys").dump());
}

const LinSys &rebuild(const nlohmann::json &ref) {
    if (rebuild_cache == nullptr) {
        throw std::logic_error("rebuild outside recheck");
    }
    const std::string key = ref.dump();
    auto it = rebuild_cache->find(key);
    if (it == rebuild_cache->end()) {
        it = rebuild_cache->emplace(key, rebuild_uncached(ref)).first;
    }
    return it->second;
}

json row_terms_json(const LinSys &sys, const Terms &terms) {
    json out = json::object();
    for (const auto &[v, c] : terms) {
        out[sys.var(v).name] = to_string(c);
    }
    return out;
}

json multipliers_json(const LinSys &sys, const RowMultipliers &m, std::string_view skip_tag = {}) {
    json out = json::object();
    const auto eqs = sys.equalities();
    const auto ineqs = sys.inequalities();
    for (std::size_t k = 0; k < eqs.size(); ++k) {
        if (sgn(m.equality[k]) != 0) {
            out[eqs[k].tag] = to_string(m.equality[k]);
        }
    }
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
        if (sgn(m.inequality[k]) != 0 && ineqs[k].tag != skip_tag) {
            out[ineqs[k].tag] = to_string(m.inequality[k]);
        }
    }
    return out;
}

std::string implied_cert(const SystemRef &a, const json &row_terms, const Rat &rhs, const json &mult,
                         const std::string &exclude = {}) {
    json c;
    c["kind"] = "implied";
    c["system"] = json::parse(a.ref_json);
    c["row"] = {{"terms", row_terms}, {"rhs", to_string(rhs)}};
    c["multipliers"] = mult;
    if (!exclude.empty()) {
        c["exclude"] = exclude;
    }
    return c.dump();
}

std::string member_cert(const SystemRef &s, const json &point, bool member) {
    json c;
    c["kind"] = "member";
    c["system"] = json::parse(s.ref_json);
    c["point"] = point;
    c["member"] = member;
    return c.dump();
}

std::string row_cert(const SystemRef &s, const std::string &tag, const json &point, const Rat &lhs,
                     const Rat &rhs) {
    json c;
    c["kind"] = "row";
    c["system"] = json::parse(s.ref_json);
    c["tag"] = tag;
    c["point"] = point;
    c["lhs"] = to_string(lhs);
    c["rhs"] = to_string(rhs);
    return c.dump();
}

std::optional<std::string> recheck_implied(const nlohmann::json &c) {
    const LinSys &sys = rebuild(c.at("system"));
    const std::string exclude = c.value("exclude", "");
    const auto mult = map_from_json(c.at("multipliers"));
    std::vector<Rat> comb(static_cast<std::size_t>(sys.num_variables()));
    Rat bound;
    std::size_t used = 0;
    auto take = [&](const Row &r, bool equality) -> std::optional<std::string> {
        const auto it = mult.find(r.tag);
        if (it == mult.end()) {
            return std::nullopt;
        }
        if (r.tag == exclude) {
            return "multiplier on the excluded row " + r.tag;
        }
        if (!equality && it->second < 0) {
            return "negative multiplier on " + r.tag;
        }
        ++used;
        for (const auto &[v, coef] : r.terms) {
            comb[static_cast<std::size_t>(v)] += it->second * coef;
        }
        bound += it->second * r.rhs;
        return std::nullopt;
    };
    for (const Row &r : sys.equalities()) {
        if (auto e = take(r, true)) {
            return e;
        }
    }
    for (const Row &r : sys.inequalities()) {
        if (auto e = take(r, false)) {
            return e;
        }
    }
    if (used != mult.size()) {
        return "multiplier on an unknown row";
    }
    std::vector<Rat> target(comb.size());
    for (const auto &[name, value] : map_from_json(c.at("row").at("terms"))) {
        const auto idx = sys.find_variable(name);
        if (!idx) {
            return "row mentions unknown variable " + name;
        }
        target[static_cast<std::size_t>(*idx)] = value;
    }
    for (int v = 0; v < sys.num_variables(); ++v) {
        const Rat &have = comb[static_cast<std::size_t>(v)];
        const Rat &want = target[static_cast<std::size_t>(v)];
        if (sys.var(v).nonneg ? have < want : have != want) {
            return "combination does not dominate the row on " + sys.var(v).name;
        }
    }
    if (bound > parse_rat(c.at("row").at("rhs").get<std::string>())) {
        return "combined right-hand side exceeds the row";
    }
    return std::nullopt;
}

std::optional<std::string> recheck_member(const nlohmann::json &c) {
    const auto &ref = c.at("system");
    const auto values = map_from_json(c.at("point"));
    const bool expect = c.at("member").get<bool>();
    bool got = false;
    if (ref.contains("formulation")) {
        const ArcSpace space(ref.at("n").get<int>());
        got = membership(space, formulation_from_json(ref.at("formulation").dump()),
                         x_from_names(space, values))
                  .member;
    } else {
        const LinSys &sys = rebuild(ref);
        got = sys.contains(sys.point_from(values));
    }
    if (got != expect) {
        return std::string("membership is ") + (got ? "true" : "false") + ", certificate says " +
               (expect ? "true" : "false");
    }
    return std::nullopt;
}

std::optional<std::string> recheck_row(const nlohmann::json &c) {
    const LinSys &sys = rebuild(c.at("system"));
    const std::string tag = c.at("tag").get<std::string>();
    const Row &row = sys.row(tag);
    const Point p = sys.point_from(map_from_json(c.at("point")));
    if (row.lhs(p) != parse_rat(c.at("lhs").get<std::string>()) ||
        row.rhs != parse_rat(c.at("rhs").get<std::string>())) {
        return "row " + tag + " evaluates differently";
    }
    return std::nullopt;
}

std::optional<std::string> recheck_facet(const nlohmann::json &c) {
    const LinSys &sys = rebuild(c.at("system"));
    const std::string tag = c.at("tag").get<std::string>();
    const Point w = sys.point_from(map_from_json(c.at("witness")));
    const Point s = sys.point_from(map_from_json(c.at("strict")));
    const Row &row = sys.row(tag);
    if (row.lhs(w) <= row.rhs) {
        return "facet witness does not violate " + tag;
    }
    if (!sys.without_inequality(tag).contains(w)) {
        return "facet witness violates another row than " + tag;
    }
    if (!sys.contains(s) || row.lhs(s) >= row.rhs) {
        return "strict point does not satisfy " + tag + " strictly";
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> recheck(const PropositionReport &report) {
    std::map<std::string, LinSys> cache;
    rebuild_cache = &cache;
    struct Reset {
        ~Reset() { rebuild_cache = nullptr; }
    } reset;
    for (std::size_t k = 0; k < report.certificates.size(); ++k) {
        const auto c = nlohmann::json::parse(report.certificates[k]);
        const std::string kind = c.at("kind").get<std::string>();
        std::optional<std::string> problem;
        if (kind == "implied") {
            problem = recheck_implied(c);
        } else if (kind == "member") {
            problem = recheck_member(c);
        } else if (kind == "row") {
            problem = recheck_row(c);
        } else if (kind == "facet") {
            problem = recheck_facet(c);
        } else {
            problem = "unknown certificate kind " + kind;
        }
        if (problem) {
            return "certificate " + std::to_string(k) + ": " + *problem;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Inclusion.

SystemRef formulation_ref(const ArcSpace &space, const FormulationId &id) {
    json ref;
    ref["n"] = space.n();
    ref["formulation"] = json::parse(to_json(id));
    return {build(space, id), ref.dump()};
}

SystemRef inline_ref(LinSys sys) {
    json ref;
    ref["linsys"] = json::parse(to_json(sys));
    std::string text = ref.dump();
    return {std::move(sys), std::move(text)};
}

InclusionCheck certify_inclusion(const SystemRef &a, const LinSys &b) {
    struct Target {
        Terms terms;
        Rat rhs;
        std::string tag;
    };
    std::vector<Target> targets;
    auto map_terms = [&](const Terms &terms) {
        Terms t;
        for (const auto &[v, c] : terms) {
            t.emplace_back(a.sys.variable(b.var(v).name), c);
        }
        return normalize_terms(std::move(t));
    };
    for (const Row &r : b.equalities()) {
        Terms t = map_terms(r.terms);
        Terms neg = t;
        for (auto &term : neg) {
            term.second = -term.second;
        }
        targets.push_back({t, r.rhs, r.tag});
        targets.push_back({neg, -r.rhs, r.tag + "(reversed)"});
    }
    for (const Row &r : b.inequalities()) {
        targets.push_back({map_terms(r.terms), r.rhs, r.tag});
    }
    for (int v = 0; v < b.num_variables(); ++v) {
        const int av = a.sys.variable(b.var(v).name);
        if (b.var(v).nonneg && !a.sys.var(av).nonneg) {
            targets.push_back({{{av, Rat(-1)}}, Rat(0), "nonneg(" + b.var(v).name + ")"});
        }
    }
    InclusionCheck out;
    for (const Target &t : targets) {
        const LpResult r = solve_lp(a.sys, t.terms, Sense::maximize);
        if (r.status == LpStatus::infeasible) {
            throw InfeasibleSystemError("inclusion test over an empty system");
        }
        Point witness;
        if (r.status == LpStatus::unbounded) {
            Rat lhs;
            Rat slope;
            for (const auto &[v, c] : t.terms) {
                lhs += c * r.point[static_cast<std::size_t>(v)];
                slope += c * r.ray[static_cast<std::size_t>(v)];
            }
            const Rat step = (t.rhs - lhs) / slope + 1;
            witness = r.point;
            for (std::size_t k = 0; k < witness.size(); ++k) {
                witness[k] += step * r.ray[k];
            }
        } else if (r.value > t.rhs) {
            witness = r.point;
        } else {
            json terms = json::object();
            for (const auto &[v, c] : t.terms) {
                terms[a.sys.var(v).name] = to_string(c);
            }
            out.certificates.push_back(implied_cert(a, terms, t.rhs, multipliers_json(a.sys, r.multipliers)));
            continue;
        }
        out.included = false;
        out.failing_row = t.tag;
        out.witness = a.sys.named(witness);
        out.certificates.clear();
        return out;
    }
    out.included = true;
    return out;
}

std::string to_string(Relation relation) {
    switch (relation) {
    case Relation::equal:
        return "equal";
    case Relation::a_inside_b:
        return "A strictly inside B";
    case Relation::b_inside_a:
        return "B strictly inside A";
    case Relation::incomparable:
        return "incomparable";
    }
    return "?";
}

namespace {

FormulationId as_x(FormulationId id) {
    id.space = VarSpace::x_only;
    return id;
}

} // namespace

Comparison compare_pair(const ArcSpace &space, const FormulationId &a, const FormulationId &b) {
    const SystemRef ra = formulation_ref(space, as_x(a));
    const SystemRef rb = formulation_ref(space, as_x(b));
    const InclusionCheck ab = certify_inclusion(ra, rb.sys);
    const InclusionCheck ba = certify_inclusion(rb, ra.sys);
    Comparison out;
    auto witness = [&](const InclusionCheck &c, const SystemRef &in, const SystemRef &outside,
                       const FormulationId &in_id, const FormulationId &out_id) {
        const Point x = x_from_names(space, c.witness);
        if (!membership(space, as_x(in_id), x).member || membership(space, as_x(out_id), x).member) {
            throw std::logic_error("comparison witness does not re-verify");
        }
        out.certificates.push_back(member_cert(in, x_point_json(space, x), true));
        out.certificates.push_back(member_cert(outside, x_point_json(space, x), false));
        return x;
    };
    if (ab.included) {
        out.certificates.insert(out.certificates.end(), ab.certificates.begin(), ab.certificates.end());
    } else {
        out.a_not_b = witness(ab, ra, rb, a, b);
    }
    if (ba.included) {
        out.certificates.insert(out.certificates.end(), ba.certificates.begin(), ba.certificates.end());
    } else {
        out.b_not_a = witness(ba, rb, ra, b, a);
    }
    if (ab.included && ba.included) {
        out.relation = Relation::equal;
    } else if (ab.included) {
        out.relation = Relation::a_inside_b;
    } else if (ba.included) {
        out.relation = Relation::b_inside_a;
    } else {
        out.relation = Relation::incomparable;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Propositions.

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Stamps the runtime when the report is returned by name (NRVO).
struct Timer {
    PropositionReport &report;
    Clock::time_point start = Clock::now();
    ~Timer() { report.runtime_seconds = seconds_since(start); }
};

json params_of(const FormulationId &id) { return json::parse(to_json(id)); }

Point uniform_point(const ArcSpace &space) {
    return Point(static_cast<std::size_t>(space.num_arcs()), make_rat(1, space.n() - 1));
}

Point cover_point(const ArcSpace &space, const std::vector<int> &succ) {
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    for (int i = 1; i <= space.n(); ++i) {
        x[static_cast<std::size_t>(space.arc_index(i, succ[static_cast<std::size_t>(i)]))] = 1;
    }
    return x;
}

void add_inclusion_check(PropositionReport &report, const std::string &name, const SystemRef &a,
                         const LinSys &b) {
    const InclusionCheck c = certify_inclusion(a, b);
    report.add_check(name, c.included, c.included ? "" : "row " + c.failing_row + " fails");
    report.certificates.insert(report.certificates.end(), c.certificates.begin(), c.certificates.end());
}

} // namespace

PropositionReport verify_projection(const ArcSpace &space, const FormulationId &id) {
    PropositionReport report;
    Timer timer{report};
    report.id = to_string(id.family) + "-projection";
    report.n = space.n();
    report.params = params_of(id).dump();
    if (id.family != Family::d_mtz && id.family != Family::d_dl && id.family != Family::b_scf) {
        throw std::invalid_argument("projection check needs d-mtz, d-dl or b-scf");
    }
    FormulationId ext = id;
    ext.space = VarSpace::extended;
    const SystemRef q = formulation_ref(space, ext);
    const SystemRef p = formulation_ref(space, as_x(id));
    add_inclusion_check(report, "Q projects into P", q, p.sys);
    const LinSys proj = project_onto(q.sys, x_names(space));
    report.stats["projected_rows"] = std::to_string(proj.inequalities().size());
    add_inclusion_check(report, "P inside the Fourier-Motzkin projection of Q", p, proj);
    report.conclude();
    return report;
}

PropositionReport verify_validity(const ArcSpace &space, const FormulationId &id) {
    PropositionReport report;
    Timer timer{report};
    report.id = to_string(id.family) + "-validity";
    report.n = space.n();
    report.params = params_of(id).dump();
    const SystemRef ref = formulation_ref(space, as_x(id));
    long tours = 0;
    long rejected = 0;
    long wrong = 0;
    for (const auto &succ : enumerate_cycle_covers(space)) {
        const Point x = cover_point(space, succ);
        const bool tour = cover_cycles(succ).size() == 1;
        const bool member = membership(space, id, x).member;
        if (member != tour) {
            ++wrong;
        }
        (tour ? tours : rejected) += member == tour ? 1 : 0;
        report.certificates.push_back(member_cert(ref, x_point_json(space, x), member));
    }
    report.stats["tours_accepted"] = std::to_string(tours);
    report.stats["subtour_covers_rejected"] = std::to_string(rejected);
    report.add_check("integer points are exactly the tours", wrong == 0,
                     std::to_string(wrong) + " cycle covers misclassified");
    report.conclude();
    return report;
}

PropositionReport facet_census(const ArcSpace &space, CensusFamily family, const DVec *d,
                               const BVec *b) {
    PropositionReport report;
    Timer timer{report};
    report.n = space.n();
    FormulationId id;
    switch (family) {
    case CensusFamily::mtz:
        report.id = "mtz-facets";
        id = {.family = Family::d_mtz, .d = *d};
        break;
    case CensusFamily::dl:
        report.id = "dl-facets";
        id = {.family = Family::d_dl, .d = *d};
        break;
    case CensusFamily::scf:
        report.id = "scf-facets";
        id = {.family = Family::b_scf, .b = *b};
        break;
    }
    report.params = params_of(id).dump();
    const SystemRef ref = formulation_ref(space, id);
    const LinSys &sys = ref.sys;
    const Point strict = uniform_point(space);
    const int n = space.n();
    long rows = 0;
    long facets = 0;
    long mismatches = 0;
    std::string first_mismatch;
    auto census_row = [&](const Row &row, bool expected) {
        ++rows;
        const RedundancyResult red = is_redundant(sys, row.tag);
        const bool is_strict = row.lhs(strict) < row.rhs;
        const bool facet = !red.redundant && is_strict;
        facets += facet ? 1 : 0;
        if (facet != expected) {
            ++mismatches;
            if (first_mismatch.empty()) {
                first_mismatch = row.tag;
            }
        }
        if (facet) {
            json c;
            c["kind"] = "facet";
            c["system"] = json::parse(ref.ref_json);
            c["tag"] = row.tag;
            c["witness"] = named_point(sys, red.witness);
            c["strict"] = named_point(sys, strict);
            report.certificates.push_back(c.dump());
        } else if (red.redundant) {
            report.certificates.push_back(implied_cert(ref, row_terms_json(sys, row.terms), row.rhs,
                                                       multipliers_json(sys, red.dual, row.tag), row.tag));
        }
    };
    if (family == CensusFamily::mtz) {
        for (const Cycle &c : enumerate_cycles(space)) {
            census_row(sys.row("circuit" + c.to_string()), d->cycle_sum(c) > 0 && c.size() <= n - 2);
        }
    } else if (family == CensusFamily::dl) {
        for (const Cycle &c : enumerate_cycles(space, 3, n - 1)) {
            census_row(sys.row("dlcycle" + c.to_string()), d->cycle_sum(c) > 0 && c.size() <= n - 2);
        }
        for (const Row &row : sys.inequalities()) {
            if (row.tag.rfind("pair(", 0) == 0) {
                census_row(row, true);
            }
        }
    } else {
        const NodeSubset all = [&] {
            NodeSubset s;
            for (int i = 2; i <= n; ++i) {
                s.insert(i);
            }
            return s;
        }();
        for (const NodeSubset &s : enumerate_subsets(space)) {
            census_row(sys.row("cut" + s.to_string()), b->subset_sum(s) > 0 && !(s == all));
        }
    }
    report.stats["rows"] = std::to_string(rows);
    report.stats["facets"] = std::to_string(facets);
    report.stats["mismatches"] = std::to_string(mismatches);
    report.add_check("census matches the facet predicate", mismatches == 0,
                     mismatches == 0 ? "" : "first mismatch at " + first_mismatch);
    report.conclude();
    return report;
}

PropositionReport verify_local_hull(HullFamily family, const Rat &dij, const Rat &dji) {
    PropositionReport report;
    Timer timer{report};
    report.id = family == HullFamily::mtz ? "mtz-local-hull" : "dl-local-hull";
    report.n = 0;
    report.params = json({{"d_ij", to_string(dij)}, {"d_ji", to_string(dji)}}).dump();

    LinSys lift;
    const int ui = lift.add_variable("u_i");
    const int uj = lift.add_variable("u_j");
    const int xij = lift.add_variable("x_ij");
    const int xji = lift.add_variable("x_ji");
    int vi[4];
    int vj[4];
    int lam[4];
    for (int k = 1; k <= 3; ++k) {
        vi[k] = lift.add_variable("v" + std::to_string(k) + "_i");
        vj[k] = lift.add_variable("v" + std::to_string(k) + "_j");
    }
    for (int k = 1; k <= 3; ++k) {
        lam[k] = lift.add_variable("lambda" + std::to_string(k), true);
    }
    const Rat one(1);
    lift.add_equality(normalize_terms({{ui, one}, {vi[1], -one}, {vi[2], -one}, {vi[3], -one}}), Rat(0), "split_i");
    lift.add_equality(normalize_terms({{uj, one}, {vj[1], -one}, {vj[2], -one}, {vj[3], -one}}), Rat(0), "split_j");
    lift.add_equality(normalize_terms({{xij, one}, {lam[1], -one}}), Rat(0), "x_ij=lambda1");
    lift.add_equality(normalize_terms({{xji, one}, {lam[2], -one}}), Rat(0), "x_ji=lambda2");
    lift.add_equality(normalize_terms({{lam[1], one}, {lam[2], one}, {lam[3], one}}), one, "convex");
    if (family == HullFamily::mtz) {
        lift.add_inequality(normalize_terms({{vi[1], one}, {vj[1], -one}, {lam[1], dij}}), Rat(0), "p1a");
        lift.add_inequality(normalize_terms({{vj[1], one}, {vi[1], -one}, {lam[1], dji - 1}}), Rat(0), "p1b");
        lift.add_inequality(normalize_terms({{vj[2], one}, {vi[2], -one}, {lam[2], dji}}), Rat(0), "p2a");
        lift.add_inequality(normalize_terms({{vi[2], one}, {vj[2], -one}, {lam[2], dij - 1}}), Rat(0), "p2b");
    } else {
        lift.add_equality(normalize_terms({{vi[1], one}, {vj[1], -one}, {lam[1], dij}}), Rat(0), "p1");
        lift.add_equality(normalize_terms({{vj[2], one}, {vi[2], -one}, {lam[2], dji}}), Rat(0), "p2");
    }
    lift.add_inequality(normalize_terms({{vi[3], one}, {vj[3], -one}, {lam[3], dij - 1}}), Rat(0), "p3a");
    lift.add_inequality(normalize_terms({{vj[3], one}, {vi[3], -one}, {lam[3], dji - 1}}), Rat(0), "p3b");

    LinSys stated;
    const int su_i = stated.add_variable("u_i");
    const int su_j = stated.add_variable("u_j");
    const int sx_ij = stated.add_variable("x_ij");
    const int sx_ji = stated.add_variable("x_ji");
    if (family == HullFamily::mtz) {
        stated.add_inequality(normalize_terms({{su_i, one}, {su_j, -one}, {sx_ij, one}}), 1 - dij, "row_ij");
        stated.add_inequality(normalize_terms({{su_j, one}, {su_i, -one}, {sx_ji, one}}), 1 - dji, "row_ji");
        stated.add_inequality(normalize_terms({{sx_ij, one}, {sx_ji, one}}), one, "pair");
    } else {
        const Rat back = 1 - dij - dji;
        stated.add_inequality(normalize_terms({{su_i, one}, {su_j, -one}, {sx_ij, one}, {sx_ji, back}}), 1 - dij,
                              "row_ij");
        stated.add_inequality(normalize_terms({{su_j, one}, {su_i, -one}, {sx_ji, one}, {sx_ij, back}}), 1 - dji,
                              "row_ji");
    }
    stated.add_inequality({{sx_ij, -one}}, Rat(0), "x_ij>=0");
    stated.add_inequality({{sx_ji, -one}}, Rat(0), "x_ji>=0");

    const LinSys projected = project_onto(lift, {"u_i", "u_j", "x_ij", "x_ji"});
    report.stats["projected_rows"] = std::to_string(projected.inequalities().size());
    const SystemRef proj_ref = inline_ref(projected);
    const SystemRef stated_ref = inline_ref(stated);
    add_inclusion_check(report, "projection inside stated hull", proj_ref, stated);
    add_inclusion_check(report, "stated hull inside projection", stated_ref, projected);

    if (family == HullFamily::mtz) {
        const Point strict = {(dji - dij) / 2, Rat(0), Rat(0), Rat(0)};
        for (const std::string tag : {"row_ij", "row_ji"}) {
            const RedundancyResult red = is_redundant(stated, tag);
            const bool is_strict = stated.row(tag).lhs(strict) < stated.row(tag).rhs;
            report.add_check(tag + " is a facet", !red.redundant && is_strict);
            if (!red.redundant && is_strict) {
                json c;
                c["kind"] = "facet";
                c["system"] = json::parse(stated_ref.ref_json);
                c["tag"] = tag;
                c["witness"] = named_point(stated, red.witness);
                c["strict"] = named_point(stated, strict);
                report.certificates.push_back(c.dump());
            }
        }
    } else {
        LinSys with_pair = stated;
        with_pair.add_inequality(normalize_terms({{sx_ij, one}, {sx_ji, one}}), one, "pair");
        const RedundancyResult red = is_redundant(with_pair, "pair");
        report.add_check("x_ij + x_ji <= 1 is implied", red.redundant);
        if (red.redundant) {
            const SystemRef ref = inline_ref(with_pair);
            report.certificates.push_back(implied_cert(ref, row_terms_json(with_pair, with_pair.row("pair").terms),
                                                       one, multipliers_json(with_pair, red.dual, "pair"),
                                                       "pair"));
        }
    }
    report.conclude();
    return report;
}

std::string to_string(ClosureFamily family) {
    switch (family) {
    case ClosureFamily::mtz:
        return "mtz";
    case ClosureFamily::dl:
        return "dl";
    case ClosureFamily::scf:
        return "scf";
    case ClosureFamily::dl_on_vmtz:
        return "dl-on-vmtz";
    }
    return "?";
}

FormulationId closure_id(ClosureFamily family) {
    switch (family) {
    case ClosureFamily::mtz:
        return {.family = Family::cl_mtz};
    case ClosureFamily::dl:
        return {.family = Family::cl_dl};
    case ClosureFamily::scf:
        return {.family = Family::cl_scf};
    case ClosureFamily::dl_on_vmtz:
        return {.family = Family::cl_dl_on_vmtz};
    }
    throw std::logic_error("unknown closure family");
}

FormulationId vertex_intersection_id(int n, ClosureFamily family) {
    switch (family) {
    case ClosureFamily::mtz:
        return {.family = Family::ef_mtz, .d_list = mtz_vertices(n)};
    case ClosureFamily::dl:
        return {.family = Family::ef_dl, .d_list = dl_vertices(n)};
    case ClosureFamily::scf:
        return {.family = Family::ef_scf, .b_list = scf_vertices(n)};
    case ClosureFamily::dl_on_vmtz:
        return {.family = Family::ef_dl, .d_list = mtz_vertices(n)};
    }
    throw std::logic_error("unknown closure family");
}

namespace {

/// A random vertex of the face where `tag` holds with equality, if nonempty.
std::optional<Point> boundary_point(const LinSys &sys, const std::string &tag, std::mt19937_64 &rng) {
    LinSys face = sys;
    const Row &row = sys.row(tag);
    face.add_equality(row.terms, row.rhs, "face:" + tag);
    Terms obj;
    for (int v = 0; v < sys.num_variables(); ++v) {
        obj.emplace_back(v, Rat(static_cast<long>(rng() % 11) - 5));
    }
    const LpResult r = solve_lp(face, normalize_terms(std::move(obj)), Sense::maximize);
    if (r.status != LpStatus::optimal) {
        return std::nullopt;
    }
    return r.point;
}

} // namespace

PropositionReport verify_closure(const ArcSpace &space, ClosureFamily family, std::uint64_t seed) {
    PropositionReport report;
    Timer timer{report};
    report.id = to_string(family) + "-closure";
    report.n = space.n();
    const int n = space.n();
    const FormulationId vid = vertex_intersection_id(n, family);
    const SystemRef closure = formulation_ref(space, closure_id(family));
    const SystemRef vertices = formulation_ref(space, vid);

    // Parameters whose formulations must all contain the closure.
    std::vector<FormulationId> params;
    if (family == ClosureFamily::dl_on_vmtz) {
        for (const DVec &d : mtz_vertices(n)) {
            params.push_back({.family = Family::d_dl, .d = d});
        }
    } else {
        for (std::uint64_t t = 0; t < 3; ++t) {
            if (family == ClosureFamily::scf) {
                params.push_back({.family = Family::b_scf, .b = sample_interior_b(n, seed + t)});
            } else {
                params.push_back({.family = family == ClosureFamily::mtz ? Family::d_mtz : Family::d_dl,
                                  .d = sample_interior_d(n, seed + t)});
            }
        }
    }
    json pj = json::array();
    for (const FormulationId &p : params) {
        pj.push_back(params_of(p));
    }
    report.params = json({{"vertices", params_of(vid)}, {"sampled", pj}}).dump();

    add_inclusion_check(report, "vertex intersection inside closure", vertices, closure.sys);
    add_inclusion_check(report, "closure inside vertex intersection", closure, vertices.sys);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const SystemRef p = formulation_ref(space, params[k]);
        add_inclusion_check(report, "closure inside sampled parameter " + std::to_string(k), closure, p.sys);
    }

    // Points on closure rows stay in every sampled formulation; points just
    // beyond a row leave some sampled formulation or some vertex formulation.
    std::vector<FormulationId> cutters = params;
    for (std::size_t k = 0; k < (vid.family == Family::ef_scf ? vid.b_list.size() : vid.d_list.size()); ++k) {
        if (vid.family == Family::ef_scf) {
            cutters.push_back({.family = Family::b_scf, .b = vid.b_list[k]});
        } else {
            cutters.push_back({.family = vid.family == Family::ef_mtz ? Family::d_mtz : Family::d_dl,
                               .d = vid.d_list[k]});
        }
    }
    std::vector<std::string> tags;
    for (const Row &r : closure.sys.inequalities()) {
        if (r.tag.rfind("ub(", 0) != 0) {
            tags.push_back(r.tag);
        }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(tags.begin(), tags.end(), rng);
    const auto covers = enumerate_cycle_covers(space);
    int probes = 0;
    bool boundary_ok = true;
    bool outside_ok = true;
    std::string boundary_fail;
    std::string outside_fail;
    for (const std::string &tag : tags) {
        if (probes == 20) {
            break;
        }
        const auto xb = boundary_point(closure.sys, tag, rng);
        if (!xb) {
            continue;
        }
        ++probes;
        for (const FormulationId &p : params) {
            const bool in = membership(space, p, *xb).member;
            report.certificates.push_back(member_cert(formulation_ref(space, p), x_point_json(space, *xb), in));
            if (!in && boundary_ok) {
                boundary_ok = false;
                boundary_fail = tag;
            }
        }
        const Row &row = closure.sys.row(tag);
        const std::vector<int> *far = nullptr;
        Rat far_lhs;
        for (const auto &succ : covers) {
            const Rat lhs = row.lhs(cover_point(space, succ));
            if (lhs > row.rhs && (far == nullptr || lhs > far_lhs)) {
                far = &succ;
                far_lhs = lhs;
            }
        }
        if (far == nullptr) {
            continue;
        }
        const Point xs = cover_point(space, *far);
        Point probe = *xb;
        for (std::size_t a = 0; a < probe.size(); ++a) {
            probe[a] += (xs[a] - probe[a]) / 1000;
        }
        bool cut = false;
        for (const FormulationId &p : cutters) {
            if (!membership(space, p, probe).member) {
                cut = true;
                report.certificates.push_back(member_cert(formulation_ref(space, p), x_point_json(space, probe), false));
                break;
            }
        }
        if (!cut && outside_ok) {
            outside_ok = false;
            outside_fail = tag;
        }
    }
    report.stats["boundary_probes"] = std::to_string(probes);
    report.add_check("closure boundary points lie in every sampled formulation", boundary_ok,
                     boundary_ok ? "" : "row " + boundary_fail);
    report.add_check("points beyond closure rows are cut off", outside_ok, outside_ok ? "" : "row " + outside_fail);
    report.conclude();
    return report;
}

Point chain_witness(const ArcSpace &space, int item, int c) {
    const int n = space.n();
    if (c < 3 || c > n - 2) {
        throw std::invalid_argument("witness cycle length must lie in [3, n-2]");
    }
    std::vector<int> inner;
    for (int i = 2; i <= c + 1; ++i) {
        inner.push_back(i);
    }
    std::vector<int> outer = {1};
    for (int i = c + 2; i <= n; ++i) {
        outer.push_back(i);
    }
    const Cycle hat(inner);
    const Cycle rest(outer);
    Point x(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    auto set = [&](int i, int j, const Rat &v) { x[static_cast<std::size_t>(space.arc_index(i, j))] = v; };
    for (const Arc &arc : rest.arcs()) {
        set(arc.tail, arc.head, Rat(1));
    }
    if (item == 3) {
        for (const Arc &arc : hat.arcs()) {
            set(arc.tail, arc.head, make_rat(c - 1, c));
            set(arc.head, arc.tail, make_rat(1, c));
        }
    } else if (item == 4) {
        for (const Arc &arc : hat.arcs()) {
            set(arc.tail, arc.head, make_rat(1, 2));
            set(arc.head, arc.tail, make_rat(1, 2));
        }
    } else if (item == 5) {
        const Rat big = make_rat(c - 1, 2 * c - 1);
        const Rat small = make_rat(1, 2 * c - 1);
        for (const Arc &arc : hat.arcs()) {
            set(arc.tail, arc.head, big);
            set(arc.head, arc.tail, big);
        }
        const int h = rest.successor(1);
        for (int i : inner) {
            set(1, i, small);
            set(i, h, small);
        }
        set(1, h, big);
    } else {
        throw std::invalid_argument("witness item must be 3, 4 or 5");
    }
    return x;
}

std::vector<PropositionReport> verify_chain(const ArcSpace &space) {
    const int n = space.n();
    std::vector<PropositionReport> out;
    const SystemRef scf = formulation_ref(space, {.family = Family::cl_scf});
    const SystemRef dl = formulation_ref(space, {.family = Family::cl_dl});
    const SystemRef dlv = formulation_ref(space, {.family = Family::cl_dl_on_vmtz});
    const SystemRef mtz = formulation_ref(space, {.family = Family::cl_mtz});
    const SystemRef clique = formulation_ref(space, {.family = Family::dfj_clique});
    {
        PropositionReport r;
        const auto start = Clock::now();
        r.id = "chain-inclusions";
        r.n = n;
        add_inclusion_check(r, "scf closure inside dl closure", scf, dl.sys);
        add_inclusion_check(r, "dl closure inside dl-on-vmtz closure", dl, dlv.sys);
        add_inclusion_check(r, "dl-on-vmtz closure inside mtz closure", dlv, mtz.sys);
        r.conclude();
        r.runtime_seconds = seconds_since(start);
        out.push_back(std::move(r));
    }
    {
        PropositionReport r;
        const auto start = Clock::now();
        r.id = "chain-collapse";
        r.n = n;
        if (n != 4) {
            r.skip("the closures coincide only for n = 4");
        } else {
            LinSys pairs = build_ap(space);
            for (int i = 2; i <= n; ++i) {
                for (int j = i + 1; j <= n; ++j) {
                    pairs.add_inequality({{space.arc_index(i, j), Rat(1)}, {space.arc_index(j, i), Rat(1)}}, Rat(1),
                                         "pair(" + std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
            const SystemRef base = inline_ref(pairs);
            for (const auto *sys : {&scf, &dl, &dlv, &mtz}) {
                const std::string name = sys == &scf ? "scf" : sys == &dl ? "dl" : sys == &dlv ? "dl-on-vmtz" : "mtz";
                add_inclusion_check(r, name + " closure inside pair system", *sys, pairs);
                add_inclusion_check(r, "pair system inside " + name + " closure", base, sys->sys);
            }
            r.conclude();
        }
        r.runtime_seconds = seconds_since(start);
        out.push_back(std::move(r));
    }
    struct Item {
        int item;
        std::string id;
        const SystemRef *larger;
        FormulationId larger_id;
        const SystemRef *smaller;
        FormulationId smaller_id;
    };
    const std::vector<Item> items = {
        {3, "chain-strict-mtz", &mtz, {.family = Family::cl_mtz}, &dlv, {.family = Family::cl_dl_on_vmtz}},
        {4, "chain-strict-dl-on-vmtz", &dlv, {.family = Family::cl_dl_on_vmtz}, &dl, {.family = Family::cl_dl}},
        {5, "chain-strict-dl", &dl, {.family = Family::cl_dl}, &scf, {.family = Family::cl_scf}},
    };
    for (const Item &item : items) {
        PropositionReport r;
        const auto start = Clock::now();
        r.id = item.id;
        r.n = n;
        if (n < 5) {
            r.skip("strictness needs n >= 5");
            r.runtime_seconds = seconds_since(start);
        out.push_back(std::move(r));
            continue;
        }
        for (int c = 3; c <= n - 2; ++c) {
            const Point x = chain_witness(space, item.item, c);
            const std::string cs = std::to_string(c);
            const bool in_larger = membership(space, item.larger_id, x).member;
            const bool in_smaller = membership(space, item.smaller_id, x).member;
            r.add_check("|C|=" + cs + " witness in the larger closure", in_larger);
            r.add_check("|C|=" + cs + " witness outside the smaller closure", !in_smaller);
            r.certificates.push_back(member_cert(*item.larger, x_point_json(space, x), in_larger));
            r.certificates.push_back(member_cert(*item.smaller, x_point_json(space, x), in_smaller));
            std::vector<int> inner;
            for (int i = 2; i <= c + 1; ++i) {
                inner.push_back(i);
            }
            const Cycle hat(inner);
            auto expect_row = [&](const SystemRef &sys, const std::string &tag, const Rat &lhs, const Rat &rhs) {
                const Row &row = sys.sys.row(tag);
                const Rat got = row.lhs(x);
                r.add_check(tag + " at |C|=" + cs, got == lhs && row.rhs == rhs,
                            "lhs " + to_string(got) + " vs predicted " + to_string(lhs));
                r.certificates.push_back(row_cert(sys, tag, x_point_json(space, x), got, row.rhs));
            };
            if (item.item == 3) {
                for (int k : hat.nodes()) {
                    expect_row(dlv, "dlvmtz" + hat.to_string() + "[" + std::to_string(k) + "]",
                               c - make_rat(2, c), Rat(c - 1));
                }
            } else if (item.item == 4) {
                for (const Arc &arc : hat.arcs()) {
                    expect_row(dl, "dlclosure" + hat.to_string() + "[" + to_string(arc) + "]",
                               c - make_rat(1, 2), Rat(c - 1));
                }
            } else {
                NodeSubset s;
                for (int i : inner) {
                    s.insert(i);
                }
                expect_row(clique, "clique" + s.to_string(), c - make_rat(c, 2 * c - 1), Rat(c - 1));
            }
        }
        r.conclude();
        r.runtime_seconds = seconds_since(start);
        out.push_back(std::move(r));
    }
    return out;
}

PropositionReport verify_mtz_dominance(const ArcSpace &space, const DVec &d) {
    PropositionReport report;
    Timer timer{report};
    report.id = "mtz-dominance";
    report.n = space.n();
    std::optional<Rat> eps;
    for (const Cycle &c : enumerate_cycles(space)) {
        const Rat e = (1 - d.cycle_sum(c)) / (2 * c.size());
        if (!eps || e < *eps) {
            eps = e;
        }
    }
    DVec shifted = d;
    for (const Arc &arc : space.restricted_arcs()) {
        shifted.set(arc.tail, arc.head, d.at(arc.tail, arc.head) + *eps);
    }
    const FormulationId a = {.family = Family::d_mtz, .d = d};
    const FormulationId b = {.family = Family::d_mtz, .d = shifted};
    report.params = json({{"d", params_of(a)}, {"epsilon", to_string(*eps)}}).dump();
    report.add_check("epsilon is positive", *eps > 0);
    report.add_check("shifted parameter lies in D", d_membership(shifted).status == Membership::interior);
    const Comparison cmp = compare_pair(space, b, a);
    report.certificates = cmp.certificates;
    report.add_check("shifted formulation strictly inside", cmp.relation == Relation::a_inside_b,
                     to_string(cmp.relation));
    report.conclude();
    return report;
}

PropositionReport verify_mtz_rigidity(const ArcSpace &space, std::uint64_t seed, int count) {
    PropositionReport report;
    Timer timer{report};
    report.id = "mtz-rigidity";
    report.n = space.n();
    const DVec base = d_mtz(space.n());
    const FormulationId base_id = {.family = Family::d_mtz, .d = base};
    const SystemRef base_ref = formulation_ref(space, base_id);
    int included = 0;
    int with_long_cycle = 0;
    json deltas = json::array();
    for (int t = 0; t < count; ++t) {
        Perturbation p = [&] {
            try {
                return antisymmetric_perturbation(base, seed + static_cast<std::uint64_t>(t), true,
                                                  PerturbationSupport::dense);
            } catch (const SamplingError &) {
                return antisymmetric_perturbation(base, seed + static_cast<std::uint64_t>(t), true,
                                                  PerturbationSupport::potential);
            }
        }();
        with_long_cycle += p.has_nonzero_long_cycle ? 1 : 0;
        const DVec moved = base + p.delta;
        deltas.push_back(json::parse(to_json(p.delta)));
        const SystemRef moved_ref = formulation_ref(space, {.family = Family::d_mtz, .d = moved});
        const InclusionCheck inside = certify_inclusion(moved_ref, base_ref.sys);
        if (!inside.included) {
            continue;
        }
        ++included;
        const InclusionCheck back = certify_inclusion(base_ref, moved_ref.sys);
        report.add_check("sample " + std::to_string(t) + ": inclusion forces equality", back.included,
                         back.included ? "" : "row " + back.failing_row);
        report.certificates.insert(report.certificates.end(), inside.certificates.begin(), inside.certificates.end());
        report.certificates.insert(report.certificates.end(), back.certificates.begin(), back.certificates.end());
    }
    report.params = json({{"deltas", deltas}}).dump();
    report.stats["samples"] = std::to_string(count);
    report.stats["inclusions"] = std::to_string(included);
    report.stats["nonzero_long_cycle"] = std::to_string(with_long_cycle);
    if (included == 0) {
        report.add_check("no sampled inclusion to test", true);
    }
    report.conclude();
    return report;
}

PropositionReport verify_dl_incomparability(const ArcSpace &space, std::uint64_t seed, int count) {
    PropositionReport report;
    Timer timer{report};
    report.id = "dl-incomparability";
    report.n = space.n();
    json used = json::array();
    for (int t = 0; t < count; ++t) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        const DVec d = sample_interior_d(space.n(), s);
        const Perturbation p = antisymmetric_perturbation(d, s, true, PerturbationSupport::triangle);
        const DVec moved = d + p.delta;
        used.push_back({{"d", json::parse(to_json(d))}, {"delta", json::parse(to_json(p.delta))}});
        report.add_check("sample " + std::to_string(t) + " has a nonzero long cycle", p.has_nonzero_long_cycle);
        const Comparison cmp =
            compare_pair(space, {.family = Family::d_dl, .d = d}, {.family = Family::d_dl, .d = moved});
        report.add_check("sample " + std::to_string(t) + " incomparable", cmp.relation == Relation::incomparable,
                         to_string(cmp.relation) +
                             (space.n() < 5 ? "; no cycle has 3 <= |C| <= n-2, so no perturbed row is a facet" : ""));
        report.certificates.insert(report.certificates.end(), cmp.certificates.begin(), cmp.certificates.end());
    }
    report.params = json({{"pairs", used}}).dump();
    report.conclude();
    return report;
}

PropositionReport verify_scf_incomparability(const ArcSpace &space, std::uint64_t seed, int count) {
    PropositionReport report;
    Timer timer{report};
    report.id = "scf-incomparability";
    report.n = space.n();
    json used = json::array();
    for (int t = 0; t < count; ++t) {
        const std::uint64_t s = seed + 2 * static_cast<std::uint64_t>(t);
        const BVec b = sample_interior_b(space.n(), s);
        const BVec b2 = sample_interior_b(space.n(), s + 1);
        used.push_back({json::parse(to_json(b)), json::parse(to_json(b2))});
        if (b == b2) {
            continue;
        }
        const Comparison cmp =
            compare_pair(space, {.family = Family::b_scf, .b = b}, {.family = Family::b_scf, .b = b2});
        report.add_check("pair " + std::to_string(t) + " incomparable", cmp.relation == Relation::incomparable,
                         to_string(cmp.relation));
        report.certificates.insert(report.certificates.end(), cmp.certificates.begin(), cmp.certificates.end());
    }
    report.params = json({{"pairs", used}}).dump();
    report.conclude();
    return report;
}

// ---------------------------------------------------------------------------
// Optimization.

namespace {

/// Groups of families with one x-projection, and the proven inclusions
/// between groups (tighter first).
int family_group(Family f) {
    switch (f) {
    case Family::cl_scf:
    case Family::dfj_clique:
    case Family::dfj_cut:
    case Family::mcf:
        return 0;
    case Family::cl_dl:
        return 1;
    case Family::cl_dl_on_vmtz:
    case Family::l1rmtz:
        return 2;
    case Family::cl_mtz:
    case Family::circuit:
    case Family::rmtz:
        return 3;
    case Family::ap:
        return 4;
    case Family::weak_circuit:
    case Family::mtz:
        return 5;
    case Family::lifted_weak_circuit:
    case Family::dl:
        return 6;
    case Family::weak_clique:
    case Family::scf:
        return 7;
    default:
        return -1;
    }
}

bool known_inside(const FormulationId &a, const FormulationId &b) {
    // Parametric families sit between their closure and P_AP.
    auto group = [](const FormulationId &id) {
        switch (id.family) {
        case Family::d_mtz:
        case Family::ef_mtz:
            return 5;
        case Family::d_dl:
        case Family::ef_dl:
            return 6;
        case Family::b_scf:
        case Family::ef_scf:
            return 7;
        default:
            return family_group(id.family);
        }
    };
    const int ga = group(a);
    const int gb = group(b);
    if (ga < 0 || gb < 0) {
        return gb == 4;
    }
    static const std::vector<std::pair<int, int>> edges = {
        {0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {5, 4}, {1, 6}, {6, 4}, {0, 7}, {7, 4}, {6, 5},
    };
    // d-DL sits inside d-MTZ only for the same parameter.
    if (ga == 6 && gb == 5 && !(a.family == Family::dl && b.family == Family::mtz) &&
        !(a.family == Family::lifted_weak_circuit && b.family == Family::weak_circuit) &&
        !(a.family == Family::d_dl && b.family == Family::d_mtz && a.d && b.d && *a.d == *b.d)) {
        return false;
    }
    std::vector<bool> seen(8, false);
    std::vector<int> stack = {ga};
    while (!stack.empty()) {
        const int g = stack.back();
        stack.pop_back();
        if (g == gb) {
            return true;
        }
        if (seen[static_cast<std::size_t>(g)]) {
            continue;
        }
        seen[static_cast<std::size_t>(g)] = true;
        for (const auto &[from, to] : edges) {
            if (from == g && !(from == 6 && to == 5)) {
                stack.push_back(to);
            }
        }
    }
    return false;
}

Terms cost_terms(const LinSys &sys, const ArcSpace &space, const Point &costs) {
    Terms t;
    for (int a = 0; a < space.num_arcs(); ++a) {
        t.emplace_back(sys.variable(x_name(space.arc(a))), costs[static_cast<std::size_t>(a)]);
    }
    return normalize_terms(std::move(t));
}

/// LP over the x-space rows of a formulation, generated lazily: starts from
/// P_AP and adds the most violated rows until none is violated, so the
/// optimum equals that of the full system.
class LazyLp {
public:
    LazyLp(const ArcSpace &space, const FormulationId &id)
        : full_(build(space, as_x(id))), active(build_ap(space)) {
        for (const Row &r : full_.inequalities()) {
            if (r.tag.rfind("ub(", 0) != 0) {
                pool_.push_back(&r);
            }
        }
    }
    LazyLp(const LazyLp &) = delete;
    LazyLp &operator=(const LazyLp &) = delete;

    /// `fixed` holds (arc index, 0 or 1) pairs that only apply to this solve.
    LpResult solve(const Terms &objective, const std::vector<std::pair<int, int>> &fixed = {}) {
        while (true) {
            LinSys sys = active;
            for (const auto &[a, v] : fixed) {
                if (v == 0) {
                    sys.add_inequality({{a, Rat(1)}}, Rat(0), "fix0(" + std::to_string(a) + ")");
                } else {
                    sys.add_inequality({{a, Rat(-1)}}, Rat(-1), "fix1(" + std::to_string(a) + ")");
                }
            }
            LpResult r = solve_lp(sys, objective, Sense::minimize);
            if (r.status != LpStatus::optimal) {
                return r;
            }
            std::vector<std::pair<Rat, const Row *>> violated;
            for (const Row *row : pool_) {
                const Rat excess = row->lhs(r.point) - row->rhs;
                if (excess > 0) {
                    violated.emplace_back(excess, row);
                }
            }
            if (violated.empty()) {
                return r;
            }
            std::stable_sort(violated.begin(), violated.end(),
                             [](const auto &a, const auto &b) { return a.first > b.first; });
            for (std::size_t k = 0; k < violated.size() && k < 25; ++k) {
                const Row *row = violated[k].second;
                if (added_.insert(row->tag).second) {
                    active.add_inequality(row->terms, row->rhs, row->tag);
                }
            }
        }
    }

private:
    LinSys full_;
    std::vector<const Row *> pool_;
    std::set<std::string> added_;

public:
    LinSys active;
};

} // namespace

BoundTable lp_bound_table(const ArcSpace &space, const Point &costs, const std::vector<FormulationId> &ids) {
    if (static_cast<int>(costs.size()) != space.num_arcs()) {
        throw std::invalid_argument("cost vector has the wrong length");
    }
    BoundTable table;
    for (const FormulationId &id : ids) {
        LpResult r;
        if (id.space == VarSpace::x_only) {
            LazyLp lp(space, id);
            r = lp.solve(cost_terms(lp.active, space, costs));
        } else {
            const LinSys sys = build(space, id);
            r = solve_lp(sys, cost_terms(sys, space, costs), Sense::minimize);
        }
        if (r.status != LpStatus::optimal) {
            throw std::logic_error("LP relaxation of " + id.label() + " is " + to_string(r.status));
        }
        table.rows.push_back({id.label(), r.value});
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i != j && known_inside(ids[i], ids[j]) && table.rows[i].value < table.rows[j].value) {
                table.violations.emplace_back(table.rows[i].label, table.rows[j].label);
            }
        }
    }
    return table;
}

SolveResult solve_atsp(const ArcSpace &space, const Point &costs, const FormulationId &id,
                       SolveStrategy strategy) {
    if (static_cast<int>(costs.size()) != space.num_arcs()) {
        throw std::invalid_argument("cost vector has the wrong length");
    }
    auto tour_value = [&](const Cycle &tour) {
        Rat v;
        for (const Arc &arc : tour.arcs()) {
            v += costs[static_cast<std::size_t>(space.arc_index(arc))];
        }
        return v;
    };
    if (strategy == SolveStrategy::enumerate) {
        const std::vector<Cycle> tours = enumerate_tours(space);
        SolveResult best{tours.front(), tour_value(tours.front()), 0};
        for (const Cycle &t : tours) {
            ++best.nodes;
            const Rat v = tour_value(t);
            if (v < best.value) {
                best.tour = t;
                best.value = v;
            }
        }
        return best;
    }

    LazyLp lp(space, id);
    const Terms objective = cost_terms(lp.active, space, costs);

    struct Node {
        Rat bound;
        long order;
        std::vector<std::pair<int, int>> fixed;
    };
    auto worse = [](const Node &a, const Node &b) {
        return a.bound != b.bound ? a.bound > b.bound : a.order > b.order;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    long order = 0;
    open.push({Rat(0), order++, {}});
    std::optional<SolveResult> best;
    long nodes = 0;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (best && node.bound >= best->value && node.order != 0) {
            continue;
        }
        ++nodes;
        const LpResult r = lp.solve(objective, node.fixed);
        if (r.status == LpStatus::infeasible) {
            continue;
        }
        if (r.status != LpStatus::optimal) {
            throw std::logic_error("unbounded LP relaxation");
        }
        if (best && r.value >= best->value) {
            continue;
        }
        int branch = -1;
        Rat closest;
        for (int a = 0; a < space.num_arcs(); ++a) {
            const Rat &v = r.point[static_cast<std::size_t>(a)];
            if (!is_integral(v)) {
                const Rat gap = abs(v - make_rat(1, 2));
                if (branch < 0 || gap < closest) {
                    branch = a;
                    closest = gap;
                }
            }
        }
        if (branch < 0) {
            std::vector<int> succ(static_cast<std::size_t>(space.n() + 1), 0);
            for (int a = 0; a < space.num_arcs(); ++a) {
                if (r.point[static_cast<std::size_t>(a)] == 1) {
                    succ[static_cast<std::size_t>(space.arc(a).tail)] = space.arc(a).head;
                }
            }
            const auto cycles = cover_cycles(succ);
            if (cycles.size() != 1) {
                throw std::invalid_argument(id.label() + " admits the subtour cover " + cycles.front().to_string() +
                                            "; branch-and-bound needs a valid formulation");
            }
            best = SolveResult{cycles.front(), r.value, 0};
            continue;
        }
        for (int v : {1, 0}) {
            Node child{r.value, order++, node.fixed};
            child.fixed.emplace_back(branch, v);
            open.push(std::move(child));
        }
    }
    if (!best) {
        throw std::logic_error("branch-and-bound found no tour");
    }
    best->nodes = nodes;
    return *best;
}

std::vector<PropositionReport> verify_paper(int n, std::uint64_t seed) {
    const ArcSpace space(n);
    std::vector<PropositionReport> out;
    const DVec d = sample_interior_d(n, seed);
    const BVec b = sample_interior_b(n, seed);
    const std::vector<FormulationId> params = {
        {.family = Family::d_mtz, .d = d},
        {.family = Family::d_dl, .d = d},
        {.family = Family::b_scf, .b = b},
    };
    for (const FormulationId &id : params) {
        out.push_back(verify_validity(space, id));
    }
    for (const FormulationId &id : params) {
        if (n <= 5) {
            out.push_back(verify_projection(space, id));
        } else {
            PropositionReport r;
            r.id = to_string(id.family) + "-projection";
            r.n = n;
            r.params = params_of(id).dump();
            r.skip("Fourier-Motzkin projection is run for n <= 5 only");
            out.push_back(std::move(r));
        }
    }
    out.push_back(facet_census(space, CensusFamily::mtz, &d, nullptr));
    out.push_back(facet_census(space, CensusFamily::dl, &d, nullptr));
    out.push_back(facet_census(space, CensusFamily::scf, nullptr, &b));
    {
        std::mt19937_64 rng(seed);
        const long q = 2 + static_cast<long>(rng() % 9);
        const long p1 = static_cast<long>(rng() % static_cast<std::uint64_t>(q));
        const long p2 = static_cast<long>(rng() % static_cast<std::uint64_t>(q - p1));
        out.push_back(verify_local_hull(HullFamily::mtz, make_rat(p1, q), make_rat(p2, q)));
        out.push_back(verify_local_hull(HullFamily::dl, make_rat(p1, q), make_rat(p2, q)));
    }
    for (ClosureFamily f : {ClosureFamily::mtz, ClosureFamily::dl, ClosureFamily::scf, ClosureFamily::dl_on_vmtz}) {
        out.push_back(verify_closure(space, f, seed));
    }
    for (auto &r : verify_chain(space)) {
        if (r.id != "chain-collapse" || n == 4) {
            out.push_back(std::move(r));
        }
    }
    out.push_back(verify_mtz_dominance(space, d));
    out.push_back(verify_mtz_rigidity(space, seed, 5));
    out.push_back(verify_dl_incomparability(space, seed, 3));
    out.push_back(verify_scf_incomparability(space, seed, 3));
    return out;
}

} // namespace patsp
