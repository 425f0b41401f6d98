#include "patsp/analysis.hpp"
#include "patsp/formulations.hpp"
#include "patsp/instance.hpp"
#include "patsp/polyhedra.hpp"
#include "patsp/projection.hpp"
#include "patsp/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace patsp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRefuted = 2;

struct Options {
    int n = 0;
    std::uint64_t seed = 1;
    std::string instance;
    std::string formulations;
    std::string param_file;
    std::string json_out;
    std::string x_file;
    int cap = -1;
    bool extended = false;
    bool prune = false;
    bool timing = false;
    std::string oracle = "circuit";
    std::string family = "mtz";
    std::string param_kind = "interior";
    std::string strategy = "bb";
    std::string mode = "uniform";
    std::string out;
    std::string dij = "1/3";
    std::string dji = "1/3";
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void emit(const Options &opt, const std::string &text) {
    if (opt.json_out.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(opt.json_out);
    if (!out) {
        throw std::runtime_error("cannot write '" + opt.json_out + "'");
    }
    out << text << "\n";
}

int build_cap(const Options &opt) { return opt.cap > 0 ? opt.cap : 8; }
int tour_cap(const Options &opt) { return opt.cap > 0 ? opt.cap : 9; }

void check_cap(int n, int cap, const std::string &what) {
    if (n > cap) {
        throw CapacityError(what + " at n = " + std::to_string(n) + " exceeds the cap " + std::to_string(cap) +
                            " (raise it with --cap)");
    }
}

int need_n(const Options &opt) {
    if (opt.n == 0) {
        throw std::invalid_argument("--n is required");
    }
    if (opt.n < 4) {
        throw DomainError("formulations need at least 4 nodes, got " + std::to_string(opt.n));
    }
    return opt.n;
}

/// Parameters from --param-file: either one bare d/b vector, or an object
/// with any of "d", "b", "d_list", "b_list".
struct ParamFile {
    std::optional<DVec> d;
    std::optional<BVec> b;
    std::vector<DVec> d_list;
    std::vector<BVec> b_list;
};

ParamFile load_params(const Options &opt) {
    ParamFile p;
    if (opt.param_file.empty()) {
        return p;
    }
    const std::string text = slurp(opt.param_file);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError("parameter file is not JSON: " + std::string(e.what()));
    }
    if (j.contains("kind")) {
        if (j["kind"] == "d") {
            p.d = d_from_json(text);
        } else {
            p.b = b_from_json(text);
        }
        return p;
    }
    if (j.contains("d")) {
        p.d = d_from_json(j["d"].dump());
    }
    if (j.contains("b")) {
        p.b = b_from_json(j["b"].dump());
    }
    for (const auto &d : j.value("d_list", nlohmann::json::array())) {
        p.d_list.push_back(d_from_json(d.dump()));
    }
    for (const auto &b : j.value("b_list", nlohmann::json::array())) {
        p.b_list.push_back(b_from_json(b.dump()));
    }
    return p;
}

/// Parametric families default to d^MTZ, the uniform b, or the canonical
/// vertex lists when the parameter file does not supply them.
std::vector<FormulationId> parse_ids(const Options &opt, int n, const std::string &fallback) {
    const ParamFile params = load_params(opt);
    std::vector<FormulationId> out;
    std::stringstream list(opt.formulations.empty() ? fallback : opt.formulations);
    std::string name;
    while (std::getline(list, name, ',')) {
        if (name.empty()) {
            continue;
        }
        FormulationId id;
        id.family = parse_family(name);
        id.space = opt.extended ? VarSpace::extended : VarSpace::x_only;
        switch (id.family) {
        case Family::d_mtz:
        case Family::d_dl:
            id.d = params.d ? *params.d : d_mtz(n);
            break;
        case Family::b_scf:
            id.b = params.b ? *params.b : uniform_b(n);
            break;
        case Family::ef_mtz:
            id.d_list = params.d_list.empty() ? mtz_vertices(n) : params.d_list;
            break;
        case Family::ef_dl:
            id.d_list = params.d_list.empty() ? dl_vertices(n) : params.d_list;
            break;
        case Family::ef_scf:
            id.b_list = params.b_list.empty() ? scf_vertices(n) : params.b_list;
            break;
        default:
            break;
        }
        validate(id);
        out.push_back(std::move(id));
    }
    if (out.empty()) {
        throw std::invalid_argument("--formulations lists no formulation");
    }
    return out;
}

Instance load_instance(const Options &opt) {
    if (!opt.instance.empty()) {
        return read_instance(opt.instance);
    }
    return gen_instance(need_n(opt), opt.seed, parse_gen_mode(opt.mode), tour_cap(opt));
}

int report_exit(const std::vector<PropositionReport> &reports, const Options &opt) {
    std::cout << text_table(reports, opt.timing);
    if (!opt.json_out.empty()) {
        json all = json::array();
        for (const auto &r : reports) {
            all.push_back(json::parse(to_json(r, opt.timing)));
        }
        emit(opt, all.dump(2));
    }
    const bool refuted = std::any_of(reports.begin(), reports.end(),
                                     [](const PropositionReport &r) { return r.verdict == Verdict::refuted; });
    return refuted ? kExitRefuted : kExitOk;
}

int cmd_build(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "building cycle and subset rows");
    const ArcSpace space(n);
    json out = json::array();
    for (const FormulationId &id : parse_ids(opt, n, "")) {
        const LinSys sys = build(space, id, {.prune = opt.prune});
        std::cerr << id.label() << ": " << sys.num_variables() << " variables, " << sys.equalities().size()
                  << " equalities, " << sys.inequalities().size() << " inequalities\n";
        out.push_back({{"formulation", json::parse(to_json(id))}, {"system", json::parse(to_json(sys))}});
    }
    emit(opt, (out.size() == 1 ? out[0] : out).dump(2));
    return kExitOk;
}

int cmd_bound(const Options &opt) {
    const Instance inst = load_instance(opt);
    check_cap(inst.n, build_cap(opt), "building cycle and subset rows");
    const ArcSpace space(inst.n);
    const BoundTable table = lp_bound_table(space, inst.costs, parse_ids(opt, inst.n, "ap,cl-mtz,cl-dl-on-vmtz,cl-dl,cl-scf"));
    std::size_t width = 11;
    for (const BoundRow &r : table.rows) {
        width = std::max(width, r.label.size());
    }
    std::cout << "instance " << inst.name << " (n = " << inst.n << ")\n";
    json j = json::array();
    for (const BoundRow &r : table.rows) {
        std::cout << "  " << r.label << std::string(width - r.label.size() + 2, ' ') << to_string(r.value) << "\n";
        j.push_back({{"formulation", r.label}, {"bound", to_string(r.value)}});
    }
    std::cout << "monotone along proven inclusions: " << (table.monotone() ? "yes" : "no") << "\n";
    for (const auto &[tight, loose] : table.violations) {
        std::cout << "  violated: " << tight << " below " << loose << "\n";
    }
    if (!opt.json_out.empty()) {
        emit(opt, json({{"instance", inst.name}, {"bounds", j}, {"monotone", table.monotone()}}).dump(2));
    }
    return table.monotone() ? kExitOk : kExitRefuted;
}

Point load_x(const Options &opt, const ArcSpace &space) {
    if (opt.x_file.empty()) {
        throw std::invalid_argument("--x is required");
    }
    return x_from_json(space, slurp(opt.x_file));
}

int cmd_member(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "building cycle and subset rows");
    const ArcSpace space(n);
    const Point x = load_x(opt, space);
    json out = json::array();
    for (const FormulationId &id : parse_ids(opt, n, "")) {
        const MembershipResult r = membership(space, id, x);
        std::cout << id.label() << ": " << (r.member ? "member" : "not a member") << "\n";
        out.push_back({{"formulation", id.label()}, {"member", r.member}, {"certificate", json::parse(r.certificate)}});
    }
    if (!opt.json_out.empty()) {
        emit(opt, out.dump(2));
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_separate(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "exhaustive separation");
    const ArcSpace space(n);
    const Point x = load_x(opt, space);
    const ParamFile params = load_params(opt);
    const DVec d = params.d ? *params.d : d_mtz(n);
    const BVec b = params.b ? *params.b : uniform_b(n);
    std::optional<ViolatedRow> row;
    if (opt.oracle == "circuit") {
        row = separate_circuit(space, x);
    } else if (opt.oracle == "circuit-param") {
        row = separate_circuit(space, x, d);
    } else if (opt.oracle == "cut") {
        row = separate_cut(space, x);
    } else if (opt.oracle == "cut-param") {
        row = separate_cut(space, x, b);
    } else if (opt.oracle == "dl-closure") {
        row = separate_dl_lifted(space, x, DlMode::v_dl);
    } else if (opt.oracle == "dl-vmtz") {
        row = separate_dl_lifted(space, x, DlMode::v_mtz);
    } else if (opt.oracle == "dl-param") {
        row = separate_dl_lifted(space, x, DlMode::param, &d);
    } else {
        throw std::invalid_argument("unknown oracle '" + opt.oracle +
                                    "' (circuit, circuit-param, cut, cut-param, dl-closure, dl-vmtz, dl-param)");
    }
    const std::string text = row ? to_json(*row) : R"({"violated":false})";
    std::cout << (row ? "violated: " + row->tag + " by " + to_string(row->violation()) : "no violated row") << "\n";
    emit(opt, text);
    return kExitOk;
}

int cmd_facets(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "facet census");
    const ArcSpace space(n);
    const ParamFile params = load_params(opt);
    CensusFamily family;
    if (opt.family == "mtz") {
        family = CensusFamily::mtz;
    } else if (opt.family == "dl") {
        family = CensusFamily::dl;
    } else if (opt.family == "scf") {
        family = CensusFamily::scf;
    } else {
        throw std::invalid_argument("--family must be mtz, dl or scf");
    }
    DVec d = sample_interior_d(n, opt.seed);
    BVec b = sample_interior_b(n, opt.seed);
    if (opt.param_kind == "boundary") {
        d = d_mtz(n);
        b = BVec(n);
        b.set(2, make_rat(1, 2));
        b.set(3, make_rat(1, 2));
    } else if (opt.param_kind == "vertex") {
        d = family == CensusFamily::dl ? dl_vertices(n).front() : mtz_vertices(n).front();
        b = scf_vertices(n).front();
    } else if (opt.param_kind != "interior") {
        throw std::invalid_argument("--param must be interior, boundary or vertex");
    }
    if (params.d) {
        d = *params.d;
    }
    if (params.b) {
        b = *params.b;
    }
    return report_exit({facet_census(space, family, &d, &b)}, opt);
}

void print_point(const ArcSpace &space, const Point &x) {
    std::cout << "    " << x_to_json(space, x) << "\n";
}

int cmd_compare(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "building cycle and subset rows");
    const ArcSpace space(n);
    const auto ids = parse_ids(opt, n, "");
    if (ids.size() != 2) {
        throw std::invalid_argument("compare needs exactly two formulations");
    }
    const Comparison c = compare_pair(space, ids[0], ids[1]);
    std::cout << "A = " << ids[0].label() << ", B = " << ids[1].label() << ": " << to_string(c.relation) << "\n";
    if (c.a_not_b) {
        std::cout << "  point in A outside B:\n";
        print_point(space, *c.a_not_b);
    }
    if (c.b_not_a) {
        std::cout << "  point in B outside A:\n";
        print_point(space, *c.b_not_a);
    }
    if (!opt.json_out.empty()) {
        json j = {{"a", ids[0].label()}, {"b", ids[1].label()}, {"relation", to_string(c.relation)}};
        if (c.a_not_b) {
            j["a_not_b"] = json::parse(x_to_json(space, *c.a_not_b));
        }
        if (c.b_not_a) {
            j["b_not_a"] = json::parse(x_to_json(space, *c.b_not_a));
        }
        j["certificates"] = json::array();
        for (const auto &cert : c.certificates) {
            j["certificates"].push_back(json::parse(cert));
        }
        emit(opt, j.dump(2));
    }
    return kExitOk;
}

int cmd_closures(const Options &opt) {
    const int n = need_n(opt);
    check_cap(n, build_cap(opt), "closure systems");
    const ArcSpace space(n);
    std::vector<PropositionReport> reports;
    for (ClosureFamily f : {ClosureFamily::mtz, ClosureFamily::dl, ClosureFamily::scf, ClosureFamily::dl_on_vmtz}) {
        reports.push_back(verify_closure(space, f, opt.seed));
    }
    for (auto &r : verify_chain(space)) {
        reports.push_back(std::move(r));
    }
    const int code = report_exit(reports, opt);
    for (const auto &r : reports) {
        if (r.id == "chain-collapse" && r.verdict == Verdict::verified) {
            std::cout << "note: at n = 4 the chain collapses to equality; all four closures coincide\n";
        }
    }
    return code;
}

int cmd_hull(const Options &opt) {
    HullFamily family;
    if (opt.family == "mtz") {
        family = HullFamily::mtz;
    } else if (opt.family == "dl") {
        family = HullFamily::dl;
    } else {
        throw std::invalid_argument("--family must be mtz or dl");
    }
    const Rat dij = parse_rat(opt.dij);
    const Rat dji = parse_rat(opt.dji);
    if (dij < 0 || dji < 0 || dij + dji > 1) {
        throw DomainError("need d_ij, d_ji >= 0 with d_ij + d_ji <= 1");
    }
    return report_exit({verify_local_hull(family, dij, dji)}, opt);
}

int cmd_solve(const Options &opt) {
    const Instance inst = load_instance(opt);
    const ArcSpace space(inst.n);
    SolveStrategy strategy;
    if (opt.strategy == "bb") {
        strategy = SolveStrategy::branch_and_bound;
        check_cap(inst.n, build_cap(opt), "building cycle and subset rows");
    } else if (opt.strategy == "enumerate") {
        strategy = SolveStrategy::enumerate;
        check_cap(inst.n, tour_cap(opt), "tour enumeration");
    } else {
        throw std::invalid_argument("--strategy must be bb or enumerate");
    }
    const FormulationId id = parse_ids(opt, inst.n, "cl-dl").front();
    const SolveResult r = solve_atsp(space, inst.costs, id, strategy);
    std::cout << "instance " << inst.name << " (n = " << inst.n << "), " << id.label() << ", " << opt.strategy << "\n"
              << "  tour  " << r.tour.to_string() << "\n"
              << "  value " << to_string(r.value) << "\n"
              << "  " << (strategy == SolveStrategy::enumerate ? "tours " : "nodes ") << r.nodes << "\n";
    if (!opt.json_out.empty()) {
        emit(opt, json({{"instance", inst.name},
                        {"formulation", id.label()},
                        {"tour", std::vector<int>(r.tour.nodes().begin(), r.tour.nodes().end())},
                        {"value", to_string(r.value)},
                        {"nodes", r.nodes}})
                      .dump(2));
    }
    return kExitOk;
}

int cmd_verify_paper(const Options &opt) {
    const int n = opt.n == 0 ? 5 : need_n(opt);
    check_cap(n, build_cap(opt), "the proposition sweep");
    return report_exit(verify_paper(n, opt.seed), opt);
}

int cmd_gen(const Options &opt) {
    const Instance inst = gen_instance(need_n(opt), opt.seed, parse_gen_mode(opt.mode), tour_cap(opt));
    if (opt.out.empty()) {
        std::cout << format_instance(inst);
    } else {
        write_instance(inst, opt.out);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Parametric ATSP formulations: build, bound, separate and verify"};
    app.require_subcommand(1);
    Options opt;

    auto add_n = [&](CLI::App *sub) { sub->add_option("--n", opt.n, "number of nodes (>= 4)"); };
    auto add_seed = [&](CLI::App *sub) { sub->add_option("--seed", opt.seed, "random seed"); };
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--json-out", opt.json_out, "write JSON output to this file");
        sub->add_option("--cap", opt.cap, "enumeration cap (default 8 for rows, 9 for tours)");
    };
    auto add_forms = [&](CLI::App *sub) {
        sub->add_option("--formulations", opt.formulations, "comma list of formulation ids");
        sub->add_option("--param-file", opt.param_file, "JSON parameters (d, b, d_list, b_list)");
        sub->add_flag("--extended", opt.extended, "use the extended variable space");
    };
    auto add_instance = [&](CLI::App *sub) {
        sub->add_option("--instance", opt.instance, "instance file (ATSP format)");
        sub->add_option("--mode", opt.mode, "generator mode without --instance (uniform, euclidean-asym)");
        add_n(sub);
        add_seed(sub);
    };

    std::map<CLI::App *, std::function<int(const Options &)>> handlers;

    auto *build_cmd = app.add_subcommand("build", "emit a formulation's H-description as JSON");
    add_n(build_cmd);
    add_forms(build_cmd);
    add_common(build_cmd);
    build_cmd->add_flag("--prune", opt.prune, "drop redundant rows");
    handlers[build_cmd] = cmd_build;

    auto *bound_cmd = app.add_subcommand("bound", "LP bound table for one instance");
    add_instance(bound_cmd);
    add_forms(bound_cmd);
    add_common(bound_cmd);
    handlers[bound_cmd] = cmd_bound;

    auto *member_cmd = app.add_subcommand("member", "membership of an x file, with certificate");
    add_n(member_cmd);
    add_forms(member_cmd);
    add_common(member_cmd);
    member_cmd->add_option("--x", opt.x_file, "x file: JSON map {\"i,j\": \"p/q\"}");
    handlers[member_cmd] = cmd_member;

    auto *separate_cmd = app.add_subcommand("separate", "run a separation oracle on an x file");
    add_n(separate_cmd);
    add_common(separate_cmd);
    separate_cmd->add_option("--x", opt.x_file, "x file: JSON map {\"i,j\": \"p/q\"}");
    separate_cmd->add_option("--oracle", opt.oracle,
                             "circuit, circuit-param, cut, cut-param, dl-closure, dl-vmtz, dl-param");
    separate_cmd->add_option("--param-file", opt.param_file, "JSON parameters (d, b)");
    handlers[separate_cmd] = cmd_separate;

    auto *facets_cmd = app.add_subcommand("facets", "facet census of one parametric family");
    add_n(facets_cmd);
    add_seed(facets_cmd);
    add_common(facets_cmd);
    facets_cmd->add_option("--family", opt.family, "mtz, dl or scf");
    facets_cmd->add_option("--param", opt.param_kind, "interior, boundary or vertex");
    facets_cmd->add_option("--param-file", opt.param_file, "JSON parameters (d, b)");
    facets_cmd->add_flag("--timing", opt.timing, "show runtimes");
    handlers[facets_cmd] = cmd_facets;

    auto *compare_cmd = app.add_subcommand("compare", "compare the x-projections of two formulations");
    add_n(compare_cmd);
    add_forms(compare_cmd);
    add_common(compare_cmd);
    handlers[compare_cmd] = cmd_compare;

    auto *closures_cmd = app.add_subcommand("closures", "closure identities and the closure chain");
    add_n(closures_cmd);
    add_seed(closures_cmd);
    add_common(closures_cmd);
    closures_cmd->add_flag("--timing", opt.timing, "show runtimes");
    handlers[closures_cmd] = cmd_closures;

    auto *hull_cmd = app.add_subcommand("hull", "local convex hull over one arc pair");
    add_common(hull_cmd);
    hull_cmd->add_option("--family", opt.family, "mtz or dl");
    hull_cmd->add_option("--dij", opt.dij, "d_ij as p/q");
    hull_cmd->add_option("--dji", opt.dji, "d_ji as p/q");
    hull_cmd->add_flag("--timing", opt.timing, "show runtimes");
    handlers[hull_cmd] = cmd_hull;

    auto *solve_cmd = app.add_subcommand("solve", "exact ATSP optimum");
    add_instance(solve_cmd);
    add_forms(solve_cmd);
    add_common(solve_cmd);
    solve_cmd->add_option("--strategy", opt.strategy, "bb or enumerate");
    handlers[solve_cmd] = cmd_solve;

    auto *paper_cmd = app.add_subcommand("verify-paper", "run every proposition check at size n");
    add_n(paper_cmd);
    add_seed(paper_cmd);
    add_common(paper_cmd);
    paper_cmd->add_flag("--timing", opt.timing, "show runtimes");
    handlers[paper_cmd] = cmd_verify_paper;

    auto *gen_cmd = app.add_subcommand("gen", "generate a seeded instance");
    add_n(gen_cmd);
    add_seed(gen_cmd);
    gen_cmd->add_option("--mode", opt.mode, "uniform or euclidean-asym");
    gen_cmd->add_option("--out", opt.out, "output file (default stdout)");
    gen_cmd->add_option("--cap", opt.cap, "largest n allowed (default 9)");
    handlers[gen_cmd] = cmd_gen;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }
    try {
        for (const auto &[sub, handler] : handlers) {
            if (sub->parsed()) {
                return handler(opt);
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
