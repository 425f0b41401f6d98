#include "patsp/instance.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace patsp {

std::string to_string(GenMode mode) { return mode == GenMode::uniform ? "uniform" : "euclidean-asym"; }

GenMode parse_gen_mode(const std::string &text) {
    if (text == "uniform") {
        return GenMode::uniform;
    }
    if (text == "euclidean-asym") {
        return GenMode::euclidean_asym;
    }
    throw std::invalid_argument("unknown generator mode '" + text + "' (uniform, euclidean-asym)");
}

const Rat &Instance::cost(int i, int j) const {
    return costs.at(static_cast<std::size_t>(ArcSpace(n).arc_index(i, j)));
}

namespace {

void check_size(int n) {
    if (n < 4) {
        throw DomainError("an instance needs at least 4 nodes, got " + std::to_string(n));
    }
}

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string &what) {
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

struct Token {
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(const std::string &line) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
        }
        const std::size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
        }
        if (k > start) {
            out.push_back({line.substr(start, k - start), start + 1});
        }
    }
    return out;
}

} // namespace

Instance parse_instance(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    Instance inst;
    bool have_header = false;
    int row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens[0].text[0] == '#') {
            if (have_header && row == 0 && tokens.size() == 4 && tokens[1].text == "seed") {
                try {
                    inst.provenance = Provenance{std::stoull(tokens[2].text), parse_gen_mode(tokens[3].text)};
                } catch (const std::exception &e) {
                    fail_at(lineno, tokens[2].column, std::string("bad seed line: ") + e.what());
                }
            }
            continue;
        }
        if (!have_header) {
            if (tokens.size() != 3 || tokens[0].text != "ATSP") {
                fail_at(lineno, tokens[0].column, "expected header 'ATSP <name> <n>'");
            }
            inst.name = tokens[1].text;
            try {
                std::size_t used = 0;
                inst.n = std::stoi(tokens[2].text, &used);
                if (used != tokens[2].text.size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception &) {
                fail_at(lineno, tokens[2].column, "node count '" + tokens[2].text + "' is not an integer");
            }
            check_size(inst.n);
            inst.costs.assign(static_cast<std::size_t>(inst.n * (inst.n - 1)), Rat(0));
            have_header = true;
            continue;
        }
        if (row == inst.n) {
            fail_at(lineno, tokens[0].column, "more than " + std::to_string(inst.n) + " cost rows");
        }
        if (static_cast<int>(tokens.size()) != inst.n) {
            fail_at(lineno, 1, "expected " + std::to_string(inst.n) + " entries, found " + std::to_string(tokens.size()));
        }
        const int i = row + 1;
        const ArcSpace space(inst.n);
        for (int j = 1; j <= inst.n; ++j) {
            const Token &t = tokens[static_cast<std::size_t>(j - 1)];
            if (i == j) {
                if (t.text != "*") {
                    fail_at(lineno, t.column, "diagonal entry must be '*'");
                }
                continue;
            }
            if (t.text == "*") {
                fail_at(lineno, t.column, "'*' is only allowed on the diagonal");
            }
            try {
                inst.costs[static_cast<std::size_t>(space.arc_index(i, j))] = parse_rat(t.text);
            } catch (const ParseError &e) {
                fail_at(lineno, t.column, e.what());
            }
        }
        ++row;
    }
    if (!have_header) {
        fail_at(lineno + 1, 1, "missing header 'ATSP <name> <n>'");
    }
    if (row != inst.n) {
        fail_at(lineno + 1, 1, "expected " + std::to_string(inst.n) + " cost rows, found " + std::to_string(row));
    }
    return inst;
}

Instance read_instance(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_instance(text.str());
}

std::string format_instance(const Instance &instance) {
    check_size(instance.n);
    std::ostringstream out;
    out << "ATSP " << instance.name << " " << instance.n << "\n";
    if (instance.provenance) {
        out << "# seed " << instance.provenance->seed << " " << to_string(instance.provenance->mode) << "\n";
    }
    for (int i = 1; i <= instance.n; ++i) {
        for (int j = 1; j <= instance.n; ++j) {
            out << (j > 1 ? " " : "") << (i == j ? std::string("*") : to_string(instance.cost(i, j)));
        }
        out << "\n";
    }
    return out.str();
}

void write_instance(const Instance &instance, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write instance file '" + path + "'");
    }
    out << format_instance(instance);
}

Instance gen_instance(int n, std::uint64_t seed, GenMode mode, int cap) {
    check_size(n);
    if (n > cap) {
        throw CapacityError("n = " + std::to_string(n) + " exceeds the generator cap " + std::to_string(cap));
    }
    std::mt19937_64 rng(seed);
    const ArcSpace space(n);
    Instance inst;
    inst.n = n;
    inst.name = (mode == GenMode::uniform ? "uniform-" : "euclid-") + std::to_string(n) + "-" + std::to_string(seed);
    inst.provenance = Provenance{seed, mode};
    inst.costs.assign(static_cast<std::size_t>(space.num_arcs()), Rat(0));
    if (mode == GenMode::uniform) {
        std::uniform_int_distribution<long> cost(1, 100);
        for (int a = 0; a < space.num_arcs(); ++a) {
            inst.costs[static_cast<std::size_t>(a)] = Rat(cost(rng));
        }
        return inst;
    }
    std::uniform_int_distribution<long> coord(0, 100);
    std::uniform_int_distribution<long> skew(0, 20);
    std::vector<std::pair<long, long>> pts;
    for (int i = 0; i < n; ++i) {
        const long px = coord(rng);
        pts.emplace_back(px, coord(rng));
    }
    for (int a = 0; a < space.num_arcs(); ++a) {
        const Arc &arc = space.arc(a);
        const auto &p = pts[static_cast<std::size_t>(arc.tail - 1)];
        const auto &q = pts[static_cast<std::size_t>(arc.head - 1)];
        const double dist = std::hypot(static_cast<double>(p.first - q.first), static_cast<double>(p.second - q.second));
        inst.costs[static_cast<std::size_t>(a)] = Rat(std::lround(dist) + skew(rng));
    }
    bool asymmetric = false;
    for (const Arc &arc : space.arcs()) {
        asymmetric = asymmetric || inst.cost(arc.tail, arc.head) != inst.cost(arc.head, arc.tail);
    }
    if (!asymmetric) {
        inst.costs[static_cast<std::size_t>(space.arc_index(1, 2))] += 1;
    }
    return inst;
}

} // namespace patsp
