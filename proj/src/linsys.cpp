#include "patsp/linsys.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace patsp {

Terms normalize_terms(Terms terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    Terms out;
    out.reserve(terms.size());
    for (auto &t : terms) {
        if (!out.empty() && out.back().first == t.first) {
            out.back().second += t.second;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const auto &t) { return sgn(t.second) == 0; });
    return out;
}

Rat Row::lhs(std::span<const Rat> point) const {
    Rat total = 0;
    for (const auto &[v, c] : terms) {
        total += c * point[static_cast<std::size_t>(v)];
    }
    return total;
}

Rat RowViolation::amount() const {
    Rat diff = lhs - rhs;
    return equality ? Rat(abs(diff)) : diff;
}

int LinSys::add_variable(std::string name, bool nonneg) {
    if (var_index_.contains(name)) {
        throw std::invalid_argument("duplicate variable " + name);
    }
    const int idx = num_variables();
    var_index_.emplace(name, idx);
    vars_.push_back({std::move(name), nonneg});
    return idx;
}

int LinSys::variable(std::string_view name) const {
    auto idx = find_variable(name);
    if (!idx) {
        throw std::invalid_argument("unknown variable " + std::string(name));
    }
    return *idx;
}

std::optional<int> LinSys::find_variable(std::string_view name) const {
    auto it = var_index_.find(std::string(name));
    if (it == var_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> LinSys::variable_names() const {
    std::vector<std::string> out;
    out.reserve(vars_.size());
    for (const auto &v : vars_) {
        out.push_back(v.name);
    }
    return out;
}

void LinSys::check_terms(const Terms &terms) const {
    for (const auto &[v, c] : terms) {
        if (v < 0 || v >= num_variables()) {
            throw std::out_of_range("row refers to variable index " + std::to_string(v));
        }
    }
}

void LinSys::add_row(Terms terms, Rat rhs, std::string tag, bool equality) {
    check_terms(terms);
    add_row_unchecked(Row{normalize_terms(std::move(terms)), std::move(rhs), std::move(tag)},
                      equality);
}

void LinSys::add_row_unchecked(const Row &row, bool equality) {
    if (row.tag.empty()) {
        throw std::invalid_argument("rows need a non-empty tag");
    }
    auto &rows = equality ? equalities_ : inequalities_;
    if (!tags_.emplace(row.tag, std::pair{equality, rows.size()}).second) {
        throw std::invalid_argument("duplicate row tag " + row.tag);
    }
    rows.push_back(row);
}

void LinSys::add_equality(Terms terms, Rat rhs, std::string tag) {
    add_row(std::move(terms), std::move(rhs), std::move(tag), true);
}

void LinSys::add_inequality(Terms terms, Rat rhs, std::string tag) {
    add_row(std::move(terms), std::move(rhs), std::move(tag), false);
}

bool LinSys::has_tag(std::string_view tag) const { return tags_.contains(std::string(tag)); }

const Row &LinSys::row(std::string_view tag) const {
    auto it = tags_.find(std::string(tag));
    if (it == tags_.end()) {
        throw std::invalid_argument("no row tagged " + std::string(tag));
    }
    const auto &[eq, pos] = it->second;
    return eq ? equalities_[pos] : inequalities_[pos];
}

bool LinSys::is_equality(std::string_view tag) const {
    auto it = tags_.find(std::string(tag));
    if (it == tags_.end()) {
        throw std::invalid_argument("no row tagged " + std::string(tag));
    }
    return it->second.first;
}

LinSys LinSys::without_inequality(std::string_view tag) const {
    if (!has_tag(tag) || is_equality(tag)) {
        throw std::invalid_argument("no inequality tagged " + std::string(tag));
    }
    return filter_inequalities([&](const Row &r) { return r.tag != tag; });
}

void LinSys::append(const LinSys &other, std::string_view tag_prefix) {
    std::vector<int> map(other.vars_.size());
    for (std::size_t k = 0; k < other.vars_.size(); ++k) {
        const auto &v = other.vars_[k];
        if (auto idx = find_variable(v.name)) {
            if (vars_[static_cast<std::size_t>(*idx)].nonneg != v.nonneg) {
                throw std::invalid_argument("variable " + v.name +
                                            " has conflicting sign restrictions");
            }
            map[k] = *idx;
        } else {
            map[k] = add_variable(v.name, v.nonneg);
        }
    }
    auto remap = [&](const Row &r) {
        Terms t;
        t.reserve(r.terms.size());
        for (const auto &[v, c] : r.terms) {
            t.emplace_back(map[static_cast<std::size_t>(v)], c);
        }
        return Row{normalize_terms(std::move(t)), r.rhs, std::string(tag_prefix) + r.tag};
    };
    for (const Row &r : other.equalities_) {
        add_row_unchecked(remap(r), true);
    }
    for (const Row &r : other.inequalities_) {
        add_row_unchecked(remap(r), false);
    }
}

Point LinSys::point_from(const std::map<std::string, Rat> &values) const {
    Point p(vars_.size());
    for (const auto &[name, value] : values) {
        p[static_cast<std::size_t>(variable(name))] = value;
    }
    return p;
}

std::map<std::string, Rat> LinSys::named(std::span<const Rat> point) const {
    if (point.size() != vars_.size()) {
        throw std::invalid_argument("point dimension does not match the variable catalog");
    }
    std::map<std::string, Rat> out;
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        out.emplace(vars_[k].name, point[k]);
    }
    return out;
}

std::optional<RowViolation> LinSys::worst_violation(std::span<const Rat> point) const {
    if (point.size() != vars_.size()) {
        throw std::invalid_argument("point dimension does not match the variable catalog");
    }
    std::optional<RowViolation> worst;
    auto consider = [&](RowViolation v) {
        if (sgn(v.amount()) > 0 && (!worst || v.amount() > worst->amount())) {
            worst = std::move(v);
        }
    };
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        if (vars_[k].nonneg && sgn(point[k]) < 0) {
            consider({"nonneg(" + vars_[k].name + ")", -point[k], 0, false});
        }
    }
    for (const Row &r : equalities_) {
        consider({r.tag, r.lhs(point), r.rhs, true});
    }
    for (const Row &r : inequalities_) {
        consider({r.tag, r.lhs(point), r.rhs, false});
    }
    return worst;
}

namespace {

nlohmann::ordered_json row_json(const LinSys &sys, const Row &row) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::object();
    for (const auto &[v, c] : row.terms) {
        terms[sys.var(v).name] = to_string(c);
    }
    nlohmann::ordered_json out;
    out["tag"] = row.tag;
    out["terms"] = std::move(terms);
    out["rhs"] = to_string(row.rhs);
    return out;
}

Terms terms_from_json(const LinSys &sys, const nlohmann::json &j) {
    Terms t;
    for (const auto &[name, value] : j.items()) {
        const auto index = sys.find_variable(name);
        if (!index) {
            throw ParseError("row mentions unknown variable '" + name + "'");
        }
        t.emplace_back(*index, parse_rat(value.get<std::string>()));
    }
    return normalize_terms(std::move(t));
}

} // namespace

std::string to_json(const LinSys &sys, int indent) {
    nlohmann::ordered_json out;
    out["variables"] = nlohmann::ordered_json::array();
    for (const Variable &v : sys.variables()) {
        out["variables"].push_back({{"name", v.name}, {"nonneg", v.nonneg}});
    }
    out["equalities"] = nlohmann::ordered_json::array();
    out["inequalities"] = nlohmann::ordered_json::array();
    out["tags"] = nlohmann::ordered_json::array();
    for (const Row &r : sys.equalities()) {
        out["equalities"].push_back(row_json(sys, r));
        out["tags"].push_back(r.tag);
    }
    for (const Row &r : sys.inequalities()) {
        out["inequalities"].push_back(row_json(sys, r));
        out["tags"].push_back(r.tag);
    }
    return out.dump(indent);
}

LinSys linsys_from_json(const std::string &text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        LinSys sys;
        for (const auto &v : j.at("variables")) {
            sys.add_variable(v.at("name").get<std::string>(), v.value("nonneg", false));
        }
        for (const auto &r : j.at("equalities")) {
            sys.add_equality(terms_from_json(sys, r.at("terms")),
                             parse_rat(r.at("rhs").get<std::string>()), r.at("tag").get<std::string>());
        }
        for (const auto &r : j.at("inequalities")) {
            sys.add_inequality(terms_from_json(sys, r.at("terms")),
                               parse_rat(r.at("rhs").get<std::string>()), r.at("tag").get<std::string>());
        }
        return sys;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed system JSON: ") + e.what());
    }
}

} // namespace patsp
