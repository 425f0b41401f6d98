#ifndef PATSP_LINSYS_HPP
#define PATSP_LINSYS_HPP

#include "patsp/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace patsp {

/// Sparse linear form: (variable index, coefficient), sorted by index, no zeros.
using Terms = std::vector<std::pair<int, Rat>>;

/// Sorts by variable, merges duplicates and drops zero coefficients.
Terms normalize_terms(Terms terms);

/// Dense point over a variable catalog.
using Point = std::vector<Rat>;

struct Variable {
    std::string name;
    bool nonneg = false;
};

/// One row of an H-description: terms . vars (== or <=) rhs.
struct Row {
    Terms terms;
    Rat rhs;
    std::string tag;

    Rat lhs(std::span<const Rat> point) const;
};

struct RowViolation {
    std::string tag;
    Rat lhs;
    Rat rhs;
    bool equality = false;

    /// lhs - rhs for inequalities, |lhs - rhs| for equalities.
    Rat amount() const;
};

/// H-description over a named variable catalog: equality rows, `<=` rows and
/// per-variable nonnegativity. Every row carries a unique provenance tag.
class LinSys {
public:
    int add_variable(std::string name, bool nonneg = false);
    /// Index of `name`; throws std::invalid_argument when not cataloged.
    int variable(std::string_view name) const;
    std::optional<int> find_variable(std::string_view name) const;

    int num_variables() const { return static_cast<int>(vars_.size()); }
    const Variable &var(int index) const { return vars_.at(static_cast<std::size_t>(index)); }
    std::span<const Variable> variables() const { return vars_; }
    std::vector<std::string> variable_names() const;

    void add_equality(Terms terms, Rat rhs, std::string tag);
    void add_inequality(Terms terms, Rat rhs, std::string tag);

    std::span<const Row> equalities() const { return equalities_; }
    std::span<const Row> inequalities() const { return inequalities_; }
    std::size_t num_rows() const { return equalities_.size() + inequalities_.size(); }

    bool has_tag(std::string_view tag) const;
    /// Row with the given tag (inequality or equality); throws when absent.
    const Row &row(std::string_view tag) const;
    bool is_equality(std::string_view tag) const;

    /// Copy with the inequality `tag` removed.
    LinSys without_inequality(std::string_view tag) const;
    /// Copy keeping only the inequalities whose tag satisfies `keep`.
    template <class Pred> LinSys filter_inequalities(Pred keep) const {
        LinSys out;
        out.vars_ = vars_;
        out.var_index_ = var_index_;
        for (const Row &r : equalities_) {
            out.add_row_unchecked(r, true);
        }
        for (const Row &r : inequalities_) {
            if (keep(r)) {
                out.add_row_unchecked(r, false);
            }
        }
        return out;
    }

    /// Appends all rows of `other`, mapping its variables by name (new names
    /// are added to the catalog). Tags are prefixed when `tag_prefix` is set.
    void append(const LinSys &other, std::string_view tag_prefix = {});

    /// Dense point from a name -> value map; unnamed variables default to 0.
    Point point_from(const std::map<std::string, Rat> &values) const;
    std::map<std::string, Rat> named(std::span<const Rat> point) const;

    /// Largest violation over all rows and nonnegativity bounds, if any.
    std::optional<RowViolation> worst_violation(std::span<const Rat> point) const;
    bool contains(std::span<const Rat> point) const { return !worst_violation(point); }

private:
    void add_row(Terms terms, Rat rhs, std::string tag, bool equality);
    void add_row_unchecked(const Row &row, bool equality);
    void check_terms(const Terms &terms) const;

    std::vector<Variable> vars_;
    std::unordered_map<std::string, int> var_index_;
    std::vector<Row> equalities_;
    std::vector<Row> inequalities_;
    std::unordered_map<std::string, std::pair<bool, std::size_t>> tags_;
};

/// {"variables":[{"name","nonneg"}],"equalities":[...],"inequalities":[...],
/// "tags":[...]} with each row as {"tag","terms":{name: "p/q"},"rhs"}.
std::string to_json(const LinSys &sys, int indent = -1);
/// Inverse of to_json; throws ParseError on malformed input.
LinSys linsys_from_json(const std::string &text);

} // namespace patsp

#endif
