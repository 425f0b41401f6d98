#ifndef PATSP_INSTANCE_HPP
#define PATSP_INSTANCE_HPP

#include "patsp/graph.hpp"
#include "patsp/linsys.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace patsp {

/// Domain violation in user input, such as an instance on fewer than 4 nodes.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GenMode { uniform, euclidean_asym };
std::string to_string(GenMode mode);
GenMode parse_gen_mode(const std::string &text);

struct Provenance {
    std::uint64_t seed = 0;
    GenMode mode = GenMode::uniform;
};

/// Costs indexed by arc, in ArcSpace order.
struct Instance {
    std::string name;
    int n = 0;
    Point costs;
    std::optional<Provenance> provenance;

    const Rat &cost(int i, int j) const;
};

/// Native format:
///   ATSP <name> <n>
///   [# seed <s> <mode>]
///   n lines of n entries ("p/q" or integers), "*" on the diagonal.
/// Blank lines and other lines starting with '#' are ignored. Errors carry
/// line and column.
Instance parse_instance(const std::string &text);
Instance read_instance(const std::string &path);
std::string format_instance(const Instance &instance);
void write_instance(const Instance &instance, const std::string &path);

/// uniform: integer costs in [1, 100]. euclidean_asym: rounded distances
/// between seeded points in [0, 100]^2 plus a seeded skew in [0, 20] per arc.
Instance gen_instance(int n, std::uint64_t seed, GenMode mode, int cap = 9);

} // namespace patsp

#endif
