#ifndef PATSP_RATIONAL_HPP
#define PATSP_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace patsp {

/// Exact rational scalar. gmpxx keeps values canonical (den > 0, gcd = 1)
/// after every arithmetic operation; `make_rat` canonicalizes parsed input.
using Rat = mpq_class;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p", "-p", "p/q" (q != 0). Whitespace is not accepted.
Rat parse_rat(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rat &value);

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    Rat r{mpz_class(num), mpz_class(den)};
    r.canonicalize();
    return r;
}

inline bool is_integral(const Rat &value) { return value.get_den() == 1; }

} // namespace patsp

#endif
