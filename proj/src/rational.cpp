#include "patsp/rational.hpp"

#include <cctype>

namespace patsp {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace

Rat parse_rat(std::string_view text) {
    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    if (!is_integer_literal(num_text)) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class num(std::string(num_text[0] == '+' ? num_text.substr(1) : num_text));
    mpz_class den(1);
    if (slash != std::string_view::npos) {
        const auto den_text = text.substr(slash + 1);
        if (!is_integer_literal(den_text) || den_text[0] == '-' || den_text[0] == '+') {
            throw ParseError("malformed rational '" + std::string(text) + "'");
        }
        den = mpz_class(std::string(den_text));
        if (den == 0) {
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        }
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rat &value) { return value.get_str(); }

} // namespace patsp
