#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace curvemoduli {

// Exact arithmetic for branch coefficients. cpp_rational keeps every value in
// lowest terms with a positive denominator, so equality of coefficients (which
// decides contact orders, hence the whole tree) is never a rounding question.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts an optionally signed integer "p" or a fraction "p/q" with q != 0.
// Everything else is rejected, in particular float syntax like "0.5" or
// "1e-3": coefficients must be written exactly.
inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view part) -> BigInt {
        std::string_view digits = part;
        bool negative = false;
        if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
            negative = digits.front() == '-';
            digits.remove_prefix(1);
        }
        if (digits.empty())
            throw input_error("malformed rational literal \"" + std::string(text) + "\"");
        for (char c : digits)
            if (c < '0' || c > '9')
                throw input_error("malformed rational literal \"" + std::string(text) + "\"");
        BigInt value{std::string(digits)};
        return negative ? -value : value;
    };

    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw input_error("zero denominator in rational literal \"" + std::string(text) + "\"");
    // Divide rather than use the two-argument constructor: the latter refuses
    // negative denominators, division normalizes them.
    return Rational(num) / Rational(den);
}

inline std::string rational_to_string(const Rational& r)
{
    std::string s = numerator(r).str();
    if (denominator(r) != 1)
        s += "/" + denominator(r).str();
    return s;
}

}  // namespace curvemoduli
