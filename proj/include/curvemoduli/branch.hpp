#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "errors.hpp"
#include "series.hpp"

namespace curvemoduli {

// A smooth branch is the graph of a truncated series in one of the two
// coordinate charts. Branches tangent to the y axis cannot be written as
// y(x), hence the second form.
enum class Orientation { y_of_x, x_of_y };

inline const char* orientation_name(Orientation o)
{
    return o == Orientation::y_of_x ? "y_of_x" : "x_of_y";
}

struct Branch {
    Orientation orientation = Orientation::y_of_x;
    Series coeffs;  // degrees 1..d, d = truncation degree

    bool operator==(const Branch&) const = default;
};

// Contact order of two branches: the number of infinitely near points they
// share. UNSEPARATED means they agree through both truncation degrees, so the
// jets carry too little information to tell the branches apart.
struct ContactOrder {
    std::int64_t order = 0;
    bool separated = false;

    static ContactOrder at(std::int64_t k) { return {k, true}; }
    static ContactOrder unseparated() { return {0, false}; }

    bool operator==(const ContactOrder&) const = default;
};

// Rewrites a branch in the y(x) chart whenever possible. A branch given as
// x = g(y) with g'(0) != 0 is transverse to the y axis, so y(x) exists and is
// the compositional inverse of g. Only branches with g'(0) = 0 (tangent to
// the y axis) stay in the x_of_y form.
inline Branch normalize_branch(const Branch& raw)
{
    if (raw.coeffs.empty())
        throw input_error("branch must have at least one coefficient");
    if (raw.orientation == Orientation::x_of_y && raw.coeffs[0] != 0)
        return Branch{Orientation::y_of_x, invert_series(raw.coeffs, raw.coeffs.size())};
    return raw;
}

// Expects normalized branches (x_of_y implies zero linear coefficient).
// Branches in different charts are both smooth through the origin with
// different tangents, so they separate after one blow up. Branches in the
// same chart share exactly as many infinitely near points as leading
// coefficients.
inline ContactOrder contact_order(const Branch& a, const Branch& b)
{
    if (a.orientation != b.orientation)
        return ContactOrder::at(1);
    const std::size_t d = std::min(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < d; ++i)
        if (a.coeffs[i] != b.coeffs[i])
            return ContactOrder::at(static_cast<std::int64_t>(i) + 1);
    return ContactOrder::unseparated();
}

}  // namespace curvemoduli
