#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace curvemoduli {

// Truncated formal power series with zero constant term: coeffs[i] is the
// coefficient of t^(i+1). The length of the vector is the truncation degree.
using Series = std::vector<Rational>;

// Product of two series without constant term, truncated to `degree`
// coefficients. The result starts at degree 2.
inline Series mul_truncated(const Series& a, const Series& b, std::size_t degree)
{
    Series out(degree, Rational(0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
        if (a[i - 1] == 0)
            continue;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t d = i + j;
            if (d > degree)
                break;
            out[d - 1] += a[i - 1] * b[j - 1];
        }
    }
    return out;
}

// f(g(t)) truncated to `degree` coefficients. Both arguments have zero
// constant term, so g^i contributes nothing below degree i and the loop can
// stop once i exceeds the truncation.
inline Series compose_truncated(const Series& f, const Series& g, std::size_t degree)
{
    Series out(degree, Rational(0));
    Series power(g);
    power.resize(degree, Rational(0));
    for (std::size_t i = 1; i <= f.size() && i <= degree; ++i) {
        if (f[i - 1] != 0)
            for (std::size_t d = i; d <= degree; ++d)
                out[d - 1] += f[i - 1] * power[d - 1];
        if (i < f.size() && i < degree)
            power = mul_truncated(power, g, degree);
    }
    return out;
}

// Compositional inverse: the unique g with f(g(t)) = t up to the truncation
// degree. Solves coefficient by coefficient; once g is correct through degree
// k-1, the degree-k coefficient of f(g) is linear in g_k with slope f_1.
inline Series invert_series(const Series& f, std::size_t degree)
{
    if (f.empty() || f[0] == 0)
        throw input_error("invert_series: series must have a nonzero linear coefficient");
    if (degree == 0)
        return {};
    Series g(degree, Rational(0));
    g[0] = Rational(1) / f[0];
    for (std::size_t k = 2; k <= degree; ++k) {
        const Series comp = compose_truncated(f, g, k);
        g[k - 1] = -comp[k - 1] / f[0];
    }
    return g;
}

}  // namespace curvemoduli
