#pragma once

// Dense linear algebra for the tiny systems that show up here (metric
// inverses, mass matrices; n <= 4 or so). Partial-pivot elimination, no
// allocation tricks, throws on singular input.

#include <cmath>
#include <vector>

#include "chart.hpp"

namespace gf {

using SmallMat = std::vector<std::vector<double>>;

inline std::vector<double> solve_dense(SmallMat a, std::vector<double> b) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) throw gf_error("solve_dense: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (size_t ri = n; ri-- > 0;) {
        double s = b[ri];
        for (size_t c = ri + 1; c < n; ++c) s -= a[ri][c] * x[c];
        x[ri] = s / a[ri][ri];
    }
    return x;
}

inline SmallMat invert_dense(const SmallMat& a) {
    const size_t n = a.size();
    SmallMat inv(n, std::vector<double>(n, 0.0));
    for (size_t col = 0; col < n; ++col) {
        std::vector<double> e(n, 0.0);
        e[col] = 1.0;
        auto x = solve_dense(a, e);
        for (size_t r = 0; r < n; ++r) inv[r][col] = x[r];
    }
    return inv;
}

}  // namespace gf
