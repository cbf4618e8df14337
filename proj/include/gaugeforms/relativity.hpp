#pragma once

// Velocity composition with an invariant speed, boosts along an axis, and
// the quadratic interval. Everything is one-dimensional in the velocity
// (collinear motion) except the interval helpers, which take full events.
//
// The composition law is written with an explicit curvature constant K so
// the Galilean case is the same code path: w = (u + v) / (1 + K u v).
// K = 1/c^2 recovers the familiar law, K = 0 plain addition.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chart.hpp"

namespace gf {

// Additive velocity parameter: compose(u,v) = h_inv(h(u) + h(v)) with
// h(u) = atanh(sqrt(K) u)/sqrt(K). Exposed because tests use additivity
// as an independent check on the rational form.
inline double rapidity(double u, double K) {
    if (K < 0.0) throw std::domain_error("rapidity: negative curvature constant");
    if (K == 0.0) return u;
    double s = std::sqrt(K);
    return std::atanh(s * u) / s;
}

inline double compose(double u, double v, double K) {
    double denom = 1.0 + K * u * v;
    if (std::abs(denom) < 1e-300) throw gf_error("compose: velocities at the pole of the addition law");
    return (u + v) / denom;
}

// The speed left fixed by composition. K = 0 means no finite invariant
// speed (plain additive velocities), reported as infinity.
inline double invariant_speed(double K) {
    if (K < 0.0) throw std::domain_error("invariant_speed: negative curvature constant");
    if (K == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(K);
}

using Event = std::array<double, 4>;  // (x0, x1, x2, x3) with x0 = c t

// Boost along the x1 axis, parametrized by the relative velocity v and the
// invariant speed c. Acts on events in the (x0, x1) plane and leaves the
// transverse components alone.
struct Boost {
    double v = 0.0;
    double c = 1.0;

    double beta() const { return v / c; }

    double gamma() const {
        double b = beta();
        double g2 = 1.0 - b * b;
        if (g2 <= 0.0) throw gf_error("Boost: speed at or beyond the invariant speed");
        return 1.0 / std::sqrt(g2);
    }

    Event apply(const Event& e) const {
        double b = beta(), g = gamma();
        return {g * (e[0] + b * e[1]), g * (e[1] + b * e[0]), e[2], e[3]};
    }

    std::array<std::array<double, 4>, 4> matrix() const {
        double b = beta(), g = gamma();
        std::array<std::array<double, 4>, 4> m{};
        m[0][0] = g;
        m[0][1] = g * b;
        m[1][0] = g * b;
        m[1][1] = g;
        m[2][2] = 1.0;
        m[3][3] = 1.0;
        return m;
    }
};

inline Event apply_matrix(const std::array<std::array<double, 4>, 4>& m, const Event& e) {
    Event out{};
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) out[r] += m[r][k] * e[k];
    return out;
}

inline std::array<std::array<double, 4>, 4> matmul4(const std::array<std::array<double, 4>, 4>& a,
                                                    const std::array<std::array<double, 4>, 4>& b) {
    std::array<std::array<double, 4>, 4> m{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int k = 0; k < 4; ++k) m[r][c] += a[r][k] * b[k][c];
    return m;
}

// Squared interval between two events in the (+,-,-,-) convention.
inline double interval2(const Event& p, const Event& q) {
    double d0 = p[0] - q[0], d1 = p[1] - q[1], d2 = p[2] - q[2], d3 = p[3] - q[3];
    return d0 * d0 - d1 * d1 - d2 * d2 - d3 * d3;
}

// Same separation quoted in the opposite (-,+,+,+) convention, which is
// what the spacetime charts elsewhere in this library would produce from
// their signature vectors if you contracted by hand. Spacelike pairs come
// out positive here.
inline double interval2_space_convention(const Event& p, const Event& q) {
    return -interval2(p, q);
}

// Proper time along a uniform velocity segment of coordinate duration t.
inline double proper_time(double t, double v, double c) {
    return t / Boost{v, c}.gamma();
}

}  // namespace gf
