#pragma once

// Metric geometry on a chart: connection coefficients, curvature, geodesics,
// parallel transport, and the scalar deviation equation in two dimensions.
//
// A metric is a symmetric matrix of ScalarFields. Everything downstream is
// computed pointwise from jets of those entries, so the connection uses
// exact first derivatives and the curvature exact second derivatives; the
// only approximation anywhere here is the ODE stepping.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "chart.hpp"
#include "linalg_small.hpp"
#include "mechanics.hpp"

namespace gf {

struct MetricSpec {
    Chart chart;
    std::vector<std::vector<ScalarField>> g;

    static MetricSpec euclidean(int n) {
        MetricSpec m;
        m.chart = Chart::euclidean(n);
        m.g.assign(n, {});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m.g[i].push_back(ScalarField::constant(m.chart, cx(i == j ? 1.0 : 0.0)));
        return m;
    }

    // Flat plane in polar coordinates (r, theta): dr^2 + r^2 dtheta^2.
    // Curved-looking connection, vanishing curvature.
    static MetricSpec polar_plane() {
        MetricSpec m;
        m.chart = Chart::polar();
        auto zero = ScalarField::constant(m.chart, cx(0.0));
        SingularPred at_origin = [](const Point& x) { return std::abs(x[0]) < 1e-12; };
        m.g = {{ScalarField::constant(m.chart, cx(1.0)), zero},
               {zero, ScalarField::make(
                          m.chart, [](const auto& x) { return x[0] * x[0]; }, at_origin)}};
        return m;
    }

    // Round sphere of radius R in (phi = azimuth, theta = polar angle):
    // R^2 (sin^2 theta dphi^2 + dtheta^2). Degenerate at the poles.
    static MetricSpec sphere(double R) {
        MetricSpec m;
        m.chart = Chart::sphere();
        auto zero = ScalarField::constant(m.chart, cx(0.0));
        SingularPred at_pole = [](const Point& x) { return std::abs(std::sin(x[1])) < 1e-9; };
        m.g = {{ScalarField::make(
                    m.chart, [R](const auto& x) { auto s = sin(x[1]); return R * R * s * s; }, at_pole),
                zero},
               {zero, ScalarField::constant(m.chart, cx(R * R))}};
        return m;
    }

    SmallMat value(const Point& p) const {
        SmallMat out(chart.dim, std::vector<double>(chart.dim));
        for (int i = 0; i < chart.dim; ++i)
            for (int j = 0; j < chart.dim; ++j) out[i][j] = g[i][j].real_value(p);
        return out;
    }

    double inner(const Point& p, const std::vector<double>& a, const std::vector<double>& b) const {
        auto gm = value(p);
        double s = 0.0;
        for (int i = 0; i < chart.dim; ++i)
            for (int j = 0; j < chart.dim; ++j) s += gm[i][j] * a[i] * b[j];
        return s;
    }
};

// Spacetime metric of a weak static potential on the (t,x,y,z) chart:
// diag(2 phi - 1, 1, 1, 1). With phi small and positive near sources the
// time-time entry stays close to -1 and coordinate light speed drops to
// sqrt(1 - 2 phi).
inline MetricSpec weak_field_metric(const ScalarField& phi) {
    MetricSpec m;
    m.chart = phi.chart();
    if (m.chart.dim != 4) throw chart_mismatch_error("weak_field_metric: need a 4d spacetime chart");
    auto zero = ScalarField::constant(m.chart, cx(0.0));
    m.g.assign(4, {zero, zero, zero, zero});
    m.g[0][0] = phi.scaled(cx(2.0)) + ScalarField::constant(m.chart, cx(-1.0));
    for (int i = 1; i < 4; ++i) m.g[i][i] = ScalarField::constant(m.chart, cx(1.0));
    return m;
}

using Christoffel = std::vector<std::vector<std::vector<double>>>;  // [upper][lower][lower]

inline Christoffel christoffel(const MetricSpec& m, const Point& p) {
    const int n = m.chart.dim;
    SmallMat gm(n, std::vector<double>(n));
    // dg[c][i][j] = d g_ij / d x^c
    std::vector<SmallMat> dg(n, SmallMat(n, std::vector<double>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet jet = m.g[i][j].jet(p, 1);
            gm[i][j] = jet.real_value();
            for (int c = 0; c < n; ++c) dg[c][i][j] = jet.real_grad(c);
        }
    SmallMat inv = invert_dense(gm);
    Christoffel gamma(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) s += inv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                gamma[a][b][c] = 0.5 * s;
            }
    return gamma;
}

using Riemann = std::vector<std::vector<std::vector<std::vector<double>>>>;  // [a][b][c][d] upper first

// R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db
//                                           - Gamma^a_de Gamma^e_cb.
// The Gamma derivatives are assembled from second jets of the metric and
// the exact derivative of the inverse, so no finite differencing enters.
inline Riemann riemann(const MetricSpec& m, const Point& p) {
    const int n = m.chart.dim;
    SmallMat gm(n, std::vector<double>(n));
    std::vector<SmallMat> dg(n, SmallMat(n, std::vector<double>(n)));
    std::vector<std::vector<SmallMat>> ddg(n, std::vector<SmallMat>(n, SmallMat(n, std::vector<double>(n))));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet jet = m.g[i][j].jet(p, 2);
            gm[i][j] = jet.real_value();
            for (int c = 0; c < n; ++c) {
                dg[c][i][j] = jet.real_grad(c);
                for (int d = 0; d < n; ++d) ddg[c][d][i][j] = jet.real_hess(c, d);
            }
        }
    SmallMat inv = invert_dense(gm);
    // d inv / d x^c = -inv dg[c] inv
    std::vector<SmallMat> dinv(n, SmallMat(n, std::vector<double>(n, 0.0)));
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += inv[i][a] * dg[c][a][b] * inv[b][j];
                dinv[c][i][j] = -s;
            }

    auto half_bracket = [&](int d, int b, int c) { return dg[b][d][c] + dg[c][d][b] - dg[d][b][c]; };
    Christoffel gamma(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    // dgamma[c][a][b][d] = d Gamma^a_bd / d x^c
    std::vector<Christoffel> dgamma(n, Christoffel(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
                double s = 0.0;
                for (int e = 0; e < n; ++e) s += inv[a][e] * half_bracket(e, b, d);
                gamma[a][b][d] = 0.5 * s;
                for (int c = 0; c < n; ++c) {
                    double t = 0.0;
                    for (int e = 0; e < n; ++e) {
                        t += dinv[c][a][e] * half_bracket(e, b, d);
                        t += inv[a][e] * (ddg[c][b][e][d] + ddg[c][d][e][b] - ddg[c][e][b][d]);
                    }
                    dgamma[c][a][b][d] = 0.5 * t;
                }
            }

    Riemann r(n, std::vector<std::vector<std::vector<double>>>(
                     n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = dgamma[c][a][b][d] - dgamma[d][a][b][c];
                    for (int e = 0; e < n; ++e)
                        s += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                    r[a][b][c][d] = s;
                }
    return r;
}

// Curvature of the plane spanned by u and v, normalized by the Gram
// determinant so the answer does not depend on the basis of the plane.
inline double sectional_curvature(const MetricSpec& m, const Point& p, const std::vector<double>& u,
                                  const std::vector<double>& v) {
    const int n = m.chart.dim;
    auto gm = m.value(p);
    auto r = riemann(m, p);
    double num = 0.0;
    for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        num += gm[a][e] * u[e] * r[a][b][c][d] * v[b] * u[c] * v[d];
    double uu = m.inner(p, u, u), vv = m.inner(p, v, v), uv = m.inner(p, u, v);
    double gram = uu * vv - uv * uv;
    if (std::abs(gram) < 1e-14) throw gf_error("sectional_curvature: degenerate plane");
    return num / gram;
}

inline double gaussian_curvature(const MetricSpec& m, const Point& p) {
    if (m.chart.dim != 2) throw chart_mismatch_error("gaussian_curvature: two-dimensional charts only");
    return sectional_curvature(m, p, {1.0, 0.0}, {0.0, 1.0});
}

// Geodesic flow xdd^a = -Gamma^a_bc xd^b xd^c, integrated with the same
// guarded RK4 as the mechanics paths. The result reuses Trajectory with the
// affine parameter in the time slot.
inline Trajectory geodesic(const MetricSpec& m, const Point& x0, const std::vector<double>& v0, double s0,
                           double s1, int steps, double guard_tol = 1e-6) {
    auto accel = [&m](const std::vector<double>& x, const std::vector<double>& v, double) {
        auto gamma = christoffel(m, x);
        const int n = static_cast<int>(x.size());
        std::vector<double> a(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) a[i] -= gamma[i][b][c] * v[b] * v[c];
        return a;
    };
    return detail::guarded_rk4(m.chart.dim, accel, x0, v0, s0, s1, steps, guard_tol);
}

// One leg of a piecewise path, parametrized on [0,1] with its coordinate
// velocity dx/du supplied alongside.
struct PathSeg {
    std::function<Point(double)> x;
    std::function<std::vector<double>(double)> v;
};

// Parallel transport of X along consecutive segments: Xd^a = -Gamma^a_bc v^b X^c.
// Linear in X, so plain RK4 on the components.
inline std::vector<double> parallel_transport(const MetricSpec& m, const std::vector<PathSeg>& path,
                                              std::vector<double> X, int steps_per_seg = 2000) {
    const int n = m.chart.dim;
    auto rate = [&](const PathSeg& seg, double u, const std::vector<double>& Xc) {
        auto gamma = christoffel(m, seg.x(u));
        auto vel = seg.v(u);
        std::vector<double> out(n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) out[a] -= gamma[a][b][c] * vel[b] * Xc[c];
        return out;
    };
    double h = 1.0 / static_cast<double>(steps_per_seg);
    for (const auto& seg : path) {
        for (int s = 0; s < steps_per_seg; ++s) {
            double u = s * h;
            auto k1 = rate(seg, u, X);
            std::vector<double> tmp(n);
            for (int i = 0; i < n; ++i) tmp[i] = X[i] + h / 2 * k1[i];
            auto k2 = rate(seg, u + h / 2, tmp);
            for (int i = 0; i < n; ++i) tmp[i] = X[i] + h / 2 * k2[i];
            auto k3 = rate(seg, u + h / 2, tmp);
            for (int i = 0; i < n; ++i) tmp[i] = X[i] + h * k3[i];
            auto k4 = rate(seg, u + h, tmp);
            for (int i = 0; i < n; ++i) X[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
    }
    return X;
}

// Signed angle from A to B in the metric at p, for two-dimensional charts.
// Cosine from the inner product, sine from the metric area element.
inline double g_angle(const MetricSpec& m, const Point& p, const std::vector<double>& A,
                      const std::vector<double>& B) {
    if (m.chart.dim != 2) throw chart_mismatch_error("g_angle: two-dimensional charts only");
    auto gm = m.value(p);
    double dot = m.inner(p, A, B);
    double det = gm[0][0] * gm[1][1] - gm[0][1] * gm[1][0];
    double cross = std::sqrt(det) * (A[0] * B[1] - A[1] * B[0]);
    return std::atan2(cross, dot);
}

// Quadrilateral standing in for the sphere octant: down the phi = 0
// meridian, a quarter of the equator, up the phi = pi/2 meridian, and back
// along the small circle theta = delta instead of through the (singular)
// pole. The area defect versus the true octant is O(delta^2).
inline std::vector<PathSeg> octant_loop(double delta) {
    double top = delta, bottom = std::acos(-1.0) / 2.0;
    auto meridian = [=](double phi, double th0, double th1) {
        return PathSeg{[=](double u) { return Point{phi, th0 + u * (th1 - th0)}; },
                       [=](double) { return std::vector<double>{0.0, th1 - th0}; }};
    };
    auto arc = [=](double th, double p0, double p1) {
        return PathSeg{[=](double u) { return Point{p0 + u * (p1 - p0), th}; },
                       [=](double) { return std::vector<double>{p1 - p0, 0.0}; }};
    };
    return {meridian(0.0, top, bottom), arc(bottom, 0.0, bottom), meridian(bottom, bottom, top),
            arc(top, bottom, 0.0)};
}

// Full small circle theta = theta0, traversed once in increasing phi.
inline std::vector<PathSeg> circle_loop(double theta0) {
    double two_pi = 2.0 * std::acos(-1.0);
    return {PathSeg{[=](double u) { return Point{u * two_pi, theta0}; },
                    [=](double) { return std::vector<double>{two_pi, 0.0}; }}};
}

// Scalar geodesic deviation along a two-dimensional geodesic: integrates
// the geodesic together with y'' = -K(x(s)) y. Returned as a Trajectory
// with components (x1, x2, y).
inline Trajectory jacobi_deviation(const MetricSpec& m, const Point& x0, const std::vector<double>& v0,
                                   double y0, double yd0, double s1, int steps, double guard_tol = 1e-6) {
    if (m.chart.dim != 2) throw chart_mismatch_error("jacobi_deviation: two-dimensional charts only");
    auto accel = [&m](const std::vector<double>& q, const std::vector<double>& qd, double) {
        Point x{q[0], q[1]};
        auto gamma = christoffel(m, x);
        std::vector<double> a(3, 0.0);
        for (int i = 0; i < 2; ++i)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) a[i] -= gamma[i][b][c] * qd[b] * qd[c];
        a[2] = -gaussian_curvature(m, x) * q[2];
        return a;
    };
    return detail::guarded_rk4(3, accel, {x0[0], x0[1], y0}, {v0[0], v0[1], yd0}, 0.0, s1, steps, guard_tol);
}

}  // namespace gf
