#pragma once

// Lagrangian mechanics over a phase chart whose axes are the coordinates,
// their velocities, and time: (q1..qn, qd1..qdn, t). A Lagrangian is just a
// ScalarField on that chart, so all the derivative machinery (jets, partials)
// applies to it unchanged: momenta are first-derivative slots, the mass
// matrix is a block of the Hessian.
//
// Discrete paths are stored as uniformly sampled Trajectory objects. The
// Euler-Lagrange residual differentiates the momentum series with a five
// point stencil, so it needs a few samples of margin at each end.

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <string>
#include <vector>

#include "chart.hpp"
#include "linalg_small.hpp"
#include "maxwell.hpp"

namespace gf {

inline Chart phase_chart(int n) {
    Chart ch;
    ch.dim = 2 * n + 1;
    for (int i = 0; i < n; ++i) ch.axes.push_back("q" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) ch.axes.push_back("qd" + std::to_string(i + 1));
    ch.axes.push_back("t");
    ch.signature.assign(ch.dim, 1);
    return ch;
}

struct LagrangianSpec {
    int n = 1;
    ScalarField L = ScalarField::constant(phase_chart(1), cx(0.0));
};

// f is a generic callable (q, qd, t) -> scalar, with q and qd passed as
// std::vector<T>. It has to be polymorphic in T because evaluation happens
// at every dual level.
template <class F>
LagrangianSpec make_lagrangian(int n, F f, SingularPred singular = nullptr) {
    Chart ch = phase_chart(n);
    ScalarField L = ScalarField::make(
        ch,
        [n, f](const auto& x) {
            using T = typename std::decay_t<decltype(x)>::value_type;
            std::vector<T> q(x.begin(), x.begin() + n);
            std::vector<T> qd(x.begin() + n, x.begin() + 2 * n);
            return f(q, qd, x[2 * n]);
        },
        singular);
    return LagrangianSpec{n, L};
}

namespace detail {

// Knot derivatives of the natural cubic spline through equally spaced
// samples. Used when a path is handed to us as positions only.
inline std::vector<double> spline_knot_derivatives(const std::vector<double>& y, double h) {
    const size_t n = y.size();
    std::vector<double> dy(n, 0.0);
    if (n < 2) return dy;
    if (n == 2) {
        dy[0] = dy[1] = (y[1] - y[0]) / h;
        return dy;
    }
    // Second derivatives m[k] from the natural tridiagonal system
    // m[k-1] + 4 m[k] + m[k+1] = 6 (y[k-1] - 2 y[k] + y[k+1]) / h^2.
    std::vector<double> m(n, 0.0), diag(n, 4.0), rhs(n, 0.0);
    for (size_t k = 1; k + 1 < n; ++k) rhs[k] = 6.0 * (y[k - 1] - 2.0 * y[k] + y[k + 1]) / (h * h);
    for (size_t k = 2; k + 1 < n; ++k) {
        double f = 1.0 / diag[k - 1];
        diag[k] -= f;
        rhs[k] -= f * rhs[k - 1];
    }
    for (size_t k = n - 2; k >= 1; --k) {
        double upper = (k + 2 < n) ? m[k + 1] : 0.0;
        m[k] = (rhs[k] - upper) / diag[k];
        if (k == 1) break;
    }
    for (size_t k = 0; k + 1 < n; ++k) dy[k] = (y[k + 1] - y[k]) / h - h * (2.0 * m[k] + m[k + 1]) / 6.0;
    dy[n - 1] = (y[n - 1] - y[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
    return dy;
}

}  // namespace detail

struct Trajectory {
    int n = 1;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<std::vector<double>> q;   // one config per sample
    std::vector<std::vector<double>> qd;  // matching velocities

    size_t size() const { return q.size(); }
    double time(size_t k) const { return t0 + dt * static_cast<double>(k); }

    Point phase_point(size_t k) const {
        Point x;
        x.reserve(2 * n + 1);
        x.insert(x.end(), q[k].begin(), q[k].end());
        x.insert(x.end(), qd[k].begin(), qd[k].end());
        x.push_back(time(k));
        return x;
    }

    // Sample a path given as positions only; velocities come from the knot
    // derivatives of a natural cubic spline per component. 'path' maps a
    // time to a configuration vector of length n.
    template <class F>
    static Trajectory from_function(int n, F path, double t0, double t1, int samples) {
        if (samples < 2) throw gf_error("Trajectory: need at least two samples");
        Trajectory tr;
        tr.n = n;
        tr.t0 = t0;
        tr.dt = (t1 - t0) / static_cast<double>(samples - 1);
        tr.q.resize(samples);
        for (int k = 0; k < samples; ++k) {
            tr.q[k] = path(tr.time(k));
            if (static_cast<int>(tr.q[k].size()) != n) throw gf_error("Trajectory: path dimension mismatch");
        }
        tr.qd.assign(samples, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            std::vector<double> yi(samples);
            for (int k = 0; k < samples; ++k) yi[k] = tr.q[k][i];
            auto di = detail::spline_knot_derivatives(yi, tr.dt);
            for (int k = 0; k < samples; ++k) tr.qd[k][i] = di[k];
        }
        return tr;
    }

    void to_csv(const std::string& filename) const {
        std::ofstream out(filename);
        if (!out) throw gf_error("Trajectory: cannot open " + filename);
        out << "t";
        for (int i = 0; i < n; ++i) out << ",q" << i + 1;
        for (int i = 0; i < n; ++i) out << ",qd" << i + 1;
        out << "\n";
        out << std::setprecision(17);
        for (size_t k = 0; k < size(); ++k) {
            out << time(k);
            for (int i = 0; i < n; ++i) out << "," << q[k][i];
            for (int i = 0; i < n; ++i) out << "," << qd[k][i];
            out << "\n";
        }
    }
};

// Composite Simpson over the samples; an odd panel count gets a 3/8 rule
// on the last three panels so no sample is dropped.
inline double action(const LagrangianSpec& spec, const Trajectory& tr) {
    if (tr.size() < 4) throw gf_error("action: need at least four samples");
    std::vector<double> L(tr.size());
    for (size_t k = 0; k < tr.size(); ++k) L[k] = spec.L.real_value(tr.phase_point(k));
    size_t panels = tr.size() - 1;
    size_t simpson_end = (panels % 2 == 0) ? panels : panels - 3;
    double s = 0.0;
    for (size_t k = 0; k + 2 <= simpson_end; k += 2) s += tr.dt / 3.0 * (L[k] + 4.0 * L[k + 1] + L[k + 2]);
    if (panels % 2 != 0) {
        size_t k = simpson_end;
        s += 3.0 * tr.dt / 8.0 * (L[k] + 3.0 * L[k + 1] + 3.0 * L[k + 2] + L[k + 3]);
    }
    return s;
}

// Conjugate momenta at one sample: the velocity-slot gradient of L.
inline std::vector<double> momenta(const LagrangianSpec& spec, const Trajectory& tr, size_t k) {
    Jet j = spec.L.jet(tr.phase_point(k), 1);
    std::vector<double> p(spec.n);
    for (int i = 0; i < spec.n; ++i) p[i] = j.real_grad(spec.n + i);
    return p;
}

struct ELResidual {
    std::vector<double> t;
    std::vector<std::vector<double>> r;  // one residual vector per interior sample
    double max_abs = 0.0;
};

// d/dt (dL/dqd_i) - dL/dq_i along the path. The momentum series is
// differentiated with the five point central stencil, so the first and last
// two samples are skipped.
inline ELResidual el_residual(const LagrangianSpec& spec, const Trajectory& tr) {
    if (tr.size() < 5) throw gf_error("el_residual: need at least five samples");
    const size_t m = tr.size();
    std::vector<std::vector<double>> p(m);
    std::vector<std::vector<double>> dLdq(m);
    for (size_t k = 0; k < m; ++k) {
        Jet j = spec.L.jet(tr.phase_point(k), 1);
        p[k].resize(spec.n);
        dLdq[k].resize(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            p[k][i] = j.real_grad(spec.n + i);
            dLdq[k][i] = j.real_grad(i);
        }
    }
    ELResidual out;
    for (size_t k = 2; k + 2 < m; ++k) {
        std::vector<double> rk(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            double pdot = (-p[k + 2][i] + 8.0 * p[k + 1][i] - 8.0 * p[k - 1][i] + p[k - 2][i]) / (12.0 * tr.dt);
            rk[i] = pdot - dLdq[k][i];
            out.max_abs = std::max(out.max_abs, std::abs(rk[i]));
        }
        out.t.push_back(tr.time(k));
        out.r.push_back(std::move(rk));
    }
    return out;
}

using SymmetryGenerator = std::function<std::vector<double>(const std::vector<double>& q)>;

// Charge sum_i p_i * gen_i(q) at each sample. Constant along solutions when
// the generator is a symmetry of L.
inline std::vector<double> noether_charge(const LagrangianSpec& spec, const Trajectory& tr,
                                          const SymmetryGenerator& gen) {
    std::vector<double> out(tr.size());
    for (size_t k = 0; k < tr.size(); ++k) {
        auto p = momenta(spec, tr, k);
        auto g = gen(tr.q[k]);
        double s = 0.0;
        for (int i = 0; i < spec.n; ++i) s += p[i] * g[i];
        out[k] = s;
    }
    return out;
}

// sum_i p_i qd_i - L per sample. For time-independent Lagrangians this is
// the conserved energy.
inline std::vector<double> energy_series(const LagrangianSpec& spec, const Trajectory& tr) {
    std::vector<double> out(tr.size());
    for (size_t k = 0; k < tr.size(); ++k) {
        auto p = momenta(spec, tr, k);
        double s = -spec.L.real_value(tr.phase_point(k));
        for (int i = 0; i < spec.n; ++i) s += p[i] * tr.qd[k][i];
        out[k] = s;
    }
    return out;
}

namespace detail {

// Accelerations from the Lagrangian itself: solve the mass-matrix system
//   (d2L/dqd dqd) qddot = dL/dq - (d2L/dqd dq) qd - d2L/dqd dt.
inline std::vector<double> lagrangian_accel(const LagrangianSpec& spec, const std::vector<double>& q,
                                            const std::vector<double>& qd, double t) {
    const int n = spec.n;
    Point x;
    x.reserve(2 * n + 1);
    x.insert(x.end(), q.begin(), q.end());
    x.insert(x.end(), qd.begin(), qd.end());
    x.push_back(t);
    Jet j = spec.L.jet(x, 2);
    SmallMat mass(n, std::vector<double>(n));
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) mass[i][k] = j.real_hess(n + i, n + k);
        double s = j.real_grad(i) - j.real_hess(n + i, 2 * n);
        for (int k = 0; k < n; ++k) s -= j.real_hess(n + i, k) * qd[k];
        rhs[i] = s;
    }
    std::vector<double> a;
    try {
        a = solve_dense(mass, rhs);
    } catch (const gf_error&) {
        throw gf_error("integrate_lagrangian: degenerate mass matrix");
    }
    return a;
}

template <class Accel>
Trajectory rk4_second_order(int n, Accel accel, std::vector<double> q, std::vector<double> qd, double t0,
                            double t1, int steps) {
    if (steps < 1) throw gf_error("integrator: need at least one step");
    Trajectory tr;
    tr.n = n;
    tr.t0 = t0;
    tr.dt = (t1 - t0) / static_cast<double>(steps);
    tr.q.reserve(steps + 1);
    tr.qd.reserve(steps + 1);
    tr.q.push_back(q);
    tr.qd.push_back(qd);
    auto axpy = [n](const std::vector<double>& base, double f, const std::vector<double>& dir) {
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = base[i] + f * dir[i];
        return out;
    };
    double h = tr.dt;
    for (int s = 0; s < steps; ++s) {
        double t = tr.time(s);
        auto k1q = qd;
        auto k1v = accel(q, qd, t);
        auto k2q = axpy(qd, h / 2, k1v);
        auto k2v = accel(axpy(q, h / 2, k1q), k2q, t + h / 2);
        auto k3q = axpy(qd, h / 2, k2v);
        auto k3v = accel(axpy(q, h / 2, k2q), k3q, t + h / 2);
        auto k4q = axpy(qd, h, k3v);
        auto k4v = accel(axpy(q, h, k3q), k4q, t + h);
        for (int i = 0; i < n; ++i) {
            q[i] += h / 6 * (k1q[i] + 2 * k2q[i] + 2 * k3q[i] + k4q[i]);
            qd[i] += h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
        }
        tr.q.push_back(q);
        tr.qd.push_back(qd);
    }
    return tr;
}

// Step-size sanity check: redo the run at half the step and compare end
// states. RK4 error scales like h^4, so any visible disagreement means the
// step was too coarse for the requested tolerance.
template <class Accel>
Trajectory guarded_rk4(int n, Accel accel, const std::vector<double>& q0, const std::vector<double>& qd0,
                       double t0, double t1, int steps, double guard_tol) {
    Trajectory tr = rk4_second_order(n, accel, q0, qd0, t0, t1, steps);
    if (guard_tol > 0.0) {
        Trajectory fine = rk4_second_order(n, accel, q0, qd0, t0, t1, 2 * steps);
        double scale = 0.0, diff = 0.0;
        for (size_t k = 0; k < tr.size(); ++k)
            for (int i = 0; i < n; ++i) {
                scale = std::max({scale, std::abs(tr.q[k][i]), std::abs(tr.qd[k][i])});
            }
        for (int i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(tr.q.back()[i] - fine.q.back()[i]));
            diff = std::max(diff, std::abs(tr.qd.back()[i] - fine.qd.back()[i]));
        }
        if (scale < 1.0) scale = 1.0;
        if (!std::isfinite(diff) || !std::isfinite(scale))
            throw gf_error("integrator: step too large, state left the finite range");
        if (diff > guard_tol * scale)
            throw gf_error("integrator: step too large, halving the step moved the endpoint by " +
                           std::to_string(diff / scale) + " relative");
    }
    return tr;
}

}  // namespace detail

// Integrate the Euler-Lagrange equations of an arbitrary regular Lagrangian
// with classic RK4. guard_tol (relative endpoint drift under step halving)
// rejects runs whose step was too coarse; pass 0 to skip the check.
inline Trajectory integrate_lagrangian(const LagrangianSpec& spec, const std::vector<double>& q0,
                                       const std::vector<double>& qd0, double t0, double t1, int steps,
                                       double guard_tol = 1e-6) {
    auto accel = [&spec](const std::vector<double>& q, const std::vector<double>& qd, double t) {
        return detail::lagrangian_accel(spec, q, qd, t);
    };
    return detail::guarded_rk4(spec.n, accel, q0, qd0, t0, t1, steps, guard_tol);
}

// Charged point particle in given electric and magnetic fields:
//   m xddot = qe (E + v x B / c).
// Field components are evaluated on the spacetime chart at (t, x).
inline Trajectory integrate_em_particle(const EMField& em, double charge, double mass, const UnitSystem& units,
                                        const std::vector<double>& x0, const std::vector<double>& v0, double t0,
                                        double t1, int steps, double guard_tol = 1e-6) {
    if (x0.size() != 3 || v0.size() != 3) throw gf_error("integrate_em_particle: need 3d position and velocity");
    auto accel = [&em, charge, mass, &units](const std::vector<double>& x, const std::vector<double>& v,
                                             double t) {
        Point p{t, x[0], x[1], x[2]};
        double E[3], B[3];
        for (int i = 0; i < 3; ++i) {
            E[i] = em.E[i].real_value(p);
            B[i] = em.B[i].real_value(p);
        }
        std::vector<double> a(3);
        a[0] = E[0] + (v[1] * B[2] - v[2] * B[1]) / units.c;
        a[1] = E[1] + (v[2] * B[0] - v[0] * B[2]) / units.c;
        a[2] = E[2] + (v[0] * B[1] - v[1] * B[0]) / units.c;
        for (int i = 0; i < 3; ++i) a[i] *= charge / mass;
        return a;
    };
    return detail::guarded_rk4(3, accel, x0, v0, t0, t1, steps, guard_tol);
}

}  // namespace gf
