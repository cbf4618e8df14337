#pragma once

// Electromagnetism in form language on the spacetime chart.
//
// The field strength is carried as a 2-form F = eps^1 ^ dt + (1/c) beta^2,
// where eps^1 is the electric 1-form and beta^2 the magnetic flux 2-form.
// Both field laws then read as exterior-derivative statements: dF = 0 and
// d*F = 4 pi *J (the Gaussian-style coupling; a unit-system flag drops the
// 4 pi). Fields are evaluated through the dual tower, so every residual
// here is an exact derivative probed pointwise, not a stencil.

#include <array>
#include <cmath>
#include <vector>

#include "chart.hpp"
#include "forms.hpp"

namespace gf {

struct EMField {
    Chart chart = Chart::minkowski();
    std::array<ScalarField, 3> E;
    std::array<ScalarField, 3> B;

    static EMField zero() {
        EMField em;
        for (int i = 0; i < 3; ++i) {
            em.E[static_cast<size_t>(i)] = ScalarField::constant(em.chart, cx(0.0));
            em.B[static_cast<size_t>(i)] = ScalarField::constant(em.chart, cx(0.0));
        }
        return em;
    }

    static EMField uniform(const std::array<double, 3>& e, const std::array<double, 3>& b) {
        EMField em;
        for (size_t i = 0; i < 3; ++i) {
            em.E[i] = ScalarField::constant(em.chart, cx(e[i]));
            em.B[i] = ScalarField::constant(em.chart, cx(b[i]));
        }
        return em;
    }
};

struct FourPotential {
    KForm form;  // grade-1 on the spacetime chart; coeff({0}) is the scalar potential

    static FourPotential make(const ScalarField& phi, const ScalarField& a1,
                              const ScalarField& a2, const ScalarField& a3) {
        FourPotential A;
        A.form = KForm::zero(Chart::minkowski(), 1);
        A.form.add_term({0}, phi);
        A.form.add_term({1}, a1);
        A.form.add_term({2}, a2);
        A.form.add_term({3}, a3);
        return A;
    }
};

inline KForm field_tensor(const FourPotential& A) { return d(A.form); }

// F = eps^1 ^ dt + (1/c) beta^2. Canonical coefficients (axes t,x,y,z):
//   coeff(dt^dx^i) = -E_i,   coeff(dy^dz) = B1/c,
//   coeff(dx^dz) = -B2/c,    coeff(dx^dy) = B3/c.
inline KForm assemble_F(const EMField& em, const UnitSystem& units = UnitSystem::natural()) {
    KForm F = KForm::zero(em.chart, 2);
    F.add_term({1, 0}, em.E[0]);
    F.add_term({2, 0}, em.E[1]);
    F.add_term({3, 0}, em.E[2]);
    const double ic = 1.0 / units.c;
    F.add_term({2, 3}, em.B[0] * ic);
    F.add_term({3, 1}, em.B[1] * ic);
    F.add_term({1, 2}, em.B[2] * ic);
    return F;
}

inline std::array<ScalarField, 3> electric_of(const KForm& F) {
    return {F.coeff({0, 1}).scaled(cx(-1.0)), F.coeff({0, 2}).scaled(cx(-1.0)),
            F.coeff({0, 3}).scaled(cx(-1.0))};
}

inline std::array<ScalarField, 3> magnetic_of(const KForm& F,
                                              const UnitSystem& units = UnitSystem::natural()) {
    return {F.coeff({2, 3}).scaled(cx(units.c)), F.coeff({1, 3}).scaled(cx(-units.c)),
            F.coeff({1, 2}).scaled(cx(units.c))};
}

// Component matrix F_{mu nu} in the row layout where F_{0i} = E_i and the
// spatial block holds the magnetic entries (c = 1 reading). This is the
// negative of the wedge-coefficient table: both conventions are in play in
// the literature and the commutator identities below need this one.
inline std::array<std::array<double, 4>, 4> component_matrix(const KForm& F, const Point& p) {
    std::array<std::array<double, 4>, 4> m{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            double v = -F.coeff({mu, nu}).real_value(p);
            m[static_cast<size_t>(mu)][static_cast<size_t>(nu)] = v;
            m[static_cast<size_t>(nu)][static_cast<size_t>(mu)] = -v;
        }
    return m;
}

// Rectangular evaluation lattice, endpoints included.
struct Lattice {
    Point lo, hi;
    int per_axis = 5;

    std::vector<Point> points() const {
        const size_t dim = lo.size();
        std::vector<Point> out;
        std::vector<int> ix(dim, 0);
        while (true) {
            Point p(dim);
            for (size_t a = 0; a < dim; ++a) {
                double f = (per_axis == 1) ? 0.0
                                           : static_cast<double>(ix[a]) / (per_axis - 1);
                p[a] = lo[a] + f * (hi[a] - lo[a]);
            }
            out.push_back(std::move(p));
            size_t a = 0;
            for (; a < dim; ++a) {
                if (++ix[a] < per_axis) break;
                ix[a] = 0;
            }
            if (a == dim) break;
        }
        return out;
    }

    static Lattice spacetime_box(double half_extent = 1.0, int per_axis = 5) {
        return {Point(4, -half_extent), Point(4, half_extent), per_axis};
    }
};

inline double sup_form(const KForm& w, const std::vector<Point>& pts) {
    double m = 0.0;
    for (const auto& [idx, f] : w.terms)
        for (const auto& p : pts) m = std::max(m, std::abs(f.value(p)));
    return m;
}

// sup |dF| over the lattice: the no-monopole / induction law residual.
inline double homogeneous_residual(const KForm& F, const Lattice& lat) {
    return sup_form(d(F), lat.points());
}

inline KForm current_one_form(const ScalarField& rho, const ScalarField& jx,
                              const ScalarField& jy, const ScalarField& jz) {
    KForm J = KForm::zero(Chart::minkowski(), 1);
    J.add_term({0}, rho);
    J.add_term({1}, jx);
    J.add_term({2}, jy);
    J.add_term({3}, jz);
    return J;
}

// sup |d*F - (coupling) *J| over the lattice: the source-law residual.
inline double inhomogeneous_residual(const KForm& F, const KForm& J, const UnitSystem& units,
                                     const Lattice& lat) {
    KForm resid = d(star4(F)) - star4(J).scaled(cx(units.source_coupling()));
    return sup_form(resid, lat.points());
}

inline double inhomogeneous_residual_vacuum(const KForm& F, const Lattice& lat) {
    return sup_form(d(star4(F)), lat.points());
}

// f^1 = -q i_u F: force 1-form on a charge with 4-velocity u.
// It annihilates u exactly (no work in the direction of motion through
// spacetime), which the tests pin down.
inline KForm lorentz_force(const KForm& F, const std::array<double, 4>& u, double q) {
    VectorField U = VectorField::constant(F.chart, {u[0], u[1], u[2], u[3]});
    return interior(U, F).scaled(cx(-q));
}

// Linearly polarized wave running along +-y: E = z_hat E0 sin(y -+ c t),
// B = x_hat (+-) E0 sin(y -+ c t). Solves both field laws exactly.
inline EMField plane_wave(double E0, int direction = +1,
                          const UnitSystem& units = UnitSystem::natural()) {
    EMField em = EMField::zero();
    const double s = (direction >= 0) ? 1.0 : -1.0;
    const double c = units.c;
    em.E[2] = ScalarField::make(em.chart, [E0, s, c](const auto& x) {
        return sin(x[2] - x[0] * (s * c)) * E0;
    });
    em.B[0] = ScalarField::make(em.chart, [E0, s, c](const auto& x) {
        return sin(x[2] - x[0] * (s * c)) * (s * E0);
    });
    return em;
}

// Fault fixture: a radially diverging magnetic field. Its flux 2-form has
// nonzero d everywhere, so the no-monopole residual must light up red.
inline EMField monopole_fixture(double g = 1.0) {
    EMField em = EMField::zero();
    for (int i = 0; i < 3; ++i)
        em.B[static_cast<size_t>(i)] = ScalarField::make(
            em.chart, [i, g](const auto& x) { return x[static_cast<size_t>(i + 1)] * g; });
    return em;
}

// E = k r / |r|^(3+p) on the Euclidean 3-chart; for p = 0 this is the
// inverse-square field whose divergence vanishes away from the origin,
// otherwise div E = -p k |r|^(-3-p).
inline VectorField radial_field(double k, double p) {
    Chart e3 = Chart::euclidean(3);
    VectorField v;
    v.chart = e3;
    auto singular = [](const Point& q) {
        return q[0] * q[0] + q[1] * q[1] + q[2] * q[2] < 1e-18;
    };
    for (int i = 0; i < 3; ++i)
        v.comp.push_back(ScalarField::make(
            e3,
            [i, k, p](const auto& x) {
                auto r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                return x[static_cast<size_t>(i)] * pow(r2, -(3.0 + p) / 2.0) * k;
            },
            singular));
    return v;
}

struct RadialDivergenceSample {
    double r = 0, measured = 0, expected = 0, rel_err = 0;
};

inline std::vector<RadialDivergenceSample> radial_divergence_scan(
    double k, double p, const std::vector<double>& radii) {
    VectorField E = radial_field(k, p);
    // fixed rational unit direction, off-axis so no component is special
    const double dir[3] = {2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0};
    std::vector<RadialDivergenceSample> out;
    for (double r : radii) {
        RadialDivergenceSample s;
        s.r = r;
        s.measured = divergence(E, {r * dir[0], r * dir[1], r * dir[2]});
        s.expected = -p * k * std::pow(r, -3.0 - p);
        double denom = std::max(std::abs(s.expected), 1e-300);
        s.rel_err = (p == 0.0) ? std::abs(s.measured) : std::abs(s.measured - s.expected) / denom;
        out.push_back(s);
    }
    return out;
}

// --- discrete Laplace boundary-value solver (successive over-relaxation) ---

struct LaplaceGrid {
    int nx = 0, ny = 0, nz = 1;  // nz = 1 means the 5-point planar stencil
    double h = 1.0;

    int size() const { return nx * ny * nz; }
    int idx(int i, int j, int k = 0) const { return (k * ny + j) * nx + i; }
    bool on_boundary(int i, int j, int k = 0) const {
        if (i == 0 || i == nx - 1 || j == 0 || j == ny - 1) return true;
        return nz > 1 && (k == 0 || k == nz - 1);
    }
};

struct LaplaceSolution {
    std::vector<double> phi;
    int iterations = 0;
    bool converged = false;
    double last_update = 0.0;
};

// fixed[i] nodes hold their value; every outer-boundary node must be fixed.
// Interior fixed nodes model conductors held at a potential.
inline LaplaceSolution laplace_solve(const LaplaceGrid& g, const std::vector<bool>& fixed,
                                     const std::vector<double>& boundary_values,
                                     double omega = 1.8, double tol = 1e-10,
                                     int max_iter = 200000) {
    if (static_cast<int>(fixed.size()) != g.size() ||
        static_cast<int>(boundary_values.size()) != g.size())
        throw gf_error("laplace_solve: mask/value arrays must match the grid");
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.on_boundary(i, j, k) && !fixed[static_cast<size_t>(g.idx(i, j, k))])
                    throw gf_error("laplace_solve: outer boundary must be fully constrained");

    LaplaceSolution out;
    out.phi = boundary_values;
    const bool planar = (g.nz == 1);
    const double inv_nbrs = planar ? 0.25 : (1.0 / 6.0);
    for (int sweep = 0; sweep < max_iter; ++sweep) {
        double worst = 0.0;
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const size_t n = static_cast<size_t>(g.idx(i, j, k));
                    if (fixed[n]) continue;
                    double nb = out.phi[static_cast<size_t>(g.idx(i - 1, j, k))] +
                                out.phi[static_cast<size_t>(g.idx(i + 1, j, k))] +
                                out.phi[static_cast<size_t>(g.idx(i, j - 1, k))] +
                                out.phi[static_cast<size_t>(g.idx(i, j + 1, k))];
                    if (!planar)
                        nb += out.phi[static_cast<size_t>(g.idx(i, j, k - 1))] +
                              out.phi[static_cast<size_t>(g.idx(i, j, k + 1))];
                    double target = nb * inv_nbrs;
                    double delta = omega * (target - out.phi[n]);
                    out.phi[n] += delta;
                    worst = std::max(worst, std::abs(delta));
                }
        out.iterations = sweep + 1;
        out.last_update = worst;
        if (worst < tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// div Lambda + d phi / dt for A^1 = phi dt + Lambda: zero exactly on
// gauge-fixed potentials.
inline ScalarField lorenz_gauge_residual(const FourPotential& A) {
    ScalarField s = A.form.coeff({0}).partial(0);
    for (int i = 1; i < 4; ++i) s = s + A.form.coeff({i}).partial(i);
    return s;
}

// Full contraction F^{mu nu} F_{mu nu} as a scalar field: the signature
// signs are the literal inverse-metric factors, so this evaluates to
// -2(E^2 - B^2) without ever hard-coding that answer.
inline ScalarField invariant_density(const KForm& F) {
    if (F.grade != 2) throw grade_error("invariant_density expects a 2-form");
    ScalarField acc = ScalarField::constant(F.chart, cx(0.0));
    for (const auto& [idx, f] : F.terms) {
        double sgn = F.chart.signature[static_cast<size_t>(idx[0])] *
                     F.chart.signature[static_cast<size_t>(idx[1])];
        acc = acc + (f * f) * (2.0 * sgn);
    }
    return acc;
}

// --- energy bookkeeping over a box ---

struct Box3 {
    std::array<double, 3> lo{}, hi{};
};

struct MediumSource {
    std::array<ScalarField, 3> J;  // applied current density on the spacetime chart
    double sigma = 0.0;            // uniform conductivity

    static MediumSource none() {
        MediumSource m;
        Chart mk = Chart::minkowski();
        for (auto& c : m.J) c = ScalarField::constant(mk, cx(0.0));
        return m;
    }
};

struct PoyntingBudget {
    double active = 0, dissipation = 0, rate = 0, flux = 0;
    double residual() const { return rate + flux + dissipation - active; }
};

namespace detail {

// composite Simpson weights on n+1 samples (n even)
inline double simpson_weight(int i, int n) {
    if (i == 0 || i == n) return 1.0;
    return (i % 2) ? 4.0 : 2.0;
}

}  // namespace detail

// Integrates the field-energy ledger over the box at time t:
//   rate        d/dt of the stored energy (AD time derivative under the sum)
//   flux        outward E x B through the six faces
//   dissipation sigma E^2 in the volume
//   active      - E . J_applied (power the sources pump into the field)
// The pointwise conservation law makes residual() vanish for true solutions.
inline PoyntingBudget poynting_budget(const EMField& em, const MediumSource& src, const Box3& box,
                                      double t, int panels = 16) {
    if (panels % 2) throw gf_error("poynting_budget: panel count must be even");
    const int n = panels;
    std::array<double, 3> h{};
    for (int a = 0; a < 3; ++a)
        h[static_cast<size_t>(a)] =
            (box.hi[static_cast<size_t>(a)] - box.lo[static_cast<size_t>(a)]) / n;

    auto EandB = [&](const Point& p, std::array<double, 3>& E, std::array<double, 3>& B) {
        for (int i = 0; i < 3; ++i) {
            E[static_cast<size_t>(i)] = em.E[static_cast<size_t>(i)].real_value(p);
            B[static_cast<size_t>(i)] = em.B[static_cast<size_t>(i)].real_value(p);
        }
    };

    PoyntingBudget out;

    // volume terms
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k) {
                double w = detail::simpson_weight(i, n) * detail::simpson_weight(j, n) *
                           detail::simpson_weight(k, n) * (h[0] * h[1] * h[2]) / 27.0;
                Point p = {t, box.lo[0] + i * h[0], box.lo[1] + j * h[1], box.lo[2] + k * h[2]};
                std::array<double, 3> E{}, B{};
                EandB(p, E, B);
                double du_dt = 0.0;
                for (int a = 0; a < 3; ++a) {
                    Jet je = em.E[static_cast<size_t>(a)].jet(p, 1);
                    Jet jb = em.B[static_cast<size_t>(a)].jet(p, 1);
                    du_dt += E[static_cast<size_t>(a)] * je.grad[0].real() +
                             B[static_cast<size_t>(a)] * jb.grad[0].real();
                }
                double EdotJ = 0.0, E2 = 0.0;
                for (int a = 0; a < 3; ++a) {
                    EdotJ += E[static_cast<size_t>(a)] * src.J[static_cast<size_t>(a)].real_value(p);
                    E2 += E[static_cast<size_t>(a)] * E[static_cast<size_t>(a)];
                }
                out.rate += w * du_dt;
                out.dissipation += w * src.sigma * E2;
                out.active += w * (-EdotJ);
            }

    // face terms: outward S . n with S = E x B
    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
            int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            double sign = side ? 1.0 : -1.0;
            double coord = side ? box.hi[static_cast<size_t>(axis)] : box.lo[static_cast<size_t>(axis)];
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    double w = detail::simpson_weight(i, n) * detail::simpson_weight(j, n) *
                               (h[static_cast<size_t>(a1)] * h[static_cast<size_t>(a2)]) / 9.0;
                    Point p(4);
                    p[0] = t;
                    p[static_cast<size_t>(axis + 1)] = coord;
                    p[static_cast<size_t>(a1 + 1)] = box.lo[static_cast<size_t>(a1)] + i * h[static_cast<size_t>(a1)];
                    p[static_cast<size_t>(a2 + 1)] = box.lo[static_cast<size_t>(a2)] + j * h[static_cast<size_t>(a2)];
                    std::array<double, 3> E{}, B{};
                    EandB(p, E, B);
                    std::array<double, 3> S = {E[1] * B[2] - E[2] * B[1],
                                               E[2] * B[0] - E[0] * B[2],
                                               E[0] * B[1] - E[1] * B[0]};
                    out.flux += w * sign * S[static_cast<size_t>(axis)];
                }
        }

    return out;
}

}  // namespace gf
