#pragma once

// U(1) principal bundle over flat spacetime: connection one-form,
// vertical/horizontal splitting of tangent vectors, covariant derivative
// on charged fields, and the curvature identities that tie the bundle
// picture back to the electromagnetic field strength.
//
// Planck's constant is set to 1 in this header. The connection reads
//   w = -i e A_mu dx^mu + dtheta
// and a gauge phase is e^{-ie Lambda}; unit bookkeeping against the
// wave-mechanics layer goes through UnitSystem at the call site.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gaugeforms/maxwell.hpp"

namespace gf {

// Point of the total space: a spacetime point plus a fiber angle.
struct BundlePoint {
    Point base;
    double theta = 0.0;

    static BundlePoint make(Point base, double theta) {
        if (base.size() != 4) throw gf_error("BundlePoint: base must be a spacetime point");
        const double tau = 2.0 * std::acos(-1.0);
        theta = std::fmod(theta, tau);
        if (theta < 0.0) theta += tau;
        return {std::move(base), theta};
    }
};

// Tangent vector xdot^mu d/dx^mu + i k d/dtheta. The fiber direction is
// anti-Hermitian, so its coefficient is stored as the real number k and
// the factor i is implied; that keeps omega's output on the imaginary
// axis without any rounding.
struct BundleTangent {
    std::array<double, 4> xdot{};
    double fiber = 0.0;

    static BundleTangent vertical(double k) { return {{0.0, 0.0, 0.0, 0.0}, k}; }
};

struct ConnectionForm {
    FourPotential A;
    double charge = 1.0;
};

namespace detail {

inline std::array<double, 4> potential_at(const ConnectionForm& w, const Point& p) {
    std::array<double, 4> a{};
    for (int mu = 0; mu < 4; ++mu) a[static_cast<size_t>(mu)] = w.A.form.coeff({mu}).real_value(p);
    return a;
}

}  // namespace detail

// omega(X) = i(k - e A_mu xdot^mu), valued in the Lie algebra i*R.
inline cx connection_apply(const ConnectionForm& w, const BundleTangent& X, const BundlePoint& at) {
    auto a = detail::potential_at(w, at.base);
    double pairing = 0.0;
    for (int mu = 0; mu < 4; ++mu) pairing += a[static_cast<size_t>(mu)] * X.xdot[static_cast<size_t>(mu)];
    return cx(0.0, X.fiber - w.charge * pairing);
}

// Lift of d/dx^mu that omega annihilates: d/dx^mu + i e A_mu d/dtheta.
inline BundleTangent horizontal_basis(const ConnectionForm& w, int mu, const BundlePoint& at) {
    if (mu < 0 || mu >= 4) throw gf_error("horizontal_basis: axis out of range");
    BundleTangent h;
    h.xdot[static_cast<size_t>(mu)] = 1.0;
    h.fiber = w.charge * detail::potential_at(w, at.base)[static_cast<size_t>(mu)];
    return h;
}

struct SplitTangent {
    BundleTangent vertical;
    BundleTangent horizontal;
};

// Unique split X = V + H with H spanned by the horizontal lifts and V
// along the fiber. Exact: the base components pass through untouched and
// the fiber coefficient just shifts by e A . xdot.
inline SplitTangent horizontal_decompose(const ConnectionForm& w, const BundleTangent& X,
                                         const BundlePoint& at) {
    auto a = detail::potential_at(w, at.base);
    double lift = 0.0;
    for (int mu = 0; mu < 4; ++mu) lift += a[static_cast<size_t>(mu)] * X.xdot[static_cast<size_t>(mu)];
    SplitTangent s;
    s.horizontal.xdot = X.xdot;
    s.horizontal.fiber = w.charge * lift;
    s.vertical = BundleTangent::vertical(X.fiber - s.horizontal.fiber);
    return s;
}

// D_mu psi = (d_mu + i e A_mu) psi at a point, derivatives taken exactly.
inline cx covariant_derivative(const ConnectionForm& w, const ScalarField& psi, int mu, const Point& p) {
    if (mu < 0 || mu >= 4) throw gf_error("covariant_derivative: axis out of range");
    cx a = w.A.form.coeff({mu}).value(p);
    return psi.partial(mu).value(p) + cx(0.0, 1.0) * w.charge * a * psi.value(p);
}

namespace detail {

inline ScalarField covariant_field(const ConnectionForm& w, const ScalarField& psi, int mu) {
    return psi.partial(mu) + (w.A.form.coeff({mu}) * psi).scaled(cx(0.0, w.charge));
}

}  // namespace detail

// Residual of [D_mu, D_nu] psi = -i e F_{mu nu} psi, with the commutator
// built from nested covariant derivatives and F taken independently from
// the field-strength table. Zero up to roundoff when both sides agree.
inline cx curvature_commutator(const ConnectionForm& w, const ScalarField& psi, int mu, int nu,
                               const Point& p) {
    ScalarField dmn = detail::covariant_field(w, detail::covariant_field(w, psi, nu), mu);
    ScalarField dnm = detail::covariant_field(w, detail::covariant_field(w, psi, mu), nu);
    cx commutator = dmn.value(p) - dnm.value(p);
    auto F = component_matrix(field_tensor(w.A), p);
    cx rhs = cx(0.0, 1.0) * w.charge * F[static_cast<size_t>(mu)][static_cast<size_t>(nu)] * psi.value(p);
    return commutator + rhs;
}

// dw = -i e dA: the fiber term dtheta is closed, so the curvature lives
// entirely on the base and is just the scaled field strength.
inline KForm curvature_form(const ConnectionForm& w) {
    return field_tensor(w.A).scaled(cx(0.0, -w.charge));
}

struct TransitionReport {
    double potential_residual = 0.0;  // sup |A - A' - d phi|
    double curvature_residual = 0.0;  // sup |dA - dA'|
    bool compatible = false;
};

// Check that two potentials describe the same connection in different
// gauges, i.e. A = A' + d phi. Both residuals are sampled over a lattice
// in the box [-1,1]^4; curvature agreement is reported separately because
// it holds for any exact-form mismatch, not only the claimed phi.
inline TransitionReport transition_check(const FourPotential& A, const FourPotential& Ap,
                                         const ScalarField& phi, double tol = 1e-9) {
    KForm dphi = KForm::zero(A.form.chart, 1);
    for (int mu = 0; mu < 4; ++mu) dphi.add_term({mu}, phi.partial(mu));
    KForm gap = A.form - Ap.form - dphi;
    KForm curv_gap = d(A.form) - d(Ap.form);
    Lattice box{Point{-1.0, -1.0, -1.0, -1.0}, Point{1.0, 1.0, 1.0, 1.0}, 4};
    TransitionReport rep;
    for (const auto& p : box.points()) {
        for (int mu = 0; mu < 4; ++mu)
            rep.potential_residual = std::max(rep.potential_residual, std::abs(gap.coeff({mu}).value(p)));
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu)
                rep.curvature_residual =
                    std::max(rep.curvature_residual, std::abs(curv_gap.coeff({mu, nu}).value(p)));
    }
    rep.compatible = rep.potential_residual < tol;
    return rep;
}

}  // namespace gf
