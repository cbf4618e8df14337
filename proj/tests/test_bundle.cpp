#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "gaugeforms/bundle.hpp"
#include "gaugeforms/linalg_small.hpp"
#include "oracles.hpp"

using namespace gf;

namespace {

const double pi = std::acos(-1.0);

// Low-order polynomial potential with every component depending on every
// coordinate, so no commutator term vanishes by accident.
ConnectionForm random_connection(std::mt19937_64& rng, double charge) {
    Chart mk = Chart::minkowski();
    ConnectionForm w;
    w.charge = charge;
    std::array<ScalarField, 4> comp;
    for (auto& f : comp) {
        oracle::RandomPoly poly = oracle::RandomPoly::draw(4, 2, rng);
        f = poly.field(mk);
    }
    w.A = FourPotential::make(comp[0], comp[1], comp[2], comp[3]);
    return w;
}

BundleTangent random_tangent(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    BundleTangent X;
    for (auto& c : X.xdot) c = u(rng);
    X.fiber = u(rng);
    return X;
}

}  // namespace

TEST_CASE("connection form evaluation", "[bundle]") {
    std::mt19937_64 rng(31);
    ConnectionForm w = random_connection(rng, 1.3);
    BundlePoint at = BundlePoint::make({0.3, -0.7, 1.1, 0.4}, 0.9);

    SECTION("purely vertical vectors read off the fiber coefficient") {
        CHECK(connection_apply(w, BundleTangent::vertical(2.4), at) == cx(0.0, 2.4));
    }

    SECTION("the horizontal lifts are annihilated") {
        for (int mu = 0; mu < 4; ++mu) {
            cx val = connection_apply(w, horizontal_basis(w, mu, at), at);
            CHECK(std::abs(val) < 1e-12);
        }
    }

    SECTION("no potential: coordinate directions are already horizontal") {
        ConnectionForm free;
        free.A = FourPotential::make(
            ScalarField::constant(Chart::minkowski(), cx(0.0)), ScalarField::constant(Chart::minkowski(), cx(0.0)),
            ScalarField::constant(Chart::minkowski(), cx(0.0)), ScalarField::constant(Chart::minkowski(), cx(0.0)));
        BundleTangent t0;
        t0.xdot = {1.0, 0.0, 0.0, 0.0};
        CHECK(connection_apply(free, t0, at) == cx(0.0, 0.0));
    }

    SECTION("output sits on the imaginary axis and is linear") {
        for (int trial = 0; trial < 25; ++trial) {
            BundleTangent X = random_tangent(rng), Y = random_tangent(rng);
            cx wx = connection_apply(w, X, at), wy = connection_apply(w, Y, at);
            CHECK(wx.real() == 0.0);
            BundleTangent Z;
            for (size_t i = 0; i < 4; ++i) Z.xdot[i] = X.xdot[i] + 2.0 * Y.xdot[i];
            Z.fiber = X.fiber + 2.0 * Y.fiber;
            CHECK(std::abs(connection_apply(w, Z, at) - (wx + 2.0 * wy)) < 1e-12);
        }
    }

    SECTION("angles wrap into one turn") {
        CHECK(BundlePoint::make({0.0, 0.0, 0.0, 0.0}, -0.5).theta == Catch::Approx(2.0 * pi - 0.5));
        CHECK_THROWS_AS(BundlePoint::make({0.0, 0.0}, 0.0), gf_error);
    }
}

TEST_CASE("vertical-horizontal splitting", "[bundle]") {
    std::mt19937_64 rng(47);
    ConnectionForm w = random_connection(rng, 0.8);
    BundlePoint at = BundlePoint::make({-0.2, 0.5, -0.9, 1.3}, 0.0);

    SECTION("already-horizontal input has no vertical part") {
        BundleTangent h = horizontal_basis(w, 2, at);
        auto s = horizontal_decompose(w, h, at);
        CHECK(s.vertical.fiber == 0.0);
        CHECK(s.horizontal.xdot == h.xdot);
    }

    SECTION("vertical input has no horizontal part") {
        auto s = horizontal_decompose(w, BundleTangent::vertical(1.7), at);
        CHECK(s.vertical.fiber == 1.7);
        for (double c : s.horizontal.xdot) CHECK(c == 0.0);
        CHECK(s.horizontal.fiber == 0.0);
    }

    SECTION("random vectors: split is exact and omega kills the horizontal part") {
        for (int trial = 0; trial < 30; ++trial) {
            BundleTangent X = random_tangent(rng);
            auto s = horizontal_decompose(w, X, at);
            for (size_t i = 0; i < 4; ++i) {
                CHECK(s.vertical.xdot[i] == 0.0);
                CHECK(s.horizontal.xdot[i] + s.vertical.xdot[i] == X.xdot[i]);
            }
            CHECK(s.horizontal.fiber + s.vertical.fiber == Catch::Approx(X.fiber).margin(1e-14));
            CHECK(std::abs(connection_apply(w, s.horizontal, at)) < 1e-12);
        }
    }

    SECTION("the lifts plus the fiber direction span all five dimensions") {
        SmallMat basis(5, std::vector<double>(5, 0.0));
        for (int mu = 0; mu < 4; ++mu) {
            BundleTangent h = horizontal_basis(w, mu, at);
            for (size_t i = 0; i < 4; ++i) basis[static_cast<size_t>(mu)][i] = h.xdot[i];
            basis[static_cast<size_t>(mu)][4] = h.fiber;
        }
        basis[4][4] = 1.0;  // vertical generator
        CHECK_NOTHROW(invert_dense(basis));
    }
}

TEST_CASE("covariant derivative", "[bundle]") {
    Chart mk = Chart::minkowski();
    std::mt19937_64 rng(59);

    SECTION("no potential: plain partial derivative") {
        ConnectionForm w;
        w.A = FourPotential::make(ScalarField::constant(mk, cx(0.0)), ScalarField::constant(mk, cx(0.0)),
                                  ScalarField::constant(mk, cx(0.0)), ScalarField::constant(mk, cx(0.0)));
        oracle::RandomPoly poly = oracle::RandomPoly::draw(4, 3, rng);
        ScalarField psi = poly.field(mk);
        for (int trial = 0; trial < 10; ++trial) {
            Point p = oracle::random_point(4, rng);
            for (int mu = 0; mu < 4; ++mu)
                CHECK(std::abs(covariant_derivative(w, psi, mu, p) - psi.partial(mu).value(p)) < 1e-13);
        }
    }

    SECTION("constant field against a constant potential component") {
        ConnectionForm w;
        w.charge = 2.0;
        double a = 0.7;
        w.A = FourPotential::make(ScalarField::constant(mk, cx(a)), ScalarField::constant(mk, cx(0.0)),
                                  ScalarField::constant(mk, cx(0.0)), ScalarField::constant(mk, cx(0.0)));
        ScalarField psi = ScalarField::constant(mk, cx(1.5, -0.5));
        Point p{0.1, 0.2, 0.3, 0.4};
        cx expect = cx(0.0, 1.0) * w.charge * a * cx(1.5, -0.5);
        CHECK(std::abs(covariant_derivative(w, psi, 0, p) - expect) < 1e-15);
    }

    SECTION("pure-gauge potential peels off as a phase") {
        // With A = d Lambda and psi = e^{-ie Lambda} chi, the derivative of
        // the phase cancels the connection term exactly.
        double e = 1.1;
        auto lam = [](const auto& x) { return x[0] * x[1] - cx(0.5) * x[2] * x[2] + x[3]; };
        oracle::RandomPoly chi_poly = oracle::RandomPoly::draw(4, 2, rng);
        ConnectionForm w;
        w.charge = e;
        std::array<ScalarField, 4> grad;
        ScalarField lam_field = ScalarField::make(mk, lam);
        for (int mu = 0; mu < 4; ++mu) grad[static_cast<size_t>(mu)] = lam_field.partial(mu);
        w.A = FourPotential::make(grad[0], grad[1], grad[2], grad[3]);
        ScalarField chi = chi_poly.field(mk);
        ScalarField phase_field = ScalarField::make(mk, [lam, e](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            return exp(ad<T>::lift(cx(0.0, -e)) * lam(x));
        });
        ScalarField psi = phase_field * chi;
        for (int trial = 0; trial < 10; ++trial) {
            Point p = oracle::random_point(4, rng);
            cx phase = std::exp(cx(0.0, -e) * lam_field.value(p));
            for (int mu = 0; mu < 4; ++mu) {
                cx lhs = covariant_derivative(w, psi, mu, p);
                cx rhs = phase * chi.partial(mu).value(p);
                CHECK(std::abs(lhs - rhs) < 1e-12);
            }
        }
    }

    SECTION("axis range enforced") {
        ConnectionForm w = random_connection(rng, 1.0);
        ScalarField psi = ScalarField::constant(mk, cx(1.0));
        CHECK_THROWS_AS(covariant_derivative(w, psi, 4, Point{0, 0, 0, 0}), gf_error);
    }
}

TEST_CASE("curvature equals the covariant-derivative commutator", "[bundle]") {
    Chart mk = Chart::minkowski();
    std::mt19937_64 rng(71);

    SECTION("random polynomial data at a hundred points") {
        ConnectionForm w = random_connection(rng, 1.4);
        oracle::RandomPoly poly = oracle::RandomPoly::draw(4, 2, rng);
        ScalarField psi = poly.field(mk);
        for (int trial = 0; trial < 100; ++trial) {
            Point p = oracle::random_point(4, rng);
            int mu = static_cast<int>(rng() % 4), nu = static_cast<int>(rng() % 4);
            CHECK(std::abs(curvature_commutator(w, psi, mu, nu, p)) < 1e-10);
        }
    }

    SECTION("free connection commutes") {
        ConnectionForm w;
        w.A = FourPotential::make(ScalarField::constant(mk, cx(0.0)), ScalarField::constant(mk, cx(0.0)),
                                  ScalarField::constant(mk, cx(0.0)), ScalarField::constant(mk, cx(0.0)));
        oracle::RandomPoly poly = oracle::RandomPoly::draw(4, 3, rng);
        ScalarField psi = poly.field(mk);
        Point p{0.2, -0.4, 0.6, -0.8};
        CHECK(std::abs(curvature_commutator(w, psi, 0, 1, p)) < 1e-13);
    }

    SECTION("pure gauge carries no curvature") {
        ScalarField phi = ScalarField::make(mk, [](const auto& x) { return x[0] * x[2] + x[1] * x[3] * x[3]; });
        ConnectionForm w;
        w.charge = 0.9;
        w.A = FourPotential::make(phi.partial(0), phi.partial(1), phi.partial(2), phi.partial(3));
        oracle::RandomPoly poly = oracle::RandomPoly::draw(4, 2, rng);
        ScalarField psi = poly.field(mk);
        for (int trial = 0; trial < 10; ++trial) {
            Point p = oracle::random_point(4, rng);
            CHECK(std::abs(curvature_commutator(w, psi, 1, 3, p)) < 1e-12);
        }
    }
}

TEST_CASE("curvature form", "[bundle]") {
    Chart mk = Chart::minkowski();
    std::mt19937_64 rng(83);

    SECTION("linear potential along one axis") {
        // A = x dy gives dA = dx^dy, so the curvature is -ie on that plane.
        ScalarField zero = ScalarField::constant(mk, cx(0.0));
        ScalarField x1 = ScalarField::make(mk, [](const auto& x) { return x[1]; });
        ConnectionForm w;
        w.charge = 1.6;
        w.A = FourPotential::make(zero, zero, x1, zero);
        KForm curv = curvature_form(w);
        Point p{0.3, 0.6, -0.2, 0.9};
        CHECK(std::abs(curv.coeff({1, 2}).value(p) - cx(0.0, -1.6)) < 1e-14);
        CHECK(std::abs(curv.coeff({0, 1}).value(p)) < 1e-14);
        CHECK(std::abs(curv.coeff({2, 3}).value(p)) < 1e-14);
    }

    SECTION("pure gauge vanishes") {
        ScalarField phi = ScalarField::make(mk, [](const auto& x) { return sin(x[1]) * x[0] + x[2] * x[3]; });
        ConnectionForm w;
        w.A = FourPotential::make(phi.partial(0), phi.partial(1), phi.partial(2), phi.partial(3));
        KForm curv = curvature_form(w);
        for (int trial = 0; trial < 10; ++trial) {
            Point p = oracle::random_point(4, rng);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) CHECK(std::abs(curv.coeff({mu, nu}).value(p)) < 1e-12);
        }
    }

    SECTION("coefficientwise match with the scaled field strength") {
        ConnectionForm w = random_connection(rng, 2.2);
        KForm curv = curvature_form(w);
        KForm F = field_tensor(w.A);
        for (int trial = 0; trial < 10; ++trial) {
            Point p = oracle::random_point(4, rng);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) {
                    cx lhs = curv.coeff({mu, nu}).value(p);
                    cx rhs = cx(0.0, -w.charge) * F.coeff({mu, nu}).value(p);
                    CHECK(std::abs(lhs - rhs) < 1e-12);
                }
        }
    }
}

TEST_CASE("gauge transition compatibility", "[bundle]") {
    Chart mk = Chart::minkowski();
    std::mt19937_64 rng(97);
    ConnectionForm w = random_connection(rng, 1.0);

    SECTION("identical potentials with no gauge function") {
        ScalarField zero = ScalarField::constant(mk, cx(0.0));
        auto rep = transition_check(w.A, w.A, zero);
        CHECK(rep.potential_residual == 0.0);
        CHECK(rep.curvature_residual == 0.0);
        CHECK(rep.compatible);
    }

    SECTION("shifting by an exact form is a recognized gauge change") {
        ScalarField phi = ScalarField::make(mk, [](const auto& x) { return x[0] * x[0] - x[1] * x[3] + cx(0.5) * x[2]; });
        FourPotential Ap = FourPotential::make(
            w.A.form.coeff({0}) - phi.partial(0), w.A.form.coeff({1}) - phi.partial(1),
            w.A.form.coeff({2}) - phi.partial(2), w.A.form.coeff({3}) - phi.partial(3));
        auto rep = transition_check(w.A, Ap, phi);
        CHECK(rep.potential_residual < 1e-12);
        CHECK(rep.curvature_residual < 1e-12);
        CHECK(rep.compatible);
    }

    SECTION("non-exact shifts are flagged") {
        // x dy is not d of anything, so the potentials disagree physically.
        ScalarField zero = ScalarField::constant(mk, cx(0.0));
        ScalarField x1 = ScalarField::make(mk, [](const auto& x) { return x[1]; });
        FourPotential Ap = FourPotential::make(w.A.form.coeff({0}), w.A.form.coeff({1}),
                                               w.A.form.coeff({2}) + x1, w.A.form.coeff({3}));
        auto rep = transition_check(w.A, Ap, zero);
        CHECK(rep.potential_residual > 0.1);
        CHECK(rep.curvature_residual > 0.1);
        CHECK_FALSE(rep.compatible);
    }
}
