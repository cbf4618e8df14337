#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gaugeforms/chart.hpp"
#include "oracles.hpp"

using namespace gf;

namespace {

ScalarField poly_xyz() {
    // f(x,y,z) = x - y + x*y*z
    return ScalarField::make(Chart::euclidean(3), [](const auto& x) {
        return x[0] - x[1] + x[0] * x[1] * x[2];
    });
}

}  // namespace

TEST_CASE("gradient of a polynomial field", "[chartcalc]") {
    auto f = poly_xyz();
    auto g = gradient(f, {1, 2, 3});
    CHECK(g[0] == Catch::Approx(7.0).margin(1e-14));
    CHECK(g[1] == Catch::Approx(2.0).margin(1e-14));
    CHECK(g[2] == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("divergence examples", "[chartcalc]") {
    Chart e3 = Chart::euclidean(3);
    VectorField v;
    v.chart = e3;
    v.comp = {
        ScalarField::coordinate(e3, 0),
        ScalarField::make(e3, [](const auto& x) { return x[1] - x[2]; }),
        ScalarField::make(e3, [](const auto& x) { return cos(x[0]); }),
    };
    CHECK(divergence(v, {0.3, -1.0, 2.0}) == Catch::Approx(2.0).margin(1e-14));

    VectorField w;
    w.chart = e3;
    w.comp = {
        ScalarField::constant(e3, 0.0),
        ScalarField::make(
            e3, [](const auto& x) { return 1.0 / x[1]; },
            [](const Point& p) { return std::abs(p[1]) < 1e-12; }),
        ScalarField::constant(e3, 0.0),
    };
    CHECK(divergence(w, {0, 2, 0}) == Catch::Approx(-0.25).margin(1e-14));
    CHECK_THROWS_AS(divergence(w, {1, 0, 0}), singular_point_error);
}

TEST_CASE("curl of a rotation field", "[chartcalc]") {
    Chart e3 = Chart::euclidean(3);
    VectorField v;
    v.chart = e3;
    v.comp = {
        ScalarField::coordinate(e3, 1).scaled(cx(-1.0)),
        ScalarField::coordinate(e3, 0),
        ScalarField::constant(e3, 0.0),
    };
    auto c = curl(v, {0.7, -0.2, 1.1});
    CHECK(c[0] == Catch::Approx(0.0).margin(1e-14));
    CHECK(c[1] == Catch::Approx(0.0).margin(1e-14));
    CHECK(c[2] == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("laplacian weights the Hessian trace by the chart signature", "[chartcalc]") {
    auto r2 = [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        T acc = gf::ad<T>::lift(0.0);
        for (const auto& xi : x) acc = acc + xi * xi;
        return acc;
    };
    ScalarField fe = ScalarField::make(Chart::euclidean(3), r2);
    CHECK(laplacian(fe, {1, 2, 3}) == Catch::Approx(6.0).margin(1e-13));

    // on the spacetime chart the t-slot enters with a minus sign
    ScalarField fm = ScalarField::make(Chart::minkowski(), r2);
    CHECK(laplacian(fm, {0.5, 1, 2, 3}) == Catch::Approx(-2.0 + 6.0).margin(1e-13));
}

TEST_CASE("second derivatives commute", "[chartcalc]") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        auto poly = oracle::RandomPoly::draw(dim, 3, rng);
        auto f = poly.field(Chart::euclidean(dim));
        Point p = oracle::random_point(dim, rng);
        Jet j = f.jet(p, 2);
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                REQUIRE(std::abs(j.hess[a][b] - j.hess[b][a]) < 1e-12);
    }
}

TEST_CASE("dual-number derivatives agree with central differences", "[chartcalc]") {
    std::mt19937_64 rng(7);
    Chart e3 = Chart::euclidean(3);
    // mix of transcendental pieces; smooth on the sampled box
    ScalarField f = ScalarField::make(e3, [](const auto& x) {
        return sin(x[0] * x[1]) + exp(x[2] * 0.3) + sqrt(x[0] * x[0] + x[1] * x[1] + 2.0);
    });
    for (int trial = 0; trial < 25; ++trial) {
        Point p = oracle::random_point(3, rng);
        Jet j = f.jet(p, 2);
        for (int a = 0; a < 3; ++a) {
            double scale = std::max(1.0, std::abs(p[a]));
            double fd = oracle::fd_partial(f, p, a, 1e-5 * scale);
            double ad = j.grad[a].real();
            REQUIRE(std::abs(ad - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double fd = oracle::fd_second(f, p, a, b, 2e-4);
                double ad = j.hess[a][b].real();
                REQUIRE(std::abs(ad - fd) <= 2e-5 * std::max(1.0, std::abs(fd)));
            }
    }
}

TEST_CASE("jet gradients match hand-expanded polynomial derivatives", "[chartcalc]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        auto poly = oracle::RandomPoly::draw(4, 4, rng);
        auto f = poly.field(Chart::euclidean(4));
        Point p = oracle::random_point(4, rng);
        Jet j = f.jet(p, 1);
        REQUIRE(std::abs(j.value.real() - poly.value(p)) < 1e-11);
        for (int a = 0; a < 4; ++a)
            REQUIRE(std::abs(j.grad[a].real() - poly.partial(p, a)) < 1e-11);
    }
}

TEST_CASE("field arithmetic and chart guards", "[chartcalc]") {
    Chart e2 = Chart::euclidean(2);
    Chart e3 = Chart::euclidean(3);
    auto x = ScalarField::coordinate(e2, 0);
    auto y = ScalarField::coordinate(e2, 1);
    auto f = x * y + x;
    CHECK(f.real_value({2, 3}) == Catch::Approx(8.0));
    CHECK((-f).real_value({2, 3}) == Catch::Approx(-8.0));
    CHECK((2.0 * f).real_value({2, 3}) == Catch::Approx(16.0));

    auto z3 = ScalarField::coordinate(e3, 2);
    CHECK_THROWS_AS(x + z3, chart_mismatch_error);
    CHECK_THROWS_AS(ScalarField::coordinate(e2, 5), gf_error);
}

TEST_CASE("complex-valued fields propagate through jets", "[chartcalc]") {
    Chart e1 = Chart::euclidean(1);
    cx i{0.0, 1.0};
    // plane-wave style phase: exp(i k x)
    ScalarField f = ScalarField::make(e1, [i](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        return exp(x[0] * gf::ad<T>::lift(i * 2.0));
    });
    Jet j = f.jet({0.4}, 2);
    cx expect = std::exp(i * 0.8);
    CHECK(std::abs(j.value - expect) < 1e-13);
    CHECK(std::abs(j.grad[0] - i * 2.0 * expect) < 1e-12);
    CHECK(std::abs(j.hess[0][0] - (-4.0) * expect) < 1e-12);
}
