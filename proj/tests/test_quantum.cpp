#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "gaugeforms/quantum.hpp"

using namespace gf;

namespace {

const double pi = std::acos(-1.0);

// Analytic free evolution of a Gaussian packet, the standard complex-width
// solution. Matches gaussian_packet at t = 0 including normalization.
WaveVec free_packet_exact(const WaveGrid& g, double x0, double sigma, double p0, double hbar, double mass,
                          double t) {
    cx alpha(1.0 / (4.0 * sigma * sigma), 0.0);
    cx denom = 1.0 + cx(0.0, 2.0 * hbar * t / mass) * alpha;
    double C = std::pow(2.0 * pi * sigma * sigma, -0.25);
    WaveVec psi(g.N);
    for (int j = 0; j < g.N; ++j) {
        double x = g.x(j);
        double xc = x0 + p0 * t / mass;
        cx arg = -alpha * (x - xc) * (x - xc) / denom + cx(0.0, (p0 * x - 0.5 * p0 * p0 * t / mass) / hbar);
        psi[j] = C / std::sqrt(denom) * std::exp(arg);
    }
    return psi;
}

WaveVec random_state(const WaveGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    WaveVec psi(g.N);
    for (int j = 0; j < g.N; ++j) psi[j] = cx(u(rng), u(rng));
    return normalized(g, psi);
}

double l2_gap(const WaveGrid& g, const WaveVec& a, const WaveVec& b) { return norm(g, WaveVec(a - b)); }

}  // namespace

TEST_CASE("momentum stencil", "[quantum]") {
    WaveGrid g{64, 0.0, 2.0 * pi, Boundary::periodic};

    SECTION("commensurate plane wave is an eigenvector") {
        double hbar = 0.7, k = 3.0;  // k L / 2 pi = 3 turns
        WaveVec psi(g.N);
        for (int j = 0; j < g.N; ++j) psi[j] = std::exp(cx(0.0, k * g.x(j)));
        WaveVec out = apply_momentum(g, psi, hbar);
        double lam = hbar * std::sin(k * g.dx()) / g.dx();
        for (int j = 0; j < g.N; ++j) CHECK(std::abs(out[j] - lam * psi[j]) < 1e-12);
    }

    SECTION("self-adjoint under the grid inner product") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            WaveVec a = random_state(g, rng), b = random_state(g, rng);
            cx lhs = inner(g, apply_momentum(g, a, 1.0), b);
            cx rhs = inner(g, a, apply_momentum(g, b, 1.0));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }

    SECTION("constant state is annihilated") {
        WaveVec psi = WaveVec::Constant(g.N, cx(0.3, -0.1));
        CHECK(apply_momentum(g, psi, 1.0).cwiseAbs().maxCoeff() < 1e-15);
    }

    SECTION("tiny grids rejected") {
        WaveGrid bad{4, 0.0, 1.0, Boundary::periodic};
        CHECK_THROWS_AS(momentum_matrix(bad, 1.0), gf_error);
    }
}

TEST_CASE("position-momentum commutator", "[quantum]") {
    SECTION("interior identity i hbar (psi[j+1]+psi[j-1])/2") {
        WaveGrid g{32, -1.0, 1.0, Boundary::box};
        std::mt19937_64 rng(5);
        WaveVec psi = random_state(g, rng);
        WaveVec c = commutator_xp(g, psi, 0.9);
        for (int j = 1; j + 1 < g.N; ++j) {
            cx expect = cx(0.0, 0.9) * 0.5 * (psi[j + 1] + psi[j - 1]);
            CHECK(std::abs(c[j] - expect) < 1e-14);
        }
    }

    SECTION("approaches i hbar at second order for a smooth packet") {
        double err[2];
        int sizes[2] = {512, 1024};
        for (int s = 0; s < 2; ++s) {
            WaveGrid g{sizes[s], -8.0, 8.0, Boundary::box};
            WaveVec psi = gaussian_packet(g, 0.0, 1.0, 0.5, 1.0);
            WaveVec c = commutator_xp(g, psi, 1.0);
            double worst = 0.0;
            for (int j = 0; j < g.N; ++j) worst = std::max(worst, std::abs(c[j] - cx(0.0, 1.0) * psi[j]));
            err[s] = worst;
        }
        double order = std::log2(err[0] / err[1]);
        CHECK(order >= 1.9);
    }

    SECTION("matrix commutators: self with self vanishes, [X,P] is anti-self-adjoint") {
        WaveGrid g{24, -1.0, 1.0, Boundary::periodic};
        auto X = position_matrix(g);
        auto P = momentum_matrix(g, 1.3);
        CHECK((X * X - X * X).cwiseAbs().maxCoeff() == 0.0);
        CHECK((P * P - P * P).cwiseAbs().maxCoeff() == 0.0);
        Eigen::MatrixXcd C = X * P - P * X;
        CHECK((C + C.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("hamiltonian assembly", "[quantum]") {
    SECTION("free matrix is the bare second-difference stencil") {
        WaveGrid g{16, 0.0, 1.5, Boundary::box};
        double m = 2.0;
        auto H = hamiltonian_matrix(g, {m, nullptr, nullptr, nullptr, UnitSystem::natural()});
        double hop = -1.0 / (2.0 * m * g.dx() * g.dx());
        for (int j = 0; j < g.N; ++j) {
            CHECK(H(j, j) == cx(-2.0 * hop, 0.0));
            if (j + 1 < g.N) {
                CHECK(H(j, j + 1) == cx(hop, 0.0));
                CHECK(H(j + 1, j) == cx(hop, 0.0));
            }
        }
    }

    SECTION("self-adjoint with all couplings switched on") {
        WaveGrid g{48, -3.0, 3.0, Boundary::periodic};
        HamiltonianSpec spec;
        spec.mass = 1.4;
        spec.A = [](double x) { return 0.8 + 0.3 * std::sin(pi * x / 3.0); };
        spec.phi = [](double x) { return 0.5 * x * x; };
        spec.V = [](double x) { return std::cos(x); };
        auto H = hamiltonian_matrix(g, spec);
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("box level gaps follow n^2 within a percent") {
        WaveGrid g{512, 0.0, 1.0, Boundary::box};
        auto H = hamiltonian_matrix(g, HamiltonianSpec{});
        auto lv = spectrum(g, H, 3);
        CHECK(lv[0] < lv[1]);
        CHECK(lv[1] < lv[2]);
        // (E3 - E2)/(E2 - E1) = (9-4)/(4-1) in the continuum.
        CHECK((lv[2] - lv[1]) / (lv[1] - lv[0]) == Catch::Approx(5.0 / 3.0).epsilon(0.01));
    }

    SECTION("constant energy offset moves every level, no gap") {
        WaveGrid g{128, -5.0, 5.0, Boundary::box};
        HamiltonianSpec spec;
        spec.V = [](double x) { return 0.5 * x * x; };
        auto H = hamiltonian_matrix(g, spec);
        auto lv = spectrum(g, H, 6);
        Eigen::MatrixXcd Hs = H + 5.0 * Eigen::MatrixXcd::Identity(g.N, g.N);
        auto lvs = spectrum(g, Hs, 6);
        for (int n = 0; n + 1 < 6; ++n)
            CHECK((lv[n + 1] - lv[n]) == Catch::Approx(lvs[n + 1] - lvs[n]).margin(1e-10));
        // Oscillator ladder: uniform spacing hbar omega, coarse-grid accuracy.
        CHECK(lv[0] == Catch::Approx(0.5).margin(2e-3));
        CHECK(lv[1] - lv[0] == Catch::Approx(1.0).margin(2e-3));
    }

    SECTION("bad mass rejected") {
        WaveGrid g{16, 0.0, 1.0, Boundary::box};
        HamiltonianSpec spec;
        spec.mass = 0.0;
        CHECK_THROWS_AS(hamiltonian_matrix(g, spec), gf_error);
    }
}

TEST_CASE("spectral propagator", "[quantum]") {
    WaveGrid g{128, -6.0, 6.0, Boundary::box};
    HamiltonianSpec spec;
    spec.V = [](double x) { return 0.5 * x * x; };
    auto H = hamiltonian_matrix(g, spec);

    SECTION("zero time is the identity") {
        WaveVec psi = gaussian_packet(g, 0.5, 0.8, 1.0, 1.0);
        CHECK(l2_gap(g, evolve_exact(g, H, psi, 0.0, 1.0), psi) < 1e-12);
    }

    SECTION("eigenstates pick up a pure phase") {
        auto dec = eigenstates(g, H);
        WaveVec ground = dec.states.col(0);
        double t = 2.7;
        WaveVec evolved = evolve_exact(g, H, ground, t, 1.0);
        cx phase = std::exp(cx(0.0, -dec.energies[0] * t));
        for (int j = 0; j < g.N; j += 8) CHECK(std::abs(evolved[j] - phase * ground[j]) < 1e-10);
    }

    SECTION("energy offset becomes a global phase") {
        WaveVec psi = gaussian_packet(g, -0.5, 0.7, 0.0, 1.0);
        double t = 1.3, k = 4.0;
        Eigen::MatrixXcd Hs = H + k * Eigen::MatrixXcd::Identity(g.N, g.N);
        WaveVec a = evolve_exact(g, Hs, psi, t, 1.0);
        WaveVec b = evolve_exact(g, H, psi, t, 1.0);
        cx phase = std::exp(cx(0.0, -k * t));
        CHECK(l2_gap(g, a, WaveVec(phase * b)) < 1e-10);
    }

    SECTION("dense cap enforced") {
        CHECK_THROWS_AS(evolve_exact(g, H, WaveVec::Zero(g.N), 1.0, 1.0, 64), gf_error);
        CHECK_THROWS_AS(eigenstates(g, H, 64), gf_error);
    }
}

TEST_CASE("eigenbasis completeness and variance", "[quantum]") {
    WaveGrid g{128, -6.0, 6.0, Boundary::box};
    HamiltonianSpec spec;
    spec.V = [](double x) { return 0.5 * x * x; };
    auto H = hamiltonian_matrix(g, spec);
    auto dec = eigenstates(g, H);

    SECTION("probabilities over the basis sum to the squared norm") {
        std::mt19937_64 rng(23);
        WaveVec phi = random_state(g, rng);
        double total = 0.0;
        for (int i = 0; i < g.N; ++i) total += std::norm(inner(g, WaveVec(dec.states.col(i)), phi));
        CHECK(total == Catch::Approx(1.0).margin(1e-8));
    }

    SECTION("energy variance vanishes on an eigenstate") {
        CHECK(variance(g, H, WaveVec(dec.states.col(3))) < 1e-10);
    }

    SECTION("constant operator has the constant expectation") {
        WaveVec psi = gaussian_packet(g, 0.0, 1.0, 0.0, 1.0);
        Eigen::MatrixXcd cid = cx(2.5, 0.0) * Eigen::MatrixXcd::Identity(g.N, g.N);
        CHECK(std::abs(expectation(g, cid, psi) - cx(2.5, 0.0)) < 1e-12);
    }
}

TEST_CASE("norm-preserving stepper", "[quantum]") {
    SECTION("norm drift over a thousand steps") {
        WaveGrid g{256, -8.0, 8.0, Boundary::periodic};
        HamiltonianSpec spec;
        spec.V = [](double x) { return 0.3 * x * x; };
        CrankNicolson cn(hamiltonian_matrix(g, spec), 1e-3, 1.0);
        WaveVec psi = cn.run(gaussian_packet(g, 0.0, 1.0, 2.0, 1.0), 1000);
        CHECK(std::abs(norm(g, psi) - 1.0) < 1e-10);
    }

    SECTION("tracks the spectral propagator at small steps") {
        WaveGrid g{128, -6.0, 6.0, Boundary::box};
        HamiltonianSpec spec;
        spec.V = [](double x) { return 0.5 * x * x; };
        auto H = hamiltonian_matrix(g, spec);
        WaveVec psi0 = gaussian_packet(g, 0.4, 0.8, 0.5, 1.0);
        double t = 0.01;
        CrankNicolson cn(H, 1e-4, 1.0);
        CHECK(l2_gap(g, cn.run(psi0, 100), evolve_exact(g, H, psi0, t, 1.0)) < 1e-6);
    }

    SECTION("free packet spreads at the analytic rate") {
        WaveGrid g{512, -20.0, 20.0, Boundary::periodic};
        auto H = hamiltonian_matrix(g, HamiltonianSpec{});
        double sigma0 = 1.0, t = 2.0;
        CrankNicolson cn(H, 2e-3, 1.0);
        WaveVec psi = cn.run(gaussian_packet(g, 0.0, sigma0, 0.0, 1.0), 1000);
        double expect = sigma0 * std::sqrt(1.0 + std::pow(t / (2.0 * sigma0 * sigma0), 2));
        CHECK(uncertainty_report(g, psi, 1.0).sigma_x == Catch::Approx(expect).epsilon(1e-3));
    }

    SECTION("inner products between evolved states are preserved") {
        WaveGrid g{96, -7.0, 7.0, Boundary::box};
        HamiltonianSpec spec;
        spec.V = [](double x) { return std::cos(x); };
        CrankNicolson cn(hamiltonian_matrix(g, spec), 1e-3, 1.0);
        WaveVec a = gaussian_packet(g, -1.0, 0.6, 1.0, 1.0);
        WaveVec b = gaussian_packet(g, 1.5, 0.9, -0.5, 1.0);
        cx before = inner(g, a, b);
        cx after = inner(g, cn.run(a, 500), cn.run(b, 500));
        CHECK(std::abs(after - before) < 1e-9);
    }
}

TEST_CASE("gauge equivalence of the two evolution routes", "[quantum]") {
    WaveGrid g{256, -8.0, 8.0, Boundary::periodic};
    HamiltonianSpec spec;
    spec.V = [](double x) { return 0.2 * x * x; };
    spec.A = [](double) { return 0.4; };
    WaveVec psi0 = gaussian_packet(g, -1.0, 0.8, 1.0, 1.0);

    SECTION("constant gauge function is a global phase") {
        auto rep = gauge_equivalence_check(g, spec, [](double) { return 1.7; }, psi0, 0.5, 500);
        CHECK(rep.density_gap < 1e-12);
        CHECK(rep.l2_gap < 1e-12);
    }

    SECTION("linear commensurate gauge function, both gaps stay numerical") {
        // One full phase winding over the length keeps the phased state
        // continuous at the seam.
        double alpha = 2.0 * pi / g.length();
        auto rep = gauge_equivalence_check(g, spec, [alpha](double x) { return alpha * x; }, psi0, 1.0, 1000);
        CHECK(rep.density_gap < 1e-8);
        CHECK(rep.l2_gap < 1e-8);
    }

    SECTION("the phase map is an isometry") {
        std::mt19937_64 rng(7);
        WaveVec a = random_state(g, rng), b = random_state(g, rng);
        auto chi = [](double x) { return 0.3 * x * x; };
        WaveVec ap = apply_gauge_phase(g, a, chi, UnitSystem::natural());
        WaveVec bp = apply_gauge_phase(g, b, chi, UnitSystem::natural());
        CHECK(std::abs(inner(g, ap, bp) - inner(g, a, b)) < 1e-12);
    }
}

TEST_CASE("uncertainty bound", "[quantum]") {
    SECTION("never violated, even on coarse random states") {
        WaveGrid g{64, -2.0, 2.0, Boundary::box};
        std::mt19937_64 rng(404);
        for (int trial = 0; trial < 100; ++trial) {
            auto rep = uncertainty_report(g, random_state(g, rng), 1.0);
            CHECK(rep.slack > -1e-12);
        }
    }

    SECTION("ground-width Gaussian saturates it") {
        // Fine grid so the second-order stencil bias sits well below the
        // relative tolerance we claim here.
        WaveGrid g{16001, -8.0, 8.0, Boundary::box};
        double hbar = 1.0;
        auto rep = uncertainty_report(g, gaussian_packet(g, 0.0, 1.0, 0.3, hbar), hbar);
        CHECK(rep.sigma_x * rep.sigma_p == Catch::Approx(hbar / 2.0).epsilon(1e-6));
        CHECK(rep.slack > -1e-12);
        CHECK(rep.mean_p == Catch::Approx(0.3).epsilon(1e-6));
    }

    SECTION("boosted packet shifts the momentum mean only") {
        WaveGrid g{4001, -10.0, 10.0, Boundary::box};
        auto rep = uncertainty_report(g, gaussian_packet(g, 1.0, 0.7, -2.0, 1.0), 1.0);
        CHECK(rep.mean_x == Catch::Approx(1.0).margin(1e-8));
        CHECK(rep.mean_p == Catch::Approx(-2.0).epsilon(1e-4));
        CHECK(rep.sigma_x == Catch::Approx(0.7).epsilon(1e-4));
    }
}

TEST_CASE("short-time kernel step", "[quantum]") {
    SECTION("single step against the spectral propagator") {
        WaveGrid g{1280, -4.0, 4.0, Boundary::box};
        auto H = hamiltonian_matrix(g, HamiltonianSpec{});
        WaveVec psi0 = gaussian_packet(g, 0.0, 0.35, 1.5, 1.0);
        WaveVec stepped = path_integral_step(g, psi0, nullptr, 1.0, 1.0, 1e-3);
        CHECK(l2_gap(g, stepped, evolve_exact(g, H, psi0, 1e-3, 1.0)) <= 1e-3);
    }

    SECTION("defect decays at first order in the slice") {
        WaveGrid g{5120, -4.0, 4.0, Boundary::box};
        WaveVec psi0 = gaussian_packet(g, 0.0, 0.35, 1.5, 1.0);
        double eps[3] = {1e-3, 5e-4, 2.5e-4};
        double err[3];
        for (int s = 0; s < 3; ++s) {
            WaveVec stepped = path_integral_step(g, psi0, nullptr, 1.0, 1.0, eps[s]);
            err[s] = l2_gap(g, stepped, free_packet_exact(g, 0.0, 0.35, 1.5, 1.0, 1.0, eps[s]));
        }
        CHECK(err[0] <= 1e-3);
        // Halving the time slice should roughly halve the defect.
        CHECK(err[1] < 0.7 * err[0]);
        CHECK(err[2] < 0.7 * err[1]);
    }

    SECTION("vanishing slice returns the state") {
        WaveGrid g{40001, -4.0, 4.0, Boundary::box};
        WaveVec psi0 = gaussian_packet(g, 0.0, 0.5, 0.0, 1.0);
        WaveVec out = path_integral_step(g, psi0, nullptr, 1.0, 1.0, 1e-6);
        CHECK(l2_gap(g, out, psi0) < 1e-4);
    }

    SECTION("constant potential only rotates the phase") {
        WaveGrid g{2048, -2.0, 2.0, Boundary::box};
        WaveVec psi0 = gaussian_packet(g, 0.0, 0.3, 0.5, 1.0);
        double eps = 1e-3, c = 3.0;
        WaveVec a = path_integral_step(g, psi0, [c](double) { return c; }, 1.0, 1.0, eps);
        WaveVec b = path_integral_step(g, psi0, nullptr, 1.0, 1.0, eps);
        cx phase = std::exp(cx(0.0, -eps * c));
        CHECK(l2_gap(g, a, WaveVec(phase * b)) < 1e-13);
    }

    SECTION("grid too coarse for the kernel window") {
        WaveGrid g{64, -4.0, 4.0, Boundary::box};
        WaveVec psi0 = gaussian_packet(g, 0.0, 0.5, 0.0, 1.0);
        CHECK_THROWS_AS(path_integral_step(g, psi0, nullptr, 1.0, 1.0, 1e-6), gf_error);
        CHECK_THROWS_AS(path_integral_step(g, psi0, nullptr, 1.0, 1.0, 0.0), gf_error);
    }
}

TEST_CASE("two-path interference", "[quantum]") {
    UnitSystem nat = UnitSystem::natural();

    SECTION("enclosed flux modulates between the squared sum and difference") {
        double a = 0.8, b = 0.5;
        CHECK(interference_probability(a, b, 0.0, nat) == Catch::Approx((a + b) * (a + b)));
        double half = pi * nat.hbar * nat.c / nat.e;
        CHECK(interference_probability(a, b, half, nat) == Catch::Approx((a - b) * (a - b)).margin(1e-12));
    }

    SECTION("periodic in the flux quantum") {
        double period = flux_period(nat);
        for (double flux : {0.13, 1.9, -0.7}) {
            double p0 = interference_probability(0.6, 0.7, flux, nat);
            double p1 = interference_probability(0.6, 0.7, flux + period, nat);
            CHECK(p0 == Catch::Approx(p1).margin(1e-12));
        }
    }

    SECTION("laboratory-units period") {
        CHECK(flux_period(UnitSystem::gaussian()) == Catch::Approx(4.1357e-7).epsilon(1e-3));
    }

    SECTION("negative amplitudes rejected") {
        CHECK_THROWS_AS(interference_probability(-0.1, 0.5, 0.0, nat), gf_error);
    }
}

TEST_CASE("wavefunction snapshot export", "[quantum]") {
    WaveGrid g{16, 0.0, 1.0, Boundary::box};
    WaveVec psi = gaussian_packet(g, 0.5, 0.2, 0.0, 1.0);
    auto path = std::filesystem::temp_directory_path() / "gf_wave_snapshot.csv";
    wavefunction_to_csv(g, psi, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,re,im,density");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == g.N);
    std::filesystem::remove(path);
}
