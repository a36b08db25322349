#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/dynamics.hpp"
#include "qtorus/linalg.hpp"
#include "qtorus/states.hpp"

using namespace qtorus;

namespace {

StateVector mus_15(const PhaseSpaceParams& p) {
    return mus_state(mus_spec_near_lambda(p, cplx(1.5, 0.0), cplx(1.5, 0.0)));
}

StateVector reference_mus(const PhaseSpaceParams& p100) {
    return mus_state(mus_spec_near_lambda(p100, cplx(1.5, 0.0), cplx(-1.497, 0.094)));
}

std::vector<cplx> apply(const CMatrix& m, const std::vector<cplx>& x) {
    std::vector<cplx> out(m.n, cplx(0.0, 0.0));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out[i] += m.at(i, j) * x[j];
    return out;
}

StateVector random_state(const PhaseSpaceParams& p, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> c(p.n);
    for (auto& z : c) z = cplx(g(rng), g(rng));
    return make_state(p, std::move(c));
}

}  // namespace

TEST_CASE("hamiltonian structure") {
    // N=2, k=1 collapses to [[2,-2],[-2,2]] with spectrum {0,4}
    const TorusHamiltonian h21 = build_hamiltonian(make_params(2), 1);
    CHECK(h21.matrix.at(0, 0) == cplx(2.0, 0.0));
    CHECK(h21.matrix.at(1, 1) == cplx(2.0, 0.0));
    CHECK(std::abs(h21.matrix.at(0, 1) + 2.0) < 1e-14);
    CHECK(std::abs(h21.matrix.at(1, 0) + 2.0) < 1e-14);
    CHECK(std::abs(h21.spectrum.eigenvalues[0] - 0.0) < 1e-12);
    CHECK(std::abs(h21.spectrum.eigenvalues[1] - 4.0) < 1e-12);

    // N=8, k=4: all hop phases collapse to 1, H = 2I - 2 P_4, spectrum {0 x4, 4 x4}
    const TorusHamiltonian h84 = build_hamiltonian(make_params(8), 4);
    for (int j = 0; j < 8; ++j) {
        CHECK(std::abs(h84.matrix.at(j, j) - 2.0) < 1e-14);
        CHECK(std::abs(h84.matrix.at((j + 4) % 8, j) + 2.0) < 1e-12);
    }
    for (int m = 0; m < 4; ++m) CHECK(std::abs(h84.spectrum.eigenvalues[m]) < 1e-12);
    for (int m = 4; m < 8; ++m) CHECK(std::abs(h84.spectrum.eigenvalues[m] - 4.0) < 1e-12);

    CHECK_THROWS_AS(build_hamiltonian(make_params(8), 0), std::out_of_range);
    CHECK_THROWS_AS(build_hamiltonian(make_params(8), 8), std::out_of_range);
}

TEST_CASE("hamiltonian entries and row sums") {
    for (int n : {5, 8, 12}) {
        PhaseSpaceParams p = make_params(n);
        for (int k = 1; k < n; ++k) {
            const TorusHamiltonian h = build_hamiltonian(p, k);
            CHECK(is_hermitian(h.matrix, 1e-12));
            for (int j = 0; j < n; ++j) CHECK(std::abs(h.matrix.at(j, j) - 2.0) < 1e-14);
            // away from the k = N/2 collision the hop entry is a pure phase
            if (2 * k != n) {
                for (int j = 0; j < n; ++j) {
                    const cplx want = -std::polar(1.0, 4.0 * M_PI * j * k / n);
                    CHECK(std::abs(h.matrix.at((j + k) % n, j) - want) < 1e-12);
                }
            }
            // two unit hops per row bound the row sum of 2I - H by 2
            for (int i = 0; i < n; ++i) {
                cplx rs(0.0, 0.0);
                for (int j = 0; j < n; ++j)
                    rs += (i == j ? cplx(2.0, 0.0) : cplx(0.0, 0.0)) - h.matrix.at(i, j);
                CHECK(std::abs(rs) <= 2.0 + 1e-12);
            }
        }
    }
    // aligned-phase cases where the bound is attained on every row
    for (auto [n, k] : {std::pair{2, 1}, std::pair{8, 4}, std::pair{8, 2}}) {
        const TorusHamiltonian h = build_hamiltonian(make_params(n), k);
        for (int i = 0; i < n; ++i) {
            cplx rs(0.0, 0.0);
            for (int j = 0; j < n; ++j)
                rs += (i == j ? cplx(2.0, 0.0) : cplx(0.0, 0.0)) - h.matrix.at(i, j);
            CHECK(std::abs(rs) == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("evolution basics") {
    PhaseSpaceParams p = make_params(8);
    const TorusHamiltonian h = build_hamiltonian(p, 2);
    const StateVector psi0 = mus_15(p);

    // t = 0 reproduces the state
    const EvolutionTrace tr0 = evolve(h, psi0, {0.0});
    CHECK(std::abs(tr0.survival[0] - cplx(1.0, 0.0)) < 1e-13);

    // N=2, k=1, e_0: spectrum {0,4} rephases at t = pi/2
    const TorusHamiltonian h21 = build_hamiltonian(make_params(2), 1);
    const StateVector e0 = basis_state(make_params(2), 0);
    const EvolutionTrace tr21 = evolve(h21, e0, {M_PI / 2.0});
    CHECK(std::abs(std::abs(tr21.survival[0]) - 1.0) < 1e-12);

    // full revival of the MUS at t = pi
    const StateVector at_pi = evolve_state(h, psi0, M_PI);
    double maxdev = 0.0;
    for (int j = 0; j < 8; ++j)
        maxdev = std::max(maxdev, std::abs(std::norm(at_pi.c[j]) - std::norm(psi0.c[j])));
    CHECK(maxdev < 1e-12);
    const EvolutionTrace trpi = evolve(h, psi0, {M_PI});
    CHECK(1.0 - std::abs(trpi.survival[0]) < 1e-9);

    CHECK_THROWS_AS(evolve(h, psi0, {std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(evolve(h, basis_state(make_params(4), 0), {1.0}), std::invalid_argument);
}

TEST_CASE("trace invariants") {
    PhaseSpaceParams p = make_params(12);
    const TorusHamiltonian h = build_hamiltonian(p, 5);
    std::mt19937_64 rng(7100);
    const StateVector psi0 = random_state(p, rng);
    const std::vector<double> times = {0.0, 0.3, 1.1, M_PI, 7.5, 40.0};
    const EvolutionTrace tr = evolve(h, psi0, times);

    double e_ref = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(tr.survival[i]) <= 1.0 + 1e-12);
        double sum = 0.0;
        for (double q : tr.site_probs[i]) sum += q;
        CHECK(std::abs(sum - 1.0) < 1e-10);

        // energy conservation along the trace
        const StateVector psi_t = evolve_state(h, psi0, times[i]);
        const double e_t = vdot(psi_t.c, apply(h.matrix, psi_t.c)).real();
        if (i == 0)
            e_ref = e_t;
        else
            CHECK(std::abs(e_t - e_ref) < 1e-10);
    }
}

TEST_CASE("unitarity at long times") {
    std::mt19937_64 rng(3200);
    for (int n : {3, 17, 32}) {
        PhaseSpaceParams p = make_params(n);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned long long>(n - 1));
        const TorusHamiltonian h = build_hamiltonian(p, k);
        const StateVector psi0 = random_state(p, rng);
        for (double t : {0.1, 1.0, 10.0, 100.0}) {
            const auto ct = spectral_apply(
                h.spectrum, [t](double x) { return std::polar(1.0, -x * t); }, psi0.c);
            CHECK(std::abs(norm2(ct) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("grid revival periods") {
    // basis state at (2,1): period pi/2
    {
        const TorusHamiltonian h = build_hamiltonian(make_params(2), 1);
        const RevivalReport r = survival_grid_period(h, basis_state(make_params(2), 0));
        REQUIRE(r.kind == RevivalKind::exact);
        CHECK(std::abs(*r.period - M_PI / 2.0) < 1e-10);
        CHECK(r.residual <= 1e-9);
    }
    // MUS at (8,4): pi/2, at (8,2): pi
    {
        PhaseSpaceParams p = make_params(8);
        const RevivalReport r4 = survival_grid_period(build_hamiltonian(p, 4), mus_15(p));
        REQUIRE(r4.kind == RevivalKind::exact);
        CHECK(std::abs(*r4.period - M_PI / 2.0) < 1e-10);
        const RevivalReport r2 = survival_grid_period(build_hamiltonian(p, 2), mus_15(p));
        REQUIRE(r2.kind == RevivalKind::exact);
        CHECK(std::abs(*r2.period - M_PI) < 1e-10);
    }
    // basis state at (12,2): 2 pi
    {
        PhaseSpaceParams p = make_params(12);
        const RevivalReport r = survival_grid_period(build_hamiltonian(p, 2), basis_state(p, 0));
        REQUIRE(r.kind == RevivalKind::exact);
        CHECK(std::abs(*r.period - 2.0 * M_PI) < 1e-10);
    }
    // reference MUS at (100,25): pi
    {
        PhaseSpaceParams p = make_params(100);
        const RevivalReport r = survival_grid_period(build_hamiltonian(p, 25), reference_mus(p));
        REQUIRE(r.kind == RevivalKind::exact);
        CHECK(std::abs(*r.period - M_PI) < 1e-10);
    }
    // (16,1) MUS has no revival below the default tolerance; best dip ~ 0.38
    {
        PhaseSpaceParams p = make_params(16);
        const RevivalReport r = survival_grid_period(build_hamiltonian(p, 1), mus_15(p));
        CHECK(r.kind == RevivalKind::none);
        CHECK(!r.period.has_value());
        CHECK(r.residual > 0.1);
        CHECK(r.residual < 0.5);
    }
    CHECK_THROWS_AS(survival_grid_period(build_hamiltonian(make_params(4), 1),
                                         basis_state(make_params(4), 0), 8.0 * M_PI, 99),
                    std::invalid_argument);
}

TEST_CASE("spectral periods") {
    auto period_of = [](int n, int k) {
        return spectral_period(build_hamiltonian(make_params(n), k));
    };
    struct Want {
        int n, k;
        double t;
    };
    for (const Want& w : {Want{2, 1, M_PI / 2.0}, Want{8, 4, M_PI / 2.0}, Want{8, 2, M_PI},
                          Want{12, 2, 2.0 * M_PI}, Want{12, 3, M_PI}, Want{4, 1, M_PI},
                          Want{6, 2, 2.0 * M_PI / 3.0}, Want{100, 25, M_PI}}) {
        const RevivalReport r = period_of(w.n, w.k);
        REQUIRE(r.kind == RevivalKind::exact);
        CHECK(std::abs(*r.period - w.t) < 1e-9);
        CHECK(r.residual <= 1e-9);
    }
    // incommensurate spectrum: no state-independent period
    const RevivalReport none = period_of(16, 1);
    CHECK(none.kind == RevivalKind::none);
    CHECK(!none.period.has_value());
}

TEST_CASE("cross-method agreement on random states") {
    // wherever the spectrum gives an exact period T, any state's first grid
    // revival must divide T
    std::mt19937_64 seeder;
    for (int n = 2; n <= 10; ++n) {
        PhaseSpaceParams p = make_params(n);
        for (int k = 1; k < n; ++k) {
            const TorusHamiltonian h = build_hamiltonian(p, k);
            const RevivalReport sp = spectral_period(h);
            if (sp.kind != RevivalKind::exact) continue;
            for (int trial = 0; trial < 2; ++trial) {
                seeder.seed(100000ull * n + 1000ull * k + trial);
                const StateVector psi = random_state(p, seeder);
                // default tolerance: off-grid dips read ~2e-5 at this step size
                const RevivalReport gr = survival_grid_period(h, psi);
                REQUIRE(gr.kind == RevivalKind::exact);
                const double t_star = *gr.period;
                const double m = std::max(1.0, std::round(*sp.period / t_star));
                CHECK(std::abs(*sp.period / m - t_star) < 1e-8);
            }
        }
    }
}

TEST_CASE("translated revival offsets") {
    PhaseSpaceParams p8 = make_params(8);
    const TorusHamiltonian h82 = build_hamiltonian(p8, 2);
    const StateVector m8 = mus_15(p8);

    const auto [s0, f0] = translated_revival(h82, m8, 0.0);
    CHECK(s0 == 0);
    CHECK(f0 == doctest::Approx(1.0).epsilon(1e-12));

    // halfway through the period the packet sits at the antipode
    const auto [s_half, f_half] = translated_revival(h82, m8, M_PI / 2.0);
    CHECK(s_half == 4);
    CHECK(f_half >= 0.999999);

    PhaseSpaceParams p100 = make_params(100);
    const auto [s100, f100] = translated_revival(build_hamiltonian(p100, 25), reference_mus(p100),
                                                 M_PI / 2.0);
    CHECK(s100 == 50);
    CHECK(f100 >= 0.99);
}

TEST_CASE("width spreading at small times") {
    // chirped packet first contracts, so sigma^2(t) is quadratic with positive
    // curvature rather than monotone; fit over a 20-point grid on [0, 0.2]
    PhaseSpaceParams p = make_params(100);
    const TorusHamiltonian h = build_hamiltonian(p, 2);
    const StateVector psi0 = reference_mus(p);
    std::vector<double> times(20);
    for (int i = 0; i < 20; ++i) times[i] = 0.2 * i / 19.0;
    const EvolutionTrace tr = evolve(h, psi0, times);

    double s[3] = {0.0, 0.0, 0.0};  // normal equations for 1, t, t^2
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int i = 0; i < 20; ++i) {
        REQUIRE(tr.widths[i] > 0.0);
        const double y = tr.widths[i] * tr.widths[i];
        const double t = times[i];
        const double basis[3] = {1.0, t, t * t};
        for (int a = 0; a < 3; ++a) {
            s[a] += basis[a] * y;
            for (int b = 0; b < 3; ++b) m[a][b] += basis[a] * basis[b];
        }
    }
    // solve the 3x3 system by Gaussian elimination
    double aug[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
        aug[a][3] = s[a];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(aug[row][col]) > std::abs(aug[piv][col])) piv = row;
        std::swap(aug[col], aug[piv]);
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            const double f = aug[row][col] / aug[col][col];
            for (int b = col; b < 4; ++b) aug[row][b] -= f * aug[col][b];
        }
    }
    const double ca = aug[0][3] / aug[0][0];
    const double cb = aug[1][3] / aug[1][1];
    const double cc = aug[2][3] / aug[2][2];

    CHECK(std::abs(ca - 5.663739) < 1e-4);
    CHECK(std::abs(cb + 2.760935) < 1e-4);
    CHECK(std::abs(cc - 1.237677) < 1e-4);
    CHECK(cc > 0.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double t = times[i];
        const double fitv = ca + cb * t + cc * t * t;
        worst = std::max(worst, std::abs(fitv - tr.widths[i] * tr.widths[i]));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("circular width sentinel") {
    // flat distribution has zero resultant: width undefined
    CHECK(circular_width(std::vector<double>(8, 0.125)) == -1.0);
    // concentrated distribution has near-unit resultant: width near zero
    std::vector<double> sharp(8, 0.0);
    sharp[2] = 1.0;
    CHECK(circular_width(sharp) < 1e-6);
}

TEST_CASE("closed form coefficients") {
    CHECK(closed_form_coefficient(2, 0.0) == 1.0);
    CHECK(std::abs(closed_form_coefficient(4, M_PI) - 1.0) < 1e-15);
    CHECK(std::abs(closed_form_coefficient(6, M_PI) + 1.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS(closed_form_coefficient(3, 0.1), std::invalid_argument);
}

TEST_CASE("closed form rescale fits") {
    // ratio 2 runs at double speed relative to the printed cos t; the two
    // squared-coefficient families land on the printed formulas directly
    struct Cell {
        int n, k, ratio;
        double scale, period;
    };
    for (const Cell& c : {Cell{8, 4, 2, 2.0, M_PI / 2.0}, Cell{8, 2, 4, 1.0, M_PI},
                          Cell{12, 2, 6, 1.0, 2.0 * M_PI}}) {
        const RescaleFit fit = fit_closed_form_rescale(build_hamiltonian(make_params(c.n), c.k));
        CHECK(fit.ratio == c.ratio);
        CHECK(std::abs(fit.scale - c.scale) < 1e-9);
        CHECK(fit.residual < 1e-12);
        CHECK(fit.caption_period == doctest::Approx(c.period).epsilon(1e-15));
        CHECK(fit.period_deviation < 1e-12);
    }
    CHECK_THROWS_AS(fit_closed_form_rescale(build_hamiltonian(make_params(9), 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_closed_form_rescale(build_hamiltonian(make_params(16), 2)),
                    std::invalid_argument);
}
