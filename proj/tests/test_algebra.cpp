#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qtorus/algebra.hpp"

using namespace qtorus;

TEST_CASE("params scales") {
    PhaseSpaceParams p = make_params(100);
    CHECK(std::abs(p.alpha * p.beta - 2.0 * M_PI / 100.0) < 1e-12);
    CHECK(p.alpha == doctest::Approx(std::sqrt(2.0 * M_PI / std::pow(100.0, 1.5))));
    CHECK(p.beta == doctest::Approx(std::sqrt(2.0 * M_PI / 10.0)));
    // dimensional variant keeps the constraint alpha*beta = 2 pi/(hbar N)
    PhaseSpaceParams q = make_params(8, 2.0, 0.5);
    CHECK(std::abs(q.alpha * q.beta - 2.0 * M_PI / (2.0 * 8.0)) < 1e-12);
    CHECK_THROWS_AS(make_params(0), std::invalid_argument);
}

TEST_CASE("clock entries") {
    CHECK(clock(make_params(1)).at(0, 0) == cplx(1.0, 0.0));
    PhaseSpaceParams p2 = make_params(2);
    CHECK(clock(p2).at(0, 0) == cplx(1.0, 0.0));
    CHECK(std::abs(clock(p2).at(1, 1) - cplx(-1.0, 0.0)) < 1e-15);
    PhaseSpaceParams p4 = make_params(4);
    const CMatrix u = clock(p4);
    CHECK(std::abs(u.at(1, 1) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(u.at(2, 2) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(u.at(3, 3) - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("shift action and order") {
    PhaseSpaceParams p2 = make_params(2);
    const CMatrix v2 = shift(p2);
    CHECK(v2.at(0, 1) == cplx(1.0, 0.0));
    CHECK(v2.at(1, 0) == cplx(1.0, 0.0));
    CHECK(v2.at(0, 0) == cplx(0.0, 0.0));

    // N=3: V e_2 = e_1
    const CMatrix v3 = shift(make_params(3));
    CHECK(v3.at(1, 2) == cplx(1.0, 0.0));

    // V^5 = I at N=5
    PhaseSpaceParams p5 = make_params(5);
    CMatrix acc = CMatrix::identity(5);
    for (int i = 0; i < 5; ++i) acc = matmul(acc, shift(p5));
    CHECK(max_abs_diff(acc, CMatrix::identity(5)) < 1e-14);
}

TEST_CASE("clock/shift order N and commutation across N") {
    for (int n = 2; n <= 16; ++n) {
        PhaseSpaceParams p = make_params(n);
        const CMatrix u = clock(p), v = shift(p);
        CMatrix un = CMatrix::identity(n), vn = CMatrix::identity(n);
        for (int i = 0; i < n; ++i) {
            un = matmul(un, u);
            vn = matmul(vn, v);
        }
        CHECK(max_abs_diff(un, CMatrix::identity(n)) < 1e-12);
        CHECK(max_abs_diff(vn, CMatrix::identity(n)) < 1e-12);

        const cplx w = std::polar(1.0, 2.0 * M_PI / n);
        const CMatrix vu = matmul(v, u), uv = matmul(u, v);
        double r = 0.0;
        for (size_t i = 0; i < vu.a.size(); ++i) r = std::max(r, std::abs(vu.a[i] - w * uv.a[i]));
        CHECK(r < 1e-12);
    }
}

TEST_CASE("schwinger S_00 is the identity and S_mn is unitary") {
    PhaseSpaceParams p = make_params(8);
    CHECK(max_abs_diff(schwinger(p, 0, 0), CMatrix::identity(8)) == 0.0);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 7);
    for (int t = 0; t < 6; ++t) {
        const CMatrix s = schwinger(p, pick(rng), pick(rng));
        CHECK(is_unitary(s, 1e-12));
    }
}

TEST_CASE("schwinger action formula entrywise at N=6") {
    PhaseSpaceParams p = make_params(6);
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n) {
            const CMatrix s = schwinger(p, m, n);
            for (int j = 0; j < 6; ++j) {
                // S_mn e_j = e^{i pi (2j - n) m / 6} e_{j-n}
                const double ang = M_PI * (2.0 * j - n) * m / 6.0;
                const cplx want = std::polar(1.0, ang);
                const int row = ((j - n) % 6 + 6) % 6;
                CHECK(std::abs(s.at(row, j) - want) < 1e-12);
                for (int i = 0; i < 6; ++i)
                    if (i != row) CHECK(std::abs(s.at(i, j)) == 0.0);
            }
        }
}

TEST_CASE("t_operator structure") {
    // N=8, k=4: plain shift-by-4 permutation
    PhaseSpaceParams p8 = make_params(8);
    const CMatrix t84 = t_operator(p8, 4);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i)
            CHECK(std::abs(t84.at(i, j) - (i == (j + 4) % 8 ? cplx(1, 0) : cplx(0, 0))) < 1e-14);

    // N=2, k=1: swap
    const CMatrix t21 = t_operator(make_params(2), 1);
    CHECK(std::abs(t21.at(1, 0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(t21.at(0, 1) - cplx(1, 0)) < 1e-15);

    // unitarity at N=12, k=5
    const CMatrix t125 = t_operator(make_params(12), 5);
    CHECK(max_abs_diff(matmul(t125, dagger(t125)), CMatrix::identity(12)) < 1e-13);

    CHECK_THROWS_AS(t_operator(p8, 0), std::out_of_range);
    CHECK_THROWS_AS(t_operator(p8, 8), std::out_of_range);
}

TEST_CASE("t_operator power N/gcd(N,k) is a unit-modulus scalar") {
    for (int n = 2; n <= 16; ++n) {
        PhaseSpaceParams p = make_params(n);
        for (int k = 1; k < n; ++k) {
            const int L = n / std::gcd(n, k);
            CMatrix acc = CMatrix::identity(n);
            const CMatrix t = t_operator(p, k);
            for (int i = 0; i < L; ++i) acc = matmul(acc, t);
            const cplx scalar = acc.at(0, 0);
            CHECK(std::abs(std::abs(scalar) - 1.0) < 1e-12);
            CMatrix scaled = CMatrix::identity(n);
            for (auto& z : scaled.a) z *= scalar;
            CHECK(max_abs_diff(acc, scaled) < 1e-12);
        }
    }
}

TEST_CASE("schwinger_decompose picks out single operators") {
    PhaseSpaceParams p = make_params(5);
    auto ci = schwinger_decompose(p, CMatrix::identity(5));
    for (const auto& [mn, coeff] : ci) {
        if (mn == std::pair<int, int>{0, 0})
            CHECK(std::abs(coeff - cplx(1, 0)) < 1e-12);
        else
            CHECK(std::abs(coeff) < 1e-12);
    }

    auto cs = schwinger_decompose(p, schwinger(p, 2, 1));
    for (const auto& [mn, coeff] : cs) {
        if (mn == std::pair<int, int>{2, 1})
            CHECK(std::abs(coeff - cplx(1, 0)) < 1e-12);
        else
            CHECK(std::abs(coeff) < 1e-12);
    }
}

TEST_CASE("schwinger_decompose round trip on a random matrix") {
    PhaseSpaceParams p = make_params(6);
    std::mt19937 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix o(6);
    for (auto& z : o.a) z = cplx(g(rng), g(rng));
    auto coeffs = schwinger_decompose(p, o);
    CMatrix rec(6);
    for (const auto& [mn, coeff] : coeffs) {
        const CMatrix s = schwinger(p, mn.first, mn.second);
        for (size_t i = 0; i < rec.a.size(); ++i) rec.a[i] += coeff * s.a[i];
    }
    CHECK(max_abs_diff(rec, o) < 1e-10);
}

TEST_CASE("check_identities passes for small N") {
    for (int n : {1, 2, 3, 4, 8}) {
        IdentityReport rep = check_identities(make_params(n));
        for (const auto& c : rep.identities) {
            INFO("N=", n, " identity ", c.name, " residual ", c.residual);
            CHECK(c.pass);
        }
        CHECK(rep.all_pass());
    }
}

TEST_CASE("check_identities commutation factor is i at N=4") {
    // the commutation check passing at N=4 pins the factor e^{2 pi i/4} = i;
    // cross-check the factor directly
    PhaseSpaceParams p = make_params(4);
    const CMatrix vu = matmul(shift(p), clock(p));
    const CMatrix uv = matmul(clock(p), shift(p));
    double r = 0.0;
    for (size_t i = 0; i < vu.a.size(); ++i)
        r = std::max(r, std::abs(vu.a[i] - cplx(0.0, 1.0) * uv.a[i]));
    CHECK(r < 1e-13);
}

TEST_CASE("check_identities residuals stay at 1e-12 up to N=16") {
    for (int n : {5, 6, 7, 12, 16}) {
        IdentityReport rep = check_identities(make_params(n));
        CHECK(rep.all_pass());
    }
}
