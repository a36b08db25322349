#include "qtorus/algebra.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qtorus {

namespace {

// table of e^{i pi q / N} for q in [0, 2N); all operator phases live on it
std::vector<cplx> half_root_table(int n) {
    std::vector<cplx> tab(2 * n);
    for (int q = 0; q < 2 * n; ++q) {
        const double ang = M_PI * q / n;
        tab[q] = cplx(std::cos(ang), std::sin(ang));
    }
    return tab;
}

int wrap(long long x, int m) {
    long long r = x % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}

// monomial phase * U^m V^n with the phase as an exact index into the
// e^{i pi q/N} table; products stay exact integer arithmetic
struct Mono {
    int m, n, ph;  // m, n in [0,N); ph in [0,2N)
};

Mono mono_schwinger(int n_dim, int m, int n) {
    const int mm = wrap(m, n_dim);
    const int nn = wrap(n, n_dim);
    return {mm, nn, wrap(static_cast<long long>(mm) * nn, 2 * n_dim)};
}

Mono mono_mul(int n_dim, const Mono& a, const Mono& b) {
    // V^{na} U^{mb} = e^{2 pi i mb na / N} U^{mb} V^{na}
    return {wrap(a.m + b.m, n_dim), wrap(a.n + b.n, n_dim),
            wrap(a.ph + b.ph + 2LL * b.m * a.n, 2 * n_dim)};
}

Mono mono_dagger(int n_dim, const Mono& a) {
    return {wrap(-a.m, n_dim), wrap(-a.n, n_dim),
            wrap(-static_cast<long long>(a.ph) + 2LL * a.n * a.m, 2 * n_dim)};
}

CMatrix mono_dense(int n_dim, const Mono& a, const std::vector<cplx>& tab) {
    CMatrix s(n_dim, MatTag::unitary);
    for (int j = 0; j < n_dim; ++j) {
        const int row = wrap(j - a.n, n_dim);
        // u_row^m times the monomial phase
        const int q = wrap(a.ph + 2LL * row * a.m, 2 * n_dim);
        s.at(row, j) = tab[q];
    }
    return s;
}

}  // namespace

PhaseSpaceParams make_params(int n, double hbar, double planck_length) {
    if (n < 1) throw std::invalid_argument("make_params: n must be positive");
    if (hbar <= 0.0 || planck_length <= 0.0)
        throw std::invalid_argument("make_params: scales must be positive");
    PhaseSpaceParams p;
    p.n = n;
    p.hbar = hbar;
    p.planck_length = planck_length;
    const double lp2 = planck_length * planck_length;
    p.alpha = std::sqrt(2.0 * M_PI / (std::pow(n, 1.5) * lp2));
    p.beta = std::sqrt(2.0 * M_PI * lp2 / (std::sqrt(static_cast<double>(n)) * hbar * hbar));
    return p;
}

CMatrix clock(const PhaseSpaceParams& p) {
    const auto tab = half_root_table(p.n);
    CMatrix u(p.n, MatTag::unitary);
    for (int j = 0; j < p.n; ++j) u.at(j, j) = tab[wrap(2LL * j, 2 * p.n)];
    return u;
}

CMatrix shift(const PhaseSpaceParams& p) {
    CMatrix v(p.n, MatTag::unitary);
    for (int j = 0; j < p.n; ++j) v.at(wrap(j - 1, p.n), j) = 1.0;
    return v;
}

CMatrix schwinger(const PhaseSpaceParams& p, int m, int n) {
    const auto tab = half_root_table(p.n);
    return mono_dense(p.n, mono_schwinger(p.n, m, n), tab);
}

CMatrix t_operator(const PhaseSpaceParams& p, int k) {
    if (k < 1 || k > p.n - 1) throw std::out_of_range("t_operator: k must be in [1, N-1]");
    const auto tab = half_root_table(p.n);
    CMatrix t(p.n, MatTag::unitary);
    for (int j = 0; j < p.n; ++j)
        t.at(wrap(j + k, p.n), j) = tab[wrap(4LL * j * k, 2 * p.n)];
    return t;
}

std::map<std::pair<int, int>, cplx> schwinger_decompose(const PhaseSpaceParams& p,
                                                        const CMatrix& o) {
    if (o.n != p.n) throw std::invalid_argument("schwinger_decompose: dimension mismatch");
    const auto tab = half_root_table(p.n);
    std::map<std::pair<int, int>, cplx> out;
    for (int m = 0; m < p.n; ++m) {
        for (int n = 0; n < p.n; ++n) {
            const Mono s = mono_schwinger(p.n, m, n);
            cplx tr(0.0, 0.0);
            for (int j = 0; j < p.n; ++j) {
                const int row = wrap(j - s.n, p.n);
                const int q = wrap(s.ph + 2LL * row * s.m, 2 * p.n);
                tr += std::conj(tab[q]) * o.at(row, j);
            }
            out[{m, n}] = tr / static_cast<double>(p.n);
        }
    }
    return out;
}

bool IdentityReport::all_pass() const {
    for (const auto& c : identities)
        if (!c.pass) return false;
    return true;
}

IdentityReport check_identities(const PhaseSpaceParams& p) {
    const int N = p.n;
    const auto tab = half_root_table(N);
    IdentityReport rep;
    rep.n = N;

    // (a) V U = e^{2 pi i/N} U V, dense
    {
        const CMatrix u = clock(p), v = shift(p);
        CMatrix vu = matmul(v, u);
        CMatrix uv = matmul(u, v);
        const cplx w = tab[wrap(2, 2 * N)];
        double r = 0.0;
        for (size_t i = 0; i < vu.a.size(); ++i) r = std::max(r, std::abs(vu.a[i] - w * uv.a[i]));
        rep.identities.push_back({"commutation", r, r <= 1e-12});
    }

    // (b) action formula vs independent dense powers U^m V^n
    {
        const CMatrix u = clock(p), v = shift(p);
        std::vector<CMatrix> vpow(N, CMatrix::identity(N));
        for (int n = 1; n < N; ++n) vpow[n] = matmul(vpow[n - 1], v);
        double r = 0.0;
        for (int m = 0; m < N; ++m) {
            for (int n = 0; n < N; ++n) {
                const cplx pre = tab[wrap(static_cast<long long>(m) * n, 2 * N)];
                const CMatrix s = schwinger(p, m, n);
                // e^{i pi m n/N} U^m V^n with U^m applied as an exact row scale
                for (int i = 0; i < N; ++i) {
                    const cplx um = tab[wrap(2LL * i * m, 2 * N)];
                    for (int j = 0; j < N; ++j) {
                        const cplx lhs = pre * um * vpow[n].at(i, j);
                        r = std::max(r, std::abs(lhs - s.at(i, j)));
                    }
                }
            }
        }
        rep.identities.push_back({"action", r, r <= 1e-12});
    }

    // (d) S_00 = I
    {
        const double r = max_abs_diff(schwinger(p, 0, 0), CMatrix::identity(N));
        rep.identities.push_back({"identity_element", r, r <= 1e-12});
    }

    // (c) product formula, exhaustive in the exact monomial algebra,
    // sign-normalized; dense spot checks tie it back to matrices
    {
        double r = 0.0;
        long long flips = 0;
        for (int m = 0; m < N; ++m)
            for (int n = 0; n < N; ++n)
                for (int rr = 0; rr < N; ++rr)
                    for (int s = 0; s < N; ++s) {
                        const Mono lhs =
                            mono_mul(N, mono_schwinger(N, rr, s), mono_schwinger(N, m, n));
                        const Mono tgt = mono_schwinger(N, m + rr, n + s);
                        const int phph = wrap(static_cast<long long>(m) * s -
                                                  static_cast<long long>(n) * rr + tgt.ph,
                                              2 * N);
                        const cplx zl = tab[lhs.ph], zr = tab[phph];
                        const double dplus = std::abs(zl - zr), dminus = std::abs(zl + zr);
                        if (dminus < dplus) {
                            ++flips;
                            r = std::max(r, dminus);
                        } else {
                            r = std::max(r, dplus);
                        }
                        if (lhs.m != wrap(m + rr, N) || lhs.n != wrap(n + s, N)) r = 1.0;
                    }
        std::mt19937 rng(1234u + static_cast<unsigned>(N));
        std::uniform_int_distribution<int> pick(0, N - 1);
        for (int trial = 0; trial < 20; ++trial) {
            const int m = pick(rng), n = pick(rng), rr = pick(rng), s = pick(rng);
            const CMatrix lhs = matmul(schwinger(p, rr, s), schwinger(p, m, n));
            CMatrix rhs = schwinger(p, m + rr, n + s);
            const cplx ph = tab[wrap(static_cast<long long>(m) * s -
                                         static_cast<long long>(n) * rr,
                                     2 * N)];
            for (auto& z : rhs.a) z *= ph;
            double dplus = 0.0, dminus = 0.0;
            for (size_t i = 0; i < lhs.a.size(); ++i) {
                dplus = std::max(dplus, std::abs(lhs.a[i] - rhs.a[i]));
                dminus = std::max(dminus, std::abs(lhs.a[i] + rhs.a[i]));
            }
            r = std::max(r, std::min(dplus, dminus));
        }
        rep.identities.push_back({"product", r, r <= 1e-12});
        rep.identities.push_back({"product_rep_sign_flips", static_cast<double>(flips), true});
    }

    // (e) inverse: S_mn^dag = S_{-m,-n} up to the representative sign
    {
        double r = 0.0;
        long long flips = 0;
        for (int m = 0; m < N; ++m)
            for (int n = 0; n < N; ++n) {
                const Mono lhs = mono_dagger(N, mono_schwinger(N, m, n));
                const Mono rhs = mono_schwinger(N, -m, -n);
                const cplx zl = tab[lhs.ph], zr = tab[rhs.ph];
                const double dplus = std::abs(zl - zr), dminus = std::abs(zl + zr);
                if (dminus < dplus) {
                    ++flips;
                    r = std::max(r, dminus);
                } else {
                    r = std::max(r, dplus);
                }
                if (lhs.m != rhs.m || lhs.n != rhs.n) r = 1.0;
            }
        std::mt19937 rng(77u + static_cast<unsigned>(N));
        std::uniform_int_distribution<int> pick(0, N - 1);
        for (int trial = 0; trial < 10; ++trial) {
            const int m = pick(rng), n = pick(rng);
            const CMatrix lhs = dagger(schwinger(p, m, n));
            const CMatrix rhs = schwinger(p, -m, -n);
            double dplus = 0.0, dminus = 0.0;
            for (size_t i = 0; i < lhs.a.size(); ++i) {
                dplus = std::max(dplus, std::abs(lhs.a[i] - rhs.a[i]));
                dminus = std::max(dminus, std::abs(lhs.a[i] + rhs.a[i]));
            }
            r = std::max(r, std::min(dplus, dminus));
            const double ru = max_abs_diff(matmul(lhs, schwinger(p, m, n)), CMatrix::identity(N));
            r = std::max(r, ru);
        }
        rep.identities.push_back({"inverse", r, r <= 1e-12});
        rep.identities.push_back({"inverse_rep_sign_flips", static_cast<double>(flips), true});
    }

    // (f) similarity transform with the derived phase e^{2 pi i (n r - m s)/N};
    // conjugation cancels every representative phase, so this one is strict
    {
        double r = 0.0;
        for (int m = 0; m < N; ++m)
            for (int n = 0; n < N; ++n)
                for (int rr = 0; rr < N; ++rr)
                    for (int s = 0; s < N; ++s) {
                        const Mono a = mono_schwinger(N, m, n);
                        const Mono lhs =
                            mono_mul(N, mono_mul(N, a, mono_schwinger(N, rr, s)),
                                     mono_dagger(N, a));
                        const int phr = wrap(2LL * (static_cast<long long>(n) * rr -
                                                    static_cast<long long>(m) * s) +
                                                 mono_schwinger(N, rr, s).ph,
                                             2 * N);
                        r = std::max(r, std::abs(tab[lhs.ph] - tab[phr]));
                        if (lhs.m != rr || lhs.n != wrap(s, N)) r = 1.0;
                    }
        std::mt19937 rng(55u + static_cast<unsigned>(N));
        std::uniform_int_distribution<int> pick(0, N - 1);
        for (int trial = 0; trial < 10; ++trial) {
            const int m = pick(rng), n = pick(rng), rr = pick(rng), s = pick(rng);
            const CMatrix smn = schwinger(p, m, n);
            const CMatrix lhs = matmul(matmul(smn, schwinger(p, rr, s)), dagger(smn));
            CMatrix rhs = schwinger(p, rr, s);
            const cplx ph = tab[wrap(2LL * (static_cast<long long>(n) * rr -
                                            static_cast<long long>(m) * s),
                                     2 * N)];
            for (auto& z : rhs.a) z *= ph;
            r = std::max(r, max_abs_diff(lhs, rhs));
        }
        rep.identities.push_back({"similarity_derived_phase", r, r <= 1e-12});
    }

    // (g) associativity on sampled triples, canonical-rep algebra + dense
    {
        double r = 0.0;
        std::mt19937 rng(9000u + static_cast<unsigned>(N));
        std::uniform_int_distribution<int> pick(0, N - 1);
        for (int trial = 0; trial < 50; ++trial) {
            const Mono a = mono_schwinger(N, pick(rng), pick(rng));
            const Mono b = mono_schwinger(N, pick(rng), pick(rng));
            const Mono c = mono_schwinger(N, pick(rng), pick(rng));
            const Mono lhs = mono_mul(N, mono_mul(N, a, b), c);
            const Mono rhs = mono_mul(N, a, mono_mul(N, b, c));
            r = std::max(r, std::abs(tab[lhs.ph] - tab[rhs.ph]));
            if (lhs.m != rhs.m || lhs.n != rhs.n) r = 1.0;
        }
        for (int trial = 0; trial < 8; ++trial) {
            const CMatrix a = schwinger(p, pick(rng), pick(rng));
            const CMatrix b = schwinger(p, pick(rng), pick(rng));
            const CMatrix c = schwinger(p, pick(rng), pick(rng));
            r = std::max(r, max_abs_diff(matmul(matmul(a, b), c), matmul(a, matmul(b, c))));
        }
        rep.identities.push_back({"associativity", r, r <= 1e-12});
    }

    return rep;
}

}  // namespace qtorus
