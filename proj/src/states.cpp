#include "qtorus/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qtorus {

namespace {

std::vector<cplx> unit_circle(int n) {
    std::vector<cplx> u(n);
    for (int j = 0; j < n; ++j) {
        const double ang = 2.0 * M_PI * j / n;
        u[j] = cplx(std::cos(ang), std::sin(ang));
    }
    return u;
}

cplx log1p_cplx(cplx z) {
    if (std::abs(z) < 1e-8) return z - 0.5 * z * z;
    return std::log(cplx(1.0, 0.0) + z);
}

}  // namespace

StateVector make_state(const PhaseSpaceParams& p, std::vector<cplx> coeffs) {
    if (static_cast<int>(coeffs.size()) != p.n)
        throw std::invalid_argument("make_state: dimension mismatch");
    const double nrm = norm2(coeffs);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::invalid_argument("make_state: coefficients not normalizable");
    for (auto& z : coeffs) z /= nrm;
    StateVector s;
    s.params = p;
    s.d = dft(coeffs, true);
    s.c = std::move(coeffs);
    return s;
}

StateVector basis_state(const PhaseSpaceParams& p, int j) {
    if (j < 0 || j >= p.n) throw std::out_of_range("basis_state: site out of range");
    std::vector<cplx> c(p.n, cplx(0.0, 0.0));
    c[j] = 1.0;
    return make_state(p, std::move(c));
}

std::vector<cplx> lambda_roots(const PhaseSpaceParams& p, cplx mu) {
    const int n = p.n;
    std::vector<cplx> roots(n, cplx(0.0, 0.0));
    if (std::abs(mu) == 0.0) {
        // lambda^N = -1: principal root e^{i pi/N}
        const cplx lam0 = std::polar(1.0, M_PI / n);
        const auto ring = unit_circle(n);
        for (int m = 0; m < n; ++m) roots[m] = lam0 * ring[m];
    } else {
        const cplx x = static_cast<double>(n) * std::log(mu);
        cplx logw;
        bool degenerate = false;
        if (x.real() > 40.0) {
            // mu^N dominates; log(mu^N - 1) = x + log1p(-e^{-x})
            logw = x + log1p_cplx(-std::exp(-x));
        } else {
            const cplx w = std::exp(x) - cplx(1.0, 0.0);
            if (w == cplx(0.0, 0.0))
                degenerate = true;  // mu^N = 1 exactly: the all-zero list
            else
                logw = std::log(w);
        }
        if (!degenerate) {
            const cplx lam0 = std::exp(logw / static_cast<double>(n));
            const auto ring = unit_circle(n);
            for (int m = 0; m < n; ++m) roots[m] = lam0 * ring[m];
        }
    }
    std::stable_sort(roots.begin(), roots.end(),
                     [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
    return roots;
}

MusSpec make_mus_spec(const PhaseSpaceParams& p, cplx mu, int root_index) {
    if (root_index < 0 || root_index >= p.n)
        throw std::out_of_range("make_mus_spec: root_index out of range");
    const auto roots = lambda_roots(p, mu);
    return {p, mu, roots[root_index], root_index};
}

MusSpec mus_spec_near_lambda(const PhaseSpaceParams& p, cplx mu, cplx lambda_hint) {
    const auto roots = lambda_roots(p, mu);
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.n; ++i) {
        const double d = std::abs(roots[i] - lambda_hint);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return {p, mu, roots[best], best};
}

StateVector mus_state(const MusSpec& spec) {
    const int n = spec.params.n;
    const auto u = unit_circle(n);

    std::vector<cplx> delta(n);
    std::vector<double> logm(n), ph(n);
    int js = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        delta[j] = spec.mu - spec.lambda * u[j];
        const double a = std::abs(delta[j]);
        logm[j] = std::log(a);  // -inf at an exact zero is fine below
        ph[j] = std::arg(delta[j]);
        if (a < dmin) {
            dmin = a;
            js = j;
        }
    }

    // anchor just past the weakest link and fill the cycle from there
    std::vector<double> lw(n, 0.0), pw(n, 0.0);
    double acc_l = 0.0, acc_p = 0.0;
    int prev = (js + 1) % n;
    for (int i = 1; i < n; ++i) {
        const int site = (js + 1 + i) % n;
        acc_l += logm[prev];
        acc_p += ph[prev];
        lw[site] = acc_l;
        pw[site] = acc_p;
        prev = site;
    }

    const double lmax = *std::max_element(lw.begin(), lw.end());
    std::vector<cplx> c(n);
    for (int j = 0; j < n; ++j) c[j] = std::polar(std::exp(lw[j] - lmax), pw[j]);

    const double nrm = norm2(c);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DegenerateRecurrence(dmin, 1.0);
    for (auto& z : c) z /= nrm;

    // global phase: largest coefficient real positive (first max on ties)
    int imax = 0;
    double amax = -1.0;
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(c[j]);
        if (a > amax) {
            amax = a;
            imax = j;
        }
    }
    const cplx rot = std::polar(1.0, -std::arg(c[imax]));
    for (auto& z : c) z *= rot;

    // post-validate the eigen-equation (V + lambda U) psi = mu psi
    double res2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx r = c[(j + 1) % n] + spec.lambda * u[j] * c[j] - spec.mu * c[j];
        res2 += std::norm(r);
    }
    const double res = std::sqrt(res2);
    if (!(res <= 1e-9)) throw DegenerateRecurrence(dmin, res);

    return make_state(spec.params, std::move(c));
}

ExpectationSet expectations(const StateVector& s) {
    const int n = s.params.n;
    const auto u = unit_circle(n);
    cplx eu(0.0, 0.0), ev(0.0, 0.0), vdu(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        eu += std::norm(s.c[j]) * u[j];
        ev += std::norm(s.d[j]) * u[j];
        const int jm = (j - 1 + n) % n;
        vdu += std::conj(s.c[j]) * u[jm] * s.c[jm];
    }
    ExpectationSet e;
    e.exp_u = eu;
    e.exp_v = ev;
    e.disp_u = 1.0 - std::norm(eu);
    e.disp_v = 1.0 - std::norm(ev);
    e.cross = vdu - std::conj(ev) * eu;
    return e;
}

SolveResult solve_mus_for_targets(const PhaseSpaceParams& p, cplx target_u, cplx target_v) {
    const int n = p.n;

    auto nearest_root = [&](cplx mu, cplx hint) {
        const auto roots = lambda_roots(p, mu);
        cplx best = roots[0];
        double bd = std::numeric_limits<double>::infinity();
        for (const cplx& r : roots) {
            const double d = std::abs(r - hint);
            if (d < bd) {
                bd = d;
                best = r;
            }
        }
        return best;
    };

    struct Eval {
        double r[4];
        double res;
    };
    auto evaluate = [&](cplx mu, cplx lam) -> Eval {
        Eval e;
        try {
            MusSpec s{p, mu, lam, 0};
            const ExpectationSet ex = expectations(mus_state(s));
            e.r[0] = ex.exp_u.real() - target_u.real();
            e.r[1] = ex.exp_u.imag() - target_u.imag();
            e.r[2] = ex.exp_v.real() - target_v.real();
            e.r[3] = ex.exp_v.imag() - target_v.imag();
            e.res = std::abs(ex.exp_u - target_u) + std::abs(ex.exp_v - target_v);
        } catch (const DegenerateRecurrence&) {
            e.r[0] = e.r[1] = e.r[2] = e.r[3] = 0.0;
            e.res = std::numeric_limits<double>::infinity();
        }
        return e;
    };

    // the degenerate flat state (mu = 1, lambda = 0) competes as an initial
    // candidate: the Gauss-Newton walk cannot reach it (residual scales like
    // |mu-1|^{1/N} around it), yet targets exactly on it are legitimate
    cplx best_mu(1.0, 0.0), best_lam(0.0, 0.0);
    double best_res = evaluate(best_mu, best_lam).res;

    const double mu0 = 1.0 + 0.75 * std::abs(target_v + target_u);
    const auto start_roots = lambda_roots(p, cplx(mu0, 0.0));
    // walk the ring of start branches beginning at the principal root
    int b0 = 0;
    double b0arg = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(std::arg(start_roots[i]));
        if (a < b0arg) {
            b0arg = a;
            b0 = i;
        }
    }

    for (int bb = 0; bb < n && best_res >= 5e-7; ++bb) {
        const int b = (b0 + bb) % n;
        cplx mu(mu0, 0.0);
        cplx lam = start_roots[b];
        Eval cur = evaluate(mu, lam);

        for (int it = 0; it < 200 && cur.res >= 5e-7; ++it) {
            const double h = 1e-7 * std::max(1.0, std::abs(mu));
            double jac[4][2];
            bool bad = false;
            for (int dcol = 0; dcol < 2; ++dcol) {
                const cplx dmu = mu + (dcol == 0 ? cplx(h, 0.0) : cplx(0.0, h));
                const Eval ep = evaluate(dmu, nearest_root(dmu, lam));
                if (!std::isfinite(ep.res)) {
                    bad = true;
                    break;
                }
                for (int i = 0; i < 4; ++i) jac[i][dcol] = (ep.r[i] - cur.r[i]) / h;
            }
            if (bad || !std::isfinite(cur.res)) break;

            // least squares via the 2x2 normal equations
            double ata[2][2] = {{0, 0}, {0, 0}}, atb[2] = {0, 0};
            for (int i = 0; i < 4; ++i) {
                ata[0][0] += jac[i][0] * jac[i][0];
                ata[0][1] += jac[i][0] * jac[i][1];
                ata[1][1] += jac[i][1] * jac[i][1];
                atb[0] -= jac[i][0] * cur.r[i];
                atb[1] -= jac[i][1] * cur.r[i];
            }
            ata[1][0] = ata[0][1];
            const double det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
            if (!(std::abs(det) > 1e-300)) break;
            const double sx = (atb[0] * ata[1][1] - atb[1] * ata[0][1]) / det;
            const double sy = (ata[0][0] * atb[1] - ata[1][0] * atb[0]) / det;
            const cplx step(sx, sy);

            bool moved = false;
            double sc = 1.0;
            for (int ls = 0; ls < 14; ++ls) {
                const cplx mu2 = mu + sc * step;
                const cplx lam2 = nearest_root(mu2, lam);
                const Eval e2 = evaluate(mu2, lam2);
                if (e2.res < cur.res) {
                    mu = mu2;
                    lam = lam2;
                    cur = e2;
                    moved = true;
                    break;
                }
                sc /= 2.0;
            }
            if (!moved) break;
        }

        if (cur.res < best_res) {
            best_res = cur.res;
            best_mu = mu;
            best_lam = lam;
        }
        if (best_res < 5e-7) break;
    }

    const MusSpec spec = mus_spec_near_lambda(p, best_mu, best_lam);
    if (!(best_res <= 1e-6)) throw NoConvergence(spec, best_res);
    return {spec, best_res};
}

StateVector gaussian_state(const PhaseSpaceParams& p, double center_j, double sigma_q,
                           double momentum_k) {
    if (!(sigma_q > 0.0)) throw std::invalid_argument("gaussian_state: sigma_q must be positive");
    const int n = p.n;
    const double beta = p.beta;
    const double period = beta * n;
    const double qbar = beta * center_j;
    // plane-wave factor e^{i p q / hbar} with p = alpha*hbar*momentum_k, so the
    // hbar cancels and the phase slope is just alpha*momentum_k
    const double kslope = p.alpha * momentum_k;
    // images beyond W contribute below 1e-14 of the peak
    const int wraps = std::max(2, static_cast<int>(std::ceil(12.5 * sigma_q / period)) + 2);
    std::vector<cplx> c(n, cplx(0.0, 0.0));
    for (int j = 0; j < n; ++j) {
        for (int w = -wraps; w <= wraps; ++w) {
            const double q = beta * (static_cast<double>(j) + static_cast<double>(w) * n);
            const double g = std::exp(-(q - qbar) * (q - qbar) / (4.0 * sigma_q * sigma_q));
            c[j] += g * std::polar(1.0, kslope * q);
        }
    }
    return make_state(p, std::move(c));
}

}  // namespace qtorus
