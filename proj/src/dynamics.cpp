#include "qtorus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qtorus {

namespace {

// spectral weights |<phi_m|psi>|^2; the survival amplitude needs nothing else
std::vector<double> spectral_weights(const TorusHamiltonian& h, const StateVector& psi) {
    const int n = h.params.n;
    std::vector<double> a2(n);
    for (int m = 0; m < n; ++m) {
        cplx a(0.0, 0.0);
        for (int i = 0; i < n; ++i) a += std::conj(h.spectrum.vectors.at(i, m)) * psi.c[i];
        a2[m] = std::norm(a);
    }
    return a2;
}

cplx survival_amplitude(const std::vector<double>& w, const std::vector<double>& a2, double t) {
    cplx z(0.0, 0.0);
    for (std::size_t m = 0; m < w.size(); ++m) z += a2[m] * std::polar(1.0, -w[m] * t);
    return z;
}

}  // namespace

TorusHamiltonian build_hamiltonian(const PhaseSpaceParams& p, int k) {
    if (k < 1 || k > p.n - 1) throw std::out_of_range("build_hamiltonian: k out of range");
    const CMatrix t = t_operator(p, k);
    CMatrix h = CMatrix::identity(p.n);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.n; ++j)
            h.at(i, j) = 2.0 * h.at(i, j) - t.at(i, j) - std::conj(t.at(j, i));
    h.tag = MatTag::hermitian;
    EigenSystem es = eigh(h);
    return {p, k, std::move(h), std::move(es)};
}

StateVector evolve_state(const TorusHamiltonian& h, const StateVector& psi0, double t) {
    if (psi0.params.n != h.params.n) throw std::invalid_argument("evolve_state: dimension mismatch");
    auto ct = spectral_apply(
        h.spectrum, [t](double x) { return std::polar(1.0, -x * t); }, psi0.c);
    return make_state(h.params, std::move(ct));
}

double circular_width(const std::vector<double>& probs) {
    const int n = static_cast<int>(probs.size());
    cplx z(0.0, 0.0);
    for (int j = 0; j < n; ++j) z += probs[j] * std::polar(1.0, 2.0 * M_PI * j / n);
    const double r = std::abs(z);
    if (r < 1e-9) return -1.0;
    return n / (2.0 * M_PI) * std::sqrt(-2.0 * std::log(r));
}

EvolutionTrace evolve(const TorusHamiltonian& h, const StateVector& psi0,
                      const std::vector<double>& times) {
    if (psi0.params.n != h.params.n) throw std::invalid_argument("evolve: dimension mismatch");
    for (double t : times)
        if (!std::isfinite(t)) throw std::invalid_argument("evolve: non-finite time");
    EvolutionTrace tr;
    tr.times = times;
    for (double t : times) {
        const auto ct = spectral_apply(
            h.spectrum, [t](double x) { return std::polar(1.0, -x * t); }, psi0.c);
        tr.survival.push_back(vdot(psi0.c, ct));
        std::vector<double> probs(ct.size());
        for (std::size_t j = 0; j < ct.size(); ++j) probs[j] = std::norm(ct[j]);
        tr.widths.push_back(circular_width(probs));
        tr.site_probs.push_back(std::move(probs));
    }
    return tr;
}

RevivalReport survival_grid_period(const TorusHamiltonian& h, const StateVector& psi0,
                                   double t_max, int steps, double tol) {
    if (steps < 100) throw std::invalid_argument("survival_grid_period: steps < 100");
    if (!(t_max > 0.0)) throw std::invalid_argument("survival_grid_period: t_max must be positive");
    const auto& w = h.spectrum.eigenvalues;
    const auto a2 = spectral_weights(h, psi0);

    auto surv2 = [&](double t) { return std::norm(survival_amplitude(w, a2, t)); };
    auto dsurv2 = [&](double t) {
        cplx z(0.0, 0.0), dz(0.0, 0.0);
        for (std::size_t m = 0; m < w.size(); ++m) {
            const cplx e = a2[m] * std::polar(1.0, -w[m] * t);
            z += e;
            dz += cplx(0.0, -w[m]) * e;
        }
        return 2.0 * (z.real() * dz.real() + z.imag() * dz.imag());
    };
    auto d2surv2 = [&](double t) {
        cplx z(0.0, 0.0), dz(0.0, 0.0), d2z(0.0, 0.0);
        for (std::size_t m = 0; m < w.size(); ++m) {
            const cplx e = a2[m] * std::polar(1.0, -w[m] * t);
            z += e;
            dz += cplx(0.0, -w[m]) * e;
            d2z += cplx(-w[m] * w[m], 0.0) * e;
        }
        return 2.0 * (std::norm(dz) + z.real() * d2z.real() + z.imag() * d2z.imag());
    };

    RevivalReport rep;
    rep.method = RevivalMethod::grid;
    const double dt = t_max / steps;
    std::vector<double> r(steps + 2);
    for (int i = 0; i < steps + 2; ++i) r[i] = 1.0 - std::sqrt(surv2(i * dt));

    // best dip is tracked over grid-local minima only: the quadratic shoulder
    // at t -> 0 otherwise masquerades as a near-revival
    double best_dip = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= steps; ++i) {
        if (r[i] <= r[i - 1] && r[i] <= r[i + 1]) best_dip = std::min(best_dip, r[i]);
        if (r[i] <= tol && r[i] <= r[i - 1] && r[i] <= r[i + 1]) {
            const double lo = (i - 1) * dt, hi = (i + 1) * dt;
            double x = i * dt;
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                const double fp = dsurv2(x);
                const double fpp = d2surv2(x);
                if (fpp >= 0.0 || !std::isfinite(fpp)) break;
                const double x2 = x - fp / fpp;
                if (x2 <= lo || x2 >= hi) break;
                if (std::abs(x2 - x) < 1e-14 * std::max(1.0, std::abs(x))) {
                    x = x2;
                    ok = true;
                    break;
                }
                x = x2;
            }
            if (!ok) {
                const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
                double a = lo, b = hi;
                double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                double f1 = -surv2(x1), f2 = -surv2(x2);
                for (int it = 0; it < 120; ++it) {
                    if (f1 < f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - gr * (b - a);
                        f1 = -surv2(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + gr * (b - a);
                        f2 = -surv2(x2);
                    }
                }
                x = (a + b) / 2.0;
            }
            const double resid = 1.0 - std::sqrt(surv2(x));
            rep.period = x;
            rep.residual = resid;
            rep.kind = resid <= 1e-9   ? RevivalKind::exact
                       : resid <= tol ? RevivalKind::approximate
                                      : RevivalKind::none;
            if (rep.kind == RevivalKind::none) rep.period.reset();
            return rep;
        }
    }
    if (!std::isfinite(best_dip)) {
        for (int i = 1; i <= steps; ++i) best_dip = std::min(best_dip, r[i]);
    }
    rep.kind = RevivalKind::none;
    rep.residual = best_dip;
    return rep;
}

namespace {

// best continued-fraction approximation p/q with q <= qmax
std::pair<long long, long long> rational_fit(double x, long long qmax) {
    long long p0 = 1, q0 = 0, p1 = (long long)std::floor(x), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const double fl = std::floor(inv);
        if (fl > 2e18) break;
        const long long a = (long long)fl;
        frac = inv - fl;
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > qmax || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return {p1, q1};
}

long long llgcd(long long a, long long b) { return b == 0 ? a : llgcd(b, a % b); }

}  // namespace

RevivalReport spectral_period(const TorusHamiltonian& h, double tol) {
    RevivalReport rep;
    rep.method = RevivalMethod::spectral;
    rep.kind = RevivalKind::none;

    const auto& evs = h.spectrum.eigenvalues;
    std::vector<double> gaps;
    for (std::size_t i = 0; i < evs.size(); ++i)
        for (std::size_t j = i + 1; j < evs.size(); ++j)
            if (evs[j] - evs[i] > 1e-9) gaps.push_back(evs[j] - evs[i]);
    if (gaps.empty()) {
        // flat spectrum: every state is stationary, no finite period to report
        rep.residual = 0.0;
        return rep;
    }
    std::sort(gaps.begin(), gaps.end());
    const double g1 = gaps.front();
    if (tol < 0.0) tol = 1e-9 * gaps.back();

    const long long qmax = 1000000;
    long long lcm = 1;
    for (double g : gaps) {
        const double ratio = g / g1;
        const auto [p, q] = rational_fit(ratio, qmax);
        const double err = std::abs(g - (double(p) / double(q)) * g1);
        if (err > tol * std::max(1.0, ratio) || q > qmax) {
            rep.residual = err;
            return rep;
        }
        lcm = lcm / llgcd(lcm, q) * q;
        if (lcm > qmax) {
            rep.residual = err;
            return rep;
        }
    }

    const double g0 = g1 / double(lcm);
    const double T = 2.0 * M_PI / g0;
    double resid = 0.0;
    for (double g : gaps)
        resid = std::max(resid, std::abs(std::polar(1.0, -g * T) - cplx(1.0, 0.0)));
    rep.residual = resid;
    if (resid <= 1e-9) {
        rep.kind = RevivalKind::exact;
        rep.period = T;
    }
    return rep;
}

std::pair<int, double> translated_revival(const TorusHamiltonian& h, const StateVector& psi0,
                                          double t) {
    const int n = h.params.n;
    const StateVector psi_t = evolve_state(h, psi0, t);
    int best_s = 0;
    double best_f = -1.0;
    std::vector<cplx> shifted(n);
    for (int s = 0; s < n; ++s) {
        for (int j = 0; j < n; ++j) shifted[j] = psi0.c[(j - s + n) % n];
        const double f = std::abs(vdot(shifted, psi_t.c));
        if (f > best_f) {
            best_f = f;
            best_s = s;
        }
    }
    return {best_s, best_f};
}

double closed_form_coefficient(int ratio, double t) {
    const double c = std::cos(t);
    switch (ratio) {
        case 2:
            return c;
        case 4:
            return c * c;
        case 6:
            return (2.0 / 3.0) * c * c + (2.0 / 3.0) * c - 1.0 / 3.0;
        default:
            throw std::invalid_argument("closed_form_coefficient: ratio must be 2, 4, or 6");
    }
}

RescaleFit fit_closed_form_rescale(const TorusHamiltonian& h) {
    const int n = h.params.n;
    if (h.k <= 0 || n % h.k != 0)
        throw std::invalid_argument("fit_closed_form_rescale: k must divide N");
    const int ratio = n / h.k;
    if (ratio != 2 && ratio != 4 && ratio != 6)
        throw std::invalid_argument("fit_closed_form_rescale: N/k must be 2, 4, or 6");

    const auto& w = h.spectrum.eigenvalues;
    const auto a2 = spectral_weights(h, basis_state(h.params, 0));

    const int npts = 257;
    std::vector<double> ts(npts), num(npts);
    for (int i = 0; i < npts; ++i) {
        ts[i] = 2.0 * M_PI * i / (npts - 1);
        num[i] = std::norm(survival_amplitude(w, a2, ts[i]));
    }

    auto fit_resid = [&](double s) {
        double worst = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double c = closed_form_coefficient(ratio, s * ts[i]);
            worst = std::max(worst, std::abs(num[i] - c * c));
        }
        return worst;
    };

    // coarse scan first: the residual landscape has spurious local minima
    double s0 = 0.25, v0 = fit_resid(0.25);
    for (int i = 1; i <= 750; ++i) {
        const double s = 0.25 + 0.005 * i;
        const double v = fit_resid(s);
        if (v < v0) {
            v0 = v;
            s0 = s;
        }
    }
    double lo = s0 - 0.005, hi = s0 + 0.005;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = fit_resid(x1), f2 = fit_resid(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = fit_resid(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = fit_resid(x2);
        }
    }

    RescaleFit fit;
    fit.ratio = ratio;
    fit.scale = (lo + hi) / 2.0;
    fit.residual = fit_resid(fit.scale);
    fit.caption_period = ratio == 2 ? M_PI / 2.0 : ratio == 4 ? M_PI : 2.0 * M_PI;
    const double t0 = 0.37;
    fit.period_deviation = std::abs(std::norm(survival_amplitude(w, a2, t0 + fit.caption_period)) -
                                    std::norm(survival_amplitude(w, a2, t0)));
    return fit;
}

}  // namespace qtorus
