#include "qtorus/uncertainty.hpp"

#include <cmath>
#include <limits>

#include "qtorus/algebra.hpp"

namespace qtorus {

namespace {

std::vector<double> probs(const std::vector<cplx>& a) {
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = std::norm(a[i]);
    return p;
}

// second central moment of p about its circular mean, in index units; indices
// are unwrapped to representatives within +-n/2 of the mean before averaging
double unwrapped_variance(const std::vector<double>& p, const char* side) {
    const int n = static_cast<int>(p.size());
    cplx z = 0.0;
    for (int j = 0; j < n; ++j) z += p[j] * std::polar(1.0, 2.0 * M_PI * j / n);
    const double resultant = std::abs(z);
    if (resultant <= 1e-6) throw NoCircularMean(side, resultant);
    const double m = std::arg(z) * n / (2.0 * M_PI);
    std::vector<double> rep(n);
    double m1 = 0.0;
    for (int j = 0; j < n; ++j) {
        rep[j] = j - n * std::round((j - m) / n);
        m1 += p[j] * rep[j];
    }
    double var = 0.0;
    for (int j = 0; j < n; ++j) var += p[j] * (rep[j] - m1) * (rep[j] - m1);
    return var;
}

void validate_sweep_n(const std::vector<int>& n_values) {
    if (n_values.size() < 4)
        throw std::invalid_argument("scaling sweep needs at least 4 n values");
    if (n_values.front() < 2)
        throw std::invalid_argument("scaling sweep: n values must be >= 2");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("scaling sweep: n values must be strictly increasing");
}

}  // namespace

UncertaintyReport unitary_uncertainty(const StateVector& s) {
    const ExpectationSet e = expectations(s);
    UncertaintyReport r;
    r.n = s.params.n;
    r.disp_u = e.disp_u;
    r.disp_v = e.disp_v;
    r.cross_sq = std::norm(e.cross);
    r.saturation_gap = e.disp_v * e.disp_u - r.cross_sq;
    return r;
}

std::pair<double, double> continuum_dispersions(const StateVector& s) {
    const PhaseSpaceParams& p = s.params;
    // lattice values Q_j = beta*hbar*j, P_k = alpha*hbar*k
    const double bq = p.beta * p.hbar;
    const double ap = p.alpha * p.hbar;
    const double dq2 = bq * bq * unwrapped_variance(probs(s.c), "position");
    const double dp2 = ap * ap * unwrapped_variance(probs(s.d), "momentum");
    return {dq2, dp2};
}

UncertaintyReport gup_excess(const StateVector& s) {
    UncertaintyReport r = unitary_uncertainty(s);
    const auto [dq2, dp2] = continuum_dispersions(s);
    const PhaseSpaceParams& p = s.params;
    const double h2 = p.hbar * p.hbar;
    const double l2 = p.planck_length * p.planck_length;
    r.dq2 = dq2;
    r.dp2 = dp2;
    r.product = dq2 * dp2;
    r.excess = r.product - 0.25 * h2;
    // leading corrections to the continuum product: the 1/sqrt(N) term carries
    // DP^2, the 1/N^{3/2} term carries DQ^2
    const double rn = std::sqrt(static_cast<double>(p.n));
    r.predicted_excess = 0.25 * h2 *
                         (M_PI * l2 / (2.0 * h2) * dp2 / rn +
                          M_PI / (2.0 * l2) * dq2 / (rn * rn * rn));
    return r;
}

StateVector probe_fixed_dp2(const PhaseSpaceParams& p, double dp2_target) {
    const double rootn = std::sqrt(static_cast<double>(p.n));
    auto make = [&p](double s) {
        const cplx mu(0.0, -s);
        return mus_state(mus_spec_near_lambda(p, mu, mu));
    };
    auto f = [&](double s) { return continuum_dispersions(make(s)).second - dp2_target; };
    double lo = 0.05 * rootn;
    double hi = 400.0 * rootn;
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo * fhi > 0.0)
        throw std::domain_error("probe_fixed_dp2: target " + std::to_string(dp2_target) +
                                " not bracketed by the probe family at n = " +
                                std::to_string(p.n));
    for (int it = 0; it < 100; ++it) {
        const double mid = std::sqrt(lo * hi);  // geometric: the family spans decades
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi / lo < 1.0 + 1e-13) break;
    }
    return make(std::sqrt(lo * hi));
}

StateVector probe_state(const PhaseSpaceParams& p, Probe probe) {
    switch (probe) {
        case Probe::mus:
            return probe_fixed_dp2(p, 0.25);
        case Probe::dp2x2:
            return probe_fixed_dp2(p, 0.5);
        case Probe::gaussian:
            // balanced: DQ^2 = DP^2 = hbar/2 for the continuum packet
            return gaussian_state(p, p.n / 2.0, std::sqrt(0.5 * p.hbar), 0.0);
    }
    throw std::invalid_argument("probe_state: unknown probe");
}

ScalingFit fit_scaling(std::vector<int> n_values, std::vector<double> excesses) {
    if (n_values.size() != excesses.size())
        throw std::invalid_argument("fit_scaling: one excess per n value required");
    validate_sweep_n(n_values);

    const double floor = 10.0 * std::numeric_limits<double>::epsilon();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (excesses[i] > floor) {
            lx.push_back(std::log(static_cast<double>(n_values[i])));
            ly.push_back(std::log(excesses[i]));
        }
    }
    if (lx.size() < 4) throw InsufficientPositiveExcess(static_cast<int>(lx.size()));

    const double m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;

    const double ybar = sy / m;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double fit = slope * lx[i] + intercept;
        ss_res += (ly[i] - fit) * (ly[i] - fit);
        ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
    }

    ScalingFit out;
    out.n_values = std::move(n_values);
    out.excesses = std::move(excesses);
    out.exponent = slope;
    out.amplitude = std::exp(intercept);
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

ScalingFit gup_scaling_sweep(const std::vector<int>& n_values, Probe probe) {
    validate_sweep_n(n_values);
    std::vector<double> excesses;
    excesses.reserve(n_values.size());
    for (int n : n_values)
        excesses.push_back(gup_excess(probe_state(make_params(n), probe)).excess);
    return fit_scaling(n_values, excesses);
}

}  // namespace qtorus
