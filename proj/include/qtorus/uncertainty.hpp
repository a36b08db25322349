#ifndef QTORUS_UNCERTAINTY_HPP
#define QTORUS_UNCERTAINTY_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtorus/states.hpp"

namespace qtorus {

struct UncertaintyReport {
    int n = 0;
    // unitary-operator side
    double disp_u = 0.0;          // 1 - |<U>|^2
    double disp_v = 0.0;          // 1 - |<V>|^2
    double cross_sq = 0.0;        // |<dV^dag dU>|^2
    double saturation_gap = 0.0;  // disp_v * disp_u - cross_sq  (>= 0, = 0 for a MUS)
    // continuum side (hbar = planck_length = 1 by default params)
    double dq2 = 0.0;              // DQ^2, unwrapped lattice second moment * (beta*hbar)^2
    double dp2 = 0.0;              // DP^2, same on the momentum side * (alpha*hbar)^2
    double product = 0.0;          // dq2 * dp2
    double excess = 0.0;           // product - hbar^2/4
    double predicted_excess = 0.0; // leading 1/sqrt(N) + 1/N^{3/2} correction terms
};

struct ScalingFit {
    std::vector<int> n_values;     // full sweep, strictly increasing
    std::vector<double> excesses;  // one per n, sign as measured
    double exponent = 0.0;         // slope of log(excess) vs log(n), positive points only
    double amplitude = 0.0;        // exp(intercept)
    double r_squared = 0.0;
};

// a |c_j|^2 (or |d_k|^2) distribution flat enough that the circular mean is
// meaningless; `resultant` is |sum p_j u_j| for the offending side
struct NoCircularMean : std::runtime_error {
    double resultant;
    explicit NoCircularMean(const std::string& side, double r)
        : std::runtime_error("continuum_dispersions: no circular mean on the " + side +
                             " side (resultant = " + std::to_string(r) + ")"),
          resultant(r) {}
};

struct InsufficientPositiveExcess : std::runtime_error {
    int positive_count;
    explicit InsufficientPositiveExcess(int count)
        : std::runtime_error("scaling fit needs at least 4 positive excesses, got " +
                             std::to_string(count)),
          positive_count(count) {}
};

UncertaintyReport unitary_uncertainty(const StateVector& s);

// unwraps each distribution about its circular mean, then takes weighted second
// central moments in physical units; throws NoCircularMean when a side is uniform
std::pair<double, double> continuum_dispersions(const StateVector& s);

UncertaintyReport gup_excess(const StateVector& s);

enum class Probe { mus, dp2x2, gaussian };

// family mu = -i*s, lambda the root nearest mu; s tuned by geometric bisection
// until the measured DP^2 hits dp2_target. Throws std::domain_error when the
// target is outside what the family can reach (floor ~0.17 at n = 64).
StateVector probe_fixed_dp2(const PhaseSpaceParams& p, double dp2_target);

// mus: DP^2 pinned to 0.25; dp2x2: pinned to 0.5; gaussian: balanced wrapped
// Gaussian (sigma_q = sqrt(1/2), centered at n/2)
StateVector probe_state(const PhaseSpaceParams& p, Probe probe);

// least-squares line through (log n, log excess) restricted to positive excesses
ScalingFit fit_scaling(std::vector<int> n_values, std::vector<double> excesses);

ScalingFit gup_scaling_sweep(const std::vector<int>& n_values, Probe probe);

}  // namespace qtorus

#endif
