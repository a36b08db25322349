#ifndef QTORUS_STATES_HPP
#define QTORUS_STATES_HPP

#include <stdexcept>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/linalg.hpp"

namespace qtorus {

// normalized position coefficients c_j with the momentum side d = dft(c) cached
struct StateVector {
    PhaseSpaceParams params;
    std::vector<cplx> c;
    std::vector<cplx> d;
};

StateVector make_state(const PhaseSpaceParams& p, std::vector<cplx> coeffs);
StateVector basis_state(const PhaseSpaceParams& p, int j);

// (mu, lambda) with lambda pinned to one of the N ordered roots of mu^N - 1
struct MusSpec {
    PhaseSpaceParams params;
    cplx mu;
    cplx lambda;
    int root_index = 0;
};

// the N solutions of lambda^N = mu^N - 1, ascending principal argument;
// mu^N = 1 degenerates to the all-zero list
std::vector<cplx> lambda_roots(const PhaseSpaceParams& p, cplx mu);

MusSpec make_mus_spec(const PhaseSpaceParams& p, cplx mu, int root_index);
// picks the root nearest the hint (the hint itself is not stored)
MusSpec mus_spec_near_lambda(const PhaseSpaceParams& p, cplx mu, cplx lambda_hint);

struct DegenerateRecurrence : std::runtime_error {
    double min_abs_delta;
    double eigen_residual;
    DegenerateRecurrence(double d, double r)
        : std::runtime_error("mus_state: recurrence collapsed (min|Delta| = " +
                             std::to_string(d) + ", eigen residual = " + std::to_string(r) + ")"),
          min_abs_delta(d),
          eigen_residual(r) {}
};

// eigenvector of V + lambda U with eigenvalue mu, built by the cyclic
// recurrence c_{j+1} = (mu - lambda u_j) c_j in log space, anchored just past
// the weakest link so the unverified closure lands on the dead site
StateVector mus_state(const MusSpec& spec);

struct ExpectationSet {
    cplx exp_u;
    cplx exp_v;
    double disp_u;  // 1 - |<U>|^2
    double disp_v;  // 1 - |<V>|^2
    cplx cross;     // <dV^dag dU>
};

ExpectationSet expectations(const StateVector& s);

struct SolveResult {
    MusSpec spec;
    double residual;  // |<U> - target_u| + |<V> - target_v|
};

struct NoConvergence : std::runtime_error {
    MusSpec best;
    double residual;
    NoConvergence(MusSpec b, double r)
        : std::runtime_error("solve_mus_for_targets: best residual " + std::to_string(r)),
          best(std::move(b)),
          residual(r) {}
};

// damped Gauss-Newton over the complex free parameter, root branch re-selected
// each iterate as the root nearest the previous lambda, multi-start over all
// N branches plus the degenerate flat state as a competing candidate; throws
// NoConvergence (carrying the best spec) above 1e-6
SolveResult solve_mus_for_targets(const PhaseSpaceParams& p, cplx target_u, cplx target_v);

// wrapped Gaussian: sum over torus images of a line Gaussian with physical
// width sigma_q and momentum alpha*momentum_k
StateVector gaussian_state(const PhaseSpaceParams& p, double center_j, double sigma_q,
                           double momentum_k);

}  // namespace qtorus

#endif
