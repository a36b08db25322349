#ifndef QTORUS_DYNAMICS_HPP
#define QTORUS_DYNAMICS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/linalg.hpp"
#include "qtorus/states.hpp"

namespace qtorus {

// H = 2 - T - T^dag for the hop T from t_operator, spectrum cached at build
struct TorusHamiltonian {
    PhaseSpaceParams params;
    int k = 1;
    CMatrix matrix;
    EigenSystem spectrum;
};

TorusHamiltonian build_hamiltonian(const PhaseSpaceParams& p, int k);

StateVector evolve_state(const TorusHamiltonian& h, const StateVector& psi0, double t);

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<cplx> survival;                  // <psi(0)|psi(t)>
    std::vector<std::vector<double>> site_probs;  // |c_j(t)|^2 rows
    std::vector<double> widths;                  // circular spread, -1 when undefined
};

EvolutionTrace evolve(const TorusHamiltonian& h, const StateVector& psi0,
                      const std::vector<double>& times);

// circular position spread (N/2pi) sqrt(-2 ln R) from the resultant
// R = |sum_j p_j u_j|; returns -1 when R is too small to define a width
double circular_width(const std::vector<double>& probs);

enum class RevivalMethod { grid, spectral };
enum class RevivalKind { exact, approximate, none };

struct RevivalReport {
    RevivalMethod method = RevivalMethod::grid;
    RevivalKind kind = RevivalKind::none;
    std::optional<double> period;
    double residual = 0.0;
    std::optional<int> translated_offset;
};

// first grid-local-minimum of 1-|A(t)| at or below tol on (0, t_max], refined
// by a safeguarded Newton iteration on |A|^2 (golden-section fallback);
// kind: exact when the refined residual is <= 1e-9, approximate when <= tol,
// none when no dip qualifies (residual then reports the best dip seen)
RevivalReport survival_grid_period(const TorusHamiltonian& h, const StateVector& psi0,
                                   double t_max = 8.0 * M_PI, int steps = 4096,
                                   double tol = 1e-4);

// state-independent period from eigenvalue gaps: rational-fit (continued
// fractions, denominators <= 1e6) of every gap against the smallest one, then
// a phase check max|e^{-i g T} - 1| <= 1e-9 at the candidate period; tol < 0
// selects the default gap tolerance 1e-9 * max gap; kind is exact or none,
// residual carries the phase-check value (or the failing rational-fit error)
RevivalReport spectral_period(const TorusHamiltonian& h, double tol = -1.0);

// best cyclic translation of the initial state matching psi(t):
// (argmax_s |<shift^s psi0|psi(t)>|, that fidelity)
std::pair<int, double> translated_revival(const TorusHamiltonian& h, const StateVector& psi0,
                                          double t);

// printed return-amplitude coefficient for the commensurate families
// N/k = 2, 4, 6: cos t, cos^2 t, (2/3)cos^2 t + (2/3)cos t - 1/3
double closed_form_coefficient(int ratio, double t);

// best time rescaling t -> scale*t matching |closed_form_coefficient|^2 to the
// numerically evolved |<e_0|psi(t)>|^2 over a uniform grid on [0, 2pi]
struct RescaleFit {
    int ratio = 2;
    double scale = 1.0;
    double residual = 0.0;         // max abs mismatch at the fitted scale
    double caption_period = 0.0;   // pi/2, pi, 2pi for ratios 2, 4, 6
    double period_deviation = 0.0;  // |P(t0+T) - P(t0)| measured on the signal
};

RescaleFit fit_closed_form_rescale(const TorusHamiltonian& h);

}  // namespace qtorus

#endif
