#ifndef QTORUS_ALGEBRA_HPP
#define QTORUS_ALGEBRA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtorus/linalg.hpp"

namespace qtorus {

// dimension N plus the physical scales; hbar = planck_length = 1 by default
struct PhaseSpaceParams {
    int n = 0;
    double hbar = 1.0;
    double planck_length = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
};

PhaseSpaceParams make_params(int n, double hbar = 1.0, double planck_length = 1.0);

// U = diag(e^{2 pi i j / N})
CMatrix clock(const PhaseSpaceParams& p);
// V e_j = e_{j-1}
CMatrix shift(const PhaseSpaceParams& p);
// S_mn = e^{i pi m n / N} U^m V^n (indices canonical in [0,N))
CMatrix schwinger(const PhaseSpaceParams& p, int m, int n);
// hop operator: entry (j+k mod N, j) = e^{4 pi i j k / N}
CMatrix t_operator(const PhaseSpaceParams& p, int k);

// coefficients (1/N) tr[S_mn^dag O]; sum_mn coeff * S_mn reconstructs O
std::map<std::pair<int, int>, cplx> schwinger_decompose(const PhaseSpaceParams& p,
                                                        const CMatrix& o);

struct IdentityCheck {
    std::string name;
    double residual;
    bool pass;
};

struct IdentityReport {
    int n;
    std::vector<IdentityCheck> identities;
    bool all_pass() const;
};

// verifies commutation, action, product, identity, inverse, similarity,
// associativity; product/inverse residuals are taken up to the overall sign
// that a canonical-representative choice can introduce, with flip counts
// reported as informational entries
IdentityReport check_identities(const PhaseSpaceParams& p);

}  // namespace qtorus

#endif
