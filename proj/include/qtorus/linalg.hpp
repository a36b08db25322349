#ifndef QTORUS_LINALG_HPP
#define QTORUS_LINALG_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qtorus {

using cplx = std::complex<double>;

enum class MatTag { general, unitary, hermitian };

// dense complex N x N matrix, row-major
struct CMatrix {
    int n = 0;
    MatTag tag = MatTag::general;
    std::vector<cplx> a;

    CMatrix() = default;
    explicit CMatrix(int dim, MatTag t = MatTag::general)
        : n(dim), tag(t), a(static_cast<size_t>(dim) * dim, cplx(0.0, 0.0)) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static CMatrix identity(int dim);
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    CMatrix vectors;                  // columns are eigenvectors
};

struct EighNoConvergence : std::runtime_error {
    double residual;
    explicit EighNoConvergence(double r)
        : std::runtime_error("eigh: 100-sweep cap hit, off-diagonal residual " + std::to_string(r)),
          residual(r) {}
};

CMatrix matmul(const CMatrix& x, const CMatrix& y);
CMatrix dagger(const CMatrix& x);
double max_abs(const CMatrix& x);
double max_abs_diff(const CMatrix& x, const CMatrix& y);
bool is_hermitian(const CMatrix& x, double tol = 1e-12);
bool is_unitary(const CMatrix& x, double tol = 1e-10);

// cyclic Jacobi; deterministic sweep order, eigenvalues ascending
EigenSystem eigh(const CMatrix& h);

// forward: d_k = N^{-1/2} sum_j c_j e^{-2 pi i j k / N}; inverse is the adjoint
std::vector<cplx> dft(const std::vector<cplx>& v, bool forward);

std::vector<cplx> spectral_apply(const EigenSystem& es,
                                 const std::function<cplx(double)>& f,
                                 const std::vector<cplx>& v);
std::vector<cplx> spectral_apply(const CMatrix& h,
                                 const std::function<cplx(double)>& f,
                                 const std::vector<cplx>& v);

// small vector helpers used throughout
double norm2(const std::vector<cplx>& v);
cplx vdot(const std::vector<cplx>& x, const std::vector<cplx>& y);  // conj(x).y

}  // namespace qtorus

#endif
