#include "qtorus/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtorus {

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim, MatTag::unitary);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
    if (x.n != y.n) throw std::invalid_argument("matmul: dimension mismatch");
    const int n = x.n;
    CMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx xik = x.at(i, k);
            if (xik == cplx(0.0, 0.0)) continue;
            const cplx* yrow = &y.a[static_cast<size_t>(k) * n];
            cplx* rrow = &r.a[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) rrow[j] += xik * yrow[j];
        }
    }
    return r;
}

CMatrix dagger(const CMatrix& x) {
    CMatrix r(x.n, x.tag);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) r.at(j, i) = std::conj(x.at(i, j));
    return r;
}

double max_abs(const CMatrix& x) {
    double m = 0.0;
    for (const cplx& z : x.a) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const CMatrix& x, const CMatrix& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

bool is_hermitian(const CMatrix& x, double tol) {
    const double scale = std::max(1e-300, max_abs(x));
    for (int i = 0; i < x.n; ++i)
        for (int j = i; j < x.n; ++j)
            if (std::abs(x.at(i, j) - std::conj(x.at(j, i))) > tol * scale) return false;
    return true;
}

bool is_unitary(const CMatrix& x, double tol) {
    CMatrix p = matmul(dagger(x), x);
    return max_abs_diff(p, CMatrix::identity(x.n)) <= tol;
}

EigenSystem eigh(const CMatrix& h) {
    if (!is_hermitian(h, 1e-12)) throw std::invalid_argument("eigh: input not Hermitian");
    const int n = h.n;
    CMatrix a = h;
    CMatrix vecs = CMatrix::identity(n);
    const double scale = std::max(1e-300, max_abs(h));

    auto off_max = [&]() {
        double m = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) m = std::max(m, std::abs(a.at(p, q)));
        return m;
    };

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_max() <= 1e-15 * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx g = a.at(p, q);
                const double r = std::abs(g);
                if (r <= 1e-18 * scale) continue;
                // factor out the phase so the 2x2 block is real symmetric,
                // then the classic tau/t rotation
                const cplx u = std::conj(g) / r;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // columns: col_p <- c*col_p - u*s*col_q ; col_q <- s*col_p + u*c*col_q
                for (int i = 0; i < n; ++i) {
                    const cplx ap = a.at(i, p), aq = a.at(i, q);
                    a.at(i, p) = c * ap - u * s * aq;
                    a.at(i, q) = s * ap + u * c * aq;
                }
                // rows with the conjugate rotation
                const cplx uc = std::conj(u);
                for (int j = 0; j < n; ++j) {
                    const cplx ap = a.at(p, j), aq = a.at(q, j);
                    a.at(p, j) = c * ap - uc * s * aq;
                    a.at(q, j) = s * ap + uc * c * aq;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                a.at(p, p) = cplx(a.at(p, p).real(), 0.0);
                a.at(q, q) = cplx(a.at(q, q).real(), 0.0);
                for (int i = 0; i < n; ++i) {
                    const cplx vp = vecs.at(i, p), vq = vecs.at(i, q);
                    vecs.at(i, p) = c * vp - u * s * vq;
                    vecs.at(i, q) = s * vp + u * c * vq;
                }
            }
        }
    }
    const double resid = off_max();
    if (resid > 1e-10 * scale) throw EighNoConvergence(resid);

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> evals(n);
    for (int i = 0; i < n; ++i) evals[i] = a.at(i, i).real();
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int x, int y) { return evals[x] < evals[y]; });

    EigenSystem es;
    es.eigenvalues.resize(n);
    es.vectors = CMatrix(n, MatTag::unitary);
    for (int j = 0; j < n; ++j) {
        es.eigenvalues[j] = evals[idx[j]];
        for (int i = 0; i < n; ++i) es.vectors.at(i, j) = vecs.at(i, idx[j]);
    }
    return es;
}

std::vector<cplx> dft(const std::vector<cplx>& v, bool forward) {
    const int n = static_cast<int>(v.size());
    // exact twiddles from an index table: e^{-2 pi i (j*k mod N)/N}
    std::vector<cplx> tab(n);
    const double sgn = forward ? -1.0 : 1.0;
    for (int q = 0; q < n; ++q) {
        const double ang = sgn * 2.0 * M_PI * q / n;
        tab[q] = cplx(std::cos(ang), std::sin(ang));
    }
    const double nrm = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const long long idx = (static_cast<long long>(j) * k) % n;
            acc += v[j] * tab[static_cast<int>(idx)];
        }
        out[k] = acc * nrm;
    }
    return out;
}

std::vector<cplx> spectral_apply(const EigenSystem& es,
                                 const std::function<cplx(double)>& f,
                                 const std::vector<cplx>& v) {
    const int n = es.vectors.n;
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("spectral_apply: dimension mismatch");
    // a = V^dag v, then V (f(w) .* a)
    std::vector<cplx> a(n, cplx(0.0, 0.0));
    for (int m = 0; m < n; ++m) {
        cplx acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) acc += std::conj(es.vectors.at(i, m)) * v[i];
        a[m] = acc * f(es.eigenvalues[m]);
    }
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        for (int m = 0; m < n; ++m) acc += es.vectors.at(i, m) * a[m];
        out[i] = acc;
    }
    return out;
}

std::vector<cplx> spectral_apply(const CMatrix& h,
                                 const std::function<cplx(double)>& f,
                                 const std::vector<cplx>& v) {
    return spectral_apply(eigh(h), f, v);
}

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx vdot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s(0.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

}  // namespace qtorus
