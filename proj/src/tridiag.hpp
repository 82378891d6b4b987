#pragma once

#include <complex>
#include <vector>

namespace ht {

using cplx = std::complex<double>;

// Symmetric complex tridiagonal matrix: diag[i] on the diagonal, off[i] coupling
// i and i+1. All operators in this project discretize to this form.
struct Tridiag {
    std::vector<cplx> diag;
    std::vector<cplx> off;
    size_t size() const { return diag.size(); }
    void apply(const std::vector<cplx>& x, std::vector<cplx>& y) const;
};

// LU factorization with partial pivoting (LAPACK gttrf-style band storage).
// Stays stable on the nearly singular shifts used by inverse iteration.
class TridiagLU {
public:
    explicit TridiagLU(const Tridiag& a, cplx shift = 0.0);
    void solve(std::vector<cplx>& x) const; // in place
    bool singular() const { return singular_; }

private:
    std::vector<cplx> dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
    bool singular_ = false;
};

struct EigenPair {
    cplx value;
    std::vector<cplx> vector;
    double residual = 0.0; // ||A x - mu x|| / ||x||
    int iterations = 0;
};

// Eigenvalue of smallest modulus relative to `shift` by inverse iteration with a
// Rayleigh-quotient refinement phase (transpose-free quotient x^T A x / x^T x;
// the matrix is complex symmetric). `guess` seeds the iteration when given.
EigenPair smallest_eigenpair(const Tridiag& a, cplx shift = 0.0,
                             const std::vector<cplx>* guess = nullptr);

} // namespace ht
