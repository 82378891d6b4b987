#include "tridiag.hpp"

#include <cmath>

#include "errors.hpp"

namespace ht {

void Tridiag::apply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    const size_t n = size();
    y.assign(n, cplx(0.0));
    for (size_t i = 0; i < n; ++i) {
        y[i] = diag[i] * x[i];
        if (i + 1 < n) y[i] += off[i] * x[i + 1];
        if (i > 0) y[i] += off[i - 1] * x[i - 1];
    }
}

TridiagLU::TridiagLU(const Tridiag& a, cplx shift) {
    const size_t n = a.size();
    d_.resize(n);
    dl_.assign(n > 0 ? n - 1 : 0, cplx(0.0));
    du_.assign(n > 0 ? n - 1 : 0, cplx(0.0));
    du2_.assign(n > 1 ? n - 2 : 0, cplx(0.0));
    ipiv_.resize(n);
    for (size_t i = 0; i < n; ++i) d_[i] = a.diag[i] - shift;
    for (size_t i = 0; i + 1 < n; ++i) dl_[i] = du_[i] = a.off[i];
    for (size_t i = 0; i < n; ++i) ipiv_[i] = int(i);
    for (size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d_[i]) >= std::abs(dl_[i])) {
            if (std::abs(d_[i]) == 0.0) {
                d_[i] = 1e-300; // deliberate epsilon pivot: exact singularity
                singular_ = true;
            }
            const cplx fact = dl_[i] / d_[i];
            dl_[i] = fact;
            d_[i + 1] -= fact * du_[i];
            if (i + 2 < n) du2_[i] = 0.0;
        } else {
            // swap rows i, i+1
            const cplx fact = d_[i] / dl_[i];
            d_[i] = dl_[i];
            dl_[i] = fact;
            const cplx tmp = du_[i];
            du_[i] = d_[i + 1];
            d_[i + 1] = tmp - fact * d_[i + 1];
            if (i + 2 < n) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -fact * du_[i + 1];
            }
            ipiv_[i] = int(i + 1);
        }
    }
    if (n > 0 && std::abs(d_[n - 1]) == 0.0) {
        d_[n - 1] = 1e-300;
        singular_ = true;
    }
}

void TridiagLU::solve(std::vector<cplx>& b) const {
    const size_t n = d_.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        if (ipiv_[i] == int(i)) {
            b[i + 1] -= dl_[i] * b[i];
        } else {
            const cplx tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - dl_[i] * b[i];
        }
    }
    for (size_t i = n; i-- > 0;) {
        cplx s = b[i];
        if (i + 1 < n) s -= du_[i] * b[i + 1];
        if (i + 2 < n) s -= du2_[i] * b[i + 2];
        b[i] = s / d_[i];
    }
}

namespace {

double norm2(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

cplx quasi_rayleigh(const Tridiag& a, const std::vector<cplx>& x, std::vector<cplx>& work) {
    a.apply(x, work);
    cplx num = 0.0, den = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += x[i] * work[i]; // transpose pairing, no conjugation
        den += x[i] * x[i];
    }
    return num / den;
}

} // namespace

EigenPair smallest_eigenpair(const Tridiag& a, cplx shift, const std::vector<cplx>* guess) {
    const size_t n = a.size();
    if (n < 3) fail(ErrorCode::invalid_argument, "smallest_eigenpair: matrix too small");
    std::vector<cplx> x(n), work(n);
    if (guess && guess->size() == n) {
        x = *guess;
    } else {
        for (size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(0.7 * double(i));
    }
    double nx = norm2(x);
    for (auto& v : x) v /= nx;

    EigenPair out;
    // phase 1: fixed-shift inverse iteration into the right basin
    {
        TridiagLU lu(a, shift);
        for (int it = 0; it < 8; ++it) {
            lu.solve(x);
            nx = norm2(x);
            if (!(nx > 0) || !std::isfinite(nx))
                fail(ErrorCode::convergence, "smallest_eigenpair: inverse iteration blew up");
            for (auto& v : x) v /= nx;
            ++out.iterations;
        }
    }
    cplx mu = quasi_rayleigh(a, x, work);
    // phase 2: Rayleigh-quotient iteration (refactors each step; tridiagonal cost is O(n))
    for (int it = 0; it < 40; ++it) {
        TridiagLU lu(a, mu);
        std::vector<cplx> y = x;
        lu.solve(y);
        nx = norm2(y);
        if (!(nx > 0) || !std::isfinite(nx)) break; // exactly converged shift
        for (auto& v : y) v /= nx;
        const cplx mu_new = quasi_rayleigh(a, y, work);
        x = y;
        ++out.iterations;
        if (std::abs(mu_new - mu) <= 1e-15 * std::abs(mu_new)) {
            mu = mu_new;
            break;
        }
        mu = mu_new;
    }
    a.apply(x, work);
    double r = 0.0;
    for (size_t i = 0; i < n; ++i) r += std::norm(work[i] - mu * x[i]);
    out.value = mu;
    out.vector = std::move(x);
    out.residual = std::sqrt(r); // ||x|| = 1
    return out;
}

} // namespace ht
