#include "ode.hpp"

namespace ht {

void hermite_quintic(const HermiteNode& a, const HermiteNode& b, double t,
                     std::complex<double>& y, std::complex<double>& yp) {
    // map to x in [0,1]
    const double h = b.t - a.t;
    const double x = (t - a.t) / h;
    using C = std::complex<double>;
    const C f0 = a.y, f1 = b.y;
    const C d0 = a.yp * h, d1 = b.yp * h;
    const C s0 = a.ypp * h * h, s1 = b.ypp * h * h;
    // quintic basis (value, slope, curvature at both ends)
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
    const double H0 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
    const double H1 = x - 6 * x3 + 8 * x4 - 3 * x5;
    const double H2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
    const double H3 = 0.5 * x3 - x4 + 0.5 * x5;
    const double H4 = -4 * x3 + 7 * x4 - 3 * x5;
    const double H5 = 10 * x3 - 15 * x4 + 6 * x5;
    y = f0 * H0 + d0 * H1 + s0 * H2 + s1 * H3 + d1 * H4 + f1 * H5;
    const double G0 = -30 * x2 + 60 * x3 - 30 * x4;
    const double G1 = 1 - 18 * x2 + 32 * x3 - 15 * x4;
    const double G2 = x - 4.5 * x2 + 6 * x3 - 2.5 * x4;
    const double G3 = 1.5 * x2 - 4 * x3 + 2.5 * x4;
    const double G4 = -12 * x2 + 28 * x3 - 15 * x4;
    const double G5 = 30 * x2 - 60 * x3 + 30 * x4;
    yp = (f0 * G0 + d0 * G1 + s0 * G2 + s1 * G3 + d1 * G4 + f1 * G5) / h;
}

} // namespace ht
