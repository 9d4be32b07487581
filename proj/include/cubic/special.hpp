#pragma once

#include <complex>

namespace cubic {

using cplx = std::complex<double>;

struct BesselValue {
    double value = 0;
    bool underflow = false;
};

// K_{i mu}(x) for real mu, |mu| <= 100, 0 < x; x > 700 underflows to 0.
BesselValue bessel_k_imag(double mu, double x);

// K_nu(x) for complex order nu, x > 0, by the same quadrature.
cplx bessel_k(cplx nu, double x);

// Upper bound for |K_nu(x)| using |cosh(nu w)| <= cosh(Re(nu) w).
double bessel_k_abs_bound(double re_nu, double x);

cplx log_gamma(cplx z);
cplx zeta(cplx s);

// xi(z) = pi^(-z/2) Gamma(z/2) zeta(z); |Im z| <= 200, z not 0 or 1.
cplx xi(cplx z);

// Same quantity without the reflection z -> 1 - z; requires Re z > 0.
cplx xi_unreflected(cplx z);

}  // namespace cubic
