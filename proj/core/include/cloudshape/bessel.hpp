#pragma once

/// \file bessel.hpp
/// Exponentially scaled modified Bessel functions e^{-z} I_nu(z) for complex
/// argument in the right half-plane and non-negative orders in half-integer
/// steps. The scaled form is what the closed-form beam expressions need and
/// never overflows, even though I_nu itself grows like e^{|z|}.

#include <complex>

namespace cloudshape {

/// e^{-z} I_nu(z) for Re(z) >= 0 and nu in {0, 1/2, 1, 3/2, 2, ...}.
///
/// Uses the ascending power series for |z| <= 15. Beyond that, integer
/// orders come from Miller's downward recurrence normalized with
/// e^z = I_0 + 2 sum_k I_k, and half-integer orders from their finite
/// hyperbolic closed forms (numerically benign at large |z|).
std::complex<double> scaled_bessel_i(double nu, std::complex<double> z);

/// Convenience pair (e^{-z} I_nu(z), e^{-z} I_{nu+1}(z)) sharing one
/// recurrence pass.
std::pair<std::complex<double>, std::complex<double>> scaled_bessel_i_pair(
    double nu, std::complex<double> z);

}  // namespace cloudshape
