#include "cloudshape/bessel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cloudshape {

namespace {

using complexd = std::complex<double>;

constexpr double kSeriesRadius = 15.0;

bool is_integer(double nu) { return nu == std::floor(nu); }

// Ascending series for the scaled function:
// e^{-z} (z/2)^nu sum_k (z^2/4)^k / (k! Gamma(nu+k+1)).
// At |z| <= 15 the worst term-vs-result cancellation stays below ~e^{15},
// keeping double precision comfortably above 1e-11 relative accuracy.
complexd series_scaled(double nu, complexd z) {
  if (std::abs(z) < 1e-300) return (nu == 0.0) ? complexd{1.0} : complexd{0.0};
  const complexd t = 0.25 * z * z;
  complexd term = std::exp(-std::lgamma(nu + 1.0));
  complexd sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= t / (static_cast<double>(k) * (nu + static_cast<double>(k)));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(-z) * std::pow(0.5 * z, nu) * sum;
}

// Miller's algorithm: run the three-term recurrence
//   f_{k-1} = (2k/z) f_k + f_{k+1}
// downward from a seed high above nmax, then normalize with the identity
// e^z = I_0(z) + 2 sum_{k>=1} I_k(z), which in scaled form reads
// 1 = [I_0 + 2 sum I_k] e^{-z}; every kept ratio f_k / S is then
// e^{-z} I_k(z) directly, with no exponentials evaluated.
std::vector<complexd> miller_scaled(int nmax, complexd z) {
  const double az = std::abs(z);
  const int start =
      static_cast<int>(az + 20.0 * std::sqrt(az) + 40.0) + nmax;
  complexd f_up{0.0, 0.0};     // f_{k+1}
  complexd f{1e-280, 0.0};     // f_k, arbitrary tiny seed
  complexd norm = 2.0 * f;     // running e^z-identity sum
  std::vector<complexd> kept(static_cast<std::size_t>(nmax) + 1);
  for (int k = start; k >= 1; --k) {
    const complexd f_down = (2.0 * static_cast<double>(k) / z) * f + f_up;
    f_up = f;
    f = f_down;  // now holds f_{k-1}
    const int idx = k - 1;
    norm += (idx >= 1) ? 2.0 * f : f;
    if (idx <= nmax) kept[static_cast<std::size_t>(idx)] = f;
    if (std::max(std::fabs(f.real()), std::fabs(f.imag())) > 1e250) {
      f *= 1e-250;
      f_up *= 1e-250;
      norm *= 1e-250;
      for (auto& v : kept) v *= 1e-250;
    }
  }
  for (auto& v : kept) v /= norm;
  return kept;
}

// Half-integer orders at large |z|: I_{n+1/2} has a finite closed form,
//   e^{-z} I_{n+1/2}(z) = (2 pi z)^{-1/2} [ sum_k (-1)^k a_k z^{-k}
//                          + (-1)^{n+1} e^{-2z} sum_k a_k z^{-k} ],
// with a_k = (n+k)! / (k! (n-k)! 2^k). For |z| > 15 the 1/z powers decay,
// so the sums are short and cancellation-free.
complexd half_order_closed(int n, complexd z) {
  complexd s_alt{0.0, 0.0};
  complexd s_pos{0.0, 0.0};
  double a = 1.0;  // a_0
  for (int k = 0; k <= n; ++k) {
    const complexd zk = std::pow(z, -k);
    s_alt += ((k % 2 == 0) ? a : -a) * zk;
    s_pos += a * zk;
    // a_{k+1} / a_k = (n+k+1)(n-k) / (2(k+1))
    a *= static_cast<double>((n + k + 1) * (n - k)) / (2.0 * (k + 1));
  }
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;
  const complexd root =
      std::sqrt(2.0 * std::numbers::pi * z);  // principal branch, Re z > 0
  return (s_alt + sign * std::exp(-2.0 * z) * s_pos) / root;
}

}  // namespace

std::complex<double> scaled_bessel_i(double nu, std::complex<double> z) {
  if (nu < 0.0 || std::floor(2.0 * nu) != 2.0 * nu) {
    throw std::invalid_argument(
        "scaled_bessel_i: order must be a non-negative multiple of 1/2");
  }
  if (z.real() < 0.0) {
    throw std::invalid_argument(
        "scaled_bessel_i: argument must have non-negative real part");
  }
  if (std::abs(z) <= kSeriesRadius) return series_scaled(nu, z);
  if (is_integer(nu)) {
    const int n = static_cast<int>(nu);
    return miller_scaled(n, z)[static_cast<std::size_t>(n)];
  }
  return half_order_closed(static_cast<int>(nu - 0.5), z);
}

std::pair<std::complex<double>, std::complex<double>> scaled_bessel_i_pair(
    double nu, std::complex<double> z) {
  if (std::abs(z) <= kSeriesRadius || !is_integer(nu)) {
    return {scaled_bessel_i(nu, z), scaled_bessel_i(nu + 1.0, z)};
  }
  const int n = static_cast<int>(nu);
  const auto table = miller_scaled(n + 1, z);
  return {table[static_cast<std::size_t>(n)],
          table[static_cast<std::size_t>(n) + 1]};
}

}  // namespace cloudshape
