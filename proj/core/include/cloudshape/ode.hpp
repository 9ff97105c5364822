#pragma once

/// \file ode.hpp
/// Adaptive embedded Runge-Kutta 4(5) integration (Dormand-Prince pair) for
/// small fixed-size states. Header-only so the right-hand side can be any
/// callable without virtual dispatch.

#include <algorithm>
#include <array>
#include <cmath>

#include "cloudshape/errors.hpp"

namespace cloudshape {

struct OdeOptions {
  double rtol = 1e-8;        // relative local-error tolerance
  double atol = 1e-10;       // absolute local-error tolerance
  double initial_step = 0.0; // 0 = choose from the interval length
  double min_step_fraction = 1e-14;  // of the interval; below this -> failure
};

/// Integrate y' = f(t, y) from t0 to t1 in place.
/// \tparam N state dimension
/// \tparam F callable f(double t, const std::array<double,N>& y,
///                      std::array<double,N>& dydt)
template <std::size_t N, typename F>
void integrate_rk45(F&& f, double t0, double t1, std::array<double, N>& y,
                    const OdeOptions& opt = {}) {
  if (t1 <= t0) {
    if (t1 == t0) return;
    throw NonPositiveDistance("integrate_rk45: end time before start time");
  }
  using State = std::array<double, N>;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // Difference between the 5th- and embedded 4th-order weights.
  constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                   e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                   e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  const double span = t1 - t0;
  double h = (opt.initial_step > 0.0) ? opt.initial_step : span / 100.0;
  h = std::min(h, span);
  const double h_min = span * opt.min_step_fraction;

  double t = t0;
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  f(t, y, k1);  // FSAL: k1 of the next step reuses k7 of the accepted one

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < h_min) {
      throw IntegratorFailure("integrate_rk45: step size underflow");
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] =
          y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    f(t + h, ynew, k7);

    double err_sq = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err_sq += (e / scale) * (e / scale);
    }
    const double err = std::sqrt(err_sq / static_cast<double>(N));

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
    }
    const double factor =
        (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
}

}  // namespace cloudshape
