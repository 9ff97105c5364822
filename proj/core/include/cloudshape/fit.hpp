/// \file fit.hpp
/// Nonlinear least squares (Levenberg-Marquardt with a forward-difference
/// Jacobian) and the closed-form width-law fitters built on it.

#pragma once

#include <functional>
#include <vector>

namespace cloudshape {

/// Outcome of a least-squares minimization.
struct FitResult {
    std::vector<double> params;
    std::vector<double> covariance;  ///< p x p, row-major
    double residual_norm = 0.0;      ///< sqrt(sum squared residuals)
    int n_iter = 0;
    bool converged = false;
    bool ill_conditioned = false;  ///< Jacobian condition number > 1e8

    double stderr_of(std::size_t i) const;
};

/// Scalar model y = f(params, x).
using ModelFn =
    std::function<double(const std::vector<double>& params, double x)>;

/// Forward-difference Jacobian of the model at the given parameters,
/// row-major (one row per sample, one column per parameter).
std::vector<double> fd_jacobian(const ModelFn& model,
                                const std::vector<double>& params,
                                const std::vector<double>& xs);

/// Levenberg-Marquardt minimization of sum_i (f(p, x_i) - y_i)^2. The
/// residual never increases across accepted steps. Throws FitDiverged when
/// the iteration limit is reached without convergence and SingularJacobian
/// when the damped normal equations cannot be solved.
FitResult least_squares(const ModelFn& model, const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        std::vector<double> initial, int max_iter = 200);

/// Least-squares parabola through the samples within |y - y_min| <= window
/// of the intensity minimum; returns the curvature per unit power.
/// Requires at least five samples in the window. [W/m^4 per W]
double fit_parabola_curvature(const std::vector<double>& y,
                              const std::vector<double>& intensity,
                              double window, double power = 1.0);

/// Fits the pulse-energy width law to (E_ill, sigma_y) data with sigma0,
/// gamma1, delta, gamma fixed, minimizing on the common logarithm of the
/// width. Returns the saturation curvature per power beta0. [W^-1 m^-2]
double fit_energy_series(const std::vector<double>& e_ill,
                         const std::vector<double>& sigma_y, double sigma0,
                         double gamma1, double delta, double gamma);

/// Result of the three-parameter detuning-response fit.
struct DetuningFit {
    double c = 0.0;
    double delta0 = 0.0;  ///< [rad/s]
    double beta0 = 0.0;   ///< [W^-1 m^-2]
    FitResult detail;
};

/// Fits the detuning width law to (delta, sigma_y) data with sigma0,
/// gamma1, gamma, E_ill fixed, minimizing on the common logarithm of the
/// width.
DetuningFit fit_detuning_series(const std::vector<double>& delta,
                                const std::vector<double>& sigma_y,
                                double sigma0, double gamma1, double gamma,
                                double e_ill);

}  // namespace cloudshape
