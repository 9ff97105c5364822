/// \file fit.cpp
/// Levenberg-Marquardt engine and the width-law fitters.

#include "cloudshape/fit.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloudshape/dark_state.hpp"
#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

Eigen::MatrixXd jacobian_matrix(const ModelFn& model,
                                const std::vector<double>& params,
                                const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    const std::size_t p = params.size();
    Eigen::MatrixXd jac(n, p);
    std::vector<double> bumped = params;
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = model(params, xs[i]);
    for (std::size_t j = 0; j < p; ++j) {
        const double h =
            std::sqrt(std::numeric_limits<double>::epsilon()) *
            std::max(1.0, std::abs(params[j]));
        bumped[j] = params[j] + h;
        for (std::size_t i = 0; i < n; ++i) {
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (model(bumped, xs[i]) - base[i]) / h;
        }
        bumped[j] = params[j];
    }
    return jac;
}

double residual_sq(const ModelFn& model, const std::vector<double>& params,
                   const std::vector<double>& xs,
                   const std::vector<double>& ys, Eigen::VectorXd& r) {
    const std::size_t n = xs.size();
    r.resize(static_cast<Eigen::Index>(n));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = model(params, xs[i]) - ys[i];
        if (!std::isfinite(v)) {
            throw FitDiverged("least_squares: non-finite residual");
        }
        r(static_cast<Eigen::Index>(i)) = v;
        sum += v * v;
    }
    return sum;
}

}  // namespace

double FitResult::stderr_of(std::size_t i) const {
    const std::size_t p = params.size();
    if (covariance.size() != p * p || i >= p) return 0.0;
    const double var = covariance[i * p + i];
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::vector<double> fd_jacobian(const ModelFn& model,
                                const std::vector<double>& params,
                                const std::vector<double>& xs) {
    const Eigen::MatrixXd jac = jacobian_matrix(model, params, xs);
    std::vector<double> out(static_cast<std::size_t>(jac.rows()) *
                            static_cast<std::size_t>(jac.cols()));
    for (Eigen::Index i = 0; i < jac.rows(); ++i) {
        for (Eigen::Index j = 0; j < jac.cols(); ++j) {
            out[static_cast<std::size_t>(i) *
                    static_cast<std::size_t>(jac.cols()) +
                static_cast<std::size_t>(j)] = jac(i, j);
        }
    }
    return out;
}

FitResult least_squares(const ModelFn& model, const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        std::vector<double> initial, int max_iter) {
    if (xs.size() != ys.size() || xs.empty() || initial.empty()) {
        throw InsufficientData("least_squares: bad data shape");
    }
    if (xs.size() < initial.size()) {
        throw InsufficientData("least_squares: fewer samples than parameters");
    }

    const std::size_t p = initial.size();
    std::vector<double> params = std::move(initial);
    Eigen::VectorXd r;
    double chi2 = residual_sq(model, params, xs, ys, r);

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    Eigen::MatrixXd jac;
    for (; iter < max_iter; ++iter) {
        jac = jacobian_matrix(model, params, xs);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;

        if (grad.lpNorm<Eigen::Infinity>() < 1e-12) {
            converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (std::size_t j = 0; j < p; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                damped(jj, jj) += lambda * std::max(jtj(jj, jj), 1e-30);
            }
            const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
            if (solver.info() != Eigen::Success) {
                throw SingularJacobian(
                    "least_squares: damped normal equations not solvable");
            }
            const Eigen::VectorXd step = solver.solve(-grad);
            if (!step.allFinite()) {
                throw SingularJacobian("least_squares: non-finite step");
            }

            std::vector<double> trial = params;
            for (std::size_t j = 0; j < p; ++j) {
                trial[j] += step(static_cast<Eigen::Index>(j));
            }
            Eigen::VectorXd r_trial;
            double chi2_trial;
            try {
                chi2_trial = residual_sq(model, trial, xs, ys, r_trial);
            } catch (const FitDiverged&) {
                lambda *= 10.0;
                continue;
            }
            if (chi2_trial <= chi2) {
                const double rel_drop =
                    (chi2 - chi2_trial) / std::max(chi2, 1e-300);
                params = std::move(trial);
                r = std::move(r_trial);
                chi2 = chi2_trial;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (rel_drop < 1e-10) converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted && !converged) {
            // Damping exhausted without progress: at a (local) minimum.
            converged = true;
        }
        if (converged) break;
    }

    if (!converged) {
        throw FitDiverged("least_squares: iteration limit reached");
    }

    FitResult result;
    result.params = params;
    result.residual_norm = std::sqrt(chi2);
    result.n_iter = iter;
    result.converged = true;

    jac = jacobian_matrix(model, params, xs);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin =
        svd.singularValues()(svd.singularValues().size() - 1);
    result.ill_conditioned = !(smin > 0.0) || smax / smin > 1e8;

    const std::size_t n = xs.size();
    result.covariance.assign(p * p, 0.0);
    if (n > p && smin > 0.0) {
        const double variance = chi2 / static_cast<double>(n - p);
        const Eigen::MatrixXd cov =
            variance *
            (jac.transpose() * jac).ldlt().solve(
                Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(p)));
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                result.covariance[i * p + j] =
                    cov(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
            }
        }
    }
    return result;
}

double fit_parabola_curvature(const std::vector<double>& y,
                              const std::vector<double>& intensity,
                              double window, double power) {
    if (y.size() != intensity.size()) {
        throw InsufficientData("fit_parabola_curvature: length mismatch");
    }
    if (power <= 0.0 || window <= 0.0) {
        throw ConfigError("fit_parabola_curvature: window and power positive");
    }
    const std::size_t i_min = static_cast<std::size_t>(
        std::min_element(intensity.begin(), intensity.end()) -
        intensity.begin());
    const double y_min = y[i_min];

    std::vector<double> ys, is;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y[i] - y_min) <= window) {
            ys.push_back(y[i]);
            is.push_back(intensity[i]);
        }
    }
    if (ys.size() < 5) {
        throw InsufficientData(
            "fit_parabola_curvature: fewer than five samples in window");
    }

    // Linear least squares on I = c0 + c1 y + c2 y^2.
    Eigen::MatrixXd a(ys.size(), 3);
    Eigen::VectorXd b(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        a(ii, 0) = 1.0;
        a(ii, 1) = ys[i];
        a(ii, 2) = ys[i] * ys[i];
        b(ii) = is[i];
    }
    const Eigen::VectorXd coef =
        a.colPivHouseholderQr().solve(b);
    return 2.0 * coef(2) / power;
}

double fit_energy_series(const std::vector<double>& e_ill,
                         const std::vector<double>& sigma_y, double sigma0,
                         double gamma1, double delta, double gamma) {
    if (e_ill.size() != sigma_y.size() || e_ill.size() < 3) {
        throw InsufficientData("fit_energy_series: need at least 3 points");
    }
    const double lorentz = 1.0 + 4.0 * delta * delta / (gamma * gamma);

    // Seed from the highest-energy point, where the width law is most
    // sensitive to beta0.
    std::size_t i_hi = 0;
    for (std::size_t i = 1; i < e_ill.size(); ++i) {
        if (e_ill[i] > e_ill[i_hi]) i_hi = i;
    }
    const double s_hi = std::min(sigma_y[i_hi], 0.999 * sigma0);
    const double guess =
        (1.0 / (s_hi * s_hi) - 1.0 / (sigma0 * sigma0)) * lorentz /
        (0.5 * gamma1 * std::max(e_ill[i_hi], 1e-300));
    if (!(guess > 0.0)) {
        throw FitDiverged("fit_energy_series: widths inconsistent with law");
    }

    ModelFn model = [&](const std::vector<double>& prm, double e) {
        const double beta0 = std::pow(10.0, prm[0]);
        return std::log10(shaped_width(sigma0, gamma1, beta0 / lorentz, e));
    };
    std::vector<double> ys(sigma_y.size());
    for (std::size_t i = 0; i < sigma_y.size(); ++i) {
        ys[i] = std::log10(sigma_y[i]);
    }
    const FitResult fit =
        least_squares(model, e_ill, ys, {std::log10(guess)});
    return std::pow(10.0, fit.params[0]);
}

DetuningFit fit_detuning_series(const std::vector<double>& delta,
                                const std::vector<double>& sigma_y,
                                double sigma0, double gamma1, double gamma,
                                double e_ill) {
    if (delta.size() != sigma_y.size() || delta.size() < 5) {
        throw InsufficientData("fit_detuning_series: need at least 5 points");
    }

    // Seeds: the narrowest point sits at the resonance offset; its width
    // fixes beta0; the response scale starts at 1.
    std::size_t i_min = 0;
    for (std::size_t i = 1; i < sigma_y.size(); ++i) {
        if (sigma_y[i] < sigma_y[i_min]) i_min = i;
    }
    const double s_min = std::min(sigma_y[i_min], 0.999 * sigma0);
    const double beta0_guess =
        (1.0 / (s_min * s_min) - 1.0 / (sigma0 * sigma0)) /
        (0.5 * gamma1 * e_ill);
    if (!(beta0_guess > 0.0)) {
        throw FitDiverged("fit_detuning_series: widths inconsistent with law");
    }

    // Parameters: (c, delta0 in units of gamma, log10 beta0).
    ModelFn model = [&](const std::vector<double>& prm, double d) {
        const double c = prm[0];
        const double d0 = prm[1] * gamma;
        const double beta0 = std::pow(10.0, prm[2]);
        return std::log10(width_vs_detuning(d, sigma0, e_ill, beta0, gamma1,
                                            gamma, c, d0));
    };
    std::vector<double> ys(sigma_y.size());
    for (std::size_t i = 0; i < sigma_y.size(); ++i) {
        ys[i] = std::log10(sigma_y[i]);
    }
    const FitResult fit = least_squares(
        model, delta, ys,
        {1.0, delta[i_min] / gamma, std::log10(beta0_guess)});

    DetuningFit out;
    out.c = std::abs(fit.params[0]);
    out.delta0 = fit.params[1] * gamma;
    out.beta0 = std::pow(10.0, fit.params[2]);
    out.detail = fit;
    return out;
}

}  // namespace cloudshape
