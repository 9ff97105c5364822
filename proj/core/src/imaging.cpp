/// \file imaging.cpp
/// Camera-frame projection, absorption synthesis and inversion, and the
/// profile-based width estimator.

#include "cloudshape/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloudshape/errors.hpp"
#include "cloudshape/fit.hpp"
#include "cloudshape/rng.hpp"

namespace cloudshape {

namespace {

Image blank(int width, int height, double fill = 0.0) {
    Image img;
    img.width = width;
    img.height = height;
    img.v.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

double pixel_coord(int i, int n, double pixel) {
    return (i - 0.5 * n + 0.5) * pixel;
}

}  // namespace

Image project_ensemble(const std::vector<Atom>& atoms,
                       const ImagingConfig& cfg) {
    if (cfg.pixel <= 0.0 || cfg.width <= 0 || cfg.height <= 0) {
        throw ConfigError("project_ensemble: bad camera geometry");
    }
    Image n2d = blank(cfg.width, cfg.height);
    const double cos_a = std::cos(cfg.angle);
    const double sin_a = std::sin(cfg.angle);
    const double inv_px = 1.0 / cfg.pixel;
    for (const Atom& a : atoms) {
        const double x_cam = a.r.x * cos_a - a.r.z * sin_a;
        const double y_cam = a.r.y;
        const int ix =
            static_cast<int>(std::floor(x_cam * inv_px + 0.5 * cfg.width));
        const int iy =
            static_cast<int>(std::floor(y_cam * inv_px + 0.5 * cfg.height));
        if (ix < 0 || ix >= cfg.width || iy < 0 || iy >= cfg.height) continue;
        n2d.at(ix, iy) += a.weight;
    }
    const double inv_area = inv_px * inv_px;
    for (double& v : n2d.v) v *= inv_area;
    if (cfg.blur_sigma > 0.0) {
        n2d = gaussian_blur(n2d, cfg.blur_sigma / cfg.pixel);
    }
    return n2d;
}

AbsorptionImage synthesize_absorption(const Image& n2d,
                                      const ImagingConfig& cfg) {
    AbsorptionImage img;
    img.d = blank(n2d.width, n2d.height, cfg.dark_level);
    img.b = blank(n2d.width, n2d.height);
    img.g = blank(n2d.width, n2d.height);

    const std::size_t n_px = n2d.v.size();
    if (!cfg.noise_seed) {
        for (std::size_t i = 0; i < n_px; ++i) {
            const double transmission = std::exp(-cfg.sigma_rb * n2d.v[i]);
            img.b.v[i] = cfg.dark_level + cfg.counts_per_pixel;
            img.g.v[i] = cfg.dark_level + cfg.counts_per_pixel * transmission;
        }
        return img;
    }

    const int frames = std::max(1, cfg.n_frames);
    const double inv_frames = 1.0 / frames;
    for (std::size_t i = 0; i < n_px; ++i) {
        const double transmission = std::exp(-cfg.sigma_rb * n2d.v[i]);
        double acc_g = 0.0;
        double acc_b = 0.0;
        for (int f = 0; f < frames; ++f) {
            // Streams: one per (pixel, frame, frame-type).
            RandomStream rg(*cfg.noise_seed,
                            i * 2 * frames + 2 * static_cast<std::size_t>(f));
            RandomStream rb(*cfg.noise_seed,
                            i * 2 * frames + 2 * static_cast<std::size_t>(f) +
                                1);
            acc_g += static_cast<double>(
                rg.poisson(cfg.counts_per_pixel * transmission));
            acc_b += static_cast<double>(rb.poisson(cfg.counts_per_pixel));
        }
        img.g.v[i] = cfg.dark_level + acc_g * inv_frames;
        img.b.v[i] = cfg.dark_level + acc_b * inv_frames;
    }
    return img;
}

Image invert_absorption(const AbsorptionImage& img, const ImagingConfig& cfg) {
    if (img.g.v.size() != img.b.v.size() ||
        img.g.v.size() != img.d.v.size() || img.g.v.empty()) {
        throw ConfigError("invert_absorption: frame shapes differ");
    }
    Image n2d = blank(img.g.width, img.g.height);
    const double inv_sigma = 1.0 / cfg.sigma_rb;
    for (std::size_t i = 0; i < n2d.v.size(); ++i) {
        const double ref = img.b.v[i] - img.d.v[i];
        if (ref <= 0.0) {
            throw BadReference(
                "invert_absorption: bright frame at or below dark level");
        }
        const double signal = img.g.v[i] - img.d.v[i];
        if (signal <= 0.0) {
            n2d.v[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        n2d.v[i] = -inv_sigma * std::log(signal / ref);
    }
    return n2d;
}

std::vector<double> integrate_rows(const Image& n2d,
                                   const ImagingConfig& cfg) {
    std::vector<double> profile(static_cast<std::size_t>(n2d.height), 0.0);
    for (int iy = 0; iy < n2d.height; ++iy) {
        double sum = 0.0;
        for (int ix = 0; ix < n2d.width; ++ix) {
            const double v = n2d.at(ix, iy);
            if (std::isfinite(v)) sum += v;
        }
        profile[static_cast<std::size_t>(iy)] = sum * cfg.pixel;
    }
    return profile;
}

double extract_width(const Image& n2d, const ImagingConfig& cfg) {
    const std::vector<double> profile = integrate_rows(n2d, cfg);
    const std::size_t n = profile.size();
    if (n < 8) throw InsufficientData("extract_width: image too small");

    // Edge rows estimate the background level and its noise.
    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    double bg_sum = 0.0;
    std::size_t bg_count = 0;
    for (std::size_t i = 0; i < edge; ++i) {
        bg_sum += profile[i] + profile[n - 1 - i];
        bg_count += 2;
    }
    const double bg_mean = bg_sum / static_cast<double>(bg_count);
    double bg_var = 0.0;
    for (std::size_t i = 0; i < edge; ++i) {
        bg_var += (profile[i] - bg_mean) * (profile[i] - bg_mean);
        bg_var += (profile[n - 1 - i] - bg_mean) * (profile[n - 1 - i] - bg_mean);
    }
    const double bg_rms = std::sqrt(bg_var / static_cast<double>(bg_count));

    double peak = 0.0;
    for (const double p : profile) peak = std::max(peak, p - bg_mean);
    if (!(peak > 5.0 * bg_rms) || peak <= 0.0) {
        throw NoSignal("extract_width: no significant profile peak");
    }

    // Moment-based seeds on the background-subtracted profile.
    std::vector<double> ys(n);
    double w_sum = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ys[i] = pixel_coord(static_cast<int>(i), static_cast<int>(n),
                            cfg.pixel);
        const double w = std::max(0.0, profile[i] - bg_mean);
        w_sum += w;
        y_mean += w * ys[i];
    }
    y_mean /= w_sum;
    double y_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::max(0.0, profile[i] - bg_mean);
        y_var += w * (ys[i] - y_mean) * (ys[i] - y_mean);
    }
    y_var /= w_sum;
    const double sigma_seed = std::sqrt(std::max(y_var, cfg.pixel * cfg.pixel));

    ModelFn model = [](const std::vector<double>& p, double y) {
        const double s = p[3];
        const double arg = (y - p[2]) / s;
        return p[0] + p[1] * std::exp(-0.5 * arg * arg);
    };
    const FitResult fit = least_squares(
        model, ys, profile, {bg_mean, peak, y_mean, sigma_seed});
    return std::abs(fit.params[3]);
}

Image gaussian_blur(const Image& img, double sigma_px) {
    if (sigma_px <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_px)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double k_sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i / sigma_px) * (i / sigma_px));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        k_sum += v;
    }
    for (double& k : kernel) k /= k_sum;

    Image tmp = img;
    // Horizontal pass, then vertical; borders renormalize over the
    // in-bounds taps.
    for (int iy = 0; iy < img.height; ++iy) {
        for (int ix = 0; ix < img.width; ++ix) {
            double acc = 0.0, norm = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int x = ix + k;
                if (x < 0 || x >= img.width) continue;
                const double kv = kernel[static_cast<std::size_t>(k + radius)];
                acc += kv * img.at(x, iy);
                norm += kv;
            }
            tmp.at(ix, iy) = acc / norm;
        }
    }
    Image out = tmp;
    for (int iy = 0; iy < img.height; ++iy) {
        for (int ix = 0; ix < img.width; ++ix) {
            double acc = 0.0, norm = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int y = iy + k;
                if (y < 0 || y >= img.height) continue;
                const double kv = kernel[static_cast<std::size_t>(k + radius)];
                acc += kv * tmp.at(ix, y);
                norm += kv;
            }
            out.at(ix, iy) = acc / norm;
        }
    }
    return out;
}

}  // namespace cloudshape
