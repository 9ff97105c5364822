/// \file imaging.hpp
/// Synthetic absorption imaging: weighted projection of an ensemble into
/// the tilted camera frame, absorption-frame synthesis with optional shot
/// noise, Lambert-Beer inversion, and width extraction.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cloudshape/cloud.hpp"
#include "cloudshape/constants.hpp"

namespace cloudshape {

/// Scalar image, row-major with iy the slow index. Pixel (ix, iy) is
/// centered at ((ix - width/2 + 0.5) px, (iy - height/2 + 0.5) px).
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    double& at(int ix, int iy) {
        return v[static_cast<std::size_t>(iy) * width + ix];
    }
    double at(int ix, int iy) const {
        return v[static_cast<std::size_t>(iy) * width + ix];
    }
};

/// Camera model: imaging axis tilted from the beam axis by `angle` about y,
/// square pixels, absorption cross-section, and an optional photon-shot
/// noise model with frame averaging.
struct ImagingConfig {
    double angle = 0.6108652381980153;  ///< beam-to-camera angle [rad]
    double pixel = 5e-6;                ///< pixel size [m]
    int width = 512;
    int height = 512;
    /// Resonant photon scattering cross-section. [m^2]
    double sigma_rb =
        3.0 * rb87::lambda_d2 * rb87::lambda_d2 / (2.0 * 3.14159265358979323846);
    double counts_per_pixel = 20000.0;  ///< mean bright counts above dark
    double dark_level = 100.0;          ///< dark frame level [counts]
    int n_frames = 1;                   ///< frames averaged when noise is on
    std::optional<std::uint64_t> noise_seed;  ///< absent = noiseless
    double blur_sigma = 0.0;  ///< optional resolution blur of n2d [m]; 0 = off
};

/// One absorption measurement: transmission frame with atoms (g),
/// reference bright frame (b), and dark frame (d).
struct AbsorptionImage {
    Image g;
    Image b;
    Image d;
};

/// Rotates atom positions into the camera frame (about the y axis by
/// cfg.angle) and histograms their weights into pixels, returning column
/// density [1/m^2]. Atoms outside the frame are dropped.
Image project_ensemble(const std::vector<Atom>& atoms,
                       const ImagingConfig& cfg);

/// Builds the three camera frames for a column-density map:
/// g - d = (b - d) exp(-sigma_rb n2d), with optional per-frame Poisson shot
/// noise on g and b averaged over cfg.n_frames.
AbsorptionImage synthesize_absorption(const Image& n2d,
                                      const ImagingConfig& cfg);

/// Lambert-Beer inversion n2d = -(1/sigma_rb) ln((g-d)/(b-d)). Throws
/// BadReference when the bright reference does not exceed dark anywhere;
/// non-positive transmission pixels are flagged as NaN, not fatal.
Image invert_absorption(const AbsorptionImage& img, const ImagingConfig& cfg);

/// Profile of the image integrated along x: one value per row in units of
/// [1/m] (column density summed across the row times the pixel size).
/// Flagged (NaN) pixels are skipped.
std::vector<double> integrate_rows(const Image& n2d, const ImagingConfig& cfg);

/// Integrated-profile Gaussian width along y. Fits offset + amplitude *
/// Gaussian to the row profile and returns the width in meters. Throws
/// NoSignal when the peak does not exceed five times the edge noise.
double extract_width(const Image& n2d, const ImagingConfig& cfg);

/// Separable Gaussian blur with the given width in pixels.
Image gaussian_blur(const Image& img, double sigma_px);

}  // namespace cloudshape
