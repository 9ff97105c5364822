/// \file fresnel.cpp
/// FFT-based Fresnel propagation. The transfer function in frequency space
/// is H(fx, fy) = exp(i k dz) exp(-i pi lambda dz (fx^2 + fy^2)); the field
/// is zero-padded to twice the window before transforming so the circular
/// convolution cannot wrap energy back into the kept region.

#include "cloudshape/fresnel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEdgeLeakRatio = 1e-6;

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

/// In-place forward or backward FFT of an n x n complex array.
void fft2(std::vector<complexd>& data, int n, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_2d(n, n, ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
}

/// FFT sample frequency for index j of an n-point transform with spacing dx.
double fft_freq(int j, int n, double dx) {
    const int folded = (j < n / 2) ? j : j - n;
    return folded / (n * dx);
}

/// Propagates one scalar component on the padded grid.
void propagate_component(std::vector<complexd>& comp, int n_pad, double dx,
                         double lambda, double dz) {
    fft2(comp, n_pad, FFTW_FORWARD);

    const double k = 2.0 * kPi / lambda;
    const complexd on_axis = std::exp(complexd(0.0, k * dz));
    for (int iy = 0; iy < n_pad; ++iy) {
        const double fy = fft_freq(iy, n_pad, dx);
        for (int ix = 0; ix < n_pad; ++ix) {
            const double fx = fft_freq(ix, n_pad, dx);
            const double arg = -kPi * lambda * dz * (fx * fx + fy * fy);
            comp[static_cast<std::size_t>(iy) * n_pad + ix] *=
                on_axis * std::exp(complexd(0.0, arg));
        }
    }

    fft2(comp, n_pad, FFTW_BACKWARD);
    const double scale = 1.0 / (static_cast<double>(n_pad) * n_pad);
    for (auto& v : comp) v *= scale;
}

/// Largest |E| over the outermost ring of samples, both components.
double edge_amplitude(const FieldGrid& g) {
    double worst = 0.0;
    auto probe = [&](int ix, int iy) {
        const std::size_t idx = g.index(ix, iy);
        worst = std::max(worst, std::abs(g.ex[idx]));
        worst = std::max(worst, std::abs(g.ey[idx]));
    };
    for (int i = 0; i < g.n; ++i) {
        probe(i, 0);
        probe(i, g.n - 1);
        probe(0, i);
        probe(g.n - 1, i);
    }
    return worst;
}

double peak_amplitude(const FieldGrid& g) {
    double peak = 0.0;
    for (const auto& v : g.ex) peak = std::max(peak, std::abs(v));
    for (const auto& v : g.ey) peak = std::max(peak, std::abs(v));
    return peak;
}

}  // namespace

FieldGrid sample_field(int n, double half_width, double z, double lambda,
                       const std::function<JonesVector(double, double)>& f) {
    if (n <= 0 || half_width <= 0.0) {
        throw ConfigError("sample_field: grid size and window must be positive");
    }
    FieldGrid g;
    g.n = n;
    g.half_width = half_width;
    g.z = z;
    g.lambda = lambda;
    g.ex.resize(static_cast<std::size_t>(n) * n);
    g.ey.resize(static_cast<std::size_t>(n) * n);
    auto fill_rows = [&](int y_begin, int y_end) {
        for (int iy = y_begin; iy < y_end; ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < n; ++ix) {
                const double x = g.coord(ix);
                const JonesVector v = f(x, y);
                g.ex[g.index(ix, iy)] = v.ex;
                g.ey[g.index(ix, iy)] = v.ey;
            }
        }
    };
    // Each sample is an independent function evaluation written to its own
    // slot, so splitting rows across threads cannot change the result.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int n_workers = static_cast<int>(std::min<unsigned>(hw, 16u));
    if (n_workers <= 1 || n < 4 * n_workers) {
        fill_rows(0, n);
        return g;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    const int rows_per = (n + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
        const int y0 = w * rows_per;
        const int y1 = std::min(n, y0 + rows_per);
        if (y0 >= y1) break;
        workers.emplace_back(fill_rows, y0, y1);
    }
    for (auto& t : workers) t.join();
    return g;
}

FieldGrid sample_vortex(const VortexBeamModel& model, double z, int n,
                        double half_width) {
    return sample_field(n, half_width, z, model.beam.lambda,
                        [&](double x, double y) {
                            const double rho = std::hypot(x, y);
                            const double phi = std::atan2(y, x);
                            return vortex_field_analytic(model, rho, phi, z);
                        });
}

FieldGrid sample_gaussian(const GaussianBeam& beam, double z, int n,
                          double half_width) {
    return sample_field(n, half_width, z, beam.lambda,
                        [&](double x, double y) {
                            const double rho = std::hypot(x, y);
                            return JonesVector{gaussian_field(beam, rho, z),
                                               {0.0, 0.0}};
                        });
}

FieldGrid propagate_fresnel(const FieldGrid& in, double dz) {
    if (dz <= 0.0) {
        throw NonPositiveDistance(
            "propagate_fresnel: step must be positive");
    }
    if (in.n < 16 || in.n % 2 != 0) {
        throw ConfigError("propagate_fresnel: grid size must be even and >= 16");
    }
    const double peak = peak_amplitude(in);
    if (peak > 0.0 && edge_amplitude(in) >= kEdgeLeakRatio * peak) {
        throw GridTooNarrow(
            "propagate_fresnel: field has not decayed at the window edge");
    }

    const int n = in.n;
    const int n_pad = 2 * n;
    const int off = n / 2;
    const std::size_t pad_count = static_cast<std::size_t>(n_pad) * n_pad;

    FieldGrid out;
    out.n = n;
    out.half_width = in.half_width;
    out.z = in.z + dz;
    out.lambda = in.lambda;
    out.ex.resize(in.ex.size());
    out.ey.resize(in.ey.size());

    std::vector<complexd> padded(pad_count);
    auto run = [&](const std::vector<complexd>& src,
                   std::vector<complexd>& dst) {
        std::fill(padded.begin(), padded.end(), complexd{0.0, 0.0});
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                padded[static_cast<std::size_t>(iy + off) * n_pad + ix + off] =
                    src[static_cast<std::size_t>(iy) * n + ix];
            }
        }
        propagate_component(padded, n_pad, in.dx(), in.lambda, dz);
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                dst[static_cast<std::size_t>(iy) * n + ix] =
                    padded[static_cast<std::size_t>(iy + off) * n_pad + ix +
                           off];
            }
        }
    };
    run(in.ex, out.ex);
    run(in.ey, out.ey);
    return out;
}

double grid_power(const FieldGrid& grid) {
    double sum = 0.0;
    for (const auto& v : grid.ex) sum += std::norm(v);
    for (const auto& v : grid.ey) sum += std::norm(v);
    return sum * grid.dx() * grid.dx();
}

double relative_l2(const FieldGrid& a, const FieldGrid& b) {
    if (a.n != b.n) {
        throw ConfigError("relative_l2: grids must have equal size");
    }
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.ex.size(); ++i) {
        diff += std::norm(a.ex[i] - b.ex[i]) + std::norm(a.ey[i] - b.ey[i]);
        ref += std::norm(b.ex[i]) + std::norm(b.ey[i]);
    }
    if (ref == 0.0) throw NoSignal("relative_l2: reference field is empty");
    return std::sqrt(diff / ref);
}

double default_half_width(const GaussianBeam& beam, double z_target) {
    return 4.0 * beam.w(z_target);
}

}  // namespace cloudshape
