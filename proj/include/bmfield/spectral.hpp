#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bmfield/linalg.hpp"

namespace bm {

// Single-noise spectral model for an m-channel stationary field on R^n.
//
// Convention (fixed throughout the project): the spectral density f satisfies
//   r(x) = integral e^{i<t,x>} f(t) dt,
// amplitudes are alpha = sqrt(f) (real and even), and cross-spectra factor as
// f_jk = alpha_j alpha_k because every channel filters one shared noise.
// Whitening happens at construction: amplitudes are premultiplied by the
// inverse symmetric root of their L^2 Gram matrix, which makes r(0) = Id at
// quadrature accuracy.
class SpectralModel {
  public:
    using AmplitudeFn = std::function<void(std::span<const double> t, std::span<double> out)>;
    using DensityFn = std::function<Mat(std::span<const double> t)>;

    SpectralModel() = default;
    SpectralModel(int n, int m, AmplitudeFn base, double t_max, std::string id);

    int n() const { return n_; }
    int m() const { return m_; }
    double t_max() const { return t_max_; }
    const std::string& id() const { return id_; }
    const Mat& mix() const { return mix_; }

    // Whitened amplitude vector alpha(t).
    void amplitude(std::span<const double> t, std::span<double> out) const;
    // Cross-spectral density matrix, f(t) = alpha(t) alpha(t)^T for the
    // single-noise factorization or the custom matrix when one is installed.
    Mat density(std::span<const double> t) const;

    // General Hermitian-density escape hatch: replaces the rank-one
    // factorization for the per-frequency matrix-root synthesis path. The
    // matrix must be real symmetric (real even amplitudes) and PSD.
    void set_density(DensityFn density) { density_ = std::move(density); }
    bool has_custom_density() const { return bool(density_); }

    // Gram-matrix whitening on a trapezoid grid of `grid_points` per axis.
    void normalize(int grid_points = 4097);
    bool normalized() const { return normalized_; }

    // Mass of f_jj beyond the cutoff box [-cut, cut]^n, estimated on a grid.
    double tail_mass(int channel, double cut, int grid_points = 8193) const;

  private:
    int n_ = 1, m_ = 1;
    AmplitudeFn base_;
    DensityFn density_;
    Mat mix_;
    double t_max_ = 0.0;
    std::string id_;
    bool normalized_ = false;
};

// Registry:
//   gaussian            m=1, density of the squared-exponential covariance
//   gaussian_mod        m=1, Gaussian bands at +-t0 (cosine-modulated covariance)
//   fejer               m=1, triangular density on [-cutoff, cutoff]
//   gauss_hermite_pair  m=2, Gaussian band plus its orthogonal polynomial partner
//   band_pair           m=2, baseband Gaussian plus bands at +-t0
// Parameters: scale (length scale, default 1), t0, cutoff.
SpectralModel make_spectral(const std::string& kind,
                            const std::map<std::string, double>& params = {});

}  // namespace bm
