#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace harmonode {

/// Default band limit: degrees 0..16, i.e. 17 frequencies.
inline constexpr int kDefaultLmax = 16;

/// Default theta oversampling. Gives a 64 x 128 grid for l_max = 16.
inline constexpr double kDefaultOversample = 32.0 / 17.0;

/// Gauss-Legendre nodes in cos(theta) crossed with uniform azimuths.
///
/// Integrates products of real spherical harmonics exactly up to total degree
/// 2 * n_theta - 1. Rings are ordered by increasing theta; phi_k = k * dphi.
/// Normalized Legendre values are tabulated per ring up to max_degree().
struct QuadratureGrid {
  int n_theta = 0;
  int n_phi = 0;
  double delta_phi = 0.0;
  std::vector<double> theta;
  std::vector<double> cos_theta;
  std::vector<double> weights;  // sum to 2
  std::vector<double> phi;
  std::vector<double> legendre;  // ring-major, legendre_index(l, m) within ring

  /// Largest degree this grid can expand exactly: n_theta / 2 - 1.
  int max_degree() const { return n_theta / 2 - 1; }

  std::size_t legendre_stride() const {
    const auto l = static_cast<std::size_t>(max_degree());
    return (l + 1) * (l + 2) / 2;
  }
  double plm(int ring, int l, int m) const;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Grid sized for `l_max`: n_theta = max(2(l_max+1), ceil(oversample * 2(l_max+1))),
/// n_phi = 2 n_theta.
GridPtr build_grid(int l_max, double oversample = kDefaultOversample);

/// Flat position of P_l^m (0 <= m <= l) in a Legendre table.
constexpr std::size_t legendre_index(int l, int m) {
  return static_cast<std::size_t>(l) * static_cast<std::size_t>(l + 1) / 2 +
         static_cast<std::size_t>(m);
}

/// Fully normalized associated Legendre functions with the Condon-Shortley
/// phase, scaled so the complex harmonic is P_l^m(cos theta) e^{i m phi}.
/// Writes l_max+1 choose 2 values into `out` in legendre_index order.
void normalized_legendre(int l_max, double theta, std::span<double> out);

/// Real orthonormal spherical harmonic. m > 0 uses cos(m phi), m < 0 uses
/// sin(|m| phi), both carrying a factor sqrt(2).
double real_sph_harm(int l, int m, double theta, double phi);

/// Function values on every grid point: values(j, k) = f(theta_j, phi_k).
struct SphericalSamples {
  GridPtr grid;
  Eigen::MatrixXd values;
};

SphericalSamples sample(GridPtr grid, const std::function<double(double, double)>& f);

/// Flat position of a_lm: l^2 + l + m.
constexpr std::size_t coefficient_index(int l, int m) {
  return static_cast<std::size_t>(l * l + l + m);
}

struct HarmonicExpansion {
  int l_max = 0;
  std::vector<double> coefficients;  // (l_max+1)^2, coefficient_index order
  GridPtr grid;

  double coefficient(int l, int m) const { return coefficients[coefficient_index(l, m)]; }
};

/// Discrete inner product of the samples against each Y_l^m.
HarmonicExpansion expand(const SphericalSamples& samples, int l_max);

/// Sum of a_lm Y_l^m at one point.
double reconstruct(const HarmonicExpansion& expansion, double theta, double phi);

/// Truncated series evaluated on the expansion's grid.
Eigen::MatrixXd reconstruct_on_grid(const HarmonicExpansion& expansion);

/// Quadrature L2 norm of a sampled function.
double l2_norm(const SphericalSamples& samples);

/// ||f - truncated series||_2 / ||f||_2. Throws for identically zero f.
double truncation_error(const SphericalSamples& samples, const HarmonicExpansion& expansion);

/// Per-degree energies sqrt(sum_m a_lm^2), one per l in [0, l_max].
std::vector<double> frequency_energies(const HarmonicExpansion& expansion);

/// CSV rows "l,m,a_lm" with a header.
void write_expansion_csv(const HarmonicExpansion& expansion, std::ostream& out);

}  // namespace harmonode
