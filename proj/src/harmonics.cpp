#include "harmonode/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "harmonode/csv.hpp"

namespace harmonode {

namespace {

constexpr double kPi = std::numbers::pi;

// Returns (P_n(z), P_n'(z)).
std::pair<double, double> legendre_with_derivative(int n, double z) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

// Gauss-Legendre nodes (descending in x, so ascending in theta) and weights.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, z);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, z).second;
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = z;
    x[hi] = -z;
    w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void check_degree_order(int l, int m) {
  if (l < 0) throw std::invalid_argument("spherical harmonic degree must be >= 0");
  if (std::abs(m) > l)
    throw std::invalid_argument("spherical harmonic order |m| = " + std::to_string(std::abs(m)) +
                                " exceeds degree " + std::to_string(l));
}

}  // namespace

double QuadratureGrid::plm(int ring, int l, int m) const {
  return legendre[static_cast<std::size_t>(ring) * legendre_stride() + legendre_index(l, m)];
}

void normalized_legendre(int l_max, double theta, std::span<double> out) {
  if (l_max < 0) throw std::invalid_argument("normalized_legendre: l_max must be >= 0");
  if (out.size() < legendre_index(l_max, l_max) + 1)
    throw std::invalid_argument("normalized_legendre: output span too small");
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    out[legendre_index(m, m)] = pmm;
    if (m == l_max) break;
    double prev = pmm;
    double cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
    out[legendre_index(m + 1, m)] = cur;
    for (int l = m + 2; l <= l_max; ++l) {
      const double l2 = static_cast<double>(l) * l;
      const double m2 = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      const double lm1 = l - 1.0;
      const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
      const double next = a * (x * cur - b * prev);
      out[legendre_index(l, m)] = next;
      prev = cur;
      cur = next;
    }
  }
}

double real_sph_harm(int l, int m, double theta, double phi) {
  check_degree_order(l, m);
  std::vector<double> table(legendre_index(l, l) + 1);
  normalized_legendre(l, theta, table);
  const int am = std::abs(m);
  const double p = table[legendre_index(l, am)];
  if (m == 0) return p;
  if (m > 0) return std::numbers::sqrt2 * p * std::cos(m * phi);
  return std::numbers::sqrt2 * p * std::sin(am * phi);
}

GridPtr build_grid(int l_max, double oversample) {
  if (l_max < 0) throw std::invalid_argument("build_grid: l_max must be >= 0");
  if (!(oversample >= 1.0) || !std::isfinite(oversample))
    throw std::invalid_argument("build_grid: oversample must be >= 1");
  const int minimum = 2 * (l_max + 1);
  // The small slack keeps exact ratios such as 32/17 * 34 from rounding up.
  const int scaled = static_cast<int>(std::ceil(oversample * minimum - 1e-9));
  auto grid = std::make_shared<QuadratureGrid>();
  grid->n_theta = std::max(minimum, scaled);
  grid->n_phi = 2 * grid->n_theta;
  grid->delta_phi = 2.0 * kPi / grid->n_phi;

  gauss_legendre(grid->n_theta, grid->cos_theta, grid->weights);
  grid->theta.resize(grid->cos_theta.size());
  for (std::size_t j = 0; j < grid->theta.size(); ++j) grid->theta[j] = std::acos(grid->cos_theta[j]);
  grid->phi.resize(static_cast<std::size_t>(grid->n_phi));
  for (int k = 0; k < grid->n_phi; ++k) grid->phi[static_cast<std::size_t>(k)] = k * grid->delta_phi;

  const std::size_t stride = grid->legendre_stride();
  grid->legendre.resize(stride * grid->theta.size());
  for (std::size_t j = 0; j < grid->theta.size(); ++j)
    normalized_legendre(grid->max_degree(), grid->theta[j],
                        std::span<double>(grid->legendre).subspan(j * stride, stride));
  return grid;
}

SphericalSamples sample(GridPtr grid, const std::function<double(double, double)>& f) {
  SphericalSamples s{grid, Eigen::MatrixXd(grid->n_theta, grid->n_phi)};
  for (int j = 0; j < grid->n_theta; ++j)
    for (int k = 0; k < grid->n_phi; ++k)
      s.values(j, k) = f(grid->theta[static_cast<std::size_t>(j)], grid->phi[static_cast<std::size_t>(k)]);
  return s;
}

HarmonicExpansion expand(const SphericalSamples& samples, int l_max) {
  if (!samples.grid) throw std::invalid_argument("expand: samples have no grid");
  const QuadratureGrid& grid = *samples.grid;
  if (l_max < 0) throw std::invalid_argument("expand: l_max must be >= 0");
  if (l_max > grid.max_degree())
    throw std::invalid_argument("expand: grid with n_theta = " + std::to_string(grid.n_theta) +
                                " is too coarse for l_max = " + std::to_string(l_max));
  if (samples.values.rows() != grid.n_theta || samples.values.cols() != grid.n_phi)
    throw std::invalid_argument("expand: sample array does not match grid");

  // Trig table: row m holds cos(m phi_k), row l_max+1+m holds sin(m phi_k).
  const int nm = l_max + 1;
  Eigen::MatrixXd trig(2 * nm, grid.n_phi);
  for (int m = 0; m < nm; ++m) {
    for (int k = 0; k < grid.n_phi; ++k) {
      const double a = m * grid.phi[static_cast<std::size_t>(k)];
      trig(m, k) = std::cos(a);
      trig(nm + m, k) = std::sin(a);
    }
  }
  // Azimuthal Fourier sums per ring: (2 nm) x n_theta.
  const Eigen::MatrixXd fourier = trig * samples.values.transpose();

  HarmonicExpansion out;
  out.l_max = l_max;
  out.grid = samples.grid;
  out.coefficients.assign(static_cast<std::size_t>(nm * nm), 0.0);
  for (int j = 0; j < grid.n_theta; ++j) {
    const double w = grid.weights[static_cast<std::size_t>(j)] * grid.delta_phi;
    for (int l = 0; l <= l_max; ++l) {
      out.coefficients[coefficient_index(l, 0)] += w * grid.plm(j, l, 0) * fourier(0, j);
      for (int m = 1; m <= l; ++m) {
        const double p = w * std::numbers::sqrt2 * grid.plm(j, l, m);
        out.coefficients[coefficient_index(l, m)] += p * fourier(m, j);
        out.coefficients[coefficient_index(l, -m)] += p * fourier(nm + m, j);
      }
    }
  }
  return out;
}

double reconstruct(const HarmonicExpansion& expansion, double theta, double phi) {
  std::vector<double> table(legendre_index(expansion.l_max, expansion.l_max) + 1);
  normalized_legendre(expansion.l_max, theta, table);
  double sum = 0.0;
  for (int l = 0; l <= expansion.l_max; ++l) {
    sum += expansion.coefficient(l, 0) * table[legendre_index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      const double p = std::numbers::sqrt2 * table[legendre_index(l, m)];
      sum += p * (expansion.coefficient(l, m) * std::cos(m * phi) +
                  expansion.coefficient(l, -m) * std::sin(m * phi));
    }
  }
  return sum;
}

Eigen::MatrixXd reconstruct_on_grid(const HarmonicExpansion& expansion) {
  const QuadratureGrid& grid = *expansion.grid;
  const int nm = expansion.l_max + 1;
  // Per ring, the cos and sin amplitudes of each order m.
  Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(grid.n_theta, 2 * nm);
  for (int j = 0; j < grid.n_theta; ++j) {
    for (int l = 0; l <= expansion.l_max; ++l) {
      amp(j, 0) += expansion.coefficient(l, 0) * grid.plm(j, l, 0);
      for (int m = 1; m <= l; ++m) {
        const double p = std::numbers::sqrt2 * grid.plm(j, l, m);
        amp(j, m) += p * expansion.coefficient(l, m);
        amp(j, nm + m) += p * expansion.coefficient(l, -m);
      }
    }
  }
  Eigen::MatrixXd trig = Eigen::MatrixXd::Zero(2 * nm, grid.n_phi);
  for (int m = 0; m < nm; ++m) {
    for (int k = 0; k < grid.n_phi; ++k) {
      const double a = m * grid.phi[static_cast<std::size_t>(k)];
      trig(m, k) = std::cos(a);
      if (m > 0) trig(nm + m, k) = std::sin(a);
    }
  }
  return amp * trig;
}

namespace {

double grid_norm(const QuadratureGrid& grid, const Eigen::MatrixXd& values) {
  double sum = 0.0;
  for (int j = 0; j < grid.n_theta; ++j)
    sum += grid.weights[static_cast<std::size_t>(j)] * values.row(j).squaredNorm();
  return std::sqrt(sum * grid.delta_phi);
}

}  // namespace

double l2_norm(const SphericalSamples& samples) { return grid_norm(*samples.grid, samples.values); }

double truncation_error(const SphericalSamples& samples, const HarmonicExpansion& expansion) {
  if (samples.grid != expansion.grid)
    throw std::invalid_argument("truncation_error: expansion was built on a different grid");
  const double norm = l2_norm(samples);
  if (!(norm > 0.0))
    throw std::domain_error("truncation_error: relative error of a zero function is undefined");
  return grid_norm(*samples.grid, samples.values - reconstruct_on_grid(expansion)) / norm;
}

std::vector<double> frequency_energies(const HarmonicExpansion& expansion) {
  std::vector<double> energies(static_cast<std::size_t>(expansion.l_max + 1), 0.0);
  for (int l = 0; l <= expansion.l_max; ++l) {
    double sum = 0.0;
    for (int m = -l; m <= l; ++m) sum += expansion.coefficient(l, m) * expansion.coefficient(l, m);
    energies[static_cast<std::size_t>(l)] = std::sqrt(sum);
  }
  return energies;
}

void write_expansion_csv(const HarmonicExpansion& expansion, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"l", "m", "a_lm"});
  for (int l = 0; l <= expansion.l_max; ++l)
    for (int m = -l; m <= l; ++m)
      csv.row({std::to_string(l), std::to_string(m), format_double(expansion.coefficient(l, m))});
}

}  // namespace harmonode
