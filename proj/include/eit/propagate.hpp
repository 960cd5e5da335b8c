#pragma once

// Spatial transport of the normally ordered field fluctuation covariance
//   d Sigma / dz = A Sigma + Sigma A^H + N
// at fixed sideband frequency, with squeezed-vacuum boundary conditions and
// quadrature noise spectra S_j(theta) extracted per position.
//
// Each z interval is integrated exactly (A is z-independent) with the block
// matrix exponential of [[-A, N], [0, A^H]]: its top-right block yields the
// accumulated noise integral and the lower-right block the propagator.
// Intervals are substepped so the anti-damped block never overflows, and the
// covariance is re-Hermitized after every step so conjugate pairs stay exact
// (which in turn keeps the spectra exactly real).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "eit/langevin.hpp"
#include "eit/model.hpp"
#include "eit/steady_state.hpp"
#include "eit/transfer.hpp"

namespace eit {

// Covariance and spectra along the medium at one sideband frequency.
template <typename Scalar = double>
struct CovarianceMap {
  Scalar omega{};                    // sideband frequency
  Scalar theta{};                    // quadrature angle of s1/s2
  std::vector<Scalar> z_grid;        // positions in display units (gamma/C)
  std::vector<Mat4<Scalar>> sigma;   // covariance of (da1, da2, da1*, da2*)
  std::vector<Scalar> s1, s2;        // spectra at theta per position
};

// Normally ordered covariance of two independently squeezed vacuum inputs:
// <da_j* da_j> = sinh^2 xi_j and <da_j da_j> = cosh xi_j sinh xi_j, with the
// sign fixed so that S_j(z=0, theta=0) = e^{2 xi_j}.  Cross-beam entries are
// zero.  (Real squeezing parameters only; the amplitudes carry the phases.)
template <typename Scalar>
Mat4<Scalar> input_covariance(const DriveState<Scalar>& drive) {
  using Complex = std::complex<Scalar>;
  validate(drive);
  Mat4<Scalar> sigma = Mat4<Scalar>::Zero();
  const Scalar xis[2] = {drive.xi1, drive.xi2};
  for (int j = 0; j < 2; ++j) {
    const Scalar sh = std::sinh(xis[j]), ch = std::cosh(xis[j]);
    // Rows/cols pair components (da_j(omega), da_j*(-omega)); sigma = <v v^H>,
    // so the anomalous <da da> correlator sits on the (j, j+2) off-diagonal.
    sigma(j, j) = Complex(sh * sh, 0);          // <da* da> normal order
    sigma(j + 2, j + 2) = Complex(sh * sh, 0);
    sigma(j, j + 2) = Complex(ch * sh, 0);      // <da da>
    sigma(j + 2, j) = Complex(ch * sh, 0);      // <da* da*>
  }
  return sigma;
}

// Quadrature noise spectrum of one beam:
// S = 1 + e^{-2 i theta} <da da> + e^{+2 i theta} <da* da*> + 2 <da* da>,
// normalized so a coherent state gives exactly 1.
template <typename Scalar>
Scalar spectrum(const Mat4<Scalar>& sigma, Scalar theta, int beam) {
  using Complex = std::complex<Scalar>;
  if (beam != 1 && beam != 2) throw std::invalid_argument("spectrum: beam must be 1 or 2");
  const int j = beam - 1;
  const Complex rot = std::polar(Scalar(1), Scalar(-2) * theta);
  const Complex val = Scalar(1) + rot * sigma(j, j + 2) + std::conj(rot) * sigma(j + 2, j) +
                      sigma(j, j) + sigma(j + 2, j + 2);
  if (std::abs(val.imag()) > Scalar(1e-10))
    throw std::runtime_error("spectrum: covariance has an imaginary quadrature residue");
  return val.real();
}

namespace detail {

// Exact conjugate pairing: sigma(i,j) = conj(sigma(j,i)) bitwise.
template <typename Scalar>
void hermitize(Mat4<Scalar>& sigma) {
  for (int i = 0; i < 4; ++i) {
    sigma(i, i) = std::complex<Scalar>(sigma(i, i).real(), 0);
    for (int j = i + 1; j < 4; ++j) {
      const std::complex<Scalar> avg =
          Scalar(0.5) * (sigma(i, j) + std::conj(sigma(j, i)));
      sigma(i, j) = avg;
      sigma(j, i) = std::conj(avg);
    }
  }
}

// One interval propagator pair (E, W): Sigma -> E Sigma E^H + W over step h.
template <typename Scalar>
void interval_propagator(const Mat4<Scalar>& a, const Mat4<Scalar>& n, Scalar h,
                         Mat4<Scalar>& e, Mat4<Scalar>& w) {
  using Mat8c = Eigen::Matrix<std::complex<Scalar>, 8, 8>;
  Mat8c m = Mat8c::Zero();
  m.template topLeftCorner<4, 4>() = -a;
  m.template topRightCorner<4, 4>() = n;
  m.template bottomRightCorner<4, 4>() = a.adjoint();
  const Mat8c f = (m * h).exp();
  e = f.template bottomRightCorner<4, 4>().adjoint();  // e^{A h}
  w = e * f.template topRightCorner<4, 4>();           // int_0^h e^{As} N e^{A^H s} ds
}

}  // namespace detail

// Integrates the covariance along an ascending position grid (display units,
// gamma/C) starting from z = 0.  Exact per interval up to roundoff; intervals
// are substepped when ||A|| h is large so the exponential stays bounded.
template <typename Scalar>
CovarianceMap<Scalar> propagate_covariance(const Mat4<Scalar>& sigma0,
                                           const FieldGenerator<Scalar>& gen,
                                           const std::vector<Scalar>& z_grid,
                                           Scalar theta = Scalar(0)) {
  if (z_grid.empty()) throw std::invalid_argument("propagate_covariance: empty position grid");
  if (!(z_grid.front() >= Scalar(0)))
    throw std::invalid_argument("propagate_covariance: grid must start at z >= 0");
  for (size_t i = 1; i < z_grid.size(); ++i)
    if (!(z_grid[i] > z_grid[i - 1]))
      throw std::invalid_argument("propagate_covariance: grid must be strictly ascending");

  CovarianceMap<Scalar> out;
  out.omega = gen.omega;
  out.theta = theta;
  out.z_grid = z_grid;
  out.sigma.reserve(z_grid.size());
  out.s1.reserve(z_grid.size());
  out.s2.reserve(z_grid.size());

  const Scalar a_norm = gen.a_mat.norm();
  Mat4<Scalar> sigma = sigma0;
  detail::hermitize(sigma);
  Scalar z_prev = Scalar(0);
  Mat4<Scalar> e, w;
  for (const Scalar z_disp : z_grid) {
    const Scalar h = (z_disp - z_prev) * gen.z_unit;  // interval in internal units
    if (h > Scalar(0)) {
      const Scalar steps = std::ceil(a_norm * h / Scalar(2));
      if (!(steps < Scalar(1e7)))
        throw std::runtime_error("propagate_covariance: interval too stiff at z*C/gamma = " +
                                 std::to_string(static_cast<double>(z_disp)));
      const int nsub = std::max(1, static_cast<int>(steps));
      detail::interval_propagator(gen.a_mat, gen.n_mat, h / Scalar(nsub), e, w);
      for (int s = 0; s < nsub; ++s) {
        sigma = (e * sigma * e.adjoint() + w).eval();
        detail::hermitize(sigma);
      }
    }
    if (!sigma.allFinite())
      throw std::runtime_error("propagate_covariance: non-finite covariance at z*C/gamma = " +
                               std::to_string(static_cast<double>(z_disp)));
    z_prev = z_disp;
    constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
    const Scalar v1 = spectrum(sigma, theta, 1);
    const Scalar v2 = spectrum(sigma, theta, 2);
    const Scalar u1 = spectrum(sigma, theta + half_pi, 1);
    const Scalar u2 = spectrum(sigma, theta + half_pi, 2);
    if (v1 * u1 < Scalar(1) - Scalar(1e-9) || v2 * u2 < Scalar(1) - Scalar(1e-9))
      throw std::runtime_error(
          "propagate_covariance: uncertainty bound violated at z*C/gamma = " +
          std::to_string(static_cast<double>(z_disp)));
    out.sigma.push_back(sigma);
    out.s1.push_back(v1);
    out.s2.push_back(v2);
  }
  return out;
}

// Full pipeline at one sideband frequency: stationary state -> linearized
// atomic block -> field generator -> covariance transport.  gamma12 = 0
// follows exactly the ideal dark-state path.
template <typename Scalar>
CovarianceMap<Scalar> simulate_decoherence(const MediumParams<Scalar>& params,
                                           const DriveState<Scalar>& drive, Scalar omega,
                                           const std::vector<Scalar>& z_grid) {
  validate(params);
  const MeanValues<Scalar> means = stationary_means(params, drive);
  const FluctuationBlock<Scalar> block = fluctuation_block(means, drive, params);
  const FieldGenerator<Scalar> gen = field_generator(block, drive, params, omega);
  return propagate_covariance(input_covariance(drive), gen, z_grid, drive.theta);
}

}  // namespace eit
