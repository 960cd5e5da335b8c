#pragma once

// Frequency-domain elimination of the atomic fluctuations: at each sideband
// frequency omega the atomic block responds as (i*omega*I - jac)^{-1}, and
// substituting into the field equations yields a local z-ODE for the field
// fluctuation 4-vector v = (dalpha1(w), dalpha2(w), dalpha1*(-w), dalpha2*(-w)):
//
//   dv/dz = a_mat * v + noise,   <noise noise^H>-rate = n_mat,
//
// with a_mat = B (i w I - jac)^{-1} K / c and
// n_mat = B (i w I - jac)^{-1} diff^ (i w I - jac)^{-H} B^H / (c^2 density),
// where B reads out the polarizations (rows +-i g_j density), K is the
// atom-field coupling in v column order, and diff^ is the diffusion matrix
// with columns permuted by the conjugate involution (pairing f_x(w) with
// f_y(-w) of the conjugate variable).  The quantization-length dependence of
// the Langevin correlators cancels against the collective readout here, so
// both matrices depend only on the density and the couplings.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "eit/langevin.hpp"
#include "eit/model.hpp"

namespace eit {

template <typename Scalar>
using Mat4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<std::complex<Scalar>, 4, 1>;
template <typename Scalar>
using Mat4x8 = Eigen::Matrix<std::complex<Scalar>, 4, 8>;

template <typename Scalar = double>
struct FieldGenerator {
  Scalar omega{};                 // sideband frequency
  Mat4<Scalar> a_mat;             // spatial drift of v [1/length]
  Mat4<Scalar> n_mat;             // noise-injection rate [1/length]
  Vec4<Scalar> eigen;             // eigenvalues of a_mat
  bool limit_evaluated{false};    // true when defined by an omega limit
  Scalar z_unit{1};               // internal length of one display unit gamma/C
};

namespace detail {

// Polarization readout B: row order of v, entries -+ i g_j * density.
template <typename Scalar>
Mat4x8<Scalar> field_readout(const MediumParams<Scalar>& params) {
  using Complex = std::complex<Scalar>;
  const Scalar density = params.n_atoms;  // unit medium length
  Mat4x8<Scalar> b = Mat4x8<Scalar>::Zero();
  b(field_index::dalpha1, atom_index::sigma_1e) = Complex(0, -params.g1 * density);
  b(field_index::dalpha2, atom_index::sigma_2e) = Complex(0, -params.g2 * density);
  b(field_index::dalpha1_conj, atom_index::sigma_e1) = Complex(0, params.g1 * density);
  b(field_index::dalpha2_conj, atom_index::sigma_e2) = Complex(0, params.g2 * density);
  return b;
}

// couple columns rearranged to v order (dalpha1, dalpha2, dalpha1*, dalpha2*).
template <typename Scalar>
Mat8x4<Scalar> couple_in_field_order(const FluctuationBlock<Scalar>& block) {
  Mat8x4<Scalar> k;
  k.col(field_index::dalpha1) = block.couple.col(couple_index::dalpha1);
  k.col(field_index::dalpha2) = block.couple.col(couple_index::dalpha2);
  k.col(field_index::dalpha1_conj) = block.couple.col(couple_index::dalpha1_conj);
  k.col(field_index::dalpha2_conj) = block.couple.col(couple_index::dalpha2_conj);
  return k;
}

// Atomic response R = (i*omega*I - jac)^{-1}; nudges omega infinitesimally
// when the response is singular (isolated undamped resonances) and reports
// the limit evaluation through the flag instead of failing.
template <typename Scalar>
Mat8<Scalar> atomic_response(const Mat8<Scalar>& jac, Scalar omega, bool& limit_evaluated) {
  using Complex = std::complex<Scalar>;
  const Mat8<Scalar> lhs = Complex(0, omega) * Mat8<Scalar>::Identity() - jac;
  Eigen::FullPivLU<Mat8<Scalar>> lu(lhs);
  if (lu.isInvertible()) return lu.inverse();
  limit_evaluated = true;
  const Scalar nudge = Scalar(1e-9) * std::max(Scalar(1), std::abs(omega));
  const Mat8<Scalar> shifted =
      Complex(0, omega + nudge) * Mat8<Scalar>::Identity() - jac;
  Eigen::FullPivLU<Mat8<Scalar>> lu2(shifted);
  if (!lu2.isInvertible())
    throw std::runtime_error("atomic_response: singular response persists at nudged frequency");
  return lu2.inverse();
}

}  // namespace detail

// Noise-injection rate matrix for the field fluctuations at sideband omega.
// Zero at gamma12 = 0 (the dark state emits no normally ordered noise).
template <typename Scalar>
Mat4<Scalar> noise_injection(const FluctuationBlock<Scalar>& block,
                             const MediumParams<Scalar>& params, Scalar omega) {
  validate(params);
  if (omega == Scalar(0) && params.gamma12 == Scalar(0)) return Mat4<Scalar>::Zero();
  bool limit = false;
  const Mat8<Scalar> r = detail::atomic_response(block.jac, omega, limit);
  Mat8<Scalar> diff_conj_cols;
  for (int j = 0; j < 8; ++j)
    diff_conj_cols.col(j) = block.diff.col(SystemOrdering::conjugate_atomic(j));
  const Mat4x8<Scalar> b = detail::field_readout(params);
  const Scalar scale = Scalar(1) / (params.c * params.c * params.n_atoms);
  return scale * (b * r * diff_conj_cols * r.adjoint() * b.adjoint());
}

// Full field generator at sideband omega.  At omega = 0 with gamma12 = 0 the
// two-photon-resonant carrier is transparent and the generator is the exact
// zero limit (flagged via limit_evaluated).
template <typename Scalar>
FieldGenerator<Scalar> field_generator(const FluctuationBlock<Scalar>& block,
                                       const DriveState<Scalar>& drive,
                                       const MediumParams<Scalar>& params, Scalar omega) {
  validate(params);
  FieldGenerator<Scalar> gen;
  gen.omega = omega;
  gen.z_unit = z_display_unit(drive, params);
  if (omega == Scalar(0) && params.gamma12 == Scalar(0)) {
    gen.a_mat.setZero();
    gen.n_mat.setZero();
    gen.eigen.setZero();
    gen.limit_evaluated = true;
    return gen;
  }
  const Mat8<Scalar> r = detail::atomic_response(block.jac, omega, gen.limit_evaluated);
  const Mat4x8<Scalar> b = detail::field_readout(params);
  gen.a_mat = (b * r * detail::couple_in_field_order(block)) / params.c;
  gen.n_mat = noise_injection(block, params, omega);
  Eigen::ComplexEigenSolver<Mat4<Scalar>> es(gen.a_mat, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("field_generator: eigenvalue computation failed");
  gen.eigen = es.eigenvalues();
  return gen;
}

// Absorption and oscillation rates of the damped ("bright") eigenvalue pair.
template <typename Scalar = double>
struct EigenReport {
  Scalar absorption_rate{};   // -2 Re(lambda_bright) [1/length]
  Scalar oscillation_rate{};  // |Im(lambda_bright)|  [1/length]
  bool degenerate{false};     // bright/dark pairing ambiguous
};

template <typename Scalar>
EigenReport<Scalar> eigen_report(const FieldGenerator<Scalar>& gen) {
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(gen.eigen(a)) > std::abs(gen.eigen(b)); });
  const std::complex<Scalar> l0 = gen.eigen(order[0]);
  const std::complex<Scalar> l1 = gen.eigen(order[1]);
  const std::complex<Scalar> l2 = gen.eigen(order[2]);
  EigenReport<Scalar> rep;
  if (std::abs(l0) == Scalar(0)) return rep;  // all modes free: zero rates
  // ambiguous when the third-largest magnitude is comparable to the pair's
  rep.degenerate = std::abs(l2) > Scalar(0.25) * std::abs(l1);
  rep.absorption_rate = -(l0.real() + l1.real());
  rep.oscillation_rate = Scalar(0.5) * (std::abs(l0.imag()) + std::abs(l1.imag()));
  return rep;
}

}  // namespace eit
