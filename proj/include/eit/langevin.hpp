#pragma once

// Linearized atomic fluctuation system about the stationary state: the 8x8
// drift Jacobian, the 8x4 coupling of atomic fluctuations to field
// fluctuations, and the diffusion matrix of the normally ordered c-number
// Langevin forces.
//
// Conventions (all validated against the closed-form spectra downstream):
//  - jac row k is the expansion of the Heisenberg drift of the k-th canonical
//    operator over the canonical basis at the carrier field values;
//  - couple holds the field-fluctuation coefficients, columns in canonical
//    order (dalpha2*, dalpha1*, dalpha1, dalpha2), each entry the stationary
//    mean of the drift's derivative with respect to that field variable;
//  - diff stores D_xy with 2*D_xy given by the generalized Einstein relation,
//    so the force correlator is <f_x f_y> = D_xy / density (delta-correlated
//    in t and z); stationarity then reads jac*Sig + Sig*jac^T + 2*diff = 0.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

#include "eit/atom.hpp"
#include "eit/model.hpp"
#include "eit/steady_state.hpp"

namespace eit {

template <typename Scalar>
using Mat8 = Eigen::Matrix<std::complex<Scalar>, 8, 8>;
template <typename Scalar>
using Mat8x4 = Eigen::Matrix<std::complex<Scalar>, 8, 4>;

template <typename Scalar = double>
struct FluctuationBlock {
  Mat8<Scalar> jac;      // atomic drift Jacobian (canonical sub-order)
  Mat8x4<Scalar> couple; // coupling to (dalpha2*, dalpha1*, dalpha1, dalpha2)
  Mat8<Scalar> diff;     // normally ordered diffusion coefficients D_xy
};

namespace detail {

template <typename Scalar>
void require_stationary(const MeanValues<Scalar>& mean, const DriveState<Scalar>& drive,
                        const MediumParams<Scalar>& params, const char* op) {
  if (!(stationarity_residual(params, drive, mean) < Scalar(1e-8)))
    throw std::invalid_argument(std::string(op) + ": mean values are not stationary for this drive");
}

// Rows of the drift expansion: adjoint_drift(X_k) = constant(k)*I
// + sum_m jac(k,m)*X_m at the carrier field values.
template <typename Scalar>
void expand_drift_rows(const MediumParams<Scalar>& params, const DriveState<Scalar>& drive,
                       Mat8<Scalar>& jac, Vec8<Scalar>& constant) {
  using Complex = std::complex<Scalar>;
  const Complex b1(drive.alpha1), b2(drive.alpha2);  // real carriers: conj = value
  const auto& ops = atomic_operators<Scalar>();
  for (int k = 0; k < 8; ++k) {
    const Mat3<Scalar> base = adjoint_drift(params, ops[static_cast<size_t>(k)], b1, b2, b1, b2);
    const auto [c0, row] = decompose_operator(base);
    constant(k) = c0;
    jac.row(k) = row.transpose();
  }
}

}  // namespace detail

// Drift Jacobian and field coupling of the atomic fluctuations.  The drift is
// linear in the atomic operators and in each of the four field variables, so
// unit increments recover the exact expansion coefficients; the coupling
// entries are the stationary means of the field-derivative operators.
// The returned block has diff zeroed; see diffusion_matrix / fluctuation_block.
template <typename Scalar>
FluctuationBlock<Scalar> atomic_jacobian(const MeanValues<Scalar>& mean,
                                         const DriveState<Scalar>& drive,
                                         const MediumParams<Scalar>& params) {
  using Complex = std::complex<Scalar>;
  validate(params);
  detail::require_stationary(mean, drive, params, "atomic_jacobian");
  FluctuationBlock<Scalar> out;
  out.diff.setZero();
  Vec8<Scalar> constant;
  detail::expand_drift_rows(params, drive, out.jac, constant);

  const Complex b1(drive.alpha1), b2(drive.alpha2);
  const Complex one(1, 0), zero(0, 0);
  struct Increment {
    int col;
    Complex d1, d2, d1c, d2c;
  };
  const Increment increments[4] = {
      {couple_index::dalpha2_conj, zero, zero, zero, one},
      {couple_index::dalpha1_conj, zero, zero, one, zero},
      {couple_index::dalpha1, one, zero, zero, zero},
      {couple_index::dalpha2, zero, one, zero, zero},
  };
  const Vec8<Scalar> m = mean_vector(mean);
  const auto& ops = atomic_operators<Scalar>();
  for (int k = 0; k < 8; ++k) {
    const Mat3<Scalar> base = adjoint_drift(params, ops[static_cast<size_t>(k)], b1, b2, b1, b2);
    for (const auto& inc : increments) {
      const Mat3<Scalar> bumped = adjoint_drift(params, ops[static_cast<size_t>(k)], b1 + inc.d1,
                                                b2 + inc.d2, b1 + inc.d1c, b2 + inc.d2c);
      const auto [dc, dcoeff] = decompose_operator(Mat3<Scalar>(bumped - base));
      out.couple(k, inc.col) = dc + (dcoeff.array() * m.array()).sum();
    }
  }
  return out;
}

// Diffusion coefficients from the generalized Einstein relation:
// 2*D_ij = d<X_i X_j>/dt - <drift_i X_j> - <X_i drift_j>, with every operator
// product kept in canonical order (smaller canonical index first), which
// implements the normal-order convention for the c-number forces.
template <typename Scalar>
Mat8<Scalar> diffusion_matrix(const MeanValues<Scalar>& mean, const DriveState<Scalar>& drive,
                              const MediumParams<Scalar>& params) {
  using Complex = std::complex<Scalar>;
  validate(params);
  detail::require_stationary(mean, drive, params, "diffusion_matrix");
  const Mat3<Scalar> rho = mean_to_density(mean);
  Mat8<Scalar> jac;
  Vec8<Scalar> constant;
  detail::expand_drift_rows(params, drive, jac, constant);
  const Vec8<Scalar> m = mean_vector(mean);
  const auto& ops = atomic_operators<Scalar>();

  // canonical-order product means <(X_i X_j)_can>
  Mat8<Scalar> prod_mean;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const int a = std::min(i, j), b = std::max(i, j);
      prod_mean(i, j) =
          (ops[static_cast<size_t>(a)] * ops[static_cast<size_t>(b)] * rho).trace();
    }

  const Complex b1(drive.alpha1), b2(drive.alpha2);
  Mat8<Scalar> diff;
  for (int i = 0; i < 8; ++i)
    for (int j = i; j < 8; ++j) {
      const Mat3<Scalar> prod = ops[static_cast<size_t>(i)] * ops[static_cast<size_t>(j)];
      Complex term = (adjoint_drift(params, prod, b1, b2, b1, b2) * rho).trace();
      term -= constant(i) * m(j) + constant(j) * m(i);
      for (int k = 0; k < 8; ++k) {
        term -= jac(i, k) * prod_mean(k, j);
        term -= jac(j, k) * prod_mean(i, k);
      }
      diff(i, j) = Scalar(0.5) * term;
      diff(j, i) = diff(i, j);
    }
  return diff;
}

// Complete linearized block (Jacobian, field coupling, diffusion).
template <typename Scalar>
FluctuationBlock<Scalar> fluctuation_block(const MeanValues<Scalar>& mean,
                                           const DriveState<Scalar>& drive,
                                           const MediumParams<Scalar>& params) {
  FluctuationBlock<Scalar> out = atomic_jacobian(mean, drive, params);
  out.diff = diffusion_matrix(mean, drive, params);
  return out;
}

// Centered canonical-order second moments Sig_ij = <(X_i X_j)_can> - m_i m_j.
template <typename Scalar>
Mat8<Scalar> second_moments(const MeanValues<Scalar>& mean) {
  const Mat3<Scalar> rho = mean_to_density(mean);
  const Vec8<Scalar> m = mean_vector(mean);
  const auto& ops = atomic_operators<Scalar>();
  Mat8<Scalar> sig;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const int a = std::min(i, j), b = std::max(i, j);
      sig(i, j) = (ops[static_cast<size_t>(a)] * ops[static_cast<size_t>(b)] * rho).trace() -
                  m(i) * m(j);
    }
  return sig;
}

// Max-norm residual of the second-moment stationarity condition
// jac*Sig + Sig*jac^T + 2*diff = 0 (consistency of Jacobian and diffusion).
template <typename Scalar>
Scalar einstein_residual(const FluctuationBlock<Scalar>& block, const MeanValues<Scalar>& mean) {
  const Mat8<Scalar> sig = second_moments<Scalar>(mean);
  const Mat8<Scalar> resid =
      block.jac * sig + sig * block.jac.transpose() + Scalar(2) * block.diff;
  return resid.cwiseAbs().maxCoeff();
}

}  // namespace eit
