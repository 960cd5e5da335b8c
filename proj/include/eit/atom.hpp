#pragma once

// Single-atom (three-level) operator algebra: the canonical operator basis,
// the adjoint (Heisenberg-picture) drift generator, and the master-equation
// Liouvillian.  States are indexed |1> = 0, |2> = 1, |e> = 2.
//
// The drift generator accepts the two field amplitudes and their conjugates
// as four independent c-number arguments; because the coupling Hamiltonian is
// linear in each of them, unit finite differences recover the exact
// field-coupling coefficients.

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "eit/model.hpp"

namespace eit {

template <typename Scalar>
using Mat3 = Eigen::Matrix<std::complex<Scalar>, 3, 3>;
template <typename Scalar>
using Mat9 = Eigen::Matrix<std::complex<Scalar>, 9, 9>;
template <typename Scalar>
using Vec9 = Eigen::Matrix<std::complex<Scalar>, 9, 1>;
template <typename Scalar>
using Vec8 = Eigen::Matrix<std::complex<Scalar>, 8, 1>;

namespace state_index {
inline constexpr int ground1 = 0;
inline constexpr int ground2 = 1;
inline constexpr int excited = 2;
}  // namespace state_index

template <typename Scalar = double>
Mat3<Scalar> ketbra(int m, int n) {
  Mat3<Scalar> out = Mat3<Scalar>::Zero();
  out(m, n) = std::complex<Scalar>(1, 0);
  return out;
}

// The eight atomic operators in canonical (SystemOrdering) order:
// sigma_e2, sigma_e1, sigma_12, w1, w2, sigma_21, sigma_1e, sigma_2e,
// with sigma_mn = |m><n| and w_j = sigma_ee - sigma_jj.
template <typename Scalar = double>
const std::array<Mat3<Scalar>, 8>& atomic_operators() {
  using namespace state_index;
  static const std::array<Mat3<Scalar>, 8> ops = [] {
    std::array<Mat3<Scalar>, 8> o;
    o[atom_index::sigma_e2] = ketbra<Scalar>(excited, ground2);
    o[atom_index::sigma_e1] = ketbra<Scalar>(excited, ground1);
    o[atom_index::sigma_12] = ketbra<Scalar>(ground1, ground2);
    o[atom_index::w1] = ketbra<Scalar>(excited, excited) - ketbra<Scalar>(ground1, ground1);
    o[atom_index::w2] = ketbra<Scalar>(excited, excited) - ketbra<Scalar>(ground2, ground2);
    o[atom_index::sigma_21] = ketbra<Scalar>(ground2, ground1);
    o[atom_index::sigma_1e] = ketbra<Scalar>(ground1, excited);
    o[atom_index::sigma_2e] = ketbra<Scalar>(ground2, excited);
    return o;
  }();
  return ops;
}

// Coupling Hamiltonian with independent c-number field variables (b1, b2) and
// their formally independent conjugates (b1c, b2c); hbar = 1.
template <typename Scalar>
Mat3<Scalar> coupling_hamiltonian(const MediumParams<Scalar>& params, std::complex<Scalar> b1,
                                  std::complex<Scalar> b2, std::complex<Scalar> b1c,
                                  std::complex<Scalar> b2c) {
  const auto& ops = atomic_operators<Scalar>();
  return params.g1 * (b1 * ops[atom_index::sigma_e1] + b1c * ops[atom_index::sigma_1e]) +
         params.g2 * (b2 * ops[atom_index::sigma_e2] + b2c * ops[atom_index::sigma_2e]);
}

// Adjoint generator: the Heisenberg drift of an operator A, consisting of the
// coherent coupling, spontaneous emission |e> -> |1>, |2>, and the
// phenomenological damping of the ground coherence at rate gamma12 (acting on
// the sigma_21/sigma_12 components only, never on the optical coherences).
template <typename Scalar>
Mat3<Scalar> adjoint_drift(const MediumParams<Scalar>& params, const Mat3<Scalar>& a,
                           std::complex<Scalar> b1, std::complex<Scalar> b2,
                           std::complex<Scalar> b1c, std::complex<Scalar> b2c) {
  using namespace state_index;
  const std::complex<Scalar> i(0, 1);
  const Mat3<Scalar> h = coupling_hamiltonian(params, b1, b2, b1c, b2c);
  Mat3<Scalar> out = i * (h * a - a * h);
  const auto& ops = atomic_operators<Scalar>();
  const Mat3<Scalar>& c1 = ops[atom_index::sigma_1e];  // collapse |e> -> |1>
  const Mat3<Scalar>& c2 = ops[atom_index::sigma_2e];  // collapse |e> -> |2>
  out += params.gamma1 * (c1.adjoint() * a * c1 -
                          Scalar(0.5) * (c1.adjoint() * c1 * a + a * c1.adjoint() * c1));
  out += params.gamma2 * (c2.adjoint() * a * c2 -
                          Scalar(0.5) * (c2.adjoint() * c2 * a + a * c2.adjoint() * c2));
  out(ground2, ground1) -= params.gamma12 * a(ground2, ground1);
  out(ground1, ground2) -= params.gamma12 * a(ground1, ground2);
  return out;
}

// Schroedinger-picture generator acting on a density matrix.
template <typename Scalar>
Mat3<Scalar> master_drift(const MediumParams<Scalar>& params, const Mat3<Scalar>& rho,
                          std::complex<Scalar> alpha1, std::complex<Scalar> alpha2) {
  using namespace state_index;
  const std::complex<Scalar> i(0, 1);
  const Mat3<Scalar> h =
      coupling_hamiltonian(params, alpha1, alpha2, std::conj(alpha1), std::conj(alpha2));
  Mat3<Scalar> out = -i * (h * rho - rho * h);
  const auto& ops = atomic_operators<Scalar>();
  const Mat3<Scalar>& c1 = ops[atom_index::sigma_1e];
  const Mat3<Scalar>& c2 = ops[atom_index::sigma_2e];
  out += params.gamma1 *
         (c1 * rho * c1.adjoint() - Scalar(0.5) * (c1.adjoint() * c1 * rho + rho * c1.adjoint() * c1));
  out += params.gamma2 *
         (c2 * rho * c2.adjoint() - Scalar(0.5) * (c2.adjoint() * c2 * rho + rho * c2.adjoint() * c2));
  out(ground2, ground1) -= params.gamma12 * rho(ground2, ground1);
  out(ground1, ground2) -= params.gamma12 * rho(ground1, ground2);
  return out;
}

// 9x9 Liouvillian on column-stacked density matrices.
template <typename Scalar>
Mat9<Scalar> liouvillian(const MediumParams<Scalar>& params, Scalar alpha1, Scalar alpha2) {
  Mat9<Scalar> l;
  for (int k = 0; k < 9; ++k) {
    Mat3<Scalar> basis = Mat3<Scalar>::Zero();
    basis(k % 3, k / 3) = std::complex<Scalar>(1, 0);  // column-major stacking
    const Mat3<Scalar> image =
        master_drift(params, basis, std::complex<Scalar>(alpha1), std::complex<Scalar>(alpha2));
    l.col(k) = Eigen::Map<const Vec9<Scalar>>(image.data());
  }
  return l;
}

// Decomposition A = c0 * I + sum_k coeff[k] * X_k over the canonical basis.
template <typename Scalar>
std::pair<std::complex<Scalar>, Vec8<Scalar>> decompose_operator(const Mat3<Scalar>& a) {
  static const Eigen::PartialPivLU<Mat9<Scalar>> lu = [] {
    Mat9<Scalar> basis;
    Mat3<Scalar> id = Mat3<Scalar>::Identity();
    basis.col(0) = Eigen::Map<const Vec9<Scalar>>(id.data());
    const auto& ops = atomic_operators<Scalar>();
    for (int k = 0; k < 8; ++k)
      basis.col(k + 1) = Eigen::Map<const Vec9<Scalar>>(ops[static_cast<size_t>(k)].data());
    return Eigen::PartialPivLU<Mat9<Scalar>>(basis);
  }();
  const Vec9<Scalar> coeffs = lu.solve(Eigen::Map<const Vec9<Scalar>>(a.data()));
  return {coeffs(0), coeffs.template tail<8>()};
}

}  // namespace eit
