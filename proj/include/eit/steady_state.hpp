#pragma once

// Stationary state of the driven three-level atom: the analytic dark state
// for pure two-photon-resonant driving, and a numeric null-space solver for
// the general case (including ground-state decoherence).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "eit/atom.hpp"
#include "eit/model.hpp"

namespace eit {

// Expectation values of the atomic variables in the stationary state.
template <typename Scalar = double>
struct MeanValues {
  using Complex = std::complex<Scalar>;
  Scalar pop1{};    // <sigma_11>
  Scalar pop2{};    // <sigma_22>
  Scalar pope{};    // <sigma_ee>
  Complex coh12{};  // <sigma_12>
  Complex pol1e{};  // <sigma_1e>
  Complex pol2e{};  // <sigma_2e>

  Scalar w1() const { return pope - pop1; }
  Scalar w2() const { return pope - pop2; }
};

// <sigma_mn> = Tr(rho |m><n|) = rho(n, m), so coh12 = <sigma_12> lives at
// rho(ground2, ground1) and pol_je = <sigma_je> at rho(excited, ground_j).
template <typename Scalar>
Mat3<Scalar> mean_to_density(const MeanValues<Scalar>& m) {
  using namespace state_index;
  Mat3<Scalar> rho = Mat3<Scalar>::Zero();
  rho(ground1, ground1) = m.pop1;
  rho(ground2, ground2) = m.pop2;
  rho(excited, excited) = m.pope;
  rho(ground2, ground1) = m.coh12;
  rho(ground1, ground2) = std::conj(m.coh12);
  rho(excited, ground1) = m.pol1e;
  rho(ground1, excited) = std::conj(m.pol1e);
  rho(excited, ground2) = m.pol2e;
  rho(ground2, excited) = std::conj(m.pol2e);
  return rho;
}

template <typename Scalar>
MeanValues<Scalar> density_to_mean(const Mat3<Scalar>& rho) {
  using namespace state_index;
  MeanValues<Scalar> m;
  m.pop1 = rho(ground1, ground1).real();
  m.pop2 = rho(ground2, ground2).real();
  m.pope = rho(excited, excited).real();
  m.coh12 = rho(ground2, ground1);
  m.pol1e = rho(excited, ground1);
  m.pol2e = rho(excited, ground2);
  return m;
}

// Atomic means as a canonical-order 8-vector (sigma_e2 ... sigma_2e).
template <typename Scalar>
Vec8<Scalar> mean_vector(const MeanValues<Scalar>& m) {
  Vec8<Scalar> v;
  v(atom_index::sigma_e2) = std::conj(m.pol2e);
  v(atom_index::sigma_e1) = std::conj(m.pol1e);
  v(atom_index::sigma_12) = m.coh12;
  v(atom_index::w1) = m.w1();
  v(atom_index::w2) = m.w2();
  v(atom_index::sigma_21) = std::conj(m.coh12);
  v(atom_index::sigma_1e) = m.pol1e;
  v(atom_index::sigma_2e) = m.pol2e;
  return v;
}

// Dark state of the lossless ground-state manifold: the superposition of the
// two ground states that decouples from the excited state.  Requires at least
// one nonzero drive amplitude and no ground-state decoherence.
template <typename Scalar>
MeanValues<Scalar> dark_state(const DriveState<Scalar>& drive) {
  const Scalar o1 = drive.omega1, o2 = drive.omega2;
  if (!(o1 > Scalar(0)) && !(o2 > Scalar(0)))
    throw std::invalid_argument("dark_state: both drive amplitudes vanish");
  const Scalar total2 = o1 * o1 + o2 * o2;
  MeanValues<Scalar> m;
  m.pop1 = o2 * o2 / total2;
  m.pop2 = o1 * o1 / total2;
  m.pope = Scalar(0);
  m.coh12 = std::complex<Scalar>(-o1 * o2 / total2, 0);
  m.pol1e = std::complex<Scalar>(0, 0);
  m.pol2e = std::complex<Scalar>(0, 0);
  return m;
}

// Residual drift of a candidate stationary state (max-norm of d rho / dt).
template <typename Scalar>
Scalar stationarity_residual(const MediumParams<Scalar>& params, const DriveState<Scalar>& drive,
                             const MeanValues<Scalar>& m) {
  const Mat3<Scalar> rho = mean_to_density(m);
  const Mat3<Scalar> drift = master_drift(params, rho, std::complex<Scalar>(drive.alpha1),
                                          std::complex<Scalar>(drive.alpha2));
  return drift.cwiseAbs().maxCoeff();
}

// Stationary state from the null space of the Liouvillian.  Errors out when
// the null space is degenerate (no unique stationary state).
template <typename Scalar>
MeanValues<Scalar> steady_state_numeric(const MediumParams<Scalar>& params,
                                        const DriveState<Scalar>& drive) {
  const Mat9<Scalar> l = liouvillian(params, std::abs(drive.alpha1), std::abs(drive.alpha2));
  Eigen::JacobiSVD<Mat9<Scalar>> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar scale = sv(0);
  if (!(scale > Scalar(0)))
    throw std::runtime_error("steady_state_numeric: zero generator");
  if (sv(7) < Scalar(1e-9) * scale)
    throw std::runtime_error("steady_state_numeric: degenerate stationary subspace");
  const Vec9<Scalar> null_vec = svd.matrixV().col(8);
  Mat3<Scalar> rho = Eigen::Map<const Mat3<Scalar>>(null_vec.data());
  rho = Scalar(0.5) * (rho + rho.adjoint()).eval();  // Hermitize
  const std::complex<Scalar> tr = rho.trace();
  if (std::abs(tr) < Scalar(1e-12))
    throw std::runtime_error("steady_state_numeric: traceless null vector");
  rho /= tr;
  // build_drive fixes real nonnegative amplitudes, so no rephasing is needed
  return density_to_mean(rho);
}

// Stationary means: closed-form dark state when it applies, numeric solve
// otherwise (ground-state decoherence mixes the dark and bright states).
template <typename Scalar>
MeanValues<Scalar> stationary_means(const MediumParams<Scalar>& params,
                                    const DriveState<Scalar>& drive) {
  if (params.gamma12 == Scalar(0)) return dark_state(drive);
  return steady_state_numeric(params, drive);
}

}  // namespace eit
