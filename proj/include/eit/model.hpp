#pragma once

// Parameters, unit conventions, and the canonical ordering of the twelve
// system variables (two field pairs + eight atomic fluctuation variables)
// shared by all other headers.
//
// Internal units: the total excited-state linewidth gamma and the speed of
// light c are both 1, and the medium length is the unit of length (so the
// atom number doubles as the atomic density).  Positions are reported
// externally in units of gamma/C, where C is the collective coupling
// prefactor returned by c_prefactor().

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eit {

template <typename Scalar = double>
struct MediumParams {
  Scalar gamma1{};   // decay rate of |e> into |1>
  Scalar gamma2{};   // decay rate of |e> into |2>
  Scalar gamma{};    // total linewidth; must equal gamma1 + gamma2 exactly
  Scalar g1{};       // dipole coupling of beam 1 (|1> <-> |e>)
  Scalar g2{};       // dipole coupling of beam 2 (|2> <-> |e>)
  Scalar n_atoms{};  // atom number; equals the density in internal units
  Scalar c{1};       // speed of light (1 in internal units)
  Scalar gamma12{};  // ground-coherence decay rate (0 = ideal medium)
};

template <typename Scalar>
void validate(const MediumParams<Scalar>& p) {
  if (!(std::isfinite(p.gamma1) && std::isfinite(p.gamma2) && std::isfinite(p.g1) &&
        std::isfinite(p.g2) && std::isfinite(p.n_atoms) && std::isfinite(p.c) &&
        std::isfinite(p.gamma12)))
    throw std::invalid_argument("medium parameters must be finite");
  if (p.gamma != p.gamma1 + p.gamma2)
    throw std::invalid_argument("gamma must equal gamma1 + gamma2 exactly");
  if (p.gamma1 < Scalar(0) || p.gamma2 < Scalar(0) || p.gamma12 < Scalar(0))
    throw std::invalid_argument("decay rates must be non-negative");
  if (!(p.g1 > Scalar(0)) || !(p.g2 > Scalar(0)) || !(p.n_atoms > Scalar(0)))
    throw std::invalid_argument("g1, g2 and n_atoms must be positive");
  if (!(p.c > Scalar(0))) throw std::invalid_argument("c must be positive");
}

// Builds a validated MediumParams with gamma = gamma1 + gamma2.
template <typename Scalar = double>
MediumParams<Scalar> make_medium(Scalar gamma1, Scalar gamma2, Scalar g1, Scalar g2,
                                 Scalar n_atoms, Scalar gamma12 = Scalar(0)) {
  MediumParams<Scalar> p{gamma1, gamma2, gamma1 + gamma2, g1, g2, n_atoms, Scalar(1), gamma12};
  validate(p);
  return p;
}

template <typename Scalar = double>
struct DriveState {
  Scalar alpha1{};       // carrier amplitude of beam 1 (real, >= 0)
  Scalar alpha2{};       // carrier amplitude of beam 2 (real, >= 0)
  Scalar omega1{};       // Rabi frequency |g1 alpha1|
  Scalar omega2{};       // Rabi frequency |g2 alpha2|
  Scalar omega_total{};  // sqrt(omega1^2 + omega2^2)
  Scalar xi1{};          // squeezing parameter of beam 1 (0: coherent pump)
  Scalar xi2{};          // squeezing parameter of beam 2
  Scalar theta{};        // quadrature angle
};

template <typename Scalar>
void validate(const DriveState<Scalar>& d) {
  if (!(std::isfinite(d.alpha1) && std::isfinite(d.alpha2) && std::isfinite(d.xi1) &&
        std::isfinite(d.xi2) && std::isfinite(d.theta)))
    throw std::invalid_argument("drive parameters must be finite");
  if (d.alpha1 < Scalar(0) || d.alpha2 < Scalar(0))
    throw std::invalid_argument("carrier amplitudes must be real and non-negative");
}

// Builds a DriveState from carrier amplitudes; beam 1 is the coherent pump
// (xi1 = 0), beam 2 carries the squeezing parameter xi2.
template <typename Scalar = double>
DriveState<Scalar> build_drive(const MediumParams<Scalar>& params, Scalar alpha1, Scalar alpha2,
                               Scalar xi2 = Scalar(0), Scalar theta = Scalar(0)) {
  validate(params);
  DriveState<Scalar> d;
  d.alpha1 = alpha1;
  d.alpha2 = alpha2;
  d.xi1 = Scalar(0);
  d.xi2 = xi2;
  d.theta = theta;
  validate(d);
  d.omega1 = std::abs(params.g1 * alpha1);
  d.omega2 = std::abs(params.g2 * alpha2);
  d.omega_total = std::hypot(d.omega1, d.omega2);
  return d;
}

// Canonical ordering of the 12 system variables.  The atomic fluctuation
// sub-block occupies indices 2..9, the field components indices {0,1,10,11}.
// w1, w2 are the population inversions (self-conjugate); every other variable
// is paired with its conjugate under `conjugate_index`.
struct SystemOrdering {
  static constexpr int size = 12;
  static constexpr int atomic_size = 8;
  static constexpr int atomic_begin = 2;  // atomic sub-block = indices 2..9

  static constexpr std::array<std::string_view, size> names{
      "alpha2*", "alpha1*", "sigma_e2", "sigma_e1", "sigma_12", "w1",
      "w2",      "sigma_21", "sigma_1e", "sigma_2e", "alpha1",  "alpha2"};

  // Conjugate-pair involution on the full 12-vector (w1, w2 are fixed points).
  static constexpr std::array<int, size> conjugate{11, 10, 9, 8, 7, 5, 6, 4, 3, 2, 1, 0};

  static constexpr std::array<int, 4> field_indices{0, 1, 10, 11};

  static constexpr std::string_view name(int i) { return names.at(static_cast<size_t>(i)); }

  static constexpr int index(std::string_view n) {
    for (int i = 0; i < size; ++i)
      if (names[static_cast<size_t>(i)] == n) return i;
    throw std::invalid_argument("unknown system variable name");
  }

  static constexpr int conjugate_index(int i) { return conjugate.at(static_cast<size_t>(i)); }

  // Involution restricted to the atomic sub-block (0-based within the block).
  static constexpr int conjugate_atomic(int i) {
    return conjugate.at(static_cast<size_t>(i + atomic_begin)) - atomic_begin;
  }
};

// Atomic sub-block positions (0-based within the 8-variable block).
namespace atom_index {
inline constexpr int sigma_e2 = 0;
inline constexpr int sigma_e1 = 1;
inline constexpr int sigma_12 = 2;
inline constexpr int w1 = 3;
inline constexpr int w2 = 4;
inline constexpr int sigma_21 = 5;
inline constexpr int sigma_1e = 6;
inline constexpr int sigma_2e = 7;
}  // namespace atom_index

// Columns of the atomic-to-field coupling matrix, in canonical order.
namespace couple_index {
inline constexpr int dalpha2_conj = 0;
inline constexpr int dalpha1_conj = 1;
inline constexpr int dalpha1 = 2;
inline constexpr int dalpha2 = 3;
}  // namespace couple_index

// Components of the propagated field fluctuation 4-vector
// v = (dalpha1(w), dalpha2(w), dalpha1*(-w), dalpha2*(-w)).
namespace field_index {
inline constexpr int dalpha1 = 0;
inline constexpr int dalpha2 = 1;
inline constexpr int dalpha1_conj = 2;
inline constexpr int dalpha2_conj = 3;
// Conjugate-pair involution on v: 0<->2, 1<->3.
inline constexpr std::array<int, 4> conjugate{2, 3, 0, 1};
}  // namespace field_index

// Collective coupling prefactor C = N (g1^2 W2^2 + g2^2 W1^2) / (c W^2).
// Positions are displayed in units of gamma/C; with gamma = 1 internally,
// one display unit corresponds to an internal length of 1/C.
template <typename Scalar>
Scalar c_prefactor(const DriveState<Scalar>& drive, const MediumParams<Scalar>& params) {
  const Scalar w1sq = drive.omega1 * drive.omega1;
  const Scalar w2sq = drive.omega2 * drive.omega2;
  const Scalar wsq = drive.omega_total * drive.omega_total;
  if (!(wsq > Scalar(0)))
    throw std::invalid_argument("c_prefactor requires a nonzero total Rabi frequency");
  return params.n_atoms * (params.g1 * params.g1 * w2sq + params.g2 * params.g2 * w1sq) /
         (params.c * wsq);
}

// Internal length of one display unit of position (z * C / gamma = 1).
template <typename Scalar>
Scalar z_display_unit(const DriveState<Scalar>& drive, const MediumParams<Scalar>& params) {
  return params.gamma / c_prefactor(drive, params);
}

}  // namespace eit
