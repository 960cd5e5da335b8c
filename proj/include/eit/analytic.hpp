#pragma once

// Closed-form results for the ideal medium (no ground-state decoherence):
// the squeezing factor f, the resonance response P, the exact spectra along
// z, their z -> infinity asymptotes, the small-absorption approximation, the
// characteristic length scales, and the response-peak positions.
//
// All lengths and frequencies are internal units (gamma is carried
// explicitly); callers convert positions to display units via z_display_unit.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "eit/model.hpp"

namespace eit {

template <typename Scalar = double>
struct ClosedFormContext {
  DriveState<Scalar> drive;
  MediumParams<Scalar> params;
  Scalar c_prefactor{};  // C = N (g1^2 W2^2 + g2^2 W1^2) / (c W^2)
};

template <typename Scalar>
ClosedFormContext<Scalar> make_context(const DriveState<Scalar>& drive,
                                       const MediumParams<Scalar>& params) {
  validate(params);
  ClosedFormContext<Scalar> ctx{drive, params, c_prefactor(drive, params)};
  if (!(ctx.c_prefactor > Scalar(0)))
    throw std::invalid_argument("make_context: collective prefactor must be positive");
  return ctx;
}

// f(xi, theta) = 1 - e^{2 xi} cos^2 theta - e^{-2 xi} sin^2 theta.
// Zero for coherent input; 1 - e^{2 xi} at theta = 0.
template <typename Scalar>
Scalar f_factor(Scalar xi, Scalar theta) {
  const Scalar c = std::cos(theta), s = std::sin(theta);
  return Scalar(1) - std::exp(Scalar(2) * xi) * c * c - std::exp(Scalar(-2) * xi) * s * s;
}

// Resonance response P(omega, delta) = C |omega^2 - delta^2| /
// ((gamma/2)^2 omega^2 + (omega^2 - W^2)^2)  [1/length/frequency].
template <typename Scalar>
Scalar resonance_p(Scalar omega, Scalar delta, const ClosedFormContext<Scalar>& ctx) {
  const Scalar hg = ctx.params.gamma / 2;
  const Scalar wsq = ctx.drive.omega_total * ctx.drive.omega_total;
  const Scalar o2 = omega * omega;
  return ctx.c_prefactor * std::abs(o2 - delta * delta) /
         (hg * hg * o2 + (o2 - wsq) * (o2 - wsq));
}

// Exact spectra of the two beams after propagation length z (internal units)
// at sideband omega; beam 1 is the coherent pump, beam 2 carries xi2.
template <typename Scalar>
std::pair<Scalar, Scalar> closed_form_spectra(Scalar z, Scalar omega,
                                              const ClosedFormContext<Scalar>& ctx,
                                              Scalar theta) {
  if (!(z >= Scalar(0))) throw std::invalid_argument("closed_form_spectra: z must be >= 0");
  const Scalar f = f_factor(ctx.drive.xi2, theta);
  const Scalar w1sq = ctx.drive.omega1 * ctx.drive.omega1;
  const Scalar w2sq = ctx.drive.omega2 * ctx.drive.omega2;
  const Scalar wsq = w1sq + w2sq;
  const Scalar absorb = ctx.params.gamma * resonance_p(omega, Scalar(0), ctx);
  const Scalar rotate = resonance_p(omega, ctx.drive.omega_total, ctx) * omega;
  const Scalar decay = std::exp(-absorb * z);
  const Scalar half_decay = std::exp(-absorb * z / 2);
  const Scalar osc = std::cos(rotate * z);
  const Scalar s1 =
      Scalar(1) - f * w1sq * w2sq / (wsq * wsq) * (Scalar(1) + decay - Scalar(2) * half_decay * osc);
  const Scalar s2 = Scalar(1) - f / (wsq * wsq) *
                                    (w2sq * w2sq + w1sq * w1sq * decay +
                                     Scalar(2) * w1sq * w2sq * half_decay * osc);
  return {s1, s2};
}

// z -> infinity limits of the exact spectra (both beams keep a residual
// fraction of the input squeezing; equal beams end up identical).
template <typename Scalar>
std::pair<Scalar, Scalar> asymptotic_spectra(const ClosedFormContext<Scalar>& ctx, Scalar theta) {
  const Scalar f = f_factor(ctx.drive.xi2, theta);
  const Scalar w1sq = ctx.drive.omega1 * ctx.drive.omega1;
  const Scalar w2sq = ctx.drive.omega2 * ctx.drive.omega2;
  const Scalar wsq = w1sq + w2sq;
  return {Scalar(1) - f * w1sq * w2sq / (wsq * wsq), Scalar(1) - f * w2sq * w2sq / (wsq * wsq)};
}

// Small-absorption approximation as a function of the oscillation phase
// zeta = z / z_osc: pure sinusoidal exchange of the input squeezing.
template <typename Scalar>
std::pair<Scalar, Scalar> approx_spectra(Scalar zeta, const ClosedFormContext<Scalar>& ctx,
                                         Scalar theta) {
  const Scalar f = f_factor(ctx.drive.xi2, theta);
  const Scalar w1sq = ctx.drive.omega1 * ctx.drive.omega1;
  const Scalar w2sq = ctx.drive.omega2 * ctx.drive.omega2;
  const Scalar wsq = w1sq + w2sq;
  const Scalar sn = std::sin(zeta);
  const Scalar exchange = Scalar(4) * w1sq * w2sq / (wsq * wsq) * sn * sn;
  return {Scalar(1) - f * exchange, Scalar(1) - f * (Scalar(1) - exchange)};
}

// Characteristic lengths at sideband omega (internal units):
// absorption length, oscillation length, and the first maximum-transfer
// position (pi/2) z_osc.  Divergent scales are reported as infinities
// (transparency windows), not as errors.
template <typename Scalar = double>
struct LengthScales {
  Scalar z_abs{};           // 1 / (gamma P(omega, 0))
  Scalar z_osc{};           // 2 / (P(omega, W) omega)
  Scalar z_max_transfer{};  // (pi/2) z_osc
};

template <typename Scalar>
LengthScales<Scalar> length_scales(Scalar omega, const ClosedFormContext<Scalar>& ctx) {
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  LengthScales<Scalar> out;
  const Scalar absorb = ctx.params.gamma * resonance_p(omega, Scalar(0), ctx);
  const Scalar rotate = resonance_p(omega, ctx.drive.omega_total, ctx) * omega;
  out.z_abs = absorb > Scalar(0) ? Scalar(1) / absorb : inf;
  out.z_osc = rotate != Scalar(0) ? Scalar(2) / std::abs(rotate) : inf;
  out.z_max_transfer = std::numbers::pi_v<Scalar> / 2 * out.z_osc;
  return out;
}

// Positions of the response maxima over sideband frequency: the mean-value
// (susceptibility) peak (W1^2 + W2^2)^{3/4} / sqrt(W1) and the fluctuation
// peak sqrt(W1^2 + W2^2) = argmax of P(., 0).
template <typename Scalar>
std::pair<Scalar, Scalar> peak_positions(const ClosedFormContext<Scalar>& ctx) {
  const Scalar w1 = ctx.drive.omega1;
  if (!(w1 > Scalar(0))) throw std::invalid_argument("peak_positions: requires omega1 > 0");
  const Scalar wsq = ctx.drive.omega_total * ctx.drive.omega_total;
  return {std::pow(wsq, Scalar(0.75)) / std::sqrt(w1), ctx.drive.omega_total};
}

}  // namespace eit
