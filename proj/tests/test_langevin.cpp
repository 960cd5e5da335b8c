#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "test_helpers.hpp"

using namespace eit;
using Complex = std::complex<double>;

namespace {

FluctuationBlock<double> dark_block(double w1, double w2, double gamma12 = 0.0) {
  const auto params = th::standard_medium(gamma12);
  const auto drive = th::drive_for_rabi(params, w1, w2);
  const auto means = stationary_means(params, drive);
  return fluctuation_block(means, drive, params);
}

}  // namespace

TEST_CASE("drift rows follow the linearized equations of motion") {
  const auto params = th::standard_medium();
  const auto drive = th::drive_for_rabi(params, 1.0, 1.0);
  const auto means = dark_state(drive);
  const auto block = fluctuation_block(means, drive, params);
  namespace ai = atom_index;

  // Optical coherence row: damping -gamma/2, drive couplings i W1 to the
  // inversion and -i W2 to the ground coherence.
  CHECK(th::near(block.jac(ai::sigma_1e, ai::sigma_1e), Complex(-0.5, 0), 1e-14));
  CHECK(th::near(block.jac(ai::sigma_2e, ai::sigma_2e), Complex(-0.5, 0), 1e-14));
  CHECK(th::near(block.jac(ai::sigma_1e, ai::w1), Complex(0, drive.omega1), 1e-14));
  CHECK(th::near(block.jac(ai::sigma_1e, ai::sigma_12), Complex(0, -drive.omega2), 1e-14));

  // Ground coherence is undamped in the ideal medium.
  CHECK(th::near(block.jac(ai::sigma_21, ai::sigma_21), Complex(0, 0), 1e-14));
  CHECK(th::near(block.jac(ai::sigma_12, ai::sigma_12), Complex(0, 0), 1e-14));

  // Field couplings at the dark state: i g1 <w1> and -i g2 <s12>.
  CHECK(th::near(block.couple(ai::sigma_1e, couple_index::dalpha1),
                 Complex(0, params.g1 * means.w1()), 1e-14));
  CHECK(th::near(block.couple(ai::sigma_1e, couple_index::dalpha2),
                 Complex(0, -params.g2) * means.coh12, 1e-14));
}

TEST_CASE("ground-coherence decay enters only its own drift diagonal") {
  const auto params = th::standard_medium();
  const auto drive = th::drive_for_rabi(params, 1.0, 1.0);
  const auto ideal = atomic_jacobian(dark_state(drive), drive, params);
  const double rate = 1.0 / 50;
  const auto damped_params = th::standard_medium(rate);
  const auto means = stationary_means(damped_params, drive);
  const auto damped = atomic_jacobian(means, drive, damped_params);
  namespace ai = atom_index;
  // The drift matrix depends on rates and drive only, so the two stationary
  // states may differ while the drift delta stays exactly the decay diagonal.
  Mat8<double> delta = damped.jac - ideal.jac;
  CHECK(th::near(delta(ai::sigma_12, ai::sigma_12), Complex(-rate, 0), 1e-14));
  CHECK(th::near(delta(ai::sigma_21, ai::sigma_21), Complex(-rate, 0), 1e-14));
  delta(ai::sigma_12, ai::sigma_12) = 0;
  delta(ai::sigma_21, ai::sigma_21) = 0;
  CHECK(delta.norm() <= 1e-14);
  // Field coupling carries no explicit decoherence rate: the entries follow
  // the same mean-value formulas in both media.
  CHECK(th::near(damped.couple(ai::sigma_1e, couple_index::dalpha1),
                 Complex(0, params.g1 * means.w1()), 1e-14));
  CHECK(th::near(damped.couple(ai::sigma_1e, couple_index::dalpha2),
                 Complex(0, -params.g2) * means.coh12, 1e-14));
}

TEST_CASE("conjugation symmetry of drift and field coupling") {
  const auto params = th::standard_medium(1.0 / 500);
  const auto drive = th::drive_for_rabi(params, 1.2, 0.8);
  const auto means = stationary_means(params, drive);
  const auto block = fluctuation_block(means, drive, params);
  const SystemOrdering ord;
  constexpr int couple_conj[4] = {3, 2, 1, 0};
  for (int i = 0; i < 8; ++i) {
    const int pi = ord.conjugate_atomic(i);
    for (int j = 0; j < 8; ++j)
      CHECK(th::near(block.jac(pi, ord.conjugate_atomic(j)), std::conj(block.jac(i, j)), 1e-13));
    for (int j = 0; j < 4; ++j)
      CHECK(th::near(block.couple(pi, couple_conj[j]), std::conj(block.couple(i, j)), 1e-13));
    for (int j = 0; j < 8; ++j)
      CHECK(th::near(block.diff(pi, ord.conjugate_atomic(j)), std::conj(block.diff(i, j)), 1e-13));
  }
}

TEST_CASE("dark-state drift is stable for all drive strengths") {
  const auto params = th::standard_medium();
  for (const double w1 : {0.5, 1.0, 2.0}) {
    for (const double w2 : {0.5, 1.0, 2.0}) {
      CAPTURE(w1);
      CAPTURE(w2);
      const auto drive = th::drive_for_rabi(params, w1, w2);
      const auto block = fluctuation_block(dark_state(drive), drive, params);
      const Eigen::ComplexEigenSolver<Mat8<double>> es(block.jac, false);
      REQUIRE(es.info() == Eigen::Success);
      CHECK(es.eigenvalues().real().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("dark-state diffusion has the exact sparse quarter pattern") {
  // All nonzero entries are +/- i/4: the noise is sourced entirely by the
  // spontaneous-emission cross terms of the two optical coherences.
  const auto block = dark_block(1.0, 1.0);
  const std::map<std::pair<int, int>, double> expected = {
      {{0, 2}, +0.25}, {{1, 2}, -0.25}, {{1, 3}, +0.25}, {{1, 4}, -0.25},
      {{2, 0}, +0.25}, {{2, 1}, -0.25}, {{3, 1}, +0.25}, {{3, 6}, -0.25},
      {{4, 1}, -0.25}, {{4, 6}, +0.25}, {{5, 6}, +0.25}, {{5, 7}, -0.25},
      {{6, 3}, -0.25}, {{6, 4}, +0.25}, {{6, 5}, +0.25}, {{7, 5}, -0.25}};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      const auto it = expected.find({i, j});
      const Complex want = it == expected.end() ? Complex(0, 0) : Complex(0, it->second);
      CHECK(th::near(block.diff(i, j), want, 1e-13));
    }
  }
  // Symmetric (not Hermitian): it is a second-moment source matrix.
  CHECK((block.diff - block.diff.transpose().eval()).norm() <= 1e-14);
}

TEST_CASE("diffusion with ground-coherence decay: frozen regression values") {
  const auto block = dark_block(1.0, 1.0, 1.0 / 500);
  const auto& d = block.diff;
  CHECK(th::near(d(0, 0), Complex(4.96770988574207e-4, 0), 1e-12));
  CHECK(th::near(d(1, 1), Complex(4.96770988574268e-4, 0), 1e-12));
  CHECK(th::near(d(3, 3), Complex(4.96770988574238e-3, 0), 1e-12));
  CHECK(th::near(d(3, 4), Complex(3.97416790859387e-3, 0), 1e-12));
  CHECK(th::near(d(2, 5), Complex(1.99155489319414e-3, 0), 1e-12));
  CHECK(th::near(d(2, 3), Complex(-9.9354197714846e-4, 0), 1e-12));
  CHECK(th::near(d(0, 2), Complex(0, 0.248385494287134), 1e-12));
  CHECK(th::near(d(1, 2), Complex(0, -0.248384997516145), 1e-12));
  CHECK(th::near(d(4, 6), Complex(0, 0.248385494287134), 1e-12));
  CHECK((d - d.transpose().eval()).norm() <= 1e-13);
}

TEST_CASE("generalized fluctuation-dissipation consistency") {
  // J S + S J^T + 2 D = 0 with S the stationary second moments: the diffusion
  // matrix is checked against an independent construction from the moments.
  for (const auto& [w1, w2] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {1.0, 2.0}, {0.5, 1.5}}) {
    for (const double gamma12 : {0.0, 1.0 / 500, 10.0}) {
      CAPTURE(w1);
      CAPTURE(w2);
      CAPTURE(gamma12);
      const auto params = th::standard_medium(gamma12);
      const auto drive = th::drive_for_rabi(params, w1, w2);
      const auto means = stationary_means(params, drive);
      const auto block = fluctuation_block(means, drive, params);
      CHECK(einstein_residual(block, means) <= 1e-10);
    }
  }
}

TEST_CASE("an undriven atom resting in a ground state is noiseless") {
  const auto params = th::standard_medium();
  const auto drive = build_drive(params, 0.0, 0.0);
  MeanValues<double> m;
  m.pop1 = 1.0;
  const auto block = fluctuation_block(m, drive, params);
  CHECK(block.diff.norm() <= 1e-14);
}

TEST_CASE("non-stationary mean values are rejected") {
  const auto params = th::standard_medium();
  const auto drive = th::drive_for_rabi(params, 2.0, 1.0);
  const auto wrong = dark_state(th::drive_for_rabi(params, 1.0, 1.0));
  CHECK_THROWS_AS(atomic_jacobian(wrong, drive, params), std::invalid_argument);
  CHECK_THROWS_AS(diffusion_matrix(wrong, drive, params), std::invalid_argument);
}

TEST_CASE("block assembly matches its parts") {
  const auto params = th::standard_medium(1.0 / 500);
  const auto drive = th::drive_for_rabi(params, 1.0, 1.0);
  const auto means = stationary_means(params, drive);
  const auto block = fluctuation_block(means, drive, params);
  const auto drift = atomic_jacobian(means, drive, params);
  CHECK((block.jac - drift.jac).norm() == 0.0);
  CHECK((block.couple - drift.couple).norm() == 0.0);
  CHECK((block.diff - diffusion_matrix(means, drive, params)).norm() == 0.0);
}
