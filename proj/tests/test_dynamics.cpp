#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "cqlad/constants.hpp"
#include "cqlad/dynamics.hpp"
#include "cqlad/floquet.hpp"
#include "cqlad/lattice.hpp"

using namespace cqlad;
using dynamics::StateVector;
using floquet::DriveSpec;
using std::complex;

namespace {
constexpr double kPi = constants::pi;

StateVector basis_state(std::size_t size, std::size_t site) {
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(size));
  psi(static_cast<Eigen::Index>(site)) = 1.0;
  return psi;
}

std::vector<double> linspace(double t_final, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t s = 0; s < count; ++s)
    out[s] = t_final * static_cast<double>(s) / static_cast<double>(count - 1);
  return out;
}
}  // namespace

TEST_CASE("occupations are per-site squared magnitudes") {
  StateVector psi(3);
  psi << complex<double>(0.6, 0.0), complex<double>(0.0, 0.8), 0.0;
  const auto occ = dynamics::occupations(psi);
  CHECK(occ[0] == doctest::Approx(0.36).epsilon(1e-15));
  CHECK(occ[1] == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(occ[2] == 0.0);
}

TEST_CASE("plaquette quartet diagonalizes the chiral plaquette") {
  const auto h = dynamics::plaquette_model().dense();
  const auto modes = dynamics::plaquette_modes();
  CHECK((h * modes.plus - 2.0 * modes.plus).norm() < 1e-12);
  CHECK((h * modes.minus + 2.0 * modes.minus).norm() < 1e-12);
  CHECK((h * modes.zero1).norm() < 1e-12);
  CHECK((h * modes.zero2).norm() < 1e-12);
  // Orthonormal quartet.
  CHECK(modes.plus.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(modes.plus.dot(modes.minus)) < 1e-14);
  CHECK(std::abs(modes.zero1.dot(modes.zero2)) < 1e-14);
  CHECK(std::abs(modes.plus.dot(modes.zero1)) < 1e-14);
}

TEST_CASE("spectral evolution reproduces the plaquette closed form") {
  const auto model = dynamics::plaquette_model();
  const auto times = linspace(2.0 * kPi, 257);
  const auto traj = dynamics::evolve_static(model, basis_state(4, 0), times);
  REQUIRE(traj.states.size() == times.size());

  for (std::size_t s = 0; s < times.size(); ++s) {
    const auto sample = dynamics::plaquette_closed_form(times[s]);
    for (std::size_t site = 0; site < 4; ++site) {
      CHECK(std::abs(traj.states[s](static_cast<Eigen::Index>(site)) -
                     sample.amplitude[site]) < 1e-9);
      CHECK(std::abs(traj.occupations[s][site] - sample.occupation[site]) < 1e-9);
    }
  }
}

TEST_CASE("closed-form plaquette walk is chiral") {
  // Quarter period: everything has moved two sites around the ring.
  const auto quarter = dynamics::plaquette_closed_form(kPi / 2.0);
  CHECK(std::abs(quarter.occupation[2] - 1.0) < 1e-12);
  // The two transit sites share the same occupation law at all times.
  for (double t : {0.3, 0.9, 2.0, 5.5}) {
    const auto sample = dynamics::plaquette_closed_form(t);
    CHECK(sample.occupation[1] ==
          doctest::Approx(sample.occupation[3]).epsilon(1e-14));
    // Circulation direction: amplitude 4 leads amplitude 2 by exactly +i.
    if (std::abs(sample.amplitude[1]) > 1e-12) {
      const auto ratio = sample.amplitude[3] / sample.amplitude[1];
      CHECK(std::abs(ratio - complex<double>(0.0, 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("static evolution is unitary, exact at t = 0 and composes") {
  lattice::LatticeModel model(5);
  model.add_hopping(0, 1, {0.3, 0.7});
  model.add_hopping(1, 2, {-1.1, 0.2});
  model.add_hopping(2, 3, 0.9);
  model.add_hopping(3, 4, {0.0, -0.5});
  model.set_onsite(2, 0.4);

  const StateVector psi0 = basis_state(5, 2);
  const auto traj = dynamics::evolve_static(model, psi0, {0.0, 1.3, 2.9});
  CHECK((traj.states[0] - psi0).norm() == 0.0);  // t = 0 is returned verbatim
  for (const auto& psi : traj.states)
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Spectral stepping composes: continuing from the t = 1.3 state for another
  // 1.6 lands on the t = 2.9 state.
  const auto tail = dynamics::evolve_static(model, traj.states[1], {1.6});
  CHECK((tail.states[0] - traj.states[2]).norm() < 1e-12);
}

TEST_CASE("evolution rejects bad states and time grids") {
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  CHECK_THROWS_AS(dynamics::evolve_static(model, basis_state(3, 0), {1.0}),
                  std::invalid_argument);
  StateVector unnormalized = 0.5 * basis_state(2, 0);
  CHECK_THROWS_AS(dynamics::evolve_static(model, unnormalized, {1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(dynamics::evolve_static(model, basis_state(2, 0), {1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("step cap tracks the fastest rate in the driven Hamiltonian") {
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  DriveSpec drive{50.0, {{0.0, 45.0, 0.0}, {50.0, 45.0, kPi}}};
  // max(|0|+45, |50|+45, |J| = 1, omega_m = 50) = 95.
  CHECK(dynamics::driven_step_cap(model, drive) ==
        doctest::Approx(kPi / (100.0 * 95.0)).epsilon(1e-15));

  DriveSpec idle{50.0, {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
  // Unmodulated: omega_m drops out of the rate, leaving the bond.
  CHECK(dynamics::driven_step_cap(model, idle) ==
        doctest::Approx(kPi / 100.0).epsilon(1e-15));

  const lattice::LatticeModel silent(2);
  CHECK(dynamics::driven_step_cap(silent, idle) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("driven stepping enforces the cap and the substep budget") {
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  DriveSpec idle{1.0, {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
  const double cap = dynamics::driven_step_cap(model, idle);
  CHECK_THROWS_AS(dynamics::evolve_driven(model, idle, basis_state(2, 0),
                                          {1.0}, 2.0 * cap),
                  std::invalid_argument);
  CHECK_NOTHROW(dynamics::evolve_driven(model, idle, basis_state(2, 0), {1.0},
                                        0.5 * cap));
  // A window needing > 2e8 substeps is rejected before any stepping.
  CHECK_THROWS_AS(
      dynamics::evolve_driven(model, idle, basis_state(2, 0), {1.0e9}),
      std::invalid_argument);
}

TEST_CASE("zero-depth driving matches the spectral propagator") {
  lattice::LatticeModel model(3);
  model.add_hopping(0, 1, {0.8, 0.3});
  model.add_hopping(1, 2, 0.6);
  model.set_onsite(0, 0.2);
  DriveSpec idle{7.0, {{0.5, 0.0, 0.0}, {0.0, 0.0, 0.0}, {-0.3, 0.0, 0.0}}};

  // Fold the drive's static offsets into a copy for the spectral reference.
  lattice::LatticeModel shifted = model;
  shifted.set_onsite(0, 0.2 + 0.5);
  shifted.set_onsite(2, -0.3);

  const auto times = linspace(4.0, 9);
  const auto driven =
      dynamics::evolve_driven(model, idle, basis_state(3, 0), times);
  const auto exact = dynamics::evolve_static(shifted, basis_state(3, 0), times);
  for (std::size_t s = 0; s < times.size(); ++s)
    CHECK((driven.states[s] - exact.states[s]).norm() < 1e-8);
  // Norm housekeeping may trim round-off now and then, but the samples stay
  // unit-norm and the trimming never turns into a per-substep storm.
  for (const auto& psi : driven.states)
    CHECK(std::abs(psi.norm() - 1.0) < 5e-12);
  CHECK(driven.renormalizations < 100);

  // With no modulation anywhere, omega_m cannot leak into the result.
  DriveSpec other = idle;
  other.omega_m = 123.0;
  const auto again =
      dynamics::evolve_driven(model, other, basis_state(3, 0), times);
  for (std::size_t s = 0; s < times.size(); ++s)
    CHECK((again.states[s] - driven.states[s]).norm() == 0.0);
}

TEST_CASE("resonant modulation renormalizes the Rabi period by J_0(A)") {
  // Equal depths in antiphase: index A = 2 * depth / omega_m = 2.
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  DriveSpec drive{50.0, {{0.0, 50.0, 0.0}, {0.0, 50.0, kPi}}};

  const double jn = std::abs(
      floquet::sideband_coupling(1.0, drive, 0).amplitude);  // J_0(2)
  const double predicted = kPi / jn;

  const auto times = linspace(1.25 * predicted, 501);
  const auto traj =
      dynamics::evolve_driven(model, drive, basis_state(2, 0), times);
  const double period = dynamics::oscillation_period(traj, 0);
  CHECK(std::abs(period - predicted) < 0.03 * predicted);
}

TEST_CASE("detuned bond oscillates at the first-sideband rate") {
  // Static mismatch omega_m between the sites, bridged by the n = 1 harmonic.
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  DriveSpec drive{50.0, {{0.0, 45.0, 0.0}, {50.0, 45.0, kPi}}};

  const double jn =
      std::abs(floquet::sideband_coupling(1.0, drive, 1).amplitude);
  CHECK(jn == doctest::Approx(0.5815169517).epsilon(1e-9));  // J_1(1.8)

  const double predicted = kPi / jn;
  const auto times = linspace(1.25 * predicted, 501);
  const auto traj =
      dynamics::evolve_driven(model, drive, basis_state(2, 0), times);
  const double period = dynamics::oscillation_period(traj, 0);
  CHECK(std::abs(period - predicted) < 0.03 * predicted);

  // The time-averaged model predicts the same period spectrally.
  const auto em = floquet::effective_hamiltonian(model, drive);
  const auto flat =
      dynamics::evolve_static(em.model, basis_state(2, 0), times);
  const double flat_period = dynamics::oscillation_period(flat, 0);
  CHECK(std::abs(flat_period - predicted) < 1e-3 * predicted);
}

TEST_CASE("modulation at the J_0 zero freezes the bond") {
  lattice::LatticeModel model(2);
  model.add_hopping(0, 1, 1.0);
  const double depth = 25.0 * 2.404825557695773;  // A at the first J_0 zero
  DriveSpec drive{50.0, {{0.0, depth, 0.0}, {0.0, depth, kPi}}};

  const auto traj = dynamics::evolve_driven(model, drive, basis_state(2, 0),
                                            {1.0, 2.0, 3.0, 4.0, 5.0});
  for (const auto& occ : traj.occupations) CHECK(occ[0] >= 0.99);
}

TEST_CASE("oscillation period refines the global minimum parabolically") {
  dynamics::Trajectory traj;
  const double omega = 0.83;
  for (int s = 0; s <= 400; ++s) {
    const double t = 0.02 * s;
    traj.times.push_back(t);
    const double p = std::cos(omega * t / 2.0) * std::cos(omega * t / 2.0);
    traj.occupations.push_back({p, 1.0 - p});
  }
  const double period = dynamics::oscillation_period(traj, 0);
  CHECK(std::abs(period - 2.0 * kPi / omega) < 1e-3);

  // Monotone signal: no interior minimum to report.
  dynamics::Trajectory ramp;
  for (int s = 0; s <= 10; ++s) {
    ramp.times.push_back(0.1 * s);
    ramp.occupations.push_back({1.0 - 0.01 * s, 0.01 * s});
  }
  CHECK(dynamics::oscillation_period(ramp, 0) < 0.0);
}
