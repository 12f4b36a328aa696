#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "cqlad/floquet.hpp"
#include "cqlad/lattice.hpp"

namespace cqlad::dynamics {

/// Single-particle amplitudes, one complex entry per site.
using StateVector = Eigen::VectorXcd;

/// Per-site squared magnitudes; sums to the squared norm.
std::vector<double> occupations(const StateVector& psi);

/// Time-ordered evolution record.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::vector<double>> occupations;
  int renormalizations = 0;  // norm-guard corrections during driven stepping
};

/// Propagate a static model by spectral decomposition: expand psi0 in the
/// eigenbasis, attach e^{-i E t}, reassemble at each requested time.
Trajectory evolve_static(const lattice::LatticeModel& model,
                         const StateVector& psi0,
                         const std::vector<double>& times);

/// The 4-site chiral plaquette: one Creutz plaquette at t_d = 1, t_v = 0,
/// phi = pi/2, sites ordered (a1, a2, a3, a4).
lattice::LatticeModel plaquette_model();

/// Plaquette eigenmode quartet, energies (+2, -2, 0, 0), orthonormal.
struct PlaquetteModes {
  StateVector plus, minus, zero1, zero2;
};
PlaquetteModes plaquette_modes();

/// Closed-form evolution of |a1> on the plaquette:
/// 2 psi(t) = [1+cos 2t] a1 + sin 2t a2 + i[1-cos 2t] a3 + i sin 2t a4.
struct PlaquetteSample {
  std::array<std::complex<double>, 4> amplitude;
  std::array<double, 4> occupation;
};
PlaquetteSample plaquette_closed_form(double t);

/// Largest integrator step evolve_driven accepts for this model/drive pair:
/// 2*pi / (200 * fastest rate present); infinite when nothing moves.
double driven_step_cap(const lattice::LatticeModel& base,
                       floquet::DriveSpec drive);

/// Integrate i dpsi/dt = H(t) psi with fixed-step 4th-order stepping, where
/// H(t) adds depth_i cos(omega_m t + phase_i) + omega0_i from the drive to
/// the model diagonal.  Samples are taken at `times` (strictly increasing,
/// starting from t = 0) by dense stepping in between.  `dt` must respect the
/// stability cap 2*pi / (200 * fastest rate in H); when omitted the step is
/// a quarter of the cap.  Norm drift beyond 1e-12 is renormalized and
/// counted; drift beyond 1e-6 aborts with a step-size error.  Windows that
/// would need more than 2e8 substeps are rejected up front.
Trajectory evolve_driven(const lattice::LatticeModel& base,
                         floquet::DriveSpec drive, const StateVector& psi0,
                         const std::vector<double>& times, double dt = 0.0);

/// Oscillation period of one site's occupation, read as twice the time of
/// the global minimum (parabolic refinement between samples).  The global
/// minimum is immune to the fast micromotion ripple that makes the first
/// local dip unreliable.  Returns a negative value if no interior minimum
/// exists.
double oscillation_period(const Trajectory& trajectory, std::size_t site);

}  // namespace cqlad::dynamics
