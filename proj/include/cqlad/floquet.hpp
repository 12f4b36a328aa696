#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "cqlad/lattice.hpp"

namespace cqlad::floquet {

/// Bessel function of the first kind J_n(x).  Ascending series for
/// x <= 2*sqrt(n+1), Miller backward recurrence above; throws
/// std::range_error for |n| > 64 or |x| > 1e4.
double bessel_jn(int n, double x);

/// One harmonically modulated site:
/// omega(t) = omega0 + depth * cos(omega_m * t + phase).
struct SiteDrive {
  double omega0 = 0.0;  // static frequency (rad/s)
  double depth = 0.0;   // modulation depth (rad/s), >= 0
  double phase = 0.0;   // modulation phase (radians), stored in (-pi, pi]
};

/// Common-frequency harmonic modulation of a set of sites.
struct DriveSpec {
  double omega_m = 0.0;  // modulation frequency (rad/s), > 0
  std::vector<SiteDrive> sites;

  /// Throws std::invalid_argument unless omega_m > 0, every depth >= 0 and
  /// every field is finite.  Phases are folded into (-pi, pi].
  void validate();
};

/// Static sideband amplitude picked up by a modulated bond.
struct SidebandCoupling {
  int order = 0;                         // harmonic n
  std::complex<double> amplitude;        // J_n, same units as the bare J
  double index = 0.0;                    // modulation index A (dimensionless)
  double angle = 0.0;                    // phasor angle Theta (radians)
};

/// Closed form J_n = J * J_n(A) * exp(i n Theta) where A e^{i Theta} =
/// (depth_2 e^{i phase_2} - depth_1 e^{i phase_1}) / omega_m.  The drive must
/// carry exactly the bond's two endpoints, source first.
SidebandCoupling sideband_coupling(double j, DriveSpec drive, int n);

/// The same amplitude as a numerical average over one modulation period
/// starting at tau.  Integrates in the dimensionless phase variable so the
/// tolerance is meaningful at any omega_m; oracle for sideband_coupling.
std::complex<double> sideband_quadrature(double j, DriveSpec drive, int n,
                                         double tau = 0.0);

/// Which harmonic a bond was averaged onto and with what drive phasor.
struct BondAssignment {
  std::size_t i = 0;
  std::size_t j = 0;
  int order = 0;          // n = round((omega0_j - omega0_i) / omega_m)
  double index = 0.0;     // modulation index A
  double angle = 0.0;     // phasor angle Theta
  double detuning = 0.0;  // residual (omega0_j - omega0_i)/omega_m - n
};

/// Time-averaged model plus the per-bond harmonic bookkeeping.
struct EffectiveModel {
  lattice::LatticeModel model;
  std::vector<BondAssignment> bonds;
};

/// Average the modulated model over one period: every bond amplitude is
/// multiplied by J_n(A) e^{i n Theta} with n picked per bond from the static
/// detuning (or forced to `order` for all bonds).  A bond further than 0.05
/// modulation periods from its nearest harmonic is rejected.  Onsite
/// energies pass through unchanged; the rotating frame absorbs them.
EffectiveModel effective_hamiltonian(const lattice::LatticeModel& model,
                                     DriveSpec drive,
                                     std::optional<int> order = std::nullopt);

}  // namespace cqlad::floquet
