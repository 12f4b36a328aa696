#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cqlad::circuit {

/// Non-fatal diagnostics (regime violations) collected when a sink is given.
using Warnings = std::vector<std::string>;

/// Capacitively shunted Josephson junction.  Exactly one of capacitance /
/// charging energy is the source; the other is derived via E_C = e^2 / 2C.
struct TransmonSpec {
  double capacitance = 0.0;      // C (farads)
  double junction_energy = 0.0;  // E_J (joules)
  double charging_energy = 0.0;  // E_C (joules)

  static TransmonSpec from_capacitance(double c, double e_j);
  static TransmonSpec from_charging_energy(double e_c, double e_j);
  /// Checked factory: throws std::invalid_argument unless exactly one of
  /// capacitance / charging energy is supplied.
  static TransmonSpec make(std::optional<double> capacitance,
                           std::optional<double> charging_energy, double e_j);

  /// Expansion parameter sqrt(8 E_C / E_J); < 1 in the transmon regime.
  double epsilon() const;
};

/// Oscillator parameters of a single transmon (all angular frequencies).
struct TransmonParams {
  double omega0 = 0.0;        // bare LC frequency, L = phi0^2 / E_J
  double delta_omega0 = 0.0;  // anharmonic frequency shift
  double kerr = 0.0;          // self-Kerr strength
  double kerr6 = 0.0;         // 6th-order correction, (epsilon/3) * kerr
  double epsilon = 0.0;
};

TransmonParams transmon_params(const TransmonSpec& spec,
                               Warnings* warnings = nullptr);

/// Node capacitance matrix of two transmons bridged by C_J.
Eigen::Matrix2d capacitance_matrix(double c_l, double c_r, double c_j);

/// Closed-form inverse: diagonal (C_other + C_J)/D, off-diagonal C_J/D with
/// D = C_l C_r + C_l C_J + C_r C_J.
Eigen::Matrix2d capacitance_inverse(double c_l, double c_r, double c_j);

/// Two transmons bridged by one coupler: either an inductance L_J (infinite
/// = absent) or a capacitance C_J (zero = absent), never both.
struct CoupledCircuitSpec {
  TransmonSpec left;
  TransmonSpec right;
  double coupling_inductance = std::numeric_limits<double>::infinity();
  double coupling_capacitance = 0.0;
};

/// Effective oscillator pair.  `hopping` is the excitation-conserving
/// exchange rate: >= 0 for inductive coupling, <= 0 for capacitive (the
/// interaction enters with opposite sign).  l_left/l_right hold the dressed
/// inductances for the inductive branch and the bare ones otherwise.
struct CoupledParams {
  double omega0_left = 0.0;   // rad/s
  double omega0_right = 0.0;  // rad/s
  double hopping = 0.0;       // J (rad/s)
  double l_left = 0.0;        // henries
  double l_right = 0.0;       // henries
};

CoupledParams coupled_params(const CoupledCircuitSpec& spec,
                             Warnings* warnings = nullptr);

/// Harmonic modulation of one junction energy:
/// E_J(t) = E_J0 + e_j cos(omega_m t + phase).
struct ModulationSpec {
  double e_j = 0.0;      // joules
  double omega_m = 0.0;  // rad/s
  double phase = 0.0;    // radians
};

enum class Side { left, right };

/// Drive depth Omega_0 = (omega0/2) e_j L_J / (phi0^2 + E_J0 L_J) seen by
/// the modulated site; feeds floquet::SiteDrive::depth.
double modulation_depth(const CoupledCircuitSpec& spec,
                        const ModulationSpec& mod, Side side,
                        Warnings* warnings = nullptr);

enum class PumpKind { beam_splitter, two_mode_squeeze, self };

/// One near-resonant quadratic term kept by the rotating-wave selection.
/// Each entry stands for the operator plus its Hermitian conjugate, so the
/// selected set is Hermitian by construction.
struct PumpTerm {
  PumpKind kind = PumpKind::beam_splitter;
  std::size_t i = 0;      // mode indices, 0-based, i <= j
  std::size_t j = 0;
  double detuning = 0.0;  // rotating-frame mismatch (rad/s)
  double phase = 0.0;     // pump phase carried by the term
};

/// Enumerate all quadratic pump products over the given modes and keep those
/// whose rotating-frame detuning is within the tolerance (default: 1e-3 of
/// the smallest mode spacing).  Selections mixing different term kinds are
/// rejected as ambiguous.
std::vector<PumpTerm> pump_term_select(
    const std::vector<double>& mode_freqs, double pump_freq,
    std::optional<double> tolerance = std::nullopt, double pump_phase = 0.0);

}  // namespace cqlad::circuit
