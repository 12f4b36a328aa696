#include "cqlad/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cqlad/constants.hpp"

namespace cqlad::circuit {

namespace {

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "%s must be positive and finite", what);
    throw std::domain_error(msg);
  }
}

void check_spec(const TransmonSpec& spec) {
  require_positive(spec.capacitance, "capacitance");
  require_positive(spec.junction_energy, "junction energy");
  require_positive(spec.charging_energy, "charging energy");
}

void warn(Warnings* sink, const std::string& message) {
  if (sink) sink->push_back(message);
}

}  // namespace

TransmonSpec TransmonSpec::from_capacitance(double c, double e_j) {
  require_positive(c, "capacitance");
  require_positive(e_j, "junction energy");
  const double e = constants::elementary_charge;
  return {c, e_j, e * e / (2.0 * c)};
}

TransmonSpec TransmonSpec::from_charging_energy(double e_c, double e_j) {
  require_positive(e_c, "charging energy");
  require_positive(e_j, "junction energy");
  const double e = constants::elementary_charge;
  return {e * e / (2.0 * e_c), e_j, e_c};
}

TransmonSpec TransmonSpec::make(std::optional<double> capacitance,
                                std::optional<double> charging_energy,
                                double e_j) {
  if (capacitance.has_value() == charging_energy.has_value())
    throw std::invalid_argument(
        "specify exactly one of capacitance and charging energy");
  return capacitance ? from_capacitance(*capacitance, e_j)
                     : from_charging_energy(*charging_energy, e_j);
}

double TransmonSpec::epsilon() const {
  return std::sqrt(8.0 * charging_energy / junction_energy);
}

TransmonParams transmon_params(const TransmonSpec& spec, Warnings* warnings) {
  check_spec(spec);
  TransmonParams out;
  out.epsilon = spec.epsilon();
  if (out.epsilon >= 1.0) {
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "outside the transmon regime: sqrt(8 E_C/E_J) = %.6g >= 1",
                  out.epsilon);
    warn(warnings, msg);
  }
  const double phi0 = constants::phi0;
  const double inductance = phi0 * phi0 / spec.junction_energy;
  out.omega0 = 1.0 / std::sqrt(inductance * spec.capacitance);
  const double damp = std::exp(-0.25 * out.epsilon);
  out.delta_omega0 =
      std::sqrt(2.0 * spec.junction_energy * spec.charging_energy) *
      (1.0 - damp) / constants::hbar;
  out.kerr = spec.charging_energy * damp / (2.0 * constants::hbar);
  out.kerr6 = (out.epsilon / 3.0) * out.kerr;
  return out;
}

Eigen::Matrix2d capacitance_matrix(double c_l, double c_r, double c_j) {
  require_positive(c_l, "left capacitance");
  require_positive(c_r, "right capacitance");
  if (!std::isfinite(c_j) || c_j < 0.0)
    throw std::domain_error("coupling capacitance must be >= 0 and finite");
  Eigen::Matrix2d c;
  c << c_l + c_j, -c_j, -c_j, c_r + c_j;
  return c;
}

Eigen::Matrix2d capacitance_inverse(double c_l, double c_r, double c_j) {
  require_positive(c_l, "left capacitance");
  require_positive(c_r, "right capacitance");
  if (!std::isfinite(c_j) || c_j < 0.0)
    throw std::domain_error("coupling capacitance must be >= 0 and finite");
  const double d = c_l * c_r + c_l * c_j + c_r * c_j;
  if (d <= 0.0) throw std::domain_error("capacitance matrix is singular");
  Eigen::Matrix2d inv;
  inv << (c_r + c_j) / d, c_j / d, c_j / d, (c_l + c_j) / d;
  return inv;
}

CoupledParams coupled_params(const CoupledCircuitSpec& spec,
                             Warnings* warnings) {
  check_spec(spec.left);
  check_spec(spec.right);
  const double l_j = spec.coupling_inductance;
  const double c_j = spec.coupling_capacitance;
  if (std::isnan(l_j) || l_j <= 0.0)
    throw std::domain_error("coupling inductance must be positive");
  if (!std::isfinite(c_j) || c_j < 0.0)
    throw std::domain_error("coupling capacitance must be >= 0 and finite");
  if (std::isfinite(l_j) && c_j > 0.0)
    throw std::invalid_argument(
        "simultaneous inductive and capacitive coupling is not supported");

  const double phi0_sq = constants::phi0 * constants::phi0;
  CoupledParams out;
  if (c_j > 0.0) {
    // Capacitive branch: the bridge dresses the capacitances instead of the
    // inductances, and the exchange term enters with the opposite sign.
    out.l_left = phi0_sq / spec.left.junction_energy;
    out.l_right = phi0_sq / spec.right.junction_energy;
    const Eigen::Matrix2d inv =
        capacitance_inverse(spec.left.capacitance, spec.right.capacitance,
                            c_j);
    const double ct_l = 1.0 / inv(0, 0);
    const double ct_r = 1.0 / inv(1, 1);
    out.omega0_left = 1.0 / std::sqrt(ct_l * out.l_left);
    out.omega0_right = 1.0 / std::sqrt(ct_r * out.l_right);
    out.hopping = -0.5 * std::sqrt(ct_l * ct_r) * inv(0, 1) *
                  std::sqrt(out.omega0_left * out.omega0_right);
  } else {
    const double inv_lj = std::isfinite(l_j) ? 1.0 / l_j : 0.0;
    out.l_left =
        1.0 / (inv_lj + spec.left.junction_energy / phi0_sq);
    out.l_right =
        1.0 / (inv_lj + spec.right.junction_energy / phi0_sq);
    out.omega0_left = 1.0 / std::sqrt(spec.left.capacitance * out.l_left);
    out.omega0_right = 1.0 / std::sqrt(spec.right.capacitance * out.l_right);
    out.hopping = 0.5 * std::sqrt(out.l_left * out.l_right) * inv_lj *
                  std::sqrt(out.omega0_left * out.omega0_right);
  }
  if (spec.left.epsilon() >= 1.0 || spec.right.epsilon() >= 1.0)
    warn(warnings, "outside the transmon regime on at least one side");
  return out;
}

double modulation_depth(const CoupledCircuitSpec& spec,
                        const ModulationSpec& mod, Side side,
                        Warnings* warnings) {
  if (!std::isfinite(mod.e_j) || mod.e_j < 0.0)
    throw std::domain_error("modulation amplitude must be >= 0 and finite");
  require_positive(mod.omega_m, "modulation frequency");
  const CoupledParams base = coupled_params(spec, warnings);
  const TransmonSpec& site = side == Side::left ? spec.left : spec.right;
  const double omega0 =
      side == Side::left ? base.omega0_left : base.omega0_right;
  if (mod.e_j >= 0.2 * site.junction_energy) {
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "modulation amplitude is %.3g of the junction energy; the "
                  "linearization assumes << 1",
                  mod.e_j / site.junction_energy);
    warn(warnings, msg);
  }
  const double phi0_sq = constants::phi0 * constants::phi0;
  const double l_j = spec.coupling_inductance;
  const double inv_lj = std::isfinite(l_j) ? 1.0 / l_j : 0.0;
  // e_j L_J / (phi0^2 + E_J0 L_J) rewritten to stay finite as L_J -> inf.
  return 0.5 * omega0 * mod.e_j /
         (phi0_sq * inv_lj + site.junction_energy);
}

std::vector<PumpTerm> pump_term_select(const std::vector<double>& mode_freqs,
                                       double pump_freq,
                                       std::optional<double> tolerance,
                                       double pump_phase) {
  if (mode_freqs.empty())
    throw std::invalid_argument("at least one mode frequency required");
  for (double f : mode_freqs) require_positive(f, "mode frequency");
  if (!std::isfinite(pump_freq) || pump_freq < 0.0)
    throw std::domain_error("pump frequency must be >= 0 and finite");

  const std::size_t n = mode_freqs.size();
  double min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      min_spacing =
          std::min(min_spacing, std::abs(mode_freqs[i] - mode_freqs[j]));

  double tol;
  if (tolerance) {
    tol = *tolerance;
  } else {
    if (!std::isfinite(min_spacing))
      throw std::invalid_argument(
          "tolerance required when only one mode is given");
    tol = 1e-3 * min_spacing;
  }
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be > 0");
  if (min_spacing <= tol)
    throw std::invalid_argument(
        "mode frequencies must be distinct beyond the tolerance");

  std::vector<PumpTerm> selected;
  const auto consider = [&](PumpKind kind, std::size_t i, std::size_t j,
                            double detuning, double phase) {
    if (detuning <= tol) selected.push_back({kind, i, j, detuning, phase});
  };
  for (std::size_t i = 0; i < n; ++i) {
    consider(PumpKind::self, i, i,
             std::min(std::abs(pump_freq - 2.0 * mode_freqs[i]), pump_freq),
             pump_phase);
    for (std::size_t j = i + 1; j < n; ++j) {
      consider(PumpKind::beam_splitter, i, j,
               std::abs(pump_freq -
                        std::abs(mode_freqs[i] - mode_freqs[j])),
               pump_phase);
      consider(PumpKind::two_mode_squeeze, i, j,
               std::abs(pump_freq - (mode_freqs[i] + mode_freqs[j])),
               pump_phase);
    }
  }

  for (const PumpTerm& term : selected)
    if (term.kind != selected.front().kind) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "ambiguous pump: terms of different kinds within "
                    "tolerance, e.g. kinds %d (%zu,%zu) and %d (%zu,%zu)",
                    static_cast<int>(selected.front().kind),
                    selected.front().i, selected.front().j,
                    static_cast<int>(term.kind), term.i, term.j);
      throw std::invalid_argument(msg);
    }
  return selected;
}

}  // namespace cqlad::circuit
