#include "cqlad/floquet.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cqlad/constants.hpp"
#include "cqlad/quadrature.hpp"

namespace cqlad::floquet {

namespace {

double fold_phase(double phase) {
  double w = std::remainder(phase, 2.0 * constants::pi);
  if (w <= -constants::pi) w += 2.0 * constants::pi;
  return w;
}

// Drive phasor of a bond (i -> j): A e^{i Theta} =
// (depth_j e^{i phase_j} - depth_i e^{i phase_i}) / omega_m.
std::complex<double> bond_phasor(const DriveSpec& drive, std::size_t i,
                                 std::size_t j) {
  const SiteDrive& si = drive.sites[i];
  const SiteDrive& sj = drive.sites[j];
  return (std::polar(sj.depth, sj.phase) - std::polar(si.depth, si.phase)) /
         drive.omega_m;
}

void require_pair(const DriveSpec& drive) {
  if (drive.sites.size() != 2)
    throw std::invalid_argument("drive must describe exactly two sites");
}

void require_coupling(double j) {
  if (!std::isfinite(j) || j < 0.0)
    throw std::invalid_argument("bare coupling must be finite and >= 0");
}

}  // namespace

void DriveSpec::validate() {
  if (!std::isfinite(omega_m) || omega_m <= 0.0)
    throw std::invalid_argument("modulation frequency must be > 0");
  for (SiteDrive& s : sites) {
    if (!std::isfinite(s.omega0) || !std::isfinite(s.depth) ||
        !std::isfinite(s.phase))
      throw std::invalid_argument("drive fields must be finite");
    if (s.depth < 0.0)
      throw std::invalid_argument("modulation depth must be >= 0");
    s.phase = fold_phase(s.phase);
  }
}

SidebandCoupling sideband_coupling(double j, DriveSpec drive, int n) {
  drive.validate();
  require_pair(drive);
  require_coupling(j);
  const std::complex<double> p = bond_phasor(drive, 0, 1);
  SidebandCoupling out;
  out.order = n;
  out.index = std::abs(p);
  out.angle = out.index > 0.0 ? std::arg(p) : 0.0;
  out.amplitude = j * bessel_jn(n, out.index) *
                  std::polar(1.0, n * out.angle);
  return out;
}

std::complex<double> sideband_quadrature(double j, DriveSpec drive, int n,
                                         double tau) {
  drive.validate();
  require_pair(drive);
  require_coupling(j);
  const std::complex<double> p = bond_phasor(drive, 0, 1);
  const double index = std::abs(p);
  const double angle = index > 0.0 ? std::arg(p) : 0.0;
  // One period in the dimensionless phase s = omega_m * t, so the absolute
  // tolerance applies to J_n / J no matter the physical frequency scale.
  const double s0 = drive.omega_m * tau;
  const auto integrand = [&](double s) {
    return std::exp(std::complex<double>(
        0.0, index * std::sin(s + angle) - n * s));
  };
  return j / (2.0 * constants::pi) *
         quadrature::integrate_complex(integrand, s0, s0 + 2.0 * constants::pi);
}

EffectiveModel effective_hamiltonian(const lattice::LatticeModel& model,
                                     DriveSpec drive,
                                     std::optional<int> order) {
  drive.validate();
  if (drive.sites.size() != model.size())
    throw std::invalid_argument("drive must cover every site of the model");

  EffectiveModel out{lattice::LatticeModel(model.size(), model.boundary()), {}};
  for (std::size_t s = 0; s < model.size(); ++s) {
    out.model.set_onsite(s, model.onsite(s));
    out.model.set_label(s, model.label(s));
  }
  for (const lattice::Hopping& hop : model.hoppings()) {
    const double delta =
        (drive.sites[hop.j].omega0 - drive.sites[hop.i].omega0) /
        drive.omega_m;
    if (std::abs(delta) > 64.5)
      throw std::range_error("bond detuning beyond supported harmonic range");
    const long nearest = std::lround(delta);
    if (std::abs(delta - static_cast<double>(nearest)) >= 0.05) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "bond (%zu,%zu) is off-resonant: %.6g modulation quanta "
                    "from harmonic %ld",
                    hop.i, hop.j, delta - static_cast<double>(nearest),
                    nearest);
      throw std::domain_error(msg);
    }
    const int n = order ? *order : static_cast<int>(nearest);
    const std::complex<double> p = bond_phasor(drive, hop.i, hop.j);
    BondAssignment assign;
    assign.i = hop.i;
    assign.j = hop.j;
    assign.order = n;
    assign.index = std::abs(p);
    assign.angle = assign.index > 0.0 ? std::arg(p) : 0.0;
    assign.detuning = delta - n;
    out.model.add_hopping(hop.i, hop.j,
                          hop.amplitude * bessel_jn(n, assign.index) *
                              std::polar(1.0, n * assign.angle));
    out.bonds.push_back(assign);
  }
  return out;
}

}  // namespace cqlad::floquet
