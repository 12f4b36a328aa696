#include "cqlad/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "cqlad/constants.hpp"
#include "cqlad/kernels.hpp"

namespace cqlad::dynamics {

namespace {

void check_normalized(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw std::domain_error("state must be normalized");
}

void check_times(const std::vector<double>& times) {
  for (std::size_t s = 0; s < times.size(); ++s) {
    if (!std::isfinite(times[s]))
      throw std::invalid_argument("sample times must be finite");
    if (s > 0 && times[s] <= times[s - 1])
      throw std::invalid_argument("sample times must be strictly increasing");
  }
}

}  // namespace

std::vector<double> occupations(const StateVector& psi) {
  std::vector<double> out(static_cast<std::size_t>(psi.size()));
  kernels::occupations(psi.data(), out.size(), out.data());
  return out;
}

Trajectory evolve_static(const lattice::LatticeModel& model,
                         const StateVector& psi0,
                         const std::vector<double>& times) {
  if (psi0.size() != static_cast<Eigen::Index>(model.size()))
    throw std::invalid_argument("state size does not match the model");
  check_normalized(psi0);
  check_times(times);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(model.dense());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed");
  const Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() * psi0;

  Trajectory out;
  for (double t : times) {
    StateVector psi;
    if (t == 0.0) {
      psi = psi0;
    } else {
      Eigen::VectorXcd phased(coeffs.size());
      for (Eigen::Index p = 0; p < coeffs.size(); ++p)
        phased(p) = coeffs(p) * std::polar(1.0, -solver.eigenvalues()(p) * t);
      psi = solver.eigenvectors() * phased;
    }
    out.times.push_back(t);
    out.occupations.push_back(occupations(psi));
    out.states.push_back(std::move(psi));
  }
  return out;
}

lattice::LatticeModel plaquette_model() {
  return lattice::build_creutz(2, 1.0, 0.0, constants::pi / 2,
                               lattice::Boundary::open);
}

PlaquetteModes plaquette_modes() {
  const std::complex<double> p = std::polar(1.0, constants::pi / 4);
  const std::complex<double> q = std::conj(p);
  PlaquetteModes modes;
  modes.plus = StateVector(4);
  modes.plus << q, p, -p, -q;
  modes.plus *= 0.5;
  modes.minus = StateVector(4);
  modes.minus << p, q, q, p;
  modes.minus *= 0.5;
  modes.zero1 = StateVector(4);
  modes.zero1 << q, 0.0, p, 0.0;
  modes.zero1 /= std::sqrt(2.0);
  modes.zero2 = StateVector(4);
  modes.zero2 << 0.0, p, 0.0, q;
  modes.zero2 /= std::sqrt(2.0);
  return modes;
}

PlaquetteSample plaquette_closed_form(double t) {
  const double c = std::cos(2.0 * t);
  const double s = std::sin(2.0 * t);
  PlaquetteSample out;
  out.amplitude = {std::complex<double>(0.5 * (1.0 + c), 0.0),
                   std::complex<double>(0.5 * s, 0.0),
                   std::complex<double>(0.0, 0.5 * (1.0 - c)),
                   std::complex<double>(0.0, 0.5 * s)};
  for (int m = 0; m < 4; ++m) out.occupation[m] = std::norm(out.amplitude[m]);
  return out;
}

double driven_step_cap(const lattice::LatticeModel& base,
                       floquet::DriveSpec drive) {
  drive.validate();
  if (drive.sites.size() != base.size())
    throw std::invalid_argument("drive must cover every site of the model");
  // Fastest rate present: diagonal reach |onsite + omega0| + depth, bond
  // magnitudes, and omega_m — the latter only when some depth is nonzero,
  // so undriven runs do not depend on omega_m in any way.
  double rate = 0.0;
  bool modulated = false;
  for (std::size_t s = 0; s < base.size(); ++s) {
    rate = std::max(rate, std::abs(base.onsite(s) + drive.sites[s].omega0) +
                              drive.sites[s].depth);
    modulated = modulated || drive.sites[s].depth > 0.0;
  }
  for (const lattice::Hopping& hop : base.hoppings())
    rate = std::max(rate, std::abs(hop.amplitude));
  if (modulated) rate = std::max(rate, drive.omega_m);
  return rate > 0.0 ? constants::pi / (100.0 * rate)
                    : std::numeric_limits<double>::infinity();
}

Trajectory evolve_driven(const lattice::LatticeModel& base,
                         floquet::DriveSpec drive, const StateVector& psi0,
                         const std::vector<double>& times, double dt) {
  drive.validate();
  if (drive.sites.size() != base.size())
    throw std::invalid_argument("drive must cover every site of the model");
  if (psi0.size() != static_cast<Eigen::Index>(base.size()))
    throw std::invalid_argument("state size does not match the model");
  check_normalized(psi0);
  check_times(times);
  if (!times.empty() && times.front() < 0.0)
    throw std::invalid_argument("sample times must start at t >= 0");

  const std::size_t n = base.size();
  kernels::DrivenSystem sys;
  sys.h0 = base.dense();
  sys.onsite.resize(n);
  sys.depth.resize(n);
  sys.phase.resize(n);
  sys.omega_m = drive.omega_m;
  for (std::size_t s = 0; s < n; ++s) {
    const Eigen::Index e = static_cast<Eigen::Index>(s);
    sys.onsite[s] = std::real(sys.h0(e, e)) + drive.sites[s].omega0;
    sys.h0(e, e) = 0.0;
    sys.depth[s] = drive.sites[s].depth;
    sys.phase[s] = drive.sites[s].phase;
  }

  const double cap = driven_step_cap(base, drive);
  double step = dt;
  if (step <= 0.0) {
    step = 0.25 * cap;
  } else if (step > cap * (1.0 + 1e-9)) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "time step %.3g exceeds the stability cap %.3g"
                  " = 2*pi/(200*max rate)",
                  step, cap);
    throw std::invalid_argument(msg);
  }
  if (!std::isfinite(step))
    step = times.empty() || times.back() <= 0.0 ? 1.0 : times.back() / 100.0;

  double substeps = 0.0;
  double prev = 0.0;
  for (double target : times) {
    if (target > prev) substeps += std::ceil((target - prev) / step);
    prev = target;
  }
  if (substeps > 2e8) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "integration needs %.3g substeps at step %.3g (budget 2e8);"
                  " shorten the time window",
                  substeps, step);
    throw std::invalid_argument(msg);
  }

  Trajectory out;
  StateVector psi = psi0;
  kernels::Rk4Scratch scratch;
  scratch.resize(n);
  double t_cur = 0.0;
  for (double target : times) {
    const double span = target - t_cur;
    if (span > 0.0) {
      const auto subs =
          static_cast<long>(std::max(1.0, std::ceil(span / step)));
      const double h = span / static_cast<double>(subs);
      for (long k = 0; k < subs; ++k) {
        kernels::rk4_step(sys, t_cur + static_cast<double>(k) * h, h,
                          psi.data(), scratch);
        const double norm = psi.norm();  // serial: thread-count independent
        const double drift = std::abs(norm - 1.0);
        if (drift > 1e-6) {
          char msg[128];
          std::snprintf(msg, sizeof msg,
                        "norm drift %.3g at t = %.6g exceeds 1e-6; reduce "
                        "the time step",
                        drift, t_cur + static_cast<double>(k + 1) * h);
          throw std::runtime_error(msg);
        }
        if (drift > 1e-12) {
          psi /= norm;
          ++out.renormalizations;
        }
      }
      t_cur = target;
    }
    out.times.push_back(target);
    out.occupations.push_back(occupations(psi));
    out.states.push_back(psi);
  }
  return out;
}

double oscillation_period(const Trajectory& trajectory, std::size_t site) {
  const std::size_t count = trajectory.times.size();
  if (count < 3) return -1.0;
  std::size_t best = 0;
  for (std::size_t s = 1; s < count; ++s)
    if (trajectory.occupations[s][site] < trajectory.occupations[best][site])
      best = s;
  if (best == 0 || best + 1 == count) return -1.0;
  const double lo = trajectory.occupations[best - 1][site];
  const double mid = trajectory.occupations[best][site];
  const double hi = trajectory.occupations[best + 1][site];
  const double curvature = lo - 2.0 * mid + hi;
  double t_min = trajectory.times[best];
  if (curvature > 0.0) {
    const double shift = 0.5 * (lo - hi) / curvature;  // in grid units
    const double left = trajectory.times[best] - trajectory.times[best - 1];
    const double right = trajectory.times[best + 1] - trajectory.times[best];
    t_min += shift * (shift >= 0.0 ? right : left);
  }
  return 2.0 * t_min;
}

}  // namespace cqlad::dynamics
