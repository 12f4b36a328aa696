#include "cqlad/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace cqlad::kernels {

namespace {

inline void bloch_point_at(double theta, double t_d, double t_v, double phi,
                           double& n0, double& nx, double& nz) {
  n0 = -2.0 * std::cos(theta) * std::cos(phi);
  nx = -2.0 * t_d * std::cos(theta) - t_v;
  nz = 2.0 * std::sin(theta) * std::sin(phi);
}

inline std::complex<double> row_dot(const Eigen::MatrixXcd& h,
                                    const std::complex<double>* x,
                                    std::size_t i) {
  // Hermitian matrix: row i equals the conjugate of column i, which is the
  // contiguous direction of Eigen's column-major storage.
  const std::complex<double>* col = h.data() + i * static_cast<std::size_t>(h.rows());
  std::complex<double> acc{0.0, 0.0};
  const std::size_t n = static_cast<std::size_t>(h.rows());
  for (std::size_t j = 0; j < n; ++j) acc += std::conj(col[j]) * x[j];
  return acc;
}

}  // namespace

namespace serial {

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz) {
  for (std::size_t s = 0; s < n; ++s)
    bloch_point_at(theta[s], t_d, t_v, phi, n0[s], nx[s], nz[s]);
}

void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y) {
  const std::size_t n = static_cast<std::size_t>(h.rows());
  for (std::size_t i = 0; i < n; ++i) y[i] = row_dot(h, x, i);
}

void occupations(const std::complex<double>* psi, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(psi[i]);
}

}  // namespace serial

namespace par {

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz) {
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < n; ++s)
    bloch_point_at(theta[s], t_d, t_v, phi, n0[s], nx[s], nz[s]);
}

void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y) {
  const std::size_t n = static_cast<std::size_t>(h.rows());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) y[i] = row_dot(h, x, i);
}

void occupations(const std::complex<double>* psi, std::size_t n, double* out) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(psi[i]);
}

}  // namespace par

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz) {
  if (n >= parallel_threshold)
    par::bloch_sweep(theta, n, t_d, t_v, phi, n0, nx, nz);
  else
    serial::bloch_sweep(theta, n, t_d, t_v, phi, n0, nx, nz);
}

void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y) {
  if (static_cast<std::size_t>(h.rows()) >= parallel_threshold)
    par::matvec(h, x, y);
  else
    serial::matvec(h, x, y);
}

void occupations(const std::complex<double>* psi, std::size_t n, double* out) {
  if (n >= parallel_threshold)
    par::occupations(psi, n, out);
  else
    serial::occupations(psi, n, out);
}

void DrivenSystem::apply_serial(double t, const std::complex<double>* x,
                                std::complex<double>* y) const {
  const std::size_t n = size();
  const std::complex<double> minus_i{0.0, -1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double eps =
        onsite[i] + depth[i] * std::cos(omega_m * t + phase[i]);
    y[i] = minus_i * (row_dot(h0, x, i) + eps * x[i]);
  }
}

void DrivenSystem::apply_par(double t, const std::complex<double>* x,
                             std::complex<double>* y) const {
  const std::size_t n = size();
  const std::complex<double> minus_i{0.0, -1.0};
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const double eps =
        onsite[i] + depth[i] * std::cos(omega_m * t + phase[i]);
    y[i] = minus_i * (row_dot(h0, x, i) + eps * x[i]);
  }
}

void DrivenSystem::apply(double t, const std::complex<double>* x,
                         std::complex<double>* y) const {
  if (size() >= parallel_threshold)
    apply_par(t, x, y);
  else
    apply_serial(t, x, y);
}

void Rk4Scratch::resize(std::size_t n) {
  k1.resize(n);
  k2.resize(n);
  k3.resize(n);
  k4.resize(n);
  tmp.resize(n);
}

void rk4_step(const DrivenSystem& sys, double t, double dt,
              std::complex<double>* psi, Rk4Scratch& s) {
  const std::size_t n = sys.size();
  if (s.k1.size() != n) s.resize(n);
  const double half = 0.5 * dt;

  sys.apply(t, psi, s.k1.data());
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = psi[i] + half * s.k1[i];
  sys.apply(t + half, s.tmp.data(), s.k2.data());
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = psi[i] + half * s.k2[i];
  sys.apply(t + half, s.tmp.data(), s.k3.data());
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = psi[i] + dt * s.k3[i];
  sys.apply(t + dt, s.tmp.data(), s.k4.data());

  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    psi[i] += sixth * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

}  // namespace cqlad::kernels
