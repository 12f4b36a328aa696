#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

// Hot loops shared by the band-structure and time-evolution code paths.
// Every kernel exists twice: a plain serial reference under kernels::serial
// and an OpenMP variant under kernels::par that parallelizes only over
// independent output elements (rows, grid points, sites), so both variants
// produce bit-identical results.  The unqualified functions dispatch by
// problem size; bench_kernels compares the two variants directly.

namespace cqlad::kernels {

/// Problem size below which the dispatchers stay serial.
inline constexpr std::size_t parallel_threshold = 256;

namespace serial {

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz);

/// y = H x for Hermitian H (column-major); row i is read as conj(column i).
void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y);

void occupations(const std::complex<double>* psi, std::size_t n, double* out);

}  // namespace serial

namespace par {

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz);

void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y);

void occupations(const std::complex<double>* psi, std::size_t n, double* out);

}  // namespace par

void bloch_sweep(const double* theta, std::size_t n, double t_d, double t_v,
                 double phi, double* n0, double* nx, double* nz);

void matvec(const Eigen::MatrixXcd& h, const std::complex<double>* x,
            std::complex<double>* y);

void occupations(const std::complex<double>* psi, std::size_t n, double* out);

/// Time-periodic single-particle Hamiltonian
///   H(t) = h0 + diag(onsite_i + depth_i cos(omega_m t + phase_i))
/// with a static hop matrix and modulated on-site energies.
struct DrivenSystem {
  Eigen::MatrixXcd h0;            // hops only, Hermitian, zero diagonal
  std::vector<double> onsite;     // static frequencies omega0_i
  std::vector<double> depth;      // modulation depths Omega0_i
  std::vector<double> phase;      // modulation phases phi_i
  double omega_m = 0.0;

  std::size_t size() const { return onsite.size(); }

  /// y = -i H(t) x.  Dispatches by size like the other kernels.
  void apply(double t, const std::complex<double>* x, std::complex<double>* y) const;
  void apply_serial(double t, const std::complex<double>* x, std::complex<double>* y) const;
  void apply_par(double t, const std::complex<double>* x, std::complex<double>* y) const;
};

struct Rk4Scratch {
  std::vector<std::complex<double>> k1, k2, k3, k4, tmp;
  void resize(std::size_t n);
};

/// One classic fixed-step RK4 update of i dpsi/dt = H(t) psi.
void rk4_step(const DrivenSystem& sys, double t, double dt,
              std::complex<double>* psi, Rk4Scratch& scratch);

}  // namespace cqlad::kernels
