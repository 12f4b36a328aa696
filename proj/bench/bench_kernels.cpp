// Times each hot kernel in its serial and OpenMP variants and prints the
// ratio.  The two variants are required to agree bit for bit, so the bench
// double-checks that while it runs.

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cqlad/kernels.hpp"

using namespace cqlad;
using std::complex;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename Fn>
double best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = clock_type::now();
    fn();
    const std::chrono::duration<double, std::milli> elapsed =
        clock_type::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

void row(const char* name, std::size_t size, double serial_ms, double par_ms) {
  std::printf("%-14s %10zu %11.3f ms %11.3f ms %8.2fx\n", name, size,
              serial_ms, par_ms, serial_ms / par_ms);
}

int mismatches = 0;

void require_equal(const complex<double>* a, const complex<double>* b,
                   std::size_t n, const char* what) {
  for (std::size_t s = 0; s < n; ++s)
    if (a[s] != b[s]) {
      std::fprintf(stderr, "%s: serial and parallel differ at %zu\n", what, s);
      ++mismatches;
      return;
    }
}

void require_equal(const double* a, const double* b, std::size_t n,
                   const char* what) {
  for (std::size_t s = 0; s < n; ++s)
    if (a[s] != b[s]) {
      std::fprintf(stderr, "%s: serial and parallel differ at %zu\n", what, s);
      ++mismatches;
      return;
    }
}

}  // namespace

int main() {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  std::printf("%-14s %10s %14s %14s %9s\n", "kernel", "size", "serial",
              "parallel", "speedup");

  {
    const std::size_t n = 1 << 16;
    std::vector<double> theta(n);
    for (auto& t : theta) t = dist(rng) * 3.14159;
    std::vector<double> n0(n), nx(n), nz(n), m0(n), mx(n), mz(n);
    const double serial_ms = best_of(5, [&] {
      kernels::serial::bloch_sweep(theta.data(), n, 1.0, 0.5, 0.7, n0.data(),
                                   nx.data(), nz.data());
    });
    const double par_ms = best_of(5, [&] {
      kernels::par::bloch_sweep(theta.data(), n, 1.0, 0.5, 0.7, m0.data(),
                                mx.data(), mz.data());
    });
    require_equal(n0.data(), m0.data(), n, "bloch_sweep n0");
    require_equal(nz.data(), mz.data(), n, "bloch_sweep nz");
    row("bloch_sweep", n, serial_ms, par_ms);
  }

  {
    const std::size_t n = 768;
    Eigen::MatrixXcd h(n, n);
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c)
        h(r, c) = complex<double>{dist(rng), dist(rng)};
    h = 0.5 * (h + h.adjoint()).eval();
    std::vector<complex<double>> x(n), ya(n), yb(n);
    for (auto& z : x) z = {dist(rng), dist(rng)};
    const double serial_ms =
        best_of(5, [&] { kernels::serial::matvec(h, x.data(), ya.data()); });
    const double par_ms =
        best_of(5, [&] { kernels::par::matvec(h, x.data(), yb.data()); });
    require_equal(ya.data(), yb.data(), n, "matvec");
    row("matvec", n, serial_ms, par_ms);
  }

  {
    const std::size_t n = 1 << 20;
    std::vector<complex<double>> psi(n);
    for (auto& z : psi) z = {dist(rng), dist(rng)};
    std::vector<double> a(n), b(n);
    const double serial_ms = best_of(
        5, [&] { kernels::serial::occupations(psi.data(), n, a.data()); });
    const double par_ms = best_of(
        5, [&] { kernels::par::occupations(psi.data(), n, b.data()); });
    require_equal(a.data(), b.data(), n, "occupations");
    row("occupations", n, serial_ms, par_ms);
  }

  {
    const std::size_t n = 512;
    kernels::DrivenSystem sys;
    sys.h0 = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t s = 0; s + 1 < n; ++s) {
      sys.h0(s, s + 1) = complex<double>{dist(rng), dist(rng)};
      sys.h0(s + 1, s) = std::conj(sys.h0(s, s + 1));
    }
    sys.onsite.resize(n);
    sys.depth.resize(n);
    sys.phase.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      sys.onsite[s] = dist(rng);
      sys.depth[s] = std::abs(dist(rng));
      sys.phase[s] = dist(rng);
    }
    sys.omega_m = 3.0;
    std::vector<complex<double>> x(n), ya(n), yb(n);
    for (auto& z : x) z = {dist(rng), dist(rng)};
    const double serial_ms = best_of(
        5, [&] { sys.apply_serial(0.37, x.data(), ya.data()); });
    const double par_ms =
        best_of(5, [&] { sys.apply_par(0.37, x.data(), yb.data()); });
    require_equal(ya.data(), yb.data(), n, "driven apply");
    row("driven_apply", n, serial_ms, par_ms);

    // Full integrator loop through the dispatcher, for scale.
    std::vector<complex<double>> psi(n, complex<double>{0.0, 0.0});
    psi[0] = 1.0;
    kernels::Rk4Scratch scratch;
    scratch.resize(n);
    const double rk4_ms = best_of(3, [&] {
      for (int s = 0; s < 50; ++s)
        kernels::rk4_step(sys, s * 1e-3, 1e-3, psi.data(), scratch);
    });
    std::printf("%-14s %10zu %11.3f ms per 50 steps\n", "rk4_step", n, rk4_ms);
  }

  if (mismatches > 0) {
    std::fprintf(stderr, "%d kernel(s) drifted between variants\n", mismatches);
    return 1;
  }
  return 0;
}
