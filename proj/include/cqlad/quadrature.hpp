#pragma once

#include <complex>
#include <functional>

namespace cqlad::quadrature {

/// Outcome of an adaptive integration.
struct Result {
  double value = 0.0;
  double error = 0.0;  // summed per-panel error estimate
  int panels = 0;      // panels in the final partition
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b] to an
/// absolute tolerance.  Bisects the worst panel until the summed error
/// estimate drops below abs_tol; throws std::runtime_error if the panel
/// budget runs out first.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_panels = 4096);

/// Real and imaginary parts integrated independently to the same tolerance.
std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol = 1e-12, int max_panels = 4096);

}  // namespace cqlad::quadrature
