#include "cqlad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace cqlad::quadrature {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (positive half); the odd-indexed
// entries plus the midpoint are the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b, value, error, floor;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One K15 evaluation with the QUADPACK-style error estimate: the raw
// |K15 - G7| difference is damped by the measured variation of f so smooth
// panels are not subdivided forever, and a round-off floor is applied.
Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double fsum = fv1[j] + fv2[j];
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  resasc *= std::abs(half);
  resabs *= std::abs(half);

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 50.0 * eps * resabs;
  return {a, b, resk * half, std::max(err, floor), floor};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
  if (max_panels < 1) throw std::invalid_argument("max_panels must be >= 1");
  if (a == b) return {0.0, 0.0, 0};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<Panel> heap{eval_panel(f, a, b)};
  std::vector<Panel> retired;  // at the round-off floor or too narrow to split
  double total_error = heap.front().error;
  while (total_error > abs_tol && !heap.empty() &&
         static_cast<int>(heap.size() + retired.size()) < max_panels) {
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.error <= worst.floor || mid <= worst.a || mid >= worst.b) {
      retired.push_back(worst);
      continue;
    }
    total_error -= worst.error;
    for (const Panel& half : {eval_panel(f, worst.a, mid),
                              eval_panel(f, mid, worst.b)}) {
      total_error += half.error;
      heap.push_back(half);
      std::push_heap(heap.begin(), heap.end());
    }
  }
  if (total_error > abs_tol) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "quadrature stalled at error %.3g (requested %.3g, %zu "
                  "panels)",
                  total_error, abs_tol, heap.size() + retired.size());
    throw std::runtime_error(msg);
  }
  heap.insert(heap.end(), retired.begin(), retired.end());

  // Re-sum from smallest |value| for a reproducible, cancellation-friendly
  // total.
  std::sort(heap.begin(), heap.end(), [](const Panel& l, const Panel& r) {
    return std::abs(l.value) < std::abs(r.value);
  });
  Result out;
  out.panels = static_cast<int>(heap.size());
  for (const Panel& p : heap) {
    out.value += p.value;
    out.error += p.error;
  }
  out.value *= sign;
  return out;
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_panels) {
  const Result re = integrate([&](double x) { return f(x).real(); }, a, b,
                              abs_tol, max_panels);
  const Result im = integrate([&](double x) { return f(x).imag(); }, a, b,
                              abs_tol, max_panels);
  return {re.value, im.value};
}

}  // namespace cqlad::quadrature
