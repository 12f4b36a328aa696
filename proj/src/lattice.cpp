#include "cqlad/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cqlad/constants.hpp"
#include "cqlad/kernels.hpp"

namespace cqlad::lattice {

using constants::pi;
using std::complex;

namespace {

constexpr std::size_t max_rungs = 4096;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double x) {
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

std::vector<int> zone(std::size_t rungs) {
  // integer k in (-N/2, N/2]
  const int n = static_cast<int>(rungs);
  std::vector<int> ks(rungs);
  std::iota(ks.begin(), ks.end(), 1 - (n + 1) / 2);
  return ks;
}

void check_rungs(std::size_t rungs) {
  if (rungs < 2 || rungs > max_rungs)
    throw std::invalid_argument("rung count must be in [2, 4096]");
}

/// Robust lower-band eigenvector of nx sigma_x + nz sigma_z (eigenvalue
/// -lambda).  The branch switch avoids the vanishing-norm direction.
Eigen::Vector2cd lower_state(double nx, double nz) {
  const double lambda = std::hypot(nx, nz);
  Eigen::Vector2cd v;
  if (lambda == 0.0) {
    v << 1.0, 0.0;
    return v;
  }
  if (nz <= 0.0)
    v << complex<double>(nz - lambda, 0.0), complex<double>(nx, 0.0);
  else
    v << complex<double>(-nx, 0.0), complex<double>(nz + lambda, 0.0);
  v.normalize();
  return v;
}

Eigen::Vector2cd upper_state(const Eigen::Vector2cd& lower) {
  Eigen::Vector2cd v;
  v << -std::conj(lower(1)), std::conj(lower(0));
  return v;
}

double frobenius(const Eigen::Matrix2cd& m) { return m.norm(); }

}  // namespace

LatticeModel::LatticeModel(std::size_t sites, Boundary boundary)
    : onsite_(sites, 0.0), labels_(sites), boundary_(boundary) {
  for (std::size_t i = 0; i < sites; ++i) labels_[i] = "s" + std::to_string(i);
}

void LatticeModel::set_onsite(std::size_t site, double energy) {
  onsite_.at(site) = energy;
}

double LatticeModel::onsite(std::size_t site) const { return onsite_.at(site); }

void LatticeModel::add_hopping(std::size_t i, std::size_t j, complex<double> t) {
  if (i >= size() || j >= size())
    throw std::invalid_argument("hopping site index out of range");
  if (i == j) throw std::invalid_argument("self-hops are not allowed");
  if (i > j) {
    std::swap(i, j);
    t = std::conj(t);
  }
  bonds_[{i, j}] += t;
}

std::optional<complex<double>> LatticeModel::bond(std::size_t i,
                                                  std::size_t j) const {
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  const auto it = bonds_.find({i, j});
  if (it == bonds_.end()) return std::nullopt;
  return flip ? std::conj(it->second) : it->second;
}

std::vector<Hopping> LatticeModel::hoppings() const {
  std::vector<Hopping> out;
  out.reserve(bonds_.size());
  for (const auto& [key, amp] : bonds_) out.push_back({key.first, key.second, amp});
  return out;
}

void LatticeModel::set_label(std::size_t site, std::string label) {
  labels_.at(site) = std::move(label);
}

const std::string& LatticeModel::label(std::size_t site) const {
  return labels_.at(site);
}

Eigen::MatrixXcd LatticeModel::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = onsite_[static_cast<std::size_t>(i)];
  for (const auto& [key, amp] : bonds_) {
    const auto i = static_cast<Eigen::Index>(key.first);
    const auto j = static_cast<Eigen::Index>(key.second);
    h(i, j) -= amp;
    h(j, i) -= std::conj(amp);
  }
  return h;
}

LatticeModel build_creutz_profile(std::size_t rungs, double t_d,
                                  const std::vector<double>& t_v, double phi,
                                  Boundary boundary) {
  check_rungs(rungs);
  if (t_v.size() != rungs)
    throw std::invalid_argument("vertical profile size must equal rung count");
  LatticeModel model(2 * rungs, boundary);
  const auto a = [](std::size_t n) { return n; };
  const auto b = [rungs](std::size_t n) { return rungs + n; };
  for (std::size_t n = 0; n < rungs; ++n) {
    model.set_label(a(n), "a" + std::to_string(n + 1));
    model.set_label(b(n), "b" + std::to_string(n + 1));
  }

  const complex<double> leg = std::exp(complex<double>(0.0, phi));
  const std::size_t span = boundary == Boundary::periodic ? rungs : rungs - 1;
  for (std::size_t n = 0; n < span; ++n) {
    const std::size_t m = (n + 1) % rungs;
    model.add_hopping(a(n), a(m), leg);             // -e^{i phi} a_n^dag a_{n+1} + h.c.
    model.add_hopping(b(n), b(m), std::conj(leg));  // -e^{i phi} b_{n+1}^dag b_n + h.c.
    model.add_hopping(b(n), a(m), t_d);
    model.add_hopping(a(n), b(m), t_d);
  }
  for (std::size_t n = 0; n < rungs; ++n)
    if (t_v[n] != 0.0) model.add_hopping(a(n), b(n), t_v[n]);
  return model;
}

LatticeModel build_creutz(std::size_t rungs, double t_d, double t_v, double phi,
                          Boundary boundary) {
  return build_creutz_profile(rungs, t_d, std::vector<double>(rungs, t_v), phi,
                              boundary);
}

Eigen::Matrix2cd BlochPoint::matrix() const {
  Eigen::Matrix2cd h;
  h << complex<double>(n0 + nz, 0.0), complex<double>(nx, 0.0),
       complex<double>(nx, 0.0), complex<double>(n0 - nz, 0.0);
  return h;
}

double BlochPoint::lambda() const { return std::hypot(nx, nz); }

BlochPoint bloch_point(int k, std::size_t rungs, double t_d, double t_v,
                       double phi) {
  check_rungs(rungs);
  const double theta = 2.0 * pi * static_cast<double>(k) / static_cast<double>(rungs);
  BlochPoint p;
  p.k = k;
  kernels::serial::bloch_sweep(&theta, 1, t_d, t_v, phi, &p.n0, &p.nx, &p.nz);
  return p;
}

BandStructure band_structure(std::size_t rungs, double t_d, double t_v,
                             double phi) {
  check_rungs(rungs);
  BandStructure bs;
  bs.k = zone(rungs);
  const std::size_t n = rungs;
  std::vector<double> theta(n);
  for (std::size_t s = 0; s < n; ++s)
    theta[s] = 2.0 * pi * static_cast<double>(bs.k[s]) / static_cast<double>(n);
  bs.n0.resize(n);
  bs.nx.resize(n);
  bs.nz.resize(n);
  kernels::bloch_sweep(theta.data(), n, t_d, t_v, phi, bs.n0.data(),
                       bs.nx.data(), bs.nz.data());
  bs.lower.resize(n);
  bs.upper.resize(n);
  bs.lower_states.resize(n);
  bs.upper_states.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double lambda = std::hypot(bs.nx[s], bs.nz[s]);
    bs.lower[s] = bs.n0[s] - lambda;
    bs.upper[s] = bs.n0[s] + lambda;
    bs.lower_states[s] = lower_state(bs.nx[s], bs.nz[s]);
    bs.upper_states[s] = upper_state(bs.lower_states[s]);
  }
  const auto band_width = [](const std::vector<double>& e) {
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    return *hi - *lo;
  };
  bs.flatness_lower = band_width(bs.lower);
  bs.flatness_upper = band_width(bs.upper);
  return bs;
}

SymmetryResiduals symmetry_check(std::size_t rungs, double t_d, double t_v,
                                 double phi) {
  check_rungs(rungs);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, complex<double>(0, -1), complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  SymmetryResiduals r;
  for (const int k : zone(rungs)) {
    const Eigen::Matrix2cd hk = bloch_point(k, rungs, t_d, t_v, phi).matrix();
    const Eigen::Matrix2cd hmk = bloch_point(-k, rungs, t_d, t_v, phi).matrix();
    r.time_reversal = std::max(r.time_reversal, frobenius(sx * hk * sx - hmk));
    r.particle_hole = std::max(r.particle_hole, frobenius(sz * hk * sz + hmk));
    r.chiral = std::max(r.chiral, frobenius(sy * hk * sy + hk));
  }
  return r;
}

TopologyReport winding_number(double t_d, double t_v, double phi,
                              std::size_t samples) {
  if (t_d == 0.0) throw std::invalid_argument("t_d must be nonzero");
  if (samples < 64 || samples > (1u << 20))
    throw std::invalid_argument("samples must be in [64, 2^20]");
  const std::size_t n = samples + (samples % 2);  // even so theta = 0, pi are hit

  TopologyReport report;
  report.ratio = t_v / t_d;

  std::vector<double> theta(n), n0(n), nx(n), nz(n);
  for (std::size_t s = 0; s < n; ++s)
    theta[s] = 2.0 * pi * static_cast<double>(s) / static_cast<double>(n);
  kernels::bloch_sweep(theta.data(), n, t_d, t_v, phi, n0.data(), nx.data(),
                       nz.data());

  report.curve.resize(n);
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    report.curve[s] = {nx[s], nz[s]};
    min_dist = std::min(min_dist, std::hypot(nx[s], nz[s]));
  }
  if (min_dist < 1e-8)
    throw std::domain_error(
        "band gap closes: the Bloch curve passes through the origin");

  const bool degenerate = std::abs(std::sin(phi)) < 1e-12;
  report.critical =
      degenerate || std::abs(std::abs(report.ratio) - 2.0) < 1e-9;

  if (!degenerate) {
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t t = (s + 1) % n;
      const double cross = nx[s] * nz[t] - nz[s] * nx[t];
      const double dot = nx[s] * nx[t] + nz[s] * nz[t];
      total += std::atan2(cross, dot);
    }
    report.winding = static_cast<int>(std::lround(total / (2.0 * pi)));
  }

  if (!degenerate || std::abs(report.ratio) > 2.0) {
    try {
      report.berry_phase = berry_phase(std::min<std::size_t>(n, max_rungs),
                                       t_d, t_v, phi);
    } catch (const std::exception&) {
      report.berry_phase = std::nullopt;
    }
  }
  return report;
}

double wilson_loop_phase(const std::vector<Eigen::Vector2cd>& loop) {
  if (loop.size() < 3)
    throw std::invalid_argument("Wilson loop needs at least 3 states");
  complex<double> w{1.0, 0.0};
  for (std::size_t s = 0; s < loop.size(); ++s) {
    const std::size_t t = (s + 1) % loop.size();
    const complex<double> overlap = loop[s].dot(loop[t]);  // <s|t>
    if (std::abs(overlap) < 1e-12)
      throw std::domain_error("Wilson loop overlap vanishes");
    w *= overlap;
  }
  return wrap_angle(-std::arg(w));
}

double berry_phase(std::size_t rungs, double t_d, double t_v, double phi) {
  if (rungs < 8) throw std::invalid_argument("berry_phase needs N >= 8");
  check_rungs(rungs);
  std::vector<Eigen::Vector2cd> loop;
  loop.reserve(rungs);
  double max_lambda = 0.0, min_lambda = std::numeric_limits<double>::infinity();
  for (const int k : zone(rungs)) {
    const BlochPoint p = bloch_point(k, rungs, t_d, t_v, phi);
    max_lambda = std::max(max_lambda, p.lambda());
    min_lambda = std::min(min_lambda, p.lambda());
    loop.push_back(lower_state(p.nx, p.nz));
  }
  if (min_lambda < 1e-10 * std::max(max_lambda, 1.0))
    throw std::domain_error("band gap closes; Berry phase undefined");
  return wilson_loop_phase(loop);
}

std::vector<WannierPair> wannier_modes(std::size_t rungs) {
  check_rungs(rungs);
  const complex<double> p4 = std::exp(complex<double>(0.0, pi / 4.0));   // e^{i pi/4}
  const complex<double> m4 = std::conj(p4);                              // e^{-i pi/4}
  std::vector<WannierPair> out;
  out.reserve(rungs);
  for (std::size_t n = 0; n < rungs; ++n) {
    const std::size_t m = (n + 1) % rungs;
    WannierPair pair;
    pair.center = n;
    pair.upper = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * rungs));
    pair.lower = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * rungs));
    const auto a = [](std::size_t r) { return static_cast<Eigen::Index>(r); };
    const auto b = [rungs](std::size_t r) {
      return static_cast<Eigen::Index>(rungs + r);
    };
    // eta_{+,n+1/2} = 1/2 [ e^{-i pi/4}(a_{n+1} - b_n) + e^{i pi/4}(a_n - b_{n+1}) ]
    pair.upper(a(m)) = 0.5 * p4;
    pair.upper(b(n)) = -0.5 * p4;
    pair.upper(a(n)) = 0.5 * m4;
    pair.upper(b(m)) = -0.5 * m4;
    // eta_{-,n+1/2} = 1/2 [ -e^{i pi/4}(a_{n+1} + b_n) - e^{-i pi/4}(a_n + b_{n+1}) ]
    pair.lower(a(m)) = -0.5 * m4;
    pair.lower(b(n)) = -0.5 * m4;
    pair.lower(a(n)) = -0.5 * p4;
    pair.lower(b(m)) = -0.5 * p4;
    out.push_back(std::move(pair));
  }
  return out;
}

EdgeModes edge_zero_modes(std::size_t rungs) {
  check_rungs(rungs);
  const LatticeModel ladder =
      build_creutz(rungs, 1.0, 0.0, pi / 2.0, Boundary::open);
  const Eigen::MatrixXcd h = ladder.dense();
  const complex<double> p4 = std::exp(complex<double>(0.0, pi / 4.0));
  const complex<double> m4 = std::conj(p4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto n = static_cast<Eigen::Index>(2 * rungs);

  EdgeModes modes;
  // eta_{0,L} = (e^{i pi/4} a_1 + e^{-i pi/4} b_1) / sqrt(2)
  modes.left = Eigen::VectorXcd::Zero(n);
  modes.left(0) = m4 * inv_sqrt2;                                   // a_1
  modes.left(static_cast<Eigen::Index>(rungs)) = p4 * inv_sqrt2;    // b_1
  // eta_{0,R} = (e^{-i pi/4} a_N + e^{i pi/4} b_N) / sqrt(2)
  modes.right = Eigen::VectorXcd::Zero(n);
  modes.right(static_cast<Eigen::Index>(rungs - 1)) = p4 * inv_sqrt2;
  modes.right(n - 1) = m4 * inv_sqrt2;

  modes.residual_left = (h * modes.left).norm();
  modes.residual_right = (h * modes.right).norm();
  return modes;
}

DomainWallMode domain_wall_mode(std::size_t rungs, double t_d,
                                const std::vector<double>& t_v_profile,
                                double phi) {
  check_rungs(rungs);
  if (t_v_profile.size() != rungs)
    throw std::invalid_argument("vertical profile size must equal rung count");

  std::vector<double> mass(rungs);
  for (std::size_t r = 0; r < rungs; ++r) mass[r] = 2.0 * t_d - t_v_profile[r];
  std::size_t flips = 0, kink = 0;
  for (std::size_t r = 0; r + 1 < rungs; ++r) {
    if (mass[r] == 0.0)
      throw std::invalid_argument("mass profile touches zero on a rung");
    if ((mass[r] > 0.0) != (mass[r + 1] > 0.0)) {
      ++flips;
      kink = r + 1;
    }
  }
  if (mass[rungs - 1] == 0.0)
    throw std::invalid_argument("mass profile touches zero on a rung");
  if (flips != 1)
    throw std::invalid_argument(
        "vertical profile must cross 2 t_d exactly once");

  // Smaller of the two asymptotic bulk half-gaps, min_theta Lambda(theta).
  const auto half_gap = [&](double t_v) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2048; ++s) {
      const double theta = 2.0 * pi * s / 2048.0;
      const double nx = -2.0 * t_d * std::cos(theta) - t_v;
      const double nz = 2.0 * std::sin(theta) * std::sin(phi);
      best = std::min(best, std::hypot(nx, nz));
    }
    return best;
  };
  DomainWallMode mode;
  mode.kink = kink;
  mode.gap = std::min(half_gap(t_v_profile.front()), half_gap(t_v_profile.back()));

  const LatticeModel ladder =
      build_creutz_profile(rungs, t_d, t_v_profile, phi, Boundary::open);
  const Eigen::MatrixXcd h = ladder.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed");

  // An open ladder whose topological side also hosts an edge mode has several
  // exponentially near-degenerate candidates, and the eigensolver returns an
  // arbitrary basis of that subspace.  Unmix by maximizing a Gaussian window
  // centered on the kink inside the near-zero subspace.
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  std::vector<Eigen::Index> near_zero;
  for (Eigen::Index c = 0; c < evals.size(); ++c)
    if (std::abs(evals(c)) < 0.5 * mode.gap) near_zero.push_back(c);
  if (near_zero.empty())
    throw std::domain_error("no near-zero mode found inside the bulk gap");

  const double sigma = std::max<double>(2.0, static_cast<double>(rungs) / 16.0);
  Eigen::VectorXd window(static_cast<Eigen::Index>(2 * rungs));
  for (std::size_t r = 0; r < rungs; ++r) {
    const double d = (static_cast<double>(r) - static_cast<double>(kink)) / sigma;
    window(static_cast<Eigen::Index>(r)) = std::exp(-0.5 * d * d);
    window(static_cast<Eigen::Index>(rungs + r)) = window(static_cast<Eigen::Index>(r));
  }
  const auto m = static_cast<Eigen::Index>(near_zero.size());
  Eigen::MatrixXcd sub(evecs.rows(), m);
  for (Eigen::Index c = 0; c < m; ++c) sub.col(c) = evecs.col(near_zero[c]);
  const Eigen::MatrixXcd projected =
      sub.adjoint() * window.asDiagonal() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> window_solver(projected);
  const Eigen::VectorXcd mix = window_solver.eigenvectors().col(m - 1);

  mode.state = sub * mix;
  mode.state.normalize();
  mode.energy = std::real(mode.state.dot(h * mode.state));
  mode.occupation.resize(rungs);
  for (std::size_t r = 0; r < rungs; ++r)
    mode.occupation[r] = std::norm(mode.state(static_cast<Eigen::Index>(r))) +
                         std::norm(mode.state(static_cast<Eigen::Index>(rungs + r)));

  // Continuum envelope |psi|^2 ~ exp(-2 |int_kink^x m| / v_F), v_F = 2
  // (unit leg hopping, unit lattice constant, sin phi absorbed at phi = pi/2).
  const double v_f = 2.0 * std::abs(std::sin(phi));
  mode.envelope.resize(rungs);
  double acc = -0.5 * mass[kink];  // center the kink between rungs
  for (std::size_t r = kink; r < rungs; ++r) {
    acc += mass[r];
    mode.envelope[r] = std::exp(-2.0 * std::abs(acc) / v_f);
  }
  acc = -0.5 * mass[kink - 1];
  for (std::size_t r = kink; r-- > 0;) {
    acc += mass[r];
    mode.envelope[r] = std::exp(-2.0 * std::abs(acc) / v_f);
  }

  // Each tail is fit separately: the two sides of the kink decay at different
  // lattice rates, so pooling them would measure the slope mismatch between
  // the sides instead of how exponential each tail is.  Rungs within two of
  // the kink (where the continuum envelope has no meaning) and occupations at
  // the numerical floor are excluded; the reported value is the worse side.
  const double occ_max =
      *std::max_element(mode.occupation.begin(), mode.occupation.end());
  const auto tail_corr = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> lx, ly;
    for (std::size_t r = lo; r < hi; ++r) {
      if (mode.occupation[r] < occ_max * 1e-12 || mode.envelope[r] < 1e-12)
        continue;
      lx.push_back(std::log(mode.occupation[r]));
      ly.push_back(std::log(mode.envelope[r]));
    }
    if (lx.size() < 3) return std::optional<double>{};
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t s = 0; s < lx.size(); ++s) {
      sxy += (lx[s] - mx) * (ly[s] - my);
      sxx += (lx[s] - mx) * (lx[s] - mx);
      syy += (ly[s] - my) * (ly[s] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::optional<double>{};
    return std::optional<double>{sxy / std::sqrt(sxx * syy)};
  };
  auto left = tail_corr(0, kink >= 2 ? kink - 2 : 0);
  if (!left) left = tail_corr(0, kink);
  auto right = tail_corr(std::min<std::size_t>(kink + 2, rungs), rungs);
  if (!right) right = tail_corr(kink, rungs);
  if (left && right)
    mode.correlation = std::min(*left, *right);
  else if (left || right)
    mode.correlation = left ? *left : *right;
  return mode;
}

}  // namespace cqlad::lattice
