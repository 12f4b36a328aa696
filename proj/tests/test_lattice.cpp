#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cqlad/constants.hpp"
#include "cqlad/lattice.hpp"

using namespace cqlad;
using lattice::Boundary;
using lattice::LatticeModel;
using std::complex;

namespace {
constexpr double kPi = constants::pi;
const complex<double> kI{0.0, 1.0};

// Sorted eigenvalues of the dense single-particle Hamiltonian.
std::vector<double> dense_spectrum(const LatticeModel& model) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(model.dense());
  REQUIRE(solver.info() == Eigen::Success);
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

TEST_CASE("hoppings accumulate and canonicalize to i < j") {
  LatticeModel model(3);
  model.add_hopping(0, 1, {1.0, 2.0});
  model.add_hopping(1, 0, {0.5, 0.25});  // same bond, reversed: conj folds in
  const auto bond = model.bond(0, 1);
  REQUIRE(bond.has_value());
  CHECK(*bond == complex<double>{1.5, 1.75});
  // Reversed lookup reports the amplitude as seen from the other end.
  CHECK(model.bond(1, 0) == std::conj(*bond));

  const auto hops = model.hoppings();
  REQUIRE(hops.size() == 1);
  CHECK(hops[0].i == 0);
  CHECK(hops[0].j == 1);

  const Eigen::MatrixXcd h = model.dense();
  CHECK(h(0, 1) == -complex<double>{1.5, 1.75});
  CHECK(h(1, 0) == -std::conj(complex<double>{1.5, 1.75}));
  CHECK((h - h.adjoint()).norm() == 0.0);

  CHECK(!model.bond(0, 2).has_value());
  CHECK_THROWS_AS(model.add_hopping(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(model.add_hopping(0, 3, 1.0), std::invalid_argument);
}

TEST_CASE("onsite energies and labels round-trip") {
  LatticeModel model(2);
  CHECK(model.onsite(0) == 0.0);
  CHECK(model.label(0) == "s0");  // positional default
  model.set_onsite(1, -3.5);
  model.set_label(1, "q1");
  CHECK(model.onsite(1) == -3.5);
  CHECK(model.label(1) == "q1");
  CHECK(model.dense()(1, 1) == complex<double>{-3.5, 0.0});
  CHECK_THROWS_AS(model.set_onsite(2, 0.0), std::out_of_range);
}

TEST_CASE("ladder rung count is range checked") {
  CHECK_THROWS_AS(lattice::build_creutz(1, 1.0, 0.0, 0.0, Boundary::open),
                  std::invalid_argument);
  CHECK_THROWS_AS(lattice::build_creutz(4097, 1.0, 0.0, 0.0, Boundary::open),
                  std::invalid_argument);
  CHECK_NOTHROW(lattice::build_creutz(2, 1.0, 0.0, 0.0, Boundary::open));
}

TEST_CASE("single plaquette Hamiltonian has the pinned entries") {
  // Two rungs, t_d = 1, t_v = 0, phi = pi/2, open: sites (a1, a2, b1, b2).
  const LatticeModel model =
      lattice::build_creutz(2, 1.0, 0.0, kPi / 2.0, Boundary::open);
  Eigen::MatrixXcd want(4, 4);
  want << 0.0, -kI, 0.0, -1.0,
          kI, 0.0, -1.0, 0.0,
          0.0, -1.0, 0.0, kI,
          -1.0, 0.0, -kI, 0.0;
  CHECK((model.dense() - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dense spectrum of the periodic ladder matches the Bloch closed form") {
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> td_dist(0.2, 3.0);
  std::uniform_real_distribution<double> tv_dist(0.0, 3.0);
  std::uniform_real_distribution<double> phi_dist(-kPi, kPi);
  std::uniform_int_distribution<std::size_t> n_dist(4, 16);

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rungs = n_dist(rng);
    const double t_d = td_dist(rng);
    const double t_v = tv_dist(rng);
    const double phi = phi_dist(rng);

    std::vector<double> bloch;
    for (std::size_t k = 0; k < rungs; ++k) {
      const auto pt = lattice::bloch_point(static_cast<int>(k), rungs, t_d, t_v, phi);
      bloch.push_back(pt.n0 - pt.lambda());
      bloch.push_back(pt.n0 + pt.lambda());
    }
    std::sort(bloch.begin(), bloch.end());

    const auto dense = dense_spectrum(
        lattice::build_creutz(rungs, t_d, t_v, phi, Boundary::periodic));
    REQUIRE(dense.size() == bloch.size());
    for (std::size_t s = 0; s < dense.size(); ++s)
      CHECK(std::abs(dense[s] - bloch[s]) < 1e-10);
  }
}

TEST_CASE("Bloch matrix reproduces its advertised decomposition") {
  const auto pt = lattice::bloch_point(3, 16, 1.3, 0.7, 0.9);
  Eigen::Matrix2cd want;
  want << pt.n0 + pt.nz, pt.nx, pt.nx, pt.n0 - pt.nz;
  CHECK((pt.matrix() - want).norm() < 1e-15);
  CHECK(pt.lambda() == doctest::Approx(std::hypot(pt.nx, pt.nz)).epsilon(1e-15));
}

TEST_CASE("band structure states diagonalize their Bloch sectors") {
  const auto bands = lattice::band_structure(12, 1.1, 0.8, 0.6);
  REQUIRE(bands.k.size() == 12);
  for (std::size_t s = 0; s < bands.k.size(); ++s) {
    const auto pt = lattice::bloch_point(bands.k[s], 12, 1.1, 0.8, 0.6);
    const Eigen::Matrix2cd h = pt.matrix();
    CHECK((h * bands.lower_states[s] - bands.lower[s] * bands.lower_states[s])
              .norm() < 1e-12);
    CHECK((h * bands.upper_states[s] - bands.upper[s] * bands.upper_states[s])
              .norm() < 1e-12);
    CHECK(bands.lower[s] <= bands.upper[s]);
    CHECK(bands.lower_states[s].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bands are exactly flat at t_v = 0, phi = pi/2") {
  const auto bands = lattice::band_structure(64, 1.0, 0.0, kPi / 2.0);
  CHECK(bands.flatness_lower < 1e-12);
  CHECK(bands.flatness_upper < 1e-12);
  for (std::size_t s = 0; s < bands.k.size(); ++s) {
    CHECK(std::abs(bands.lower[s] + 2.0) < 1e-12);
    CHECK(std::abs(bands.upper[s] - 2.0) < 1e-12);
  }
}

TEST_CASE("moving off the flat point costs dispersion") {
  const auto tilted = lattice::band_structure(64, 1.0, 0.5, kPi / 3.0);
  CHECK(tilted.flatness_lower > 0.1);
}

TEST_CASE("time reversal holds for any parameters; chiral pair needs phi = pi/2") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> amp(0.1, 3.0);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const auto res = lattice::symmetry_check(16, amp(rng), amp(rng), phase(rng));
    CHECK(res.time_reversal < 1e-10);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto res = lattice::symmetry_check(16, amp(rng), amp(rng), kPi / 2.0);
    CHECK(res.particle_hole < 1e-10);
    CHECK(res.chiral < 1e-10);
  }
  // Away from pi/2 the n0 term breaks the chiral pair.
  const auto broken = lattice::symmetry_check(16, 1.0, 0.5, 0.4);
  CHECK(broken.chiral > 1e-3);
}

TEST_CASE("spectrum pairs up +-E at the chiral point") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> amp(0.1, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spectrum = dense_spectrum(lattice::build_creutz(
        10, amp(rng), amp(rng), kPi / 2.0, Boundary::periodic));
    const std::size_t n = spectrum.size();
    for (std::size_t s = 0; s < n; ++s)
      CHECK(std::abs(spectrum[s] + spectrum[n - 1 - s]) < 1e-10);
  }
}

TEST_CASE("Wannier pairs are compact exact eigenvectors") {
  const std::size_t rungs = 8;
  const LatticeModel model =
      lattice::build_creutz(rungs, 1.0, 0.0, kPi / 2.0, Boundary::periodic);
  const Eigen::MatrixXcd h = model.dense();
  const auto pairs = lattice::wannier_modes(rungs);
  REQUIRE(pairs.size() == rungs);
  for (const auto& pair : pairs) {
    CHECK((h * pair.upper - 2.0 * pair.upper).norm() < 1e-12);
    CHECK((h * pair.lower + 2.0 * pair.lower).norm() < 1e-12);
    CHECK(pair.upper.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair.lower.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pair.upper.dot(pair.lower)) < 1e-12);
    // Compact support: two rungs = four sites.
    int support = 0;
    for (Eigen::Index s = 0; s < pair.upper.size(); ++s)
      if (std::abs(pair.upper(s)) > 1e-14) ++support;
    CHECK(support == 4);
  }
  // Distinct centers give orthogonal modes.
  CHECK(std::abs(pairs[0].upper.dot(pairs[3].upper)) < 1e-12);
}

TEST_CASE("open flat ladder hosts exactly two compact edge zero modes") {
  const std::size_t rungs = 8;
  const auto modes = lattice::edge_zero_modes(rungs);
  CHECK(modes.residual_left < 1e-12);
  CHECK(modes.residual_right < 1e-12);
  CHECK(modes.left.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(modes.right.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Left mode lives on rung 0, right mode on the last rung, nothing else.
  for (Eigen::Index s = 0; s < modes.left.size(); ++s) {
    const auto r = static_cast<std::size_t>(s) % rungs;
    if (r != 0) CHECK(std::abs(modes.left(s)) == 0.0);
    if (r != rungs - 1) CHECK(std::abs(modes.right(s)) == 0.0);
  }

  // Zero-energy count: exactly two eigenvalues inside 1e-10.
  const auto spectrum = dense_spectrum(
      lattice::build_creutz(rungs, 1.0, 0.0, kPi / 2.0, Boundary::open));
  const auto zeros = std::count_if(spectrum.begin(), spectrum.end(),
                                   [](double e) { return std::abs(e) < 1e-10; });
  CHECK(zeros == 2);
}

TEST_CASE("constant vertical profile reproduces the uniform builder") {
  const std::vector<double> profile(10, 0.7);
  const auto a = lattice::build_creutz(10, 1.2, 0.7, 0.5, Boundary::periodic);
  const auto b =
      lattice::build_creutz_profile(10, 1.2, profile, 0.5, Boundary::periodic);
  CHECK((a.dense() - b.dense()).norm() == 0.0);
  CHECK_THROWS_AS(lattice::build_creutz_profile(10, 1.2, {0.7, 0.7}, 0.5,
                                                Boundary::periodic),
                  std::invalid_argument);
}

TEST_CASE("domain wall binds a midgap mode that tracks the mass envelope") {
  const std::size_t rungs = 64;
  std::vector<double> profile(rungs);
  for (std::size_t r = 0; r < rungs; ++r) profile[r] = r < rungs / 2 ? 1.0 : 3.0;

  const auto mode = lattice::domain_wall_mode(rungs, 1.0, profile, kPi / 2.0);
  CHECK(mode.kink == rungs / 2);
  CHECK(mode.gap > 0.0);
  CHECK(std::abs(mode.energy) < 0.05 * mode.gap);
  CHECK(mode.correlation > 0.95);

  double total = 0.0;
  for (double occ : mode.occupation) total += occ;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  // The mode is bound: the occupation peaks within a few rungs of the kink.
  const auto peak = std::max_element(mode.occupation.begin(), mode.occupation.end());
  const auto peak_rung =
      static_cast<std::size_t>(peak - mode.occupation.begin());
  CHECK(peak_rung >= mode.kink - 3);
  CHECK(peak_rung <= mode.kink + 3);
}

TEST_CASE("gentle kink decay rates stay within 20% of the continuum slope") {
  // t_v = 1.8 -> 2.2 keeps |m| = 0.2 on both sides, well inside the regime
  // where the lattice rate -2 ln|t_v/2| tracks the continuum rate 2|m|/v_F.
  const std::size_t rungs = 64;
  std::vector<double> profile(rungs);
  for (std::size_t r = 0; r < rungs; ++r) profile[r] = r < rungs / 2 ? 1.8 : 2.2;
  const auto mode = lattice::domain_wall_mode(rungs, 1.0, profile, kPi / 2.0);
  CHECK(mode.correlation > 0.95);

  // Fit log occupation per rung on each decay tail, skipping the kink core.
  const auto fit_rate = [&](std::size_t lo, std::size_t hi, double sign) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
    for (std::size_t r = lo; r < hi; ++r) {
      if (mode.occupation[r] < 1e-14) continue;
      const double x = static_cast<double>(r);
      const double y = std::log(mode.occupation[r]);
      sx += x; sy += y; sxx += x * x; sxy += x * y; n += 1.0;
    }
    REQUIRE(n >= 3.0);
    return sign * (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double left_rate = fit_rate(8, mode.kink - 2, +1.0);   // grows toward kink
  const double right_rate = fit_rate(mode.kink + 2, rungs - 8, -1.0);
  const double continuum = 2.0 * 0.2 / 2.0;  // 2|m| / v_F
  CHECK(std::abs(left_rate - continuum) < 0.2 * continuum);
  CHECK(std::abs(right_rate - continuum) < 0.2 * continuum);
}

TEST_CASE("domain wall rejects ill-posed mass profiles") {
  std::vector<double> touches(16, 1.0);
  touches[8] = 2.0;  // mass hits zero on a rung
  CHECK_THROWS_AS(lattice::domain_wall_mode(16, 1.0, touches, kPi / 2.0),
                  std::invalid_argument);

  const std::vector<double> uniform(16, 1.0);  // no crossing at all
  CHECK_THROWS_AS(lattice::domain_wall_mode(16, 1.0, uniform, kPi / 2.0),
                  std::invalid_argument);

  std::vector<double> twice(32, 1.0);
  for (std::size_t r = 10; r < 20; ++r) twice[r] = 3.0;  // crosses twice
  CHECK_THROWS_AS(lattice::domain_wall_mode(32, 1.0, twice, kPi / 2.0),
                  std::invalid_argument);
}
