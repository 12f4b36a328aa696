#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqlad::lattice {

enum class Boundary { open, periodic };

/// One Hermitian bond, stored with i < j. Contributes
///   -amplitude * a_i^dag a_j - conj(amplitude) * a_j^dag a_i
/// to the Hamiltonian, i.e. H(i,j) = -amplitude.
struct Hopping {
  std::size_t i = 0;
  std::size_t j = 0;
  std::complex<double> amplitude;
};

/// Tight-binding model: real on-site energies plus a Hermitian set of
/// complex hoppings.  H = sum_i onsite[i] n_i - sum_bonds (t_ij a_i^dag a_j + h.c.)
class LatticeModel {
 public:
  LatticeModel() = default;
  explicit LatticeModel(std::size_t sites, Boundary boundary = Boundary::open);

  std::size_t size() const { return onsite_.size(); }
  Boundary boundary() const { return boundary_; }

  void set_onsite(std::size_t site, double energy);
  double onsite(std::size_t site) const;
  const std::vector<double>& onsite_energies() const { return onsite_; }

  /// Accumulates t onto bond (i, j).  Self-hops are rejected.  Adding (j, i, t)
  /// is equivalent to adding (i, j, conj(t)); storage is canonicalized to i < j.
  void add_hopping(std::size_t i, std::size_t j, std::complex<double> t);

  /// Bond between i and j, in canonical orientation, if present.
  std::optional<std::complex<double>> bond(std::size_t i, std::size_t j) const;

  /// All bonds, ordered by (i, j).
  std::vector<Hopping> hoppings() const;

  void set_label(std::size_t site, std::string label);
  const std::string& label(std::size_t site) const;

  /// Dense single-particle Hamiltonian (Hermitian by construction).
  Eigen::MatrixXcd dense() const;

 private:
  std::vector<double> onsite_;
  std::vector<std::string> labels_;
  std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> bonds_;
  Boundary boundary_ = Boundary::open;
};

/// Creutz ladder with `rungs` rungs.  Site layout: a-leg first (a_n -> n),
/// then b-leg (b_n -> rungs + n), n = 0..rungs-1.
///
/// Bond pattern (rung n to n+1, wrapping when periodic):
///   legs       -e^{i phi} a_n^dag a_{n+1}  - e^{i phi} b_{n+1}^dag b_n  + h.c.
///   diagonals  -t_d (b_n^dag a_{n+1} + a_n^dag b_{n+1})                + h.c.
///   verticals  -t_v a_n^dag b_n                                        + h.c.   (every rung)
///
/// The leg orientation is the one whose Bloch decomposition reproduces
/// n0 = -2 cos(2 pi k / N) cos(phi), nx = -2 t_d cos(2 pi k / N) - t_v,
/// nz = 2 sin(2 pi k / N) sin(phi) with the e^{+i 2 pi k n / N} plane-wave kernel.
LatticeModel build_creutz(std::size_t rungs, double t_d, double t_v, double phi,
                          Boundary boundary);

/// Same ladder with a per-rung vertical coupling profile (size = rungs).
LatticeModel build_creutz_profile(std::size_t rungs, double t_d,
                                  const std::vector<double>& t_v, double phi,
                                  Boundary boundary);

/// Bloch sector h_k = n0 I + nx sigma_x + nz sigma_z of the periodic ladder.
struct BlochPoint {
  int k = 0;
  double n0 = 0.0;
  double nx = 0.0;
  double nz = 0.0;

  Eigen::Matrix2cd matrix() const;
  /// Lambda_k = sqrt(nx^2 + nz^2); band energies are n0 -+ Lambda_k.
  double lambda() const;
};

BlochPoint bloch_point(int k, std::size_t rungs, double t_d, double t_v, double phi);

/// Closed-form band structure over the zone k in (-N/2, N/2].
struct BandStructure {
  std::vector<int> k;
  std::vector<double> lower, upper;          // E_-(k), E_+(k)
  std::vector<double> n0, nx, nz;
  std::vector<Eigen::Vector2cd> lower_states, upper_states;
  double flatness_lower = 0.0;               // max - min of E_-
  double flatness_upper = 0.0;
};

BandStructure band_structure(std::size_t rungs, double t_d, double t_v, double phi);

/// Residuals of sigma_x h_k sigma_x = h_{-k} (time reversal),
/// sigma_z h_k sigma_z = -h_{-k} (particle-hole) and
/// sigma_y h_k sigma_y = -h_k (chiral), max Frobenius norm over the zone.
struct SymmetryResiduals {
  double time_reversal = 0.0;
  double particle_hole = 0.0;
  double chiral = 0.0;
};

SymmetryResiduals symmetry_check(std::size_t rungs, double t_d, double t_v, double phi);

/// Winding of (nx(theta), nz(theta)) around the origin plus related invariants.
struct TopologyReport {
  int winding = 0;
  double ratio = 0.0;                        // t_v / t_d
  bool critical = false;
  std::optional<double> berry_phase;         // lower band, (-pi, pi]
  std::vector<std::array<double, 2>> curve;  // (nx, nz) samples
};

/// Samples the Bloch curve on a uniform theta grid (rounded up to an even count,
/// >= 64) and accumulates the signed angle; counterclockwise is positive.
TopologyReport winding_number(double t_d, double t_v, double phi,
                              std::size_t samples = 1024);

/// Zak / Berry phase of the lower band from the discrete Wilson loop,
/// wrapped to (-pi, pi].
double berry_phase(std::size_t rungs, double t_d, double t_v, double phi);

/// Phase of the closed overlap product of an ordered loop of normalized
/// 2-vectors; gauge independent by construction.
double wilson_loop_phase(const std::vector<Eigen::Vector2cd>& loop);

/// Compact Wannier modes of the strong-coupling ladder (t_d = 1, t_v = 0,
/// phi = pi/2, periodic): one +2 / -2 pair per plaquette center n + 1/2.
struct WannierPair {
  std::size_t center;        // between rung `center` and `center + 1`
  Eigen::VectorXcd upper;    // energy +2
  Eigen::VectorXcd lower;    // energy -2
};

std::vector<WannierPair> wannier_modes(std::size_t rungs);

/// Edge-localized zero modes of the open strong-coupling ladder.
struct EdgeModes {
  Eigen::VectorXcd left, right;
  double residual_left = 0.0;   // ||H psi||
  double residual_right = 0.0;
};

EdgeModes edge_zero_modes(std::size_t rungs);

/// Near-zero mode bound to a mass kink m(x) = 2 t_d - t_v(x).
struct DomainWallMode {
  Eigen::VectorXcd state;
  double energy = 0.0;
  double gap = 0.0;                  // smaller asymptotic half-gap of the two sides
  std::size_t kink = 0;              // first rung after the sign change of m
  std::vector<double> occupation;    // per rung
  std::vector<double> envelope;      // predicted |psi|^2 envelope, exp(-2|int m|/v_F)
  double correlation = 0.0;          // worst-side Pearson r of log occupation
                                     // vs log envelope over the decay tails
};

DomainWallMode domain_wall_mode(std::size_t rungs, double t_d,
                                const std::vector<double>& t_v_profile,
                                double phi);

}  // namespace cqlad::lattice
