#pragma once

// Knife-edge clipping of the twin beams and a loss-style map from partner
// retention to intensity-difference noise.
//
// Vertical knife edges only see x, so everything goes through the x-marginal
//   W(x_pr, x_c) = 1/2 A(x_pr + x_c) B(x_pr - x_c),
//   A(x) = int |G+(x, y)|^2 dy,  B(x) = int |G-(x, y)|^2 dy,
// sampled on a square (x_pr, x_c) lattice.

#include <span>
#include <string>
#include <vector>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/core_model.hpp"
#include "twinbeam/pump_phasematch.hpp"

namespace twinbeam {

enum class Beam { probe, conjugate };
/// below: the edge blocks x < cut; above: it blocks x > cut.
enum class BlockSide { below, above };
enum class ClipGeometry { same_side, opposite_side };
/// symmetric: 2 P12 / (P1 + P2); min: min(P12 / P1, P12 / P2).
enum class RetentionProxy { symmetric, min };

std::string to_string(ClipGeometry g);
std::string to_string(RetentionProxy p);

struct KnifeEdgeMask {
  Beam beam = Beam::probe;
  BlockSide side = BlockSide::below;
  double cut = 0.0;  ///< m

  /// Fraction of the cell [lo, hi] left open by the edge.
  double transmission(double lo, double hi) const;
};

struct NoiseModelParams {
  double squeezing_db = 5.5;  ///< unclipped squeezing below the SNL, dB
  double v_uncorrelated = 1.0;

  /// Throws DomainError unless squeezing_db >= 0 and v_uncorrelated >= 1.
  void validate() const;
};

struct ClipScenario {
  double fraction = 0.0;  ///< blocked fraction of each beam's power, [0, 1)
  ClipGeometry geometry = ClipGeometry::same_side;
  double z_over_zr = 0.0008;
  NoiseModelParams noise;
};

struct ClipLatticeOptions {
  /// Lattice spacing as a fraction of the narrower of the two factor radii.
  double spacing_fraction = 1.0 / 24.0;
  int max_points = 6001;
  /// Allowed fraction of the total energy outside the lattice.
  double truncation_limit = 0.01;
  int threads = 1;
};

/// x-marginal of |F|^2 on an odd N x N lattice in (x_pr, x_c).
class ClipLattice {
 public:
  /// Throws SamplingError if more than truncation_limit of the energy falls
  /// outside the lattice or N would exceed max_points.
  ClipLattice(const TwoPhotonAmplitude& amplitude, const ClipLatticeOptions& options = {});

  int size() const { return n_; }
  double spacing() const { return spacing_; }
  double coordinate(int i) const { return (i - (n_ - 1) / 2) * spacing_; }
  /// W(x_i, x_j), probe index first.
  double weight(int i, int j) const { return 0.5 * a_[i + j] * b_[i - j + n_ - 1]; }
  /// Lattice integral of W over both coordinates.
  double lattice_total() const { return lattice_total_; }
  /// The same integral from the radial factors, without the lattice.
  double exact_total() const { return exact_total_; }
  double z() const { return z_; }
  double z_over_zr() const { return z_over_zr_; }
  int oam() const { return oam_; }

 private:
  int n_ = 0;
  double spacing_ = 0.0;
  std::vector<double> a_;  ///< A at (k - (n-1)) spacing, k in [0, 2n-1)
  std::vector<double> b_;  ///< B at the same offsets
  double lattice_total_ = 0.0;
  double exact_total_ = 0.0;
  double z_ = 0.0;
  double z_over_zr_ = 0.0;
  int oam_ = 0;
};

/// Piecewise-constant density: cell i is [x_i - d/2, x_i + d/2].
struct Marginal {
  std::vector<double> x;
  std::vector<double> density;
  double spacing = 0.0;
  double total = 0.0;
};

Marginal marginal_intensity(const ClipLattice& lattice, Beam beam);

/// Cut position that blocks `fraction` of the marginal power from `side`, by
/// bisection to 1e-6 in the fraction. fraction = 0 puts the edge at the lattice boundary.
double cut_for_fraction(const Marginal& marginal, double fraction, BlockSide side);

/// Throws DegenerateError when the masks leave nothing to compare.
double partner_retention(const ClipLattice& lattice, const KnifeEdgeMask& probe_mask,
                         const KnifeEdgeMask& conjugate_mask, RetentionProxy proxy = RetentionProxy::symmetric);

/// V = eta 10^{-S0/10} + (1 - eta) V_unc, relative to the shot-noise limit.
double noise_level(double eta, const NoiseModelParams& noise);

/// Masks for a scenario: the probe is always clipped from below; the
/// conjugate from below (same side) or above (opposite side).
std::pair<KnifeEdgeMask, KnifeEdgeMask> scenario_masks(const ClipLattice& lattice, double fraction, ClipGeometry geometry);

struct ClipRow {
  double fraction = 0.0;
  ClipGeometry geometry = ClipGeometry::same_side;
  double z = 0.0;
  double z_over_zr = 0.0;
  int oam = 0;
  double cut_probe = 0.0;
  double cut_conjugate = 0.0;
  double eta = 0.0;
  double noise = 0.0;
};

struct ClipSweep {
  std::vector<double> fractions;
  std::vector<ClipGeometry> geometries{ClipGeometry::same_side, ClipGeometry::opposite_side};
  std::vector<double> planes_z_over_zr{0.0008, 0.83};
  NoiseModelParams noise;
  RetentionProxy proxy = RetentionProxy::symmetric;
  ClipLatticeOptions lattice;
};

/// One row per (plane, geometry, fraction), planes outermost.
std::vector<ClipRow> noise_vs_clipping(const ClipSweep& sweep, const PumpParams& pump, const MediumParams& medium,
                                       const SincApprox& approx);

/// Retention for a single scenario on a prebuilt lattice.
ClipRow evaluate_scenario(const ClipLattice& lattice, const ClipScenario& scenario,
                          RetentionProxy proxy = RetentionProxy::symmetric);

}  // namespace twinbeam
