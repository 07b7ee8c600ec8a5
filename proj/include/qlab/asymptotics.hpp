#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlab/maps.hpp"

namespace qlab {

/// Indexed family n -> f_n of homogeneous maps. The builder is pure: calling
/// it twice with the same index yields the same map.
struct MapFamily {
  std::vector<std::size_t> index_grid;  // strictly increasing
  std::function<HomogeneousMap(std::size_t)> builder;
  std::string label;
};

struct AccessibilityRow {
  std::size_t n = 0;
  double norm_est = 0.0;
  double q_lb = 0.0;
  std::optional<double> q_ub;
  double dist_lb = 0.0;
  bool dist_certified = false;
  std::string notes;
};

enum class Accessibility {
  UltraproductOfOperators,
  AccessibleNonUltraproductCandidate,
  NotAccessible,
  Inconclusive,
};

std::string to_string(Accessibility a);

/// Finite-grid stand-ins for the limit behaviour of a family: a sequence
/// "vanishes" when it is decreasing and either already below the threshold
/// or down to at most stagnation_ratio of its first value; it "stagnates"
/// when it ends above the threshold without such a drop; norms "diverge"
/// when strictly increasing and at least divergence_ratio times the first
/// value by the end of the grid.
struct ClassifierThresholds {
  double tau_q = 0.05;
  double tau_d = 0.05;
  double tau_sep = 0.25;
  double stagnation_ratio = 0.6;
  double divergence_ratio = 2.0;
};

/// Pure function of the rows and thresholds. Verdicts, in test order:
///  - not-accessible: sampled Q stagnates, or the norm column diverges;
///  - ultraproduct-of-operators: distance column vanishes while Q does;
///  - accessible-non-ultraproduct-candidate: certified Q bound vanishes,
///    norms stay bounded, and the distance column clears tau_sep everywhere;
///  - inconclusive otherwise.
Accessibility classify_accessibility(const std::vector<AccessibilityRow>& rows,
                                     const ClassifierThresholds& thresholds = {});

struct AccessibilityReport {
  std::vector<AccessibilityRow> rows;
  Accessibility classification = Accessibility::Inconclusive;
  std::uint64_t seed = 0;
  std::string label;
};

/// Fills one row per grid index (norm estimate, sampled Q lower bound,
/// certified Q bound from the map, best distance lower bound) and classifies.
/// Requires at least 3 grid points. Deterministic for a fixed seed.
AccessibilityReport accessibility_report(const MapFamily& family, int budget,
                                         std::uint64_t seed,
                                         const ClassifierThresholds& thresholds = {});

/// (log n)^{-1} * Ribe functional on l_1^n. Bounded norms, certified Q bound
/// 2 log 2 / log n -> 0, distance lower bound 1/2 at every n.
MapFamily ribe_family(const std::vector<std::size_t>& n_grid);

/// Height-normalized Kalton-Peck family on l_p^n: with h(n) = log(n)/p and
/// theta the clamp profile of height h(n), builder(n) = Phi_theta / h(n).
/// The height is chosen so that the profile saturates exactly at the
/// dimension-n partial sum, which keeps the distance lower bound at 1/2 on
/// every grid index while the certified Q bound 10^{1/p} e^{-1} / h(n)
/// decreases to zero. Requires n >= 2.
MapFamily kp_family(const std::vector<std::size_t>& n_grid, PExponent p);

/// Unnormalized Kalton-Peck maps with the positive-part profile. Sampled Q
/// stays at log 2 or above for every n and the norms grow like log(n)/p, so
/// the family classifies as not accessible.
MapFamily kp_family_unscaled(const std::vector<std::size_t>& n_grid, PExponent p);

/// Identity on l_p^n; the trivial ultraproduct-of-operators baseline.
MapFamily linear_family(const std::vector<std::size_t>& n_grid, PExponent p);

struct TruncationResult {
  MapFamily family;
  std::vector<double> d;           // per-index normalization ||phi|E_n - ell_n||
  std::vector<double> q_bound;     // per-index quasilinearity bound (<= 1/d_n)
  // Evaluation points used to estimate each d; builder(n) attains ratio 1 on
  // the matching list up to rounding, making the unit-norm property checkable.
  std::vector<std::vector<Vec>> norm_witnesses;
};

/// Difference construction: restrict phi (rescaled by its certificate so
/// that Q <= 1) to the leading-n subspace, subtract the best linear
/// approximation found heuristically, and normalize by the estimated norm
/// d_n of the difference. Each builder(n) has unit norm estimate and
/// quasilinearity bound at most 1/d_n. phi must carry a certificate; a
/// linear phi makes d_n vanish and is rejected.
TruncationResult truncation_family(const HomogeneousMap& phi,
                                   const std::vector<std::size_t>& n_grid,
                                   int budget, std::uint64_t seed);

/// Derivation-like map D_n(x)_k = x_k log(||x||_p/|x_k|) / log n on l_p^n;
/// norm 1/p, attained at the normalized all-ones vector.
Vec kp_derivation(const Vec& x, std::size_t n, PExponent p);
HomogeneousMap kp_derivation_map(std::size_t n, PExponent p);

/// Variant with ||x||_p replaced by 1: D0_n(x)_k = x_k log(1/|x_k|) / log n.
/// Satisfies the Leibniz rule exactly on the coordinate algebra.
Vec kp_derivation_variant(const Vec& x, std::size_t n, PExponent p);

enum class DerivationKind { Homogeneous, Variant };

struct LeibnizDefect {
  double measured;                    // ||D(xy) - x D(y) - y D(x)||_p
  std::optional<double> closed_form;  // exact value for the homogeneous kind
};

/// Leibniz defect of the chosen derivation at (x, y) with the coordinatewise
/// product. For the homogeneous kind the defect collapses to the closed form
/// |log(||xy|| / (||x|| ||y||))| * ||xy|| / log n, returned alongside the
/// measured value; the variant kind has no defect beyond rounding noise.
LeibnizDefect leibniz_defect(DerivationKind kind, const Vec& x, const Vec& y,
                             std::size_t n, PExponent p);

/// ||D_n(e)|| / ||e|| for an idempotent e with support size m:
/// log m / (p log n). Derivations kill idempotents only as n grows.
double derivation_idempotent_decay(std::size_t support, std::size_t n, PExponent p);

}  // namespace qlab
