#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "qlab/maps.hpp"

namespace qlab {

/// Result of a quasilinearity-constant search. sampled_lower is a true lower
/// bound for Q[f] (it is an attained defect value); certified_upper, when
/// present, is the map's a-priori bound. witness_pair reproduces
/// sampled_lower on re-evaluation.
struct QEstimate {
  double sampled_lower = 0.0;
  std::optional<double> certified_upper;
  std::pair<Vec, Vec> witness_pair{Vec::zeros(1), Vec::zeros(1)};
  long samples_used = 0;
  std::uint64_t seed = 0;
};

struct QEstimateOptions {
  int ascent_rounds = 50;
  double ascent_initial_delta = 0.5;
  double ascent_min_delta = 1e-7;
  int ascent_coord_budget = 64;  // coordinates probed per round
};

/// Lower-estimates Q[f]: structured pairs (basis vectors, their sign flips,
/// partial-sum vectors and combinations), then `budget` random pairs, then
/// greedy multiplicative coordinate ascent from the best pair found.
/// Same seed and a larger budget extend the same sample stream.
QEstimate estimate_Q(const HomogeneousMap& f, int budget, std::uint64_t seed,
                     const QEstimateOptions& opts = {});

enum class MapKind { Ribe, KaltonPeck };

struct CertParams {
  double p = 1.0;    // domain exponent (Kalton-Peck only)
  double lip = 1.0;  // profile Lipschitz constant (Kalton-Peck only)
};

/// Closed-form certificate: 2 log 2 for the Ribe functional,
/// 10^{1/p} e^{-1} L(theta) for a Kalton-Peck map.
double certified_Q_upper(MapKind kind, const CertParams& params = {});

/// dist_lb / certified_upper: a lower bound for the smallest constant K with
/// dist(g, linear) <= K * Q[g] on the domain of f. Requires f to carry a
/// certificate; returns 0 when dist_lb = 0.
double k0_lower_bound(const HomogeneousMap& f, double dist_lb);

}  // namespace qlab
