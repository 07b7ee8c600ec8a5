#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qlab/maps.hpp"

namespace qlab {

/// Element (y, x) of the twisted direct sum Y (+)_phi X.
struct TwistedSumElement {
  Vec y;
  Vec x;
};

/// Y (+)_phi X for a homogeneous phi: X -> Y with phi(0) = 0.
/// The quasinorm ||(y, x)|| = ||y - phi(x)||_Y + ||x||_X is finite,
/// homogeneous, and quasi-subadditive with modulus at most 1 + Q[phi]
/// when X and Y are normed.
struct TwistedSumSpace {
  PNormedSpace space_x;
  PNormedSpace space_y;
  HomogeneousMap phi;
};

TwistedSumSpace make_twisted_sum(PNormedSpace space_x, PNormedSpace space_y,
                                 HomogeneousMap phi);

double twisted_norm(const TwistedSumSpace& space, const TwistedSumElement& z);

/// y -> (y, 0); isometric embedding of Y.
TwistedSumElement inclusion(const TwistedSumSpace& space, const Vec& y);

/// (y, x) -> x; contractive, kernel is the embedded copy of Y.
Vec quotient(const TwistedSumSpace& space, const TwistedSumElement& z);

/// x -> (phi(x), x); a section of the quotient with ||B(x)|| = ||x|| exactly.
TwistedSumElement section(const TwistedSumSpace& space, const Vec& x);

struct ModulusReport {
  double empirical_delta = 1.0;
  std::optional<double> certified_ceiling;  // 1 + Q certificate, when valid
  std::pair<TwistedSumElement, TwistedSumElement> worst_pair{
      TwistedSumElement{Vec::zeros(1), Vec::zeros(1)},
      TwistedSumElement{Vec::zeros(1), Vec::zeros(1)}};
  long samples_used = 0;
  std::uint64_t seed = 0;
};

/// Samples pairs and reports the largest ratio ||z1+z2|| / (||z1|| + ||z2||).
/// The certified ceiling 1 + Q_ub[phi] is attached when both factors are
/// normed (p >= 1) and phi carries a certificate.
ModulusReport quasinorm_modulus_report(const TwistedSumSpace& space, int budget,
                                       std::uint64_t seed);

struct SplittingGapRow {
  std::size_t n;
  double dist_lb;
  bool certified;
};

/// For each n in the grid, a lower bound on the distance from builder(n)
/// (phi restricted to the leading-n subspace) to the linear maps: the
/// witness-certificate bound from the basis/partial-sum family, combined
/// with the symmetric bound when the map is equivariant. A growing column
/// shows the twisted sum moving ever further from a direct sum.
std::vector<SplittingGapRow> splitting_gap(
    const std::function<HomogeneousMap(std::size_t)>& builder,
    const std::vector<std::size_t>& n_grid, std::uint64_t seed);

}  // namespace qlab
