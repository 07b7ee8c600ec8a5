#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qlab/spaces.hpp"

namespace qlab {

/// Scalar profile theta: vanishes on (-inf, 0], Lipschitz with constant
/// lip_const, bounded by sup_norm (+infinity marks an unbounded profile).
struct LipschitzProfile {
  std::function<double(double)> theta;
  double lip_const = 1.0;
  double sup_norm = 0.0;
  bool increasing = true;

  double operator()(double t) const { return theta(t); }
  bool bounded() const;

  /// theta_h(t) = min(max(t, 0), h); lip_const 1, sup_norm h.
  static LipschitzProfile clamp(double height);

  /// theta(t) = max(t, 0); lip_const 1, unbounded.
  static LipschitzProfile positive_part();
};

/// Positively homogeneous map between finite-dimensional l_p spaces.
/// Functionals are modelled with a 1-dimensional codomain. The optional
/// certificate is an a-priori upper bound for the quasilinearity constant
/// Q[f]; commutes_with_signed_perms declares equivariance under coordinate
/// permutations and sign changes (claims are re-verified where they matter).
struct HomogeneousMap {
  PNormedSpace domain;
  PNormedSpace codomain;
  std::function<Vec(const Vec&)> eval;
  std::optional<double> q_certified_upper;
  bool commutes_with_signed_perms = false;

  Vec operator()(const Vec& x) const { return eval(x); }
};

/// omega(t) = t log|t|, omega(0) = 0. Odd; |omega| <= 1/e on [-1, 1].
double omega(double t);

/// omega_theta(t) = t * theta(-log|t|), 0 at t = 0.
double omega_theta(double t, const LipschitzProfile& theta);

/// Ribe's functional on l_1: sum over supp(x) of x_k log(|s(x)|/|x_k|)
/// with s(x) = sum x_k, evaluated through the branch-free identity
/// omega(s(x)) - sum_k omega(x_k) (the two agree, and the identity needs
/// no case split at s(x) = 0).
double ribe(const Vec& x);

/// Kalton-Peck map: coordinate k maps to x_k * theta(log(||x||_p/|x_k|)),
/// zero coordinates stay zero. Positively homogeneous.
Vec kalton_peck(const Vec& x, const LipschitzProfile& theta, PExponent p);

/// Non-homogeneous companion: coordinate k maps to x_k * theta(-log|x_k|),
/// i.e. omega_theta applied coordinatewise.
Vec kalton_peck_nonhom(const Vec& x, const LipschitzProfile& theta);

/// Odd homogenization (||x||/2) * (u(x/||x||) - u(-x/||x||)), zero at zero.
/// Fixes maps that are already homogeneous and odd; kills constants.
HomogeneousMap homogenize(std::function<Vec(const Vec&)> u, PNormedSpace domain,
                          PNormedSpace codomain);

/// ||f(x+y) - f(x) - f(y)||_cod / (||x||_dom + ||y||_dom).
/// The numerator is assembled coordinatewise before taking the quasinorm.
/// Rejects x = y = 0.
double quasilinearity_defect(const HomogeneousMap& f, const Vec& x, const Vec& y);

/// Monte-Carlo lower estimate of ||f|| = sup ||f(x)||/||x||: maximum of the
/// ratio over caller-supplied witness points and `budget` sampled unit
/// vectors. Monotone in the sample set; never exceeds the true norm.
double hom_map_norm_estimate(const HomogeneousMap& f, int budget,
                             std::uint64_t seed,
                             const std::vector<Vec>& witnesses = {});

struct LemmaWResult {
  double max_ratio = 0.0;
  double argmax_s = 0.0;
  double argmax_t = 0.0;
  std::size_t pairs_scanned = 0;
};

/// Scans |omega(s+t) - omega(s) - omega(t)| / (|s| + |t|) over all pairs
/// from the given 1-d grid (pairs with |s| + |t| = 0 are skipped). The ratio
/// is bounded by log 2, attained along s = t.
LemmaWResult lemma_w_scan(const std::vector<double>& grid);

/// Uniform grid on [-2, 2] with the given step, endpoints included.
std::vector<double> lemma_w_grid(double step);

// Ready-made maps.

HomogeneousMap ribe_functional(std::size_t n);
HomogeneousMap kalton_peck_map(std::size_t n, PExponent p, LipschitzProfile theta);
HomogeneousMap identity_map(std::size_t n, PExponent p);

/// c * f, with the certificate and equivariance flag carried along.
HomogeneousMap scale_map(const HomogeneousMap& f, double c);

/// Restriction to the span of the leading n coordinates (zero-padding in,
/// truncation out). Exact for coordinate-local maps and for functionals.
HomogeneousMap restrict_to_leading(const HomogeneousMap& f, std::size_t n);

}  // namespace qlab
