#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qlab/maps.hpp"

namespace qlab {

/// Signed permutation u: (u x)_{perm[i]} = sign[i] * x_i. These are exactly
/// the linear isometries shared by every l_p^n, p > 0.
struct SignedPermutation {
  std::vector<std::size_t> perm;
  std::vector<int> sign;

  Vec apply(const Vec& x) const;
  SignedPermutation inverse() const;
  Eigen::MatrixXd matrix() const;
};

/// Full group, size 2^n * n!. Guarded to n <= 8.
std::vector<SignedPermutation> enumerate_signed_permutations(std::size_t n);

SignedPermutation random_signed_permutation(std::size_t n, RngStream& rng);

/// Certificate that every linear map is at least `value` away from f in the
/// operator quasinorm: with X = sum c_j x_j, the defect |f(X) - sum c_j f(x_j)|
/// cannot be removed by any linear map, and dividing by the triangle-weighted
/// size of the evaluation points turns it into a distance lower bound.
/// For codomain p >= 1 the denominator is ||X|| + sum |c_j| ||x_j||; for
/// p < 1 the p-th-power triangle inequality gives
/// (||X||^p + sum |c_j|^p ||x_j||^p)^{1/p} instead.
struct WitnessCertificate {
  std::vector<Vec> points;
  std::vector<double> coefficients;
  Vec target;
  double value;
};

/// Builds the certificate. The target defaults to sum c_j x_j; when
/// expected_target is supplied it must match that sum within 1e-9.
WitnessCertificate witness_certificate(const HomogeneousMap& f,
                                       std::vector<Vec> points,
                                       std::vector<double> coefficients,
                                       const std::optional<Vec>& expected_target = {});

/// Re-evaluates the certificate value from its stored data.
double recompute_certificate_value(const HomogeneousMap& f,
                                   const WitnessCertificate& cert);

/// Average of u^{-1} ell u over all signed permutations, which collapses a
/// square matrix to (trace/n) * Identity. Returns that scalar.
double symmetrize_linear(const Eigen::MatrixXd& ell);

struct SymmetricDistBound {
  double value = 0.0;
  /// True when the bound is backed by the averaging argument: equivariance
  /// verified and both exponents >= 1 (the argument needs the triangle
  /// inequality). Otherwise the value is only a heuristic.
  bool certified = false;
  double worst_commutation_error = 0.0;
};

/// Lower bound for dist(f, linear) when f commutes with signed permutations:
/// averaging any linear competitor over the group can only shrink the
/// distance and lands on a multiple of the identity, so it suffices to
/// minimize max_j ||f(x_j) - a x_j||/||x_j|| over the scalar a. Each term is
/// convex in a, hence the max is unimodal and golden-section search applies.
/// `tol` is subtracted from the computed minimum. Equivariance is checked on
/// 32 random group elements; failure throws unless allow_heuristic is set,
/// in which case the result is returned with certified = false.
SymmetricDistBound dist_lb_symmetric(const HomogeneousMap& f,
                                     const std::vector<Vec>& witnesses,
                                     double tol = 1e-9, std::uint64_t seed = 1,
                                     bool allow_heuristic = false);

struct LinearFit {
  Eigen::MatrixXd matrix;
  double objective;  // max_j ||f(x_j) - matrix x_j|| / ||x_j||
};

/// Heuristic minimax fit of a linear map to f on the given samples:
/// least-squares initialization, then subgradient descent on the max
/// objective with backtracking and seeded restarts. The objective value is
/// an upper-bound style diagnostic only; it certifies nothing.
LinearFit best_linear_heuristic(const HomogeneousMap& f,
                                const std::vector<Vec>& samples, int iters,
                                std::uint64_t seed, int restarts = 2);

/// f - ell as a homogeneous map. Subtracting a linear map does not change
/// the quasilinearity defect, so the certificate is carried along.
HomogeneousMap subtract_linear(const HomogeneousMap& f, const Eigen::MatrixXd& ell);

HomogeneousMap linear_map(const Eigen::MatrixXd& ell, PExponent domain_p,
                          PExponent codomain_p);

}  // namespace qlab
