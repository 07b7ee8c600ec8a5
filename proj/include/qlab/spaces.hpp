#pragma once

#include <cstddef>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab {

/// Exponent p of an l_p quasinorm. Any finite p > 0 is accepted:
/// p >= 1 gives a norm, p in (0,1) a p-norm whose triangle inequality
/// holds only after raising to the p-th power.
class PExponent {
 public:
  PExponent() = default;  // the norm case p = 1
  explicit PExponent(double p);
  double value() const { return p_; }

 private:
  double p_ = 1.0;
};

/// Dense coordinate vector. Construction rejects empty coordinate lists and
/// non-finite entries; all operations preserve finiteness or throw.
class Vec {
 public:
  explicit Vec(std::vector<double> coords);

  static Vec zeros(std::size_t n);
  static Vec unit(std::size_t n, std::size_t k);  // k-th basis vector, 0-based
  static Vec ones(std::size_t n);                 // s_n = (1, ..., 1)

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  const std::vector<double>& coords() const { return c_; }

 private:
  std::vector<double> c_;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double t, const Vec& a);
bool operator==(const Vec& a, const Vec& b);

/// Coordinatewise product, the multiplication of the coordinate algebra.
Vec coordwise_product(const Vec& a, const Vec& b);

/// Finite-dimensional l_p space: dimension plus quasinorm exponent.
struct PNormedSpace {
  std::size_t dim;
  PExponent p;

  /// Best constant D with ||x+y|| <= D(||x|| + ||y||): 1 for p >= 1,
  /// 2^{1/p-1} for p < 1.
  double concavity_modulus() const;
};

/// (sum |x_k|^p)^{1/p}, computed with max-scaling so that extreme
/// magnitudes neither overflow nor underflow.
double p_quasinorm(const Vec& x, PExponent p);

/// Exponent p with (2*delta)^p = 2 for a quasinorm with modulus delta >= 1;
/// every delta-quasinorm admits an equivalent p-norm with this p.
PExponent aoki_rolewicz_exponent(double delta);

/// Standard gaussian coordinates.
Vec gaussian_vec(std::size_t n, RngStream& rng);

/// Gaussian direction normalized to unit l_p quasinorm.
Vec sample_unit_sphere(const PNormedSpace& space, RngStream& rng);

}  // namespace qlab
