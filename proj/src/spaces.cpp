#include "qlab/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace qlab {

PExponent::PExponent(double p) : p_(p) {
  if (!std::isfinite(p) || p <= 0.0)
    throw std::invalid_argument("PExponent: p must be finite and > 0");
}

Vec::Vec(std::vector<double> coords) : c_(std::move(coords)) {
  if (c_.empty()) throw std::invalid_argument("Vec: dimension must be positive");
  for (double v : c_)
    if (!std::isfinite(v)) throw std::invalid_argument("Vec: non-finite coordinate");
}

Vec Vec::zeros(std::size_t n) { return Vec(std::vector<double>(n, 0.0)); }

Vec Vec::unit(std::size_t n, std::size_t k) {
  if (k >= n) throw std::invalid_argument("Vec::unit: index out of range");
  std::vector<double> c(n, 0.0);
  c[k] = 1.0;
  return Vec(std::move(c));
}

Vec Vec::ones(std::size_t n) { return Vec(std::vector<double>(n, 1.0)); }

namespace {
void check_same_dim(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("Vec: dimension mismatch");
}
}  // namespace

Vec operator+(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) c[k] = a[k] + b[k];
  return Vec(std::move(c));
}

Vec operator-(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) c[k] = a[k] - b[k];
  return Vec(std::move(c));
}

Vec operator*(double t, const Vec& a) {
  std::vector<double> c(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) c[k] = t * a[k];
  return Vec(std::move(c));
}

bool operator==(const Vec& a, const Vec& b) { return a.coords() == b.coords(); }

Vec coordwise_product(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) c[k] = a[k] * b[k];
  return Vec(std::move(c));
}

double PNormedSpace::concavity_modulus() const {
  const double pv = p.value();
  return pv >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / pv - 1.0);
}

double p_quasinorm(const Vec& x, PExponent pe) {
  const double p = pe.value();
  double m = 0.0;
  for (double v : x.coords()) {
    const double a = std::fabs(v);
    if (a > m) m = a;
  }
  if (m == 0.0) return 0.0;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x.coords()) s += std::fabs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : x.coords()) {
      const double r = v / m;
      s += r * r;
    }
    return m * std::sqrt(s);
  }
  double s = 0.0;
  for (double v : x.coords())
    if (v != 0.0) s += std::pow(std::fabs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

PExponent aoki_rolewicz_exponent(double delta) {
  if (!std::isfinite(delta) || delta < 1.0)
    throw std::invalid_argument("aoki_rolewicz_exponent: modulus must be >= 1");
  return PExponent(std::log(2.0) / std::log(2.0 * delta));
}

Vec gaussian_vec(std::size_t n, RngStream& rng) {
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = rng.gaussian();
  return Vec(std::move(c));
}

Vec sample_unit_sphere(const PNormedSpace& space, RngStream& rng) {
  for (;;) {
    Vec g = gaussian_vec(space.dim, rng);
    const double nrm = p_quasinorm(g, space.p);
    if (nrm > 0.0) return (1.0 / nrm) * g;
  }
}

}  // namespace qlab
