#include "qlab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qlab {

bool LipschitzProfile::bounded() const { return std::isfinite(sup_norm); }

LipschitzProfile LipschitzProfile::clamp(double height) {
  if (!std::isfinite(height) || height <= 0.0)
    throw std::invalid_argument("LipschitzProfile::clamp: height must be > 0");
  LipschitzProfile pr;
  pr.theta = [height](double t) { return std::min(std::max(t, 0.0), height); };
  pr.lip_const = 1.0;
  pr.sup_norm = height;
  pr.increasing = true;
  return pr;
}

LipschitzProfile LipschitzProfile::positive_part() {
  LipschitzProfile pr;
  pr.theta = [](double t) { return std::max(t, 0.0); };
  pr.lip_const = 1.0;
  pr.sup_norm = std::numeric_limits<double>::infinity();
  pr.increasing = true;
  return pr;
}

double omega(double t) { return t == 0.0 ? 0.0 : t * std::log(std::fabs(t)); }

double omega_theta(double t, const LipschitzProfile& theta) {
  return t == 0.0 ? 0.0 : t * theta(-std::log(std::fabs(t)));
}

double ribe(const Vec& x) {
  double s = 0.0;
  for (double v : x.coords()) s += v;
  double sum_omega = 0.0;
  for (double v : x.coords()) sum_omega += omega(v);
  return omega(s) - sum_omega;
}

Vec kalton_peck(const Vec& x, const LipschitzProfile& theta, PExponent p) {
  const double nrm = p_quasinorm(x, p);
  std::vector<double> out(x.dim(), 0.0);
  if (nrm > 0.0) {
    for (std::size_t k = 0; k < x.dim(); ++k) {
      const double v = x[k];
      if (v != 0.0) out[k] = v * theta(std::log(nrm / std::fabs(v)));
    }
  }
  return Vec(std::move(out));
}

Vec kalton_peck_nonhom(const Vec& x, const LipschitzProfile& theta) {
  std::vector<double> out(x.dim(), 0.0);
  for (std::size_t k = 0; k < x.dim(); ++k) out[k] = omega_theta(x[k], theta);
  return Vec(std::move(out));
}

HomogeneousMap homogenize(std::function<Vec(const Vec&)> u, PNormedSpace domain,
                          PNormedSpace codomain) {
  HomogeneousMap f;
  f.domain = domain;
  f.codomain = codomain;
  f.eval = [u = std::move(u), domain, codomain](const Vec& x) {
    const double nrm = p_quasinorm(x, domain.p);
    if (nrm == 0.0) return Vec::zeros(codomain.dim);
    const Vec d = (1.0 / nrm) * x;
    return (nrm / 2.0) * (u(d) - u(-1.0 * d));
  };
  return f;
}

double quasilinearity_defect(const HomogeneousMap& f, const Vec& x, const Vec& y) {
  const double nx = p_quasinorm(x, f.domain.p);
  const double ny = p_quasinorm(y, f.domain.p);
  if (nx == 0.0 && ny == 0.0)
    throw std::invalid_argument("quasilinearity_defect: x = y = 0");
  const Vec r = f(x + y) - f(x) - f(y);
  return p_quasinorm(r, f.codomain.p) / (nx + ny);
}

double hom_map_norm_estimate(const HomogeneousMap& f, int budget,
                             std::uint64_t seed,
                             const std::vector<Vec>& witnesses) {
  double best = 0.0;
  auto consider = [&](const Vec& x) {
    const double nx = p_quasinorm(x, f.domain.p);
    if (nx == 0.0) return;
    const double r = p_quasinorm(f(x), f.codomain.p) / nx;
    if (r > best) best = r;
  };
  for (const Vec& w : witnesses) consider(w);
  RngStream rng(seed, 0x6e6f726dULL);
  for (int i = 0; i < budget; ++i) consider(sample_unit_sphere(f.domain, rng));
  return best;
}

LemmaWResult lemma_w_scan(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("lemma_w_scan: empty grid");
  const std::size_t n = grid.size();
  std::vector<double> w(n), av(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = omega(grid[i]);
    av[i] = std::fabs(grid[i]);
  }
  LemmaWResult res;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double den = av[i] + av[j];
      if (den == 0.0) continue;
      const double ratio = std::fabs(omega(grid[i] + grid[j]) - w[i] - w[j]) / den;
      ++res.pairs_scanned;
      if (ratio > res.max_ratio) {
        res.max_ratio = ratio;
        res.argmax_s = grid[i];
        res.argmax_t = grid[j];
      }
    }
  }
  return res;
}

std::vector<double> lemma_w_grid(double step) {
  if (!std::isfinite(step) || step <= 0.0)
    throw std::invalid_argument("lemma_w_grid: step must be > 0");
  const std::size_t count = static_cast<std::size_t>(std::floor(4.0 / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = -2.0 + static_cast<double>(i) * step;
  return grid;
}

HomogeneousMap ribe_functional(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ribe_functional: dimension must be > 0");
  HomogeneousMap f;
  f.domain = PNormedSpace{n, PExponent(1.0)};
  f.codomain = PNormedSpace{1, PExponent(1.0)};
  f.eval = [](const Vec& x) { return Vec(std::vector<double>{ribe(x)}); };
  f.q_certified_upper = 2.0 * std::log(2.0);
  f.commutes_with_signed_perms = false;
  return f;
}

HomogeneousMap kalton_peck_map(std::size_t n, PExponent p, LipschitzProfile theta) {
  if (n == 0) throw std::invalid_argument("kalton_peck_map: dimension must be > 0");
  HomogeneousMap f;
  f.domain = PNormedSpace{n, p};
  f.codomain = PNormedSpace{n, p};
  const double lip = theta.lip_const;
  f.eval = [p, theta = std::move(theta)](const Vec& x) {
    return kalton_peck(x, theta, p);
  };
  f.q_certified_upper = std::pow(10.0, 1.0 / p.value()) * std::exp(-1.0) * lip;
  f.commutes_with_signed_perms = true;
  return f;
}

HomogeneousMap identity_map(std::size_t n, PExponent p) {
  if (n == 0) throw std::invalid_argument("identity_map: dimension must be > 0");
  HomogeneousMap f;
  f.domain = PNormedSpace{n, p};
  f.codomain = PNormedSpace{n, p};
  f.eval = [](const Vec& x) { return x; };
  f.q_certified_upper = 0.0;
  f.commutes_with_signed_perms = true;
  return f;
}

HomogeneousMap scale_map(const HomogeneousMap& f, double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("scale_map: non-finite factor");
  HomogeneousMap g;
  g.domain = f.domain;
  g.codomain = f.codomain;
  g.eval = [eval = f.eval, c](const Vec& x) { return c * eval(x); };
  if (f.q_certified_upper) g.q_certified_upper = std::fabs(c) * *f.q_certified_upper;
  g.commutes_with_signed_perms = f.commutes_with_signed_perms;
  return g;
}

HomogeneousMap restrict_to_leading(const HomogeneousMap& f, std::size_t n) {
  if (n == 0 || n > f.domain.dim)
    throw std::invalid_argument("restrict_to_leading: bad dimension");
  const bool endo = f.codomain.dim == f.domain.dim;
  if (!endo && f.codomain.dim != 1)
    throw std::invalid_argument("restrict_to_leading: unsupported codomain shape");
  HomogeneousMap g;
  g.domain = PNormedSpace{n, f.domain.p};
  g.codomain = endo ? PNormedSpace{n, f.codomain.p} : f.codomain;
  const std::size_t big = f.domain.dim;
  g.eval = [eval = f.eval, big, n, endo](const Vec& x) {
    std::vector<double> padded(big, 0.0);
    for (std::size_t k = 0; k < n; ++k) padded[k] = x[k];
    Vec out = eval(Vec(std::move(padded)));
    if (!endo) return out;
    std::vector<double> lead(out.coords().begin(), out.coords().begin() + n);
    return Vec(std::move(lead));
  };
  g.q_certified_upper = f.q_certified_upper;  // restriction cannot increase Q
  g.commutes_with_signed_perms = f.commutes_with_signed_perms;
  return g;
}

}  // namespace qlab
