#include "qlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

#include "qlab/distance.hpp"
#include "qlab/estimation.hpp"

namespace qlab {

std::string to_string(Accessibility a) {
  switch (a) {
    case Accessibility::UltraproductOfOperators:
      return "ultraproduct-of-operators";
    case Accessibility::AccessibleNonUltraproductCandidate:
      return "accessible-non-ultraproduct-candidate";
    case Accessibility::NotAccessible:
      return "not-accessible";
    case Accessibility::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

bool vanishing_trend(const std::vector<double>& v, double tau, double drop) {
  if (v.empty()) return false;
  if (v.back() <= tau) return true;
  return strictly_decreasing(v) && v.back() <= drop * v.front();
}

}  // namespace

Accessibility classify_accessibility(const std::vector<AccessibilityRow>& rows,
                                     const ClassifierThresholds& th) {
  if (rows.size() < 3)
    throw std::invalid_argument("classify_accessibility: need at least 3 rows");

  std::vector<double> q_lb, norm, dist;
  std::vector<double> q_ub;
  bool q_ub_present = true;
  for (const AccessibilityRow& r : rows) {
    q_lb.push_back(r.q_lb);
    norm.push_back(r.norm_est);
    dist.push_back(r.dist_lb);
    if (r.q_ub)
      q_ub.push_back(*r.q_ub);
    else
      q_ub_present = false;
  }

  const bool q_stagnates = q_lb.back() >= th.tau_q &&
                           q_lb.back() >= th.stagnation_ratio * q_lb.front();
  const bool norm_diverges = strictly_increasing(norm) &&
                             norm.back() >= th.divergence_ratio * norm.front();
  if (q_stagnates || norm_diverges) return Accessibility::NotAccessible;

  if (dist.back() <= th.tau_d &&
      vanishing_trend(q_lb, th.tau_q, th.stagnation_ratio))
    return Accessibility::UltraproductOfOperators;

  const double min_dist = *std::min_element(dist.begin(), dist.end());
  if (q_ub_present && vanishing_trend(q_ub, th.tau_q, th.stagnation_ratio) &&
      min_dist >= th.tau_sep)
    return Accessibility::AccessibleNonUltraproductCandidate;

  return Accessibility::Inconclusive;
}

namespace {

/// Best available distance lower bound for one family member: the
/// witness-certificate bound from the basis family, improved by the
/// symmetric bound when the map is an equivariant endomorphism.
std::pair<double, std::string> best_dist_lb(const HomogeneousMap& f,
                                            std::uint64_t seed, bool& certified) {
  const std::size_t n = f.domain.dim;
  std::vector<Vec> points;
  std::vector<double> coeffs(n, 1.0);
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) points.push_back(Vec::unit(n, i));
  const WitnessCertificate cert =
      witness_certificate(f, std::move(points), std::move(coeffs));
  double best = cert.value;
  std::string src = "dist=witness";
  certified = true;

  if (f.domain.dim == f.codomain.dim && f.commutes_with_signed_perms && n >= 2) {
    const SymmetricDistBound sym =
        dist_lb_symmetric(f, {Vec::unit(n, 0), Vec::ones(n)}, 1e-9, seed, true);
    if (sym.value > best) {
      best = sym.value;
      src = sym.certified ? "dist=symmetric" : "dist=symmetric-heuristic";
      certified = sym.certified;
    }
  }
  return {best, src};
}

}  // namespace

AccessibilityReport accessibility_report(const MapFamily& family, int budget,
                                         std::uint64_t seed,
                                         const ClassifierThresholds& thresholds) {
  if (family.index_grid.size() < 3)
    throw std::invalid_argument("accessibility_report: need at least 3 grid points");
  for (std::size_t i = 1; i < family.index_grid.size(); ++i)
    if (family.index_grid[i] <= family.index_grid[i - 1])
      throw std::invalid_argument("accessibility_report: grid must increase");

  AccessibilityReport rep;
  rep.seed = seed;
  rep.label = family.label;
  std::uint64_t stream = 0;
  for (std::size_t n : family.index_grid) {
    const HomogeneousMap f = family.builder(n);
    AccessibilityRow row;
    row.n = n;

    std::vector<Vec> witnesses;
    const std::size_t ne = std::min<std::size_t>(n, 4);
    for (std::size_t i = 0; i < ne; ++i) witnesses.push_back(Vec::unit(n, i));
    witnesses.push_back(Vec::ones(n));
    row.norm_est = hom_map_norm_estimate(f, budget, seed + 11 * stream, witnesses);

    const QEstimate q = estimate_Q(f, budget, seed + 11 * stream + 3);
    row.q_lb = q.sampled_lower;
    row.q_ub = f.q_certified_upper;

    bool certified = false;
    auto [dist, src] = best_dist_lb(f, seed + 11 * stream + 7, certified);
    row.dist_lb = dist;
    row.dist_certified = certified;
    row.notes = src;
    rep.rows.push_back(std::move(row));
    ++stream;
  }
  rep.classification = classify_accessibility(rep.rows, thresholds);
  return rep;
}

MapFamily ribe_family(const std::vector<std::size_t>& n_grid) {
  for (std::size_t n : n_grid)
    if (n < 2) throw std::invalid_argument("ribe_family: indices must be >= 2");
  MapFamily fam;
  fam.index_grid = n_grid;
  fam.label = "ribe";
  fam.builder = [](std::size_t n) {
    if (n < 2) throw std::invalid_argument("ribe_family: index must be >= 2");
    return scale_map(ribe_functional(n), 1.0 / std::log(static_cast<double>(n)));
  };
  return fam;
}

MapFamily kp_family(const std::vector<std::size_t>& n_grid, PExponent p) {
  for (std::size_t n : n_grid)
    if (n < 2) throw std::invalid_argument("kp_family: indices must be >= 2");
  MapFamily fam;
  fam.index_grid = n_grid;
  fam.label = "kp";
  fam.builder = [p](std::size_t n) {
    if (n < 2) throw std::invalid_argument("kp_family: index must be >= 2");
    const double height = std::log(static_cast<double>(n)) / p.value();
    return scale_map(kalton_peck_map(n, p, LipschitzProfile::clamp(height)),
                     1.0 / height);
  };
  return fam;
}

MapFamily kp_family_unscaled(const std::vector<std::size_t>& n_grid, PExponent p) {
  MapFamily fam;
  fam.index_grid = n_grid;
  fam.label = "kp-unscaled";
  fam.builder = [p](std::size_t n) {
    return kalton_peck_map(n, p, LipschitzProfile::positive_part());
  };
  return fam;
}

MapFamily linear_family(const std::vector<std::size_t>& n_grid, PExponent p) {
  MapFamily fam;
  fam.index_grid = n_grid;
  fam.label = "linear";
  fam.builder = [p](std::size_t n) { return identity_map(n, p); };
  return fam;
}

TruncationResult truncation_family(const HomogeneousMap& phi,
                                   const std::vector<std::size_t>& n_grid,
                                   int budget, std::uint64_t seed) {
  if (n_grid.empty()) throw std::invalid_argument("truncation_family: empty grid");
  if (!phi.q_certified_upper)
    throw std::invalid_argument("truncation_family: phi carries no certificate");
  for (std::size_t n : n_grid)
    if (n < 2 || n > phi.domain.dim)
      throw std::invalid_argument("truncation_family: bad grid index");

  // Rescale so that Q[phi] <= 1; a certificate of 0 means phi is linear and
  // the construction below would divide by a vanishing norm.
  const double cert = *phi.q_certified_upper;
  const HomogeneousMap base = cert > 0.0 ? scale_map(phi, 1.0 / cert) : phi;
  const double base_cert = cert > 0.0 ? 1.0 : 0.0;

  TruncationResult out;
  out.family.index_grid = n_grid;
  out.family.label = "truncation";

  struct Member {
    HomogeneousMap map;
    double d;
    double q_bound;
  };
  auto members = std::make_shared<std::map<std::size_t, Member>>();

  std::uint64_t stream = 0;
  for (std::size_t n : n_grid) {
    const HomogeneousMap fn = restrict_to_leading(base, n);

    std::vector<Vec> samples;
    const std::size_t ne = std::min<std::size_t>(n, 16);
    for (std::size_t i = 0; i < ne; ++i) samples.push_back(Vec::unit(n, i));
    for (std::size_t k = 1; k <= n; k *= 2) {
      std::vector<double> c(n, 0.0);
      for (std::size_t i = 0; i < k; ++i) c[i] = 1.0;
      samples.push_back(Vec(std::move(c)));
    }
    if (!(samples.back() == Vec::ones(n))) samples.push_back(Vec::ones(n));
    RngStream rng(seed, 0x747275ULL + stream);
    for (int i = 0; i < std::max(8, budget / 8); ++i)
      samples.push_back(sample_unit_sphere(fn.domain, rng));

    const LinearFit fit = best_linear_heuristic(fn, samples, 200, seed + stream);
    const HomogeneousMap diff = subtract_linear(fn, fit.matrix);

    // The witness list is the whole deterministic sample set plus the extra
    // seeded draws hom_map_norm_estimate would make; materializing them keeps
    // the estimate reproducible from the returned norm_witnesses alone.
    std::vector<Vec> witnesses = samples;
    RngStream wrng(seed + 31 * stream, 0x6e6f726dULL);
    for (int i = 0; i < budget; ++i)
      witnesses.push_back(sample_unit_sphere(diff.domain, wrng));
    const double d = hom_map_norm_estimate(diff, 0, seed + 31 * stream, witnesses);
    if (!(d > 1e-12))
      throw std::domain_error("truncation_family: difference norm vanished (phi linear?)");

    Member mem{scale_map(diff, 1.0 / d), d, base_cert / d};
    mem.map.q_certified_upper = base_cert / d;
    out.d.push_back(d);
    out.q_bound.push_back(base_cert / d);
    out.norm_witnesses.push_back(std::move(witnesses));
    members->emplace(n, std::move(mem));
    ++stream;
  }

  out.family.builder = [members](std::size_t n) {
    auto it = members->find(n);
    if (it == members->end())
      throw std::invalid_argument("truncation_family: index not on the grid");
    return it->second.map;
  };
  return out;
}

Vec kp_derivation(const Vec& x, std::size_t n, PExponent p) {
  if (n < 2) throw std::invalid_argument("kp_derivation: n must be >= 2");
  const double nrm = p_quasinorm(x, p);
  const double logn = std::log(static_cast<double>(n));
  std::vector<double> out(x.dim(), 0.0);
  if (nrm > 0.0)
    for (std::size_t k = 0; k < x.dim(); ++k)
      if (x[k] != 0.0)
        out[k] = x[k] * std::log(nrm / std::fabs(x[k])) / logn;
  return Vec(std::move(out));
}

HomogeneousMap kp_derivation_map(std::size_t n, PExponent p) {
  if (n < 2) throw std::invalid_argument("kp_derivation_map: n must be >= 2");
  HomogeneousMap f;
  f.domain = PNormedSpace{n, p};
  f.codomain = PNormedSpace{n, p};
  f.eval = [n, p](const Vec& x) { return kp_derivation(x, n, p); };
  f.q_certified_upper = std::pow(10.0, 1.0 / p.value()) * std::exp(-1.0) /
                        std::log(static_cast<double>(n));
  f.commutes_with_signed_perms = true;
  return f;
}

Vec kp_derivation_variant(const Vec& x, std::size_t n, PExponent p) {
  if (n < 2) throw std::invalid_argument("kp_derivation_variant: n must be >= 2");
  (void)p;  // the variant does not look at the norm
  const double logn = std::log(static_cast<double>(n));
  std::vector<double> out(x.dim(), 0.0);
  for (std::size_t k = 0; k < x.dim(); ++k)
    if (x[k] != 0.0) out[k] = x[k] * std::log(1.0 / std::fabs(x[k])) / logn;
  return Vec(std::move(out));
}

LeibnizDefect leibniz_defect(DerivationKind kind, const Vec& x, const Vec& y,
                             std::size_t n, PExponent p) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("leibniz_defect: dimension mismatch");
  const Vec xy = coordwise_product(x, y);
  const auto d = [&](const Vec& v) {
    return kind == DerivationKind::Homogeneous ? kp_derivation(v, n, p)
                                               : kp_derivation_variant(v, n, p);
  };
  const Vec defect =
      d(xy) - (coordwise_product(x, d(y)) + coordwise_product(y, d(x)));
  LeibnizDefect out{p_quasinorm(defect, p), std::nullopt};

  if (kind == DerivationKind::Homogeneous) {
    const double nxy = p_quasinorm(xy, p);
    if (nxy == 0.0) {
      out.closed_form = 0.0;
    } else {
      const double nx = p_quasinorm(x, p);
      const double ny = p_quasinorm(y, p);
      out.closed_form = std::fabs(std::log(nxy / (nx * ny))) * nxy /
                        std::log(static_cast<double>(n));
    }
  }
  return out;
}

double derivation_idempotent_decay(std::size_t support, std::size_t n, PExponent p) {
  if (support == 0) throw std::invalid_argument("idempotent decay: empty support");
  if (n < 2) throw std::invalid_argument("idempotent decay: n must be >= 2");
  std::vector<double> c(std::max(support, n), 0.0);
  for (std::size_t i = 0; i < support; ++i) c[i] = 1.0;
  const Vec e(std::move(c));
  return p_quasinorm(kp_derivation(e, n, p), p) / p_quasinorm(e, p);
}

}  // namespace qlab
