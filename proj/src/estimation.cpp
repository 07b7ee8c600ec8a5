#include "qlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qlab {

namespace {

Vec partial_sum(std::size_t n, std::size_t k) {  // s_k padded to dimension n
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) c[i] = 1.0;
  return Vec(std::move(c));
}

std::vector<std::size_t> dyadic_levels(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= n; k *= 2) ks.push_back(k);
  if (ks.empty() || ks.back() != n) ks.push_back(n);
  return ks;
}

/// Basis vectors, sign flips, partial sums and their combinations: the
/// configurations where the known maps attain large defects.
std::vector<std::pair<Vec, Vec>> structured_pairs(std::size_t n) {
  std::vector<std::pair<Vec, Vec>> pairs;
  const std::size_t ne = std::min<std::size_t>(n, 8);
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = i + 1; j < ne; ++j) {
      pairs.emplace_back(Vec::unit(n, i), Vec::unit(n, j));
      pairs.emplace_back(Vec::unit(n, i), -1.0 * Vec::unit(n, j));
    }
  }
  const auto ks = dyadic_levels(n);
  for (std::size_t a = 0; a < ks.size(); ++a) {
    for (std::size_t b = a; b < ks.size(); ++b) {
      pairs.emplace_back(partial_sum(n, ks[a]), partial_sum(n, ks[b]));
      pairs.emplace_back(partial_sum(n, ks[a]), -1.0 * partial_sum(n, ks[b]));
    }
  }
  const std::size_t nc = std::min<std::size_t>(n, 4);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t k : ks) {
      pairs.emplace_back(Vec::unit(n, i), partial_sum(n, k));
      pairs.emplace_back(Vec::unit(n, i), -1.0 * partial_sum(n, k));
    }
  return pairs;
}

double defect_or_zero(const HomogeneousMap& f, const Vec& x, const Vec& y) {
  const double nx = p_quasinorm(x, f.domain.p);
  const double ny = p_quasinorm(y, f.domain.p);
  if (nx == 0.0 && ny == 0.0) return 0.0;
  return quasilinearity_defect(f, x, y);
}

/// Greedy multiplicative coordinate ascent from (x, y): scale one coordinate
/// by 1 +- delta, keep the best improvement, halve delta when stuck.
double local_ascent(const HomogeneousMap& f, Vec& x, Vec& y, double start,
                    std::uint64_t seed, const QEstimateOptions& opts) {
  const std::size_t n = f.domain.dim;
  RngStream rng(seed, 0x61736345ULL);
  double best = start;
  double delta = opts.ascent_initial_delta;
  for (int round = 0; round < opts.ascent_rounds && delta >= opts.ascent_min_delta;
       ++round) {
    std::vector<std::size_t> coords;
    if (n <= static_cast<std::size_t>(opts.ascent_coord_budget)) {
      coords.resize(n);
      for (std::size_t k = 0; k < n; ++k) coords[k] = k;
    } else {
      coords.resize(static_cast<std::size_t>(opts.ascent_coord_budget));
      for (auto& c : coords) c = rng.uniform_index(n);
    }
    double round_best = best;
    int best_side = -1;
    std::size_t best_coord = 0;
    double best_factor = 1.0;
    for (int side = 0; side < 2; ++side) {
      Vec& target = side == 0 ? x : y;
      for (std::size_t c : coords) {
        const double orig = target[c];
        if (orig == 0.0) continue;  // multiplicative moves keep the support
        for (double factor : {1.0 + delta, 1.0 - delta}) {
          target[c] = orig * factor;
          const double val = defect_or_zero(f, x, y);
          if (val > round_best) {
            round_best = val;
            best_side = side;
            best_coord = c;
            best_factor = factor;
          }
        }
        target[c] = orig;
      }
    }
    if (best_side >= 0) {
      Vec& target = best_side == 0 ? x : y;
      target[best_coord] *= best_factor;
      best = round_best;
    } else {
      delta *= 0.5;
    }
  }
  return best;
}

}  // namespace

QEstimate estimate_Q(const HomogeneousMap& f, int budget, std::uint64_t seed,
                     const QEstimateOptions& opts) {
  if (budget < 0) throw std::invalid_argument("estimate_Q: negative budget");
  const std::size_t n = f.domain.dim;

  QEstimate est;
  est.seed = seed;
  est.certified_upper = f.q_certified_upper;

  Vec best_x = Vec::unit(n, 0);
  Vec best_y = Vec::unit(n, 0);
  double best = 0.0;
  auto consider = [&](const Vec& x, const Vec& y) {
    const double val = defect_or_zero(f, x, y);
    ++est.samples_used;
    if (val > best) {
      best = val;
      best_x = x;
      best_y = y;
    }
  };

  Vec struct_x = best_x, struct_y = best_y;
  double struct_best = 0.0;
  for (const auto& [x, y] : structured_pairs(n)) {
    consider(x, y);
    if (best > struct_best) {
      struct_best = best;
      struct_x = best_x;
      struct_y = best_y;
    }
  }

  RngStream rng(seed, 0x71657374ULL);
  for (int i = 0; i < budget; ++i) {
    Vec x = gaussian_vec(n, rng);
    Vec y = gaussian_vec(n, rng);
    const double rel = std::exp(rng.uniform(-2.0, 2.0));
    consider(x, rel * y);
  }

  // Ascend from the best structured pair (budget-independent) and from the
  // best pair overall; keep whichever ends higher.
  double refined = best;
  {
    Vec ax = struct_x, ay = struct_y;
    refined = std::max(refined, local_ascent(f, ax, ay, struct_best, seed, opts));
    if (refined > best) {
      best_x = ax;
      best_y = ay;
      best = refined;
    }
  }
  {
    Vec ax = best_x, ay = best_y;
    const double val = local_ascent(f, ax, ay, best, seed + 1, opts);
    if (val > best) {
      best_x = ax;
      best_y = ay;
      best = val;
    }
  }

  est.sampled_lower = best;
  est.witness_pair = {best_x, best_y};
  return est;
}

double certified_Q_upper(MapKind kind, const CertParams& params) {
  switch (kind) {
    case MapKind::Ribe:
      return 2.0 * std::log(2.0);
    case MapKind::KaltonPeck: {
      if (params.p <= 0.0)
        throw std::invalid_argument("certified_Q_upper: p must be > 0");
      if (params.lip < 0.0)
        throw std::invalid_argument("certified_Q_upper: negative Lipschitz constant");
      return std::pow(10.0, 1.0 / params.p) * std::exp(-1.0) * params.lip;
    }
  }
  throw std::invalid_argument("certified_Q_upper: unknown map kind");
}

double k0_lower_bound(const HomogeneousMap& f, double dist_lb) {
  if (!f.q_certified_upper)
    throw std::invalid_argument("k0_lower_bound: map carries no certificate");
  if (dist_lb < 0.0)
    throw std::invalid_argument("k0_lower_bound: negative distance bound");
  if (dist_lb == 0.0) return 0.0;
  const double cert = *f.q_certified_upper;
  if (cert == 0.0)
    throw std::domain_error(
        "k0_lower_bound: certificate 0 is incompatible with positive distance");
  return dist_lb / cert;
}

}  // namespace qlab
