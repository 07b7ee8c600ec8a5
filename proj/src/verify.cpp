#include "qlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "qlab/asymptotics.hpp"
#include "qlab/distance.hpp"
#include "qlab/estimation.hpp"
#include "qlab/maps.hpp"
#include "qlab/spaces.hpp"
#include "qlab/twisted.hpp"

namespace qlab {

double VerifyOptions::tol(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  if (it != tolerances.end()) return it->second;
  it = tolerances.find("all");
  if (it != tolerances.end()) return it->second;
  return fallback;
}

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

constexpr double kLog2 = 0.6931471805599453;
constexpr double kTwoLog2 = 1.3862943611198906;

struct Checker {
  const VerifyOptions& opts;
  std::vector<CheckResult> out;

  explicit Checker(const VerifyOptions& o) : opts(o) {}

  /// Passes when err <= tol(module.name). err is expected to be >= 0.
  void check(const std::string& module, const std::string& name, double err,
             double default_tol, const std::string& extra = "") {
    const double t = opts.tol(module + "." + name, default_tol);
    CheckResult r;
    r.module = module;
    r.name = name;
    r.pass = err <= t;
    r.detail = "err=" + num(err) + " tol=" + num(t);
    if (!extra.empty()) r.detail += " " + extra;
    out.push_back(std::move(r));
  }

  void verdict(const std::string& module, const std::string& name,
               Accessibility got, Accessibility want) {
    CheckResult r;
    r.module = module;
    r.name = name;
    r.pass = got == want;
    r.detail = "got=" + to_string(got) + " want=" + to_string(want);
    out.push_back(std::move(r));
  }
};

double abs_err(double measured, double expected) {
  return std::fabs(measured - expected);
}

void check_spaces(Checker& c) {
  RngStream rng(c.opts.seed, 101);
  const std::vector<double> ps = {0.5, 1.0, 2.0};

  double worst_hom = 0.0, worst_tri = 0.0, worst_sphere = 0.0;
  for (double pv : ps) {
    const PExponent p(pv);
    const PNormedSpace space{6, p};
    for (int i = 0; i < 32; ++i) {
      const Vec x = gaussian_vec(6, rng);
      const Vec y = gaussian_vec(6, rng);
      const double t = rng.uniform(-3.0, 3.0);
      const double nx = p_quasinorm(x, p);
      worst_hom = std::max(
          worst_hom, abs_err(p_quasinorm(t * x, p), std::fabs(t) * nx) /
                         std::max(1.0, std::fabs(t) * nx));
      const double lhs = p_quasinorm(x + y, p);
      const double rhs =
          space.concavity_modulus() * (nx + p_quasinorm(y, p));
      worst_tri = std::max(worst_tri, (lhs - rhs) / std::max(1.0, rhs));
      worst_sphere = std::max(
          worst_sphere, abs_err(p_quasinorm(sample_unit_sphere(space, rng), p), 1.0));
    }
  }
  c.check("spaces", "quasinorm-homogeneity", worst_hom, 1e-12);
  c.check("spaces", "quasi-triangle", worst_tri, 1e-12);
  c.check("spaces", "unit-sphere-norm", worst_sphere, 1e-9);

  const Vec v34(std::vector<double>{3.0, 4.0});
  c.check("spaces", "euclidean-345", abs_err(p_quasinorm(v34, PExponent(2.0)), 5.0),
          1e-12);

  const double delta_half = PNormedSpace{2, PExponent(0.5)}.concavity_modulus();
  c.check("spaces", "aoki-roundtrip",
          abs_err(aoki_rolewicz_exponent(delta_half).value(), 0.5), 1e-12,
          "delta=" + num(delta_half));
  c.check("spaces", "aoki-norm-fixed-point",
          abs_err(aoki_rolewicz_exponent(1.0).value(), 1.0), 1e-12);
}

void check_maps(Checker& c) {
  RngStream rng(c.opts.seed, 202);

  const LemmaWResult lw = lemma_w_scan(lemma_w_grid(0.005));
  c.check("maps", "omega-pair-ratio", abs_err(lw.max_ratio, kLog2), 1e-12,
          "argmax=(" + num(lw.argmax_s) + "," + num(lw.argmax_t) + ")");

  const HomogeneousMap rho7 = ribe_functional(7);
  c.check("maps", "ribe-diagonal-value",
          abs_err(rho7(Vec::ones(7))[0], 7.0 * std::log(7.0)), 1e-9);
  c.check("maps", "ribe-basis-defect",
          abs_err(quasilinearity_defect(ribe_functional(2), Vec::unit(2, 0),
                                        Vec::unit(2, 1)),
                  kLog2),
          1e-12);

  const PExponent one(1.0);
  const HomogeneousMap kp16 =
      kalton_peck_map(16, one, LipschitzProfile::positive_part());
  const double ratio16 =
      p_quasinorm(kp16(Vec::ones(16)), one) / p_quasinorm(Vec::ones(16), one);
  c.check("maps", "kp-identity-norm", abs_err(ratio16, std::log(16.0)), 1e-12);

  double worst_eq = 0.0;
  const HomogeneousMap kp6 =
      kalton_peck_map(6, one, LipschitzProfile::clamp(std::log(6.0)));
  for (int i = 0; i < 16; ++i) {
    const SignedPermutation u = random_signed_permutation(6, rng);
    const Vec x = gaussian_vec(6, rng);
    const Vec d = kp6(u.apply(x)) - u.apply(kp6(x));
    worst_eq = std::max(worst_eq, p_quasinorm(d, one));
  }
  c.check("maps", "kp-signed-perm-equivariance", worst_eq, 1e-12);

  const HomogeneousMap h = homogenize(
      [](const Vec& x) {
        std::vector<double> out(x.dim());
        for (std::size_t k = 0; k < x.dim(); ++k)
          out[k] = omega(x[k]) + 0.25;  // deliberately non-homogeneous input
        return Vec(std::move(out));
      },
      PNormedSpace{5, PExponent(1.0)}, PNormedSpace{5, PExponent(1.0)});
  double worst_h = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Vec x = gaussian_vec(5, rng);
    const double t = rng.uniform(-2.0, 2.0);
    if (std::fabs(t) < 1e-3) continue;
    const Vec d = h(t * x) - t * h(x);
    worst_h = std::max(worst_h, p_quasinorm(d, PExponent(1.0)) /
                                    std::max(1.0, std::fabs(t)));
  }
  c.check("maps", "homogenize-is-homogeneous", worst_h, 1e-9);
}

void check_estimation(Checker& c) {
  const int budget = std::max(16, c.opts.budget);

  const QEstimate lin = estimate_Q(identity_map(6, PExponent(1.0)), budget / 4,
                                   c.opts.seed + 1);
  c.check("estimation", "linear-defect-zero", lin.sampled_lower, 1e-12);

  const HomogeneousMap rho8 = ribe_functional(8);
  const QEstimate qr = estimate_Q(rho8, budget, c.opts.seed + 2);
  const double over = std::max(0.0, qr.sampled_lower - kTwoLog2);
  const double under = std::max(0.0, kLog2 - qr.sampled_lower);
  c.check("estimation", "ribe-q-within-certificate", std::max(over, under), 1e-9,
          "lb=" + num(qr.sampled_lower));

  const PExponent two(2.0);
  const HomogeneousMap kp8 =
      kalton_peck_map(8, two, LipschitzProfile::clamp(std::log(8.0) / 2.0));
  const QEstimate qk = estimate_Q(kp8, budget, c.opts.seed + 3);
  c.check("estimation", "kp-q-within-certificate",
          std::max(0.0, qk.sampled_lower - *kp8.q_certified_upper), 1e-9,
          "lb=" + num(qk.sampled_lower) + " ub=" + num(*kp8.q_certified_upper));
  c.check("estimation", "witness-reproduces-bound",
          abs_err(quasilinearity_defect(kp8, qk.witness_pair.first,
                                        qk.witness_pair.second),
                  qk.sampled_lower),
          1e-12);

  const QEstimate qs = estimate_Q(rho8, budget / 4, c.opts.seed + 2);
  c.check("estimation", "budget-monotone",
          std::max(0.0, qs.sampled_lower - qr.sampled_lower), 1e-12,
          "small=" + num(qs.sampled_lower) + " large=" + num(qr.sampled_lower));

  const HomogeneousMap rho10 = ribe_functional(10);
  c.check("estimation", "k0-ribe-value",
          abs_err(k0_lower_bound(rho10, 0.5 * std::log(10.0)),
                  0.8304820237218407),
          1e-12);
  c.check("estimation", "k0-zero-distance",
          std::fabs(k0_lower_bound(rho10, 0.0)), 1e-12);
}

void check_distance(Checker& c) {
  RngStream rng(c.opts.seed, 404);

  const std::size_t n = 4;
  const auto group = enumerate_signed_permutations(n);
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.gaussian();
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
  for (const SignedPermutation& u : group)
    avg += u.inverse().matrix() * m * u.matrix();
  avg /= static_cast<double>(group.size());
  const Eigen::MatrixXd want =
      symmetrize_linear(m) * Eigen::MatrixXd::Identity(n, n);
  c.check("distance", "symmetrize-group-average", (avg - want).cwiseAbs().maxCoeff(),
          1e-12, "scalar=" + num(symmetrize_linear(m)));

  const HomogeneousMap rho10 = ribe_functional(10);
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < 10; ++i) pts.push_back(Vec::unit(10, i));
  const WitnessCertificate cert =
      witness_certificate(rho10, pts, std::vector<double>(10, 1.0));
  c.check("distance", "ribe-witness-value",
          abs_err(cert.value, 0.5 * std::log(10.0)), 1e-12);
  c.check("distance", "witness-revalue",
          abs_err(recompute_certificate_value(rho10, cert), cert.value), 1e-12);

  const SymmetricDistBound id_bound = dist_lb_symmetric(
      identity_map(6, PExponent(1.0)), {Vec::unit(6, 0), Vec::ones(6)}, 0.0,
      c.opts.seed + 5);
  c.check("distance", "symmetric-identity-zero", id_bound.value, 1e-9);

  const HomogeneousMap kp16 =
      kalton_peck_map(16, PExponent(1.0), LipschitzProfile::clamp(std::log(16.0)));
  const SymmetricDistBound kp_bound = dist_lb_symmetric(
      kp16, {Vec::unit(16, 0), Vec::ones(16)}, 0.0, c.opts.seed + 6);
  c.check("distance", "symmetric-kp-halved-height",
          abs_err(kp_bound.value, 0.5 * std::log(16.0)), 1e-9,
          std::string("certified=") + (kp_bound.certified ? "yes" : "no"));

  Eigen::MatrixXd ell(3, 3);
  for (int i = 0; i < 9; ++i) ell(i / 3, i % 3) = rng.gaussian();
  const HomogeneousMap lm = linear_map(ell, PExponent(2.0), PExponent(2.0));
  std::vector<Vec> samples;
  for (int i = 0; i < 12; ++i)
    samples.push_back(gaussian_vec(3, rng));
  const LinearFit fit = best_linear_heuristic(lm, samples, 60, c.opts.seed + 7);
  c.check("distance", "linear-fit-recovers-linear", fit.objective, 1e-8);
}

void check_twisted(Checker& c) {
  RngStream rng(c.opts.seed, 505);
  const PExponent one(1.0);
  const PNormedSpace l16{6, one};
  const TwistedSumSpace z = make_twisted_sum(
      l16, l16, kalton_peck_map(6, one, LipschitzProfile::clamp(std::log(6.0))));

  double worst_inc = 0.0, worst_sec = 0.0, worst_quot = 0.0, worst_hom = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Vec y = gaussian_vec(6, rng);
    const Vec x = gaussian_vec(6, rng);
    worst_inc = std::max(
        worst_inc, abs_err(twisted_norm(z, inclusion(z, y)), p_quasinorm(y, one)));
    const TwistedSumElement bx = section(z, x);
    worst_sec = std::max(worst_sec,
                         abs_err(twisted_norm(z, bx), p_quasinorm(x, one)));
    worst_quot =
        std::max(worst_quot, p_quasinorm(quotient(z, bx) - x, one));
    const TwistedSumElement w{y, x};
    const double t = rng.uniform(-2.0, 2.0);
    worst_hom = std::max(
        worst_hom, abs_err(twisted_norm(z, TwistedSumElement{t * y, t * x}),
                           std::fabs(t) * twisted_norm(z, w)));
  }
  c.check("twisted", "inclusion-isometric", worst_inc, 1e-12);
  c.check("twisted", "section-norm-exact", worst_sec, 1e-12);
  c.check("twisted", "quotient-section-roundtrip", worst_quot, 1e-12);
  c.check("twisted", "norm-homogeneous", worst_hom, 1e-12);

  const ModulusReport rep =
      quasinorm_modulus_report(z, std::max(16, c.opts.budget / 4), c.opts.seed + 8);
  c.check("twisted", "modulus-at-least-one", std::max(0.0, 1.0 - rep.empirical_delta),
          1e-12, "delta=" + num(rep.empirical_delta));
  const double ceiling = rep.certified_ceiling ? *rep.certified_ceiling : 0.0;
  c.check("twisted", "modulus-below-ceiling",
          std::max(0.0, rep.empirical_delta - ceiling), 1e-9,
          "ceiling=" + num(ceiling));

  const std::vector<std::size_t> grid = {4, 8, 16};
  const auto gap = splitting_gap(
      [&](std::size_t nn) {
        return kalton_peck_map(nn, one, LipschitzProfile::clamp(std::log(double(nn))));
      },
      grid, c.opts.seed + 9);
  double worst_gap = 0.0;
  bool growing = true;
  for (std::size_t i = 0; i < gap.size(); ++i) {
    worst_gap = std::max(
        worst_gap, abs_err(gap[i].dist_lb, 0.5 * std::log(double(grid[i]))));
    if (i > 0 && gap[i].dist_lb <= gap[i - 1].dist_lb) growing = false;
  }
  c.check("twisted", "splitting-gap-values", worst_gap, 1e-9);
  c.check("twisted", "splitting-gap-grows", growing ? 0.0 : 1.0, 0.5);
}

void check_asymptotics(Checker& c) {
  const PExponent one(1.0);

  c.check("asymptotics", "idempotent-decay",
          abs_err(derivation_idempotent_decay(4, 16, one), 0.5), 1e-12);

  const HomogeneousMap d16 = kp_derivation_map(16, PExponent(2.0));
  std::vector<Vec> wit = {Vec::ones(16)};
  const double dn = hom_map_norm_estimate(d16, std::max(16, c.opts.budget / 4),
                                          c.opts.seed + 10, wit);
  c.check("asymptotics", "derivation-norm", abs_err(dn, 0.5), 1e-9);

  const Vec x2(std::vector<double>{1.0, 1.0, 0.0, 0.0});
  const LeibnizDefect ld = leibniz_defect(DerivationKind::Homogeneous, x2, x2, 16, one);
  c.check("asymptotics", "leibniz-closed-form",
          abs_err(ld.measured, *ld.closed_form), 1e-12,
          "measured=" + num(ld.measured));

  RngStream rng(c.opts.seed, 606);
  double worst_var = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Vec a = gaussian_vec(6, rng);
    const Vec b = gaussian_vec(6, rng);
    worst_var = std::max(
        worst_var, leibniz_defect(DerivationKind::Variant, a, b, 16, one).measured);
  }
  c.check("asymptotics", "leibniz-variant-exact", worst_var, 1e-12);

  std::vector<AccessibilityRow> synth(3);
  synth[0].q_lb = 0.50;
  synth[1].q_lb = 0.45;
  synth[2].q_lb = 0.44;
  for (auto& r : synth) {
    r.norm_est = 1.0;
    r.dist_lb = 0.5;
  }
  c.verdict("asymptotics", "classifier-stagnation",
            classify_accessibility(synth), Accessibility::NotAccessible);

  const std::vector<std::size_t> grid = {4, 8, 16};
  const AccessibilityReport lin = accessibility_report(
      linear_family(grid, one), std::max(16, c.opts.budget / 8), c.opts.seed + 11);
  c.verdict("asymptotics", "linear-family-verdict", lin.classification,
            Accessibility::UltraproductOfOperators);
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  Checker c(opts);
  check_spaces(c);
  check_maps(c);
  check_estimation(c);
  check_distance(c);
  check_twisted(c);
  check_asymptotics(c);
  return std::move(c.out);
}

}  // namespace qlab
