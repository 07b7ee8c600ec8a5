#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qlab/distance.hpp"
#include "qlab/maps.hpp"

using namespace qlab;

namespace {
// Expected values frozen from independent high-precision evaluation.
constexpr double kLog2 = 0.6931471805599453;
constexpr double kTwoLog2 = 1.3862943611198906;
constexpr double kInvE = 0.36787944117144233;
constexpr double kTenOverE = 3.6787944117144233;    // 10^{1/1} / e
constexpr double kSqrtTenOverE = 1.1633369384516796;  // 10^{1/2} / e
constexpr double kHundredOverE = 36.787944117144235;  // 10^{1/0.5} / e
constexpr double kLog16 = 2.772588722239781;
constexpr double kSevenLogSeven = 13.621371043387192;

// Direct transcription of the defining sum, valid when s(x) != 0.
double ribe_direct(const Vec& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) s += x[k];
  double out = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k)
    if (x[k] != 0.0) out += x[k] * std::log(std::fabs(s) / std::fabs(x[k]));
  return out;
}
}  // namespace

TEST_CASE("omega basics") {
  CHECK(omega(0.0) == 0.0);
  CHECK(omega(1.0) == 0.0);
  CHECK(omega(-1.0) == 0.0);
  CHECK(omega(2.0) == doctest::Approx(kTwoLog2).epsilon(1e-15));
  for (double t : {0.3, 0.77, 1.5, 2.0}) {
    CHECK(omega(-t) == doctest::Approx(-omega(t)).epsilon(1e-15));
  }
  // |omega| <= 1/e on [-1, 1], attained at t = 1/e.
  CHECK(std::fabs(omega(kInvE)) == doctest::Approx(kInvE).epsilon(1e-12));
  for (double t = -1.0; t <= 1.0; t += 1.0 / 64.0)
    CHECK(std::fabs(omega(t)) <= kInvE + 1e-12);
}

TEST_CASE("lipschitz profiles") {
  const LipschitzProfile clamp2 = LipschitzProfile::clamp(2.0);
  CHECK(clamp2(-1.0) == 0.0);
  CHECK(clamp2(0.5) == 0.5);
  CHECK(clamp2(3.0) == 2.0);
  CHECK(clamp2.bounded());
  CHECK(clamp2.sup_norm == 2.0);
  CHECK(clamp2.lip_const == 1.0);
  CHECK_THROWS_AS(LipschitzProfile::clamp(0.0), std::invalid_argument);

  const LipschitzProfile pos = LipschitzProfile::positive_part();
  CHECK(pos(-2.0) == 0.0);
  CHECK(pos(2.5) == 2.5);
  CHECK_FALSE(pos.bounded());
}

TEST_CASE("omega_theta matches coordinate formula") {
  const LipschitzProfile pos = LipschitzProfile::positive_part();
  CHECK(omega_theta(0.0, pos) == 0.0);
  CHECK(omega_theta(2.0, pos) == 0.0);  // theta(-log 2) = 0
  CHECK(omega_theta(0.5, pos) == doctest::Approx(0.5 * kLog2).epsilon(1e-15));
}

TEST_CASE("ribe functional oracle values") {
  // Diagonal value n log n at the all-ones vector.
  CHECK(ribe(Vec::ones(7)) == doctest::Approx(kSevenLogSeven).epsilon(1e-13));
  for (std::size_t i = 0; i < 3; ++i) CHECK(ribe(Vec::unit(3, i)) == 0.0);
  // Cancelling sum: the branch-free identity stays finite and vanishes.
  CHECK(ribe(Vec(std::vector<double>{1.0, -1.0})) == 0.0);

  RngStream rng(2024, 3);
  for (int i = 0; i < 40; ++i) {
    Vec x = gaussian_vec(6, rng);
    double s = 0.0;
    for (std::size_t k = 0; k < 6; ++k) s += x[k];
    if (std::fabs(s) < 1e-6) continue;
    CHECK(ribe(x) == doctest::Approx(ribe_direct(x)).epsilon(1e-11));
  }
}

TEST_CASE("ribe functional map wrapper") {
  const HomogeneousMap f = ribe_functional(7);
  CHECK(f.domain.dim == 7);
  CHECK(f.codomain.dim == 1);
  CHECK(*f.q_certified_upper == doctest::Approx(kTwoLog2).epsilon(1e-15));
  CHECK(f(Vec::ones(7))[0] == doctest::Approx(kSevenLogSeven).epsilon(1e-13));
  CHECK_THROWS_AS(ribe_functional(0), std::invalid_argument);
}

TEST_CASE("ribe defect at a basis pair is exactly log 2") {
  const HomogeneousMap f = ribe_functional(2);
  CHECK(quasilinearity_defect(f, Vec::unit(2, 0), Vec::unit(2, 1)) ==
        doctest::Approx(kLog2).epsilon(1e-15));
  CHECK_THROWS_AS(quasilinearity_defect(f, Vec::zeros(2), Vec::zeros(2)),
                  std::invalid_argument);
}

TEST_CASE("kalton-peck map values") {
  const PExponent one(1.0);
  const LipschitzProfile pos = LipschitzProfile::positive_part();

  // Zero coordinates stay zero.
  const Vec x(std::vector<double>{2.0, 0.0, 1.0});
  const Vec y = kalton_peck(x, pos, one);
  CHECK(y[1] == 0.0);

  // Unnormalized identity-profile norm at the diagonal: ratio log n.
  const Vec ones16 = Vec::ones(16);
  const Vec img = kalton_peck(ones16, pos, one);
  CHECK(p_quasinorm(img, one) / p_quasinorm(ones16, one) ==
        doctest::Approx(kLog16).epsilon(1e-13));

  RngStream rng(99, 4);
  for (int i = 0; i < 25; ++i) {
    const Vec v = gaussian_vec(5, rng);
    const double t = std::exp(rng.uniform(-1.0, 1.0));
    const Vec lhs = kalton_peck(t * v, pos, one);
    const Vec rhs = t * kalton_peck(v, pos, one);
    CHECK(p_quasinorm(lhs - rhs, one) <= 1e-12 * (1.0 + p_quasinorm(rhs, one)));
    const Vec neg = kalton_peck(-1.0 * v, pos, one);
    const Vec mirrored = -1.0 * kalton_peck(v, pos, one);
    CHECK(p_quasinorm(neg - mirrored, one) == 0.0);
  }
}

TEST_CASE("kalton-peck certificates") {
  const LipschitzProfile pos = LipschitzProfile::positive_part();
  CHECK(*kalton_peck_map(4, PExponent(1.0), pos).q_certified_upper ==
        doctest::Approx(kTenOverE).epsilon(1e-14));
  CHECK(*kalton_peck_map(4, PExponent(2.0), pos).q_certified_upper ==
        doctest::Approx(kSqrtTenOverE).epsilon(1e-14));
  CHECK(*kalton_peck_map(4, PExponent(0.5), pos).q_certified_upper ==
        doctest::Approx(kHundredOverE).epsilon(1e-14));
  // The certificate scales with the profile's Lipschitz constant.
  LipschitzProfile steep = LipschitzProfile::positive_part();
  steep.theta = [](double t) { return 2.0 * std::max(t, 0.0); };
  steep.lip_const = 2.0;
  CHECK(*kalton_peck_map(4, PExponent(1.0), steep).q_certified_upper ==
        doctest::Approx(2.0 * kTenOverE).epsilon(1e-14));
}

TEST_CASE("kalton-peck commutes with signed permutations") {
  const PExponent one(1.0);
  const HomogeneousMap f =
      kalton_peck_map(6, one, LipschitzProfile::clamp(std::log(6.0)));
  CHECK(f.commutes_with_signed_perms);
  RngStream rng(7, 5);
  for (int i = 0; i < 20; ++i) {
    const SignedPermutation u = random_signed_permutation(6, rng);
    const Vec x = gaussian_vec(6, rng);
    CHECK(p_quasinorm(f(u.apply(x)) - u.apply(f(x)), one) <= 1e-12);
  }
}

TEST_CASE("homogenization fixes odd homogeneous maps and kills constants") {
  const PExponent one(1.0);
  const PNormedSpace sp{4, one};
  const LipschitzProfile theta = LipschitzProfile::clamp(1.5);

  const HomogeneousMap fixed = homogenize(
      [theta, one](const Vec& v) { return kalton_peck(v, theta, one); }, sp, sp);
  RngStream rng(11, 6);
  for (int i = 0; i < 20; ++i) {
    const Vec v = gaussian_vec(4, rng);
    const Vec direct = kalton_peck(v, theta, one);
    CHECK(p_quasinorm(fixed(v) - direct, one) <=
          1e-11 * (1.0 + p_quasinorm(direct, one)));
  }

  const HomogeneousMap flat =
      homogenize([](const Vec&) { return Vec::ones(4); }, sp, sp);
  CHECK(p_quasinorm(flat(gaussian_vec(4, rng)), one) <= 1e-12);
  CHECK(p_quasinorm(flat(Vec::zeros(4)), one) == 0.0);
}

TEST_CASE("two-variable defect ratio scan") {
  // Degenerate single-point grid at the origin: nothing to scan.
  const LemmaWResult zero = lemma_w_scan({0.0});
  CHECK(zero.max_ratio == 0.0);
  CHECK(zero.pairs_scanned == 0);
  CHECK_THROWS_AS(lemma_w_scan({}), std::invalid_argument);

  // Even a coarse grid attains log 2 on the diagonal and never exceeds it.
  const std::vector<double> coarse = lemma_w_grid(1.0);
  CHECK(coarse.size() == 5);
  CHECK(coarse.front() == doctest::Approx(-2.0));
  CHECK(coarse.back() == doctest::Approx(2.0));
  const LemmaWResult res = lemma_w_scan(coarse);
  CHECK(res.pairs_scanned == 24);  // 5*5 pairs minus the skipped origin pair
  CHECK(res.max_ratio == doctest::Approx(kLog2).epsilon(1e-13));
  CHECK(res.max_ratio <= kLog2 + 1e-12);
  CHECK(res.argmax_s == doctest::Approx(res.argmax_t).epsilon(1e-12));

  CHECK_THROWS_AS(lemma_w_grid(0.0), std::invalid_argument);
  CHECK_THROWS_AS(lemma_w_grid(-0.5), std::invalid_argument);
}

TEST_CASE("norm estimate is sound and monotone in budget") {
  const HomogeneousMap id = identity_map(5, PExponent(2.0));
  const double w = hom_map_norm_estimate(id, 0, 1, {Vec::ones(5)});
  CHECK(w == 1.0);
  const double e50 = hom_map_norm_estimate(id, 50, 123);
  const double e200 = hom_map_norm_estimate(id, 200, 123);
  CHECK(e50 <= 1.0 + 1e-12);
  CHECK(e200 <= 1.0 + 1e-12);
  CHECK(e50 <= e200 + 1e-15);  // same stream prefix, larger sample set
}

TEST_CASE("scale_map scales values and certificate") {
  const HomogeneousMap f =
      kalton_peck_map(4, PExponent(1.0), LipschitzProfile::positive_part());
  const HomogeneousMap g = scale_map(f, -0.5);
  const Vec x(std::vector<double>{1.0, 2.0, 0.0, -1.0});
  CHECK(p_quasinorm(g(x) - (-0.5) * f(x), PExponent(1.0)) == 0.0);
  CHECK(*g.q_certified_upper ==
        doctest::Approx(0.5 * kTenOverE).epsilon(1e-14));
  CHECK(g.commutes_with_signed_perms == f.commutes_with_signed_perms);
  CHECK_THROWS_AS(scale_map(f, std::nan("")), std::invalid_argument);
}

TEST_CASE("leading-coordinate restriction agrees with the smaller map") {
  const PExponent one(1.0);
  const LipschitzProfile theta = LipschitzProfile::clamp(2.0);
  const HomogeneousMap big = kalton_peck_map(8, one, theta);
  const HomogeneousMap cut = restrict_to_leading(big, 4);
  const HomogeneousMap small = kalton_peck_map(4, one, theta);
  CHECK(cut.domain.dim == 4);
  CHECK(cut.codomain.dim == 4);
  RngStream rng(31, 8);
  for (int i = 0; i < 20; ++i) {
    const Vec x = gaussian_vec(4, rng);
    CHECK(p_quasinorm(cut(x) - small(x), one) <= 1e-12);
  }

  const HomogeneousMap rho = restrict_to_leading(ribe_functional(8), 3);
  CHECK(rho.codomain.dim == 1);
  const Vec y(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(rho(y)[0] == doctest::Approx(ribe(y)).epsilon(1e-13));

  CHECK_THROWS_AS(restrict_to_leading(big, 9), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to_leading(big, 0), std::invalid_argument);
}
