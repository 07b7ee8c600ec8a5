#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qlab/distance.hpp"
#include "qlab/estimation.hpp"

using namespace qlab;

namespace {
// Expected values frozen from independent high-precision evaluation.
constexpr double kLog2 = 0.6931471805599453;
constexpr double kHalfLog10 = 1.151292546497023;
constexpr double kHalfLog100 = 2.302585092994046;
constexpr double kHalfLog16 = 1.3862943611198906;  // = 2 log 2

Vec from_eigen(const Eigen::VectorXd& v) {
  return Vec(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd to_eigen(const Vec& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.dim()));
  for (std::size_t i = 0; i < x.dim(); ++i)
    v(static_cast<Eigen::Index>(i)) = x[i];
  return v;
}
}  // namespace

TEST_CASE("signed permutation action and inverse") {
  RngStream rng(5, 1);
  for (std::size_t n : {std::size_t{2}, std::size_t{5}}) {
    for (int i = 0; i < 10; ++i) {
      const SignedPermutation u = random_signed_permutation(n, rng);
      const SignedPermutation v = u.inverse();
      const Vec x = gaussian_vec(n, rng);
      CHECK(p_quasinorm(v.apply(u.apply(x)) - x, PExponent(1.0)) == 0.0);
      // Matrix form agrees with the coordinate action.
      const Vec mx = from_eigen(u.matrix() * to_eigen(x));
      CHECK(p_quasinorm(mx - u.apply(x), PExponent(1.0)) == 0.0);
    }
  }
}

TEST_CASE("signed permutation enumeration sizes") {
  CHECK(enumerate_signed_permutations(1).size() == 2);
  CHECK(enumerate_signed_permutations(2).size() == 8);   // 2^2 * 2!
  CHECK(enumerate_signed_permutations(3).size() == 48);  // 2^3 * 3!
  CHECK_THROWS_AS(enumerate_signed_permutations(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_signed_permutations(9), std::invalid_argument);
}

TEST_CASE("group average of a conjugated matrix is the scaled identity") {
  RngStream rng(17, 2);
  for (std::size_t n : {std::size_t{2}, std::size_t{3}}) {
    const auto group = enumerate_signed_permutations(n);
    const Eigen::Index ni = static_cast<Eigen::Index>(n);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::MatrixXd ell(ni, ni);
      for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j) ell(i, j) = rng.gaussian();
      // Average u^{-1} ell u over the full group, entry by entry.
      Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(ni, ni);
      for (const SignedPermutation& u : group) {
        const Eigen::MatrixXd m = u.matrix();
        avg += m.inverse() * ell * m;
      }
      avg /= static_cast<double>(group.size());
      const double want = ell.trace() / static_cast<double>(n);
      for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j)
          CHECK(std::fabs(avg(i, j) - (i == j ? want : 0.0)) <= 1e-12);
      // The library computes the same scalar without forming the average.
      CHECK(symmetrize_linear(ell) == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("witness certificate for the ribe functional") {
  for (std::size_t n : {std::size_t{10}, std::size_t{100}}) {
    const HomogeneousMap f = ribe_functional(n);
    std::vector<Vec> xs;
    std::vector<double> cs;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(Vec::unit(n, i));
      cs.push_back(1.0);
    }
    const WitnessCertificate w = witness_certificate(f, xs, cs, Vec::ones(n));
    const double want = (n == 10) ? kHalfLog10 : kHalfLog100;
    CHECK(w.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(recompute_certificate_value(f, w) == w.value);
  }
}

TEST_CASE("witness certificate validates its reconstruction") {
  const HomogeneousMap f = ribe_functional(4);
  std::vector<Vec> xs{Vec::unit(4, 0), Vec::unit(4, 1)};
  std::vector<double> cs{1.0, 1.0};
  // Claimed target (1,1,1,1) != e_0 + e_1: rejected.
  CHECK_THROWS_AS(witness_certificate(f, xs, cs, Vec::ones(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(witness_certificate(f, {}, {}, Vec::ones(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      witness_certificate(f, xs, {1.0}, Vec::unit(4, 0) + Vec::unit(4, 1)),
      std::invalid_argument);
}

TEST_CASE("witness certificate uses the p-power denominator below p = 1") {
  // Kalton-Peck map on l_{1/2}^4 with a tall clamped profile: all basis
  // vectors and their sum s_4 have quasinorm ||e_i|| = 1, ||s_4|| = 16, the
  // defect is theta(log 16) * s_4 scaled, and the p-power denominator
  // (16^{1/2} + 4)^2 = 64 gives value log(16) * 16 / 64 = log 2.
  const PExponent half(0.5);
  const HomogeneousMap f =
      kalton_peck_map(4, half, LipschitzProfile::clamp(std::log(16.0)));
  std::vector<Vec> xs;
  std::vector<double> cs;
  for (std::size_t i = 0; i < 4; ++i) {
    xs.push_back(Vec::unit(4, i));
    cs.push_back(1.0);
  }
  const WitnessCertificate w = witness_certificate(f, xs, cs, Vec::ones(4));
  CHECK(w.value == doctest::Approx(kLog2).epsilon(1e-12));
}

TEST_CASE("symmetric distance bound on the kalton-peck map") {
  const PExponent one(1.0);
  const HomogeneousMap f =
      kalton_peck_map(16, one, LipschitzProfile::clamp(std::log(16.0)));
  const std::vector<Vec> wit{Vec::unit(16, 0), Vec::ones(16)};
  const SymmetricDistBound b = dist_lb_symmetric(f, wit, 1e-9, 3);
  CHECK(b.certified);
  CHECK(b.worst_commutation_error <= 1e-9);
  CHECK(b.value == doctest::Approx(kHalfLog16).epsilon(1e-9));
}

TEST_CASE("symmetric distance bound vanishes on linear maps") {
  const SymmetricDistBound b = dist_lb_symmetric(
      identity_map(8, PExponent(2.0)), {Vec::unit(8, 0), Vec::ones(8)}, 1e-9,
      1);
  CHECK(b.value <= 1e-9);
}

TEST_CASE("symmetric distance bound rejects bad inputs") {
  const HomogeneousMap functional = ribe_functional(4);
  CHECK_THROWS_AS(dist_lb_symmetric(functional, {Vec::unit(4, 0)}, 1e-9, 1),
                  std::invalid_argument);
  const HomogeneousMap id = identity_map(4, PExponent(1.0));
  CHECK_THROWS_AS(dist_lb_symmetric(id, {}, 1e-9, 1), std::invalid_argument);
  CHECK_THROWS_AS(dist_lb_symmetric(id, {Vec::zeros(4)}, 1e-9, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dist_lb_symmetric(id, {Vec::ones(4)}, -1e-9, 1),
                  std::invalid_argument);
}

TEST_CASE("non-equivariant maps need the heuristic escape hatch") {
  const PExponent one(1.0);
  const PNormedSpace sp{4, one};
  // x -> (x_0^3/||x||^2, 0, 0, 0) is homogeneous but breaks permutation
  // symmetry.
  HomogeneousMap f;
  f.domain = sp;
  f.codomain = sp;
  f.eval = [](const Vec& x) {
    const double n1 = p_quasinorm(x, PExponent(1.0));
    Vec out = Vec::zeros(4);
    if (n1 > 0.0) out[0] = x[0] * x[0] * x[0] / (n1 * n1);
    return out;
  };
  const std::vector<Vec> wit{Vec::unit(4, 0), Vec::ones(4)};
  CHECK_THROWS_AS(dist_lb_symmetric(f, wit, 1e-9, 1), std::invalid_argument);
  const SymmetricDistBound b = dist_lb_symmetric(f, wit, 1e-9, 1, true);
  CHECK_FALSE(b.certified);
  CHECK(b.worst_commutation_error > 1e-9);
}

TEST_CASE("below p = 1 the bound is reported but not certified") {
  const PExponent half(0.5);
  const HomogeneousMap f =
      kalton_peck_map(8, half, LipschitzProfile::clamp(std::log(8.0) / 0.5));
  const SymmetricDistBound b =
      dist_lb_symmetric(f, {Vec::unit(8, 0), Vec::ones(8)}, 1e-9, 2);
  CHECK_FALSE(b.certified);
  CHECK(b.value > 0.0);
}

TEST_CASE("least-squares heuristic recovers an exactly linear map") {
  const PExponent two(2.0);
  Eigen::MatrixXd m(3, 3);
  m << 1.0, 2.0, 0.0, 0.0, -1.0, 0.5, 3.0, 0.0, 1.0;
  const HomogeneousMap f = linear_map(m, two, two);
  RngStream rng(21, 9);
  std::vector<Vec> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(gaussian_vec(3, rng));
  const LinearFit fit = best_linear_heuristic(f, samples, 60, 11);
  CHECK(fit.objective <= 1e-8);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      CHECK(fit.matrix(i, j) == doctest::Approx(m(i, j)).epsilon(1e-6));
}

TEST_CASE("no linear map beats the orbit average on the kalton-peck map") {
  // On the full orbits of e_1 and the diagonal under signed permutations,
  // group averaging forces every linear map to miss by at least
  // 0.5 * theta(log 4) = log 2 in the worst case; the heuristic should get
  // close to that floor from above.
  const PExponent one(1.0);
  const HomogeneousMap f =
      kalton_peck_map(4, one, LipschitzProfile::clamp(std::log(4.0)));
  std::vector<Vec> samples;
  const auto group = enumerate_signed_permutations(4);
  for (const SignedPermutation& u : group) {
    const Vec a = u.apply(Vec::unit(4, 0));
    const Vec b = u.apply(Vec::ones(4));
    bool have_a = false, have_b = false;
    for (const Vec& s : samples) {
      if (s == a) have_a = true;
      if (s == b) have_b = true;
    }
    if (!have_a) samples.push_back(a);
    if (!have_b) samples.push_back(b);
  }
  CHECK(samples.size() == 24);  // 8 signed basis vectors + 16 sign vectors
  const LinearFit fit = best_linear_heuristic(f, samples, 150, 5);
  CHECK(fit.objective >= kLog2 - 1e-9);
  CHECK(fit.objective <= 1.10 * kLog2);
}

TEST_CASE("subtracting a linear part changes no quasilinearity defect") {
  const PExponent one(1.0);
  const HomogeneousMap f =
      kalton_peck_map(4, one, LipschitzProfile::clamp(std::log(4.0)));
  Eigen::MatrixXd m = 0.7 * Eigen::MatrixXd::Identity(4, 4);
  m(0, 2) = -0.3;
  const HomogeneousMap g = subtract_linear(f, m);
  CHECK(*g.q_certified_upper == *f.q_certified_upper);
  CHECK_FALSE(g.commutes_with_signed_perms);
  RngStream rng(4, 4);
  for (int i = 0; i < 15; ++i) {
    const Vec x = gaussian_vec(4, rng);
    const Vec y = gaussian_vec(4, rng);
    CHECK(quasilinearity_defect(g, x, y) ==
          doctest::Approx(quasilinearity_defect(f, x, y)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(subtract_linear(f, Eigen::MatrixXd::Zero(3, 4)),
                  std::invalid_argument);
}
