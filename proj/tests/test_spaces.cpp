#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qlab/spaces.hpp"

using namespace qlab;

namespace {
// Expected values frozen from independent high-precision evaluation.
constexpr double kSqrt5 = 2.23606797749979;
constexpr double kAokiSqrt2 = 0.6666666666666665;  // log 2 / log(2 sqrt 2)
}  // namespace

TEST_CASE("exponent validation") {
  CHECK_THROWS_AS(PExponent(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PExponent(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(PExponent(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(PExponent(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK(PExponent(0.5).value() == 0.5);
  CHECK(PExponent(3.0).value() == 3.0);
}

TEST_CASE("vector construction and factories") {
  CHECK_THROWS_AS(Vec(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(Vec(std::vector<double>{1.0, std::nan("")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Vec(std::vector<double>{std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);

  const Vec z = Vec::zeros(3);
  CHECK(z.dim() == 3);
  CHECK(z[0] == 0.0);
  const Vec e1 = Vec::unit(4, 1);
  CHECK(e1[1] == 1.0);
  CHECK(e1[0] == 0.0);
  CHECK_THROWS_AS(Vec::unit(3, 3), std::invalid_argument);
  CHECK(Vec::ones(2) == Vec(std::vector<double>{1.0, 1.0}));
}

TEST_CASE("vector arithmetic") {
  const Vec a(std::vector<double>{1.0, -2.0});
  const Vec b(std::vector<double>{3.0, 5.0});
  CHECK(a + b == Vec(std::vector<double>{4.0, 3.0}));
  CHECK(a - b == Vec(std::vector<double>{-2.0, -7.0}));
  CHECK(2.0 * a == Vec(std::vector<double>{2.0, -4.0}));
  CHECK(coordwise_product(a, b) == Vec(std::vector<double>{3.0, -10.0}));
  CHECK_THROWS_AS(a + Vec::ones(3), std::invalid_argument);
  CHECK_THROWS_AS(coordwise_product(a, Vec::ones(3)), std::invalid_argument);
}

TEST_CASE("quasinorm oracle values") {
  CHECK(p_quasinorm(Vec(std::vector<double>{3.0, 4.0}), PExponent(2.0)) == 5.0);
  CHECK(p_quasinorm(Vec::ones(5), PExponent(1.0)) == 5.0);
  CHECK(p_quasinorm(Vec::ones(5), PExponent(2.0)) ==
        doctest::Approx(kSqrt5).epsilon(1e-14));
  // p = 1/2: (sum |x_k|^{1/2})^2, so n ones give n^2.
  CHECK(p_quasinorm(Vec::ones(5), PExponent(0.5)) ==
        doctest::Approx(25.0).epsilon(1e-14));
  CHECK(p_quasinorm(Vec::zeros(7), PExponent(0.5)) == 0.0);
  CHECK(p_quasinorm(Vec::unit(7, 3), PExponent(0.5)) == 1.0);
  CHECK(p_quasinorm(Vec::unit(7, 3), PExponent(2.0)) == 1.0);
}

TEST_CASE("quasinorm survives extreme magnitudes") {
  const Vec big(std::vector<double>{1e300, 1e300});
  const double nb = p_quasinorm(big, PExponent(2.0));
  CHECK(std::isfinite(nb));
  CHECK(nb == doctest::Approx(1e300 * std::sqrt(2.0)).epsilon(1e-12));

  const Vec small(std::vector<double>{1e-300, 1e-300});
  const double ns = p_quasinorm(small, PExponent(0.5));
  CHECK(ns > 0.0);
  CHECK(ns == doctest::Approx(4e-300).epsilon(1e-12));
}

TEST_CASE("quasinorm homogeneity and triangle inequality") {
  RngStream rng(81724, 1);
  for (double pv : {0.5, 0.8, 1.0, 2.0, 3.0}) {
    const PExponent p(pv);
    const PNormedSpace space{5, p};
    for (int i = 0; i < 50; ++i) {
      const Vec x = gaussian_vec(5, rng);
      const Vec y = gaussian_vec(5, rng);
      const double t = rng.uniform(-4.0, 4.0);
      const double nx = p_quasinorm(x, p);
      CHECK(p_quasinorm(t * x, p) ==
            doctest::Approx(std::fabs(t) * nx).epsilon(1e-12));
      const double lhs = p_quasinorm(x + y, p);
      const double rhs = space.concavity_modulus() * (nx + p_quasinorm(y, p));
      CHECK(lhs <= rhs * (1.0 + 1e-12));
      if (pv < 1.0) {
        // The p-th power triangle inequality, the defining p-norm property.
        const double lp = std::pow(lhs, pv);
        const double rp = std::pow(nx, pv) + std::pow(p_quasinorm(y, p), pv);
        CHECK(lp <= rp * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("concavity modulus") {
  CHECK(PNormedSpace{3, PExponent(1.0)}.concavity_modulus() == 1.0);
  CHECK(PNormedSpace{3, PExponent(2.0)}.concavity_modulus() == 1.0);
  CHECK(PNormedSpace{3, PExponent(0.5)}.concavity_modulus() == 2.0);
}

TEST_CASE("aoki-rolewicz exponent") {
  CHECK(aoki_rolewicz_exponent(1.0).value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(aoki_rolewicz_exponent(2.0).value() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(aoki_rolewicz_exponent(std::sqrt(2.0)).value() ==
        doctest::Approx(kAokiSqrt2).epsilon(1e-14));
  CHECK_THROWS_AS(aoki_rolewicz_exponent(0.99), std::invalid_argument);
  CHECK_THROWS_AS(aoki_rolewicz_exponent(std::nan("")), std::invalid_argument);

  // Round trip: the modulus of an l_p quasinorm recovers p for p <= 1.
  for (double pv : {0.5, 0.7, 1.0}) {
    const double delta = PNormedSpace{2, PExponent(pv)}.concavity_modulus();
    CHECK(aoki_rolewicz_exponent(delta).value() ==
          doctest::Approx(pv).epsilon(1e-12));
  }
}

TEST_CASE("seeded sampling is deterministic") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  const Vec va = gaussian_vec(6, a);
  const Vec vb = gaussian_vec(6, b);
  const Vec vc = gaussian_vec(6, c);
  CHECK(va == vb);
  CHECK_FALSE(va == vc);
}

TEST_CASE("unit sphere samples have unit quasinorm") {
  RngStream rng(555, 2);
  for (double pv : {0.5, 1.0, 2.0}) {
    const PNormedSpace space{8, PExponent(pv)};
    for (int i = 0; i < 20; ++i) {
      const Vec u = sample_unit_sphere(space, rng);
      CHECK(p_quasinorm(u, space.p) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
