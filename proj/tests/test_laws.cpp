#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "randrho/laws.hpp"
#include "randrho/quadrature.hpp"

using namespace randrho;

namespace {

// closed form of pi^(2) used as an independent oracle for the
// hypergeometric superposition
double pi2_closed_form(double x) {
  if (x <= 0.0 || x >= 6.75) return 0.0;
  const double t = std::cbrt(27.0 + 3.0 * std::sqrt(81.0 - 12.0 * x));
  const double num = std::cbrt(2.0) * t * t - 6.0 * std::cbrt(x);
  return (std::cbrt(2.0) * std::sqrt(3.0) / (12.0 * M_PI)) * num /
         (std::pow(x, 2.0 / 3.0) * t);
}

}  // namespace

TEST_CASE("arcsine density", "[laws]") {
  REQUIRE(arcsine_density(1.0) == Catch::Approx(1.0 / M_PI).margin(1e-15));
  REQUIRE(arcsine_density(-0.5) == 0.0);
  REQUIRE(arcsine_density(2.5) == 0.0);
  REQUIRE(std::isinf(arcsine_density(0.0)));
  REQUIRE(std::isinf(arcsine_density(2.0)));

  const SpectralLaw law = law_arcsine();
  REQUIRE(law.moment(0) == Catch::Approx(1.0).margin(1e-10));
  REQUIRE(law.moment(1) == Catch::Approx(1.0).margin(1e-10));
  REQUIRE(law.moment(2) == Catch::Approx(1.5).margin(1e-10));
  REQUIRE(law.mean_entropy() ==
          Catch::Approx(std::log(2.0) - 1.0).margin(1e-8));
}

TEST_CASE("nu_k density", "[laws]") {
  SECTION("k=2 reduces to arcsine") {
    for (double x = 0.05; x < 2.0; x += 0.05)
      REQUIRE(nu_k_density(x, 2) ==
              Catch::Approx(arcsine_density(x)).margin(1e-12));
  }

  SECTION("second moments 2 - 1/k by quadrature") {
    for (int k : {2, 3, 5, 10}) {
      const SpectralLaw law = law_nu_k(k);
      REQUIRE(law.moment(2) == Catch::Approx(2.0 - 1.0 / k).margin(1e-8));
    }
  }

  SECTION("k -> infinity approaches the square-Ginibre law") {
    const int k = 10000;
    double worst = 0.0;
    const auto mp1 = [](double x) {
      return std::sqrt(4.0 * x - x * x) / (2.0 * M_PI * x);
    };
    for (double x = 0.1; x <= 3.9; x += 0.01)
      worst = std::max(worst, std::abs(nu_k_density(x, k) - mp1(x)));
    REQUIRE(worst < 1e-3);
  }

  SECTION("outside support") {
    REQUIRE(nu_k_density(-0.1, 3) == 0.0);
    REQUIRE(nu_k_density(8.0 / 3.0 + 0.01, 3) == 0.0);
    REQUIRE_THROWS_AS(nu_k_density(1.0, 1), config_error);
  }
}

TEST_CASE("marchenko-pastur density", "[laws]") {
  SECTION("square case values") {
    REQUIRE(mp_density(1.0, 1.0).density ==
            Catch::Approx(std::sqrt(3.0) / (2.0 * M_PI)).margin(1e-15));
    REQUIRE(mp_density(1.0, 1.0).atom_mass == 0.0);
    const SpectralLaw law = law_mp(1.0);
    REQUIRE(law.lo == 0.0);
    REQUIRE(law.hi == Catch::Approx(4.0));
    REQUIRE(law.moment(2) == Catch::Approx(2.0).margin(1e-8));
    REQUIRE(law.mean_entropy() == Catch::Approx(-0.5).margin(1e-8));
  }

  SECTION("c=1/2: atom plus half continuous mass") {
    REQUIRE(mp_density(1.0, 0.5).atom_mass == Catch::Approx(0.5));
    // continuous part of the classical-variable density integrates to c
    auto f = [](double t) { return mp_density(t, 0.5).density; };
    const double lo = 1.5 - std::sqrt(2.0), hi = 1.5 + std::sqrt(2.0);
    const double mass = integrate_adaptive(f, lo, hi, 1e-12);
    REQUIRE(mass == Catch::Approx(0.5).margin(1e-8));
    // the unit-mean law object carries the same atom and mean 1
    const SpectralLaw law = law_mp(0.5);
    REQUIRE(law.atom_mass == Catch::Approx(0.5));
    REQUIRE(law.moment(0) == Catch::Approx(0.5).margin(1e-8));  // continuous
    REQUIRE(law.moment(1) == Catch::Approx(1.0).margin(1e-8));
  }

  SECTION("c=4: no atom, unit mean after rescaling") {
    const SpectralLaw law = law_mp(4.0);
    REQUIRE(law.atom_mass == 0.0);
    REQUIRE(law.lo == Catch::Approx(0.25));
    REQUIRE(law.hi == Catch::Approx(2.25));
    REQUIRE(law.moment(0) == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(law.moment(1) == Catch::Approx(1.0).margin(1e-8));
  }
}

TEST_CASE("bures density", "[laws]") {
  const SpectralLaw law = law_bures();
  // the normalization quadrature is the oracle pinning the constant
  // 1/(4 pi sqrt(3))
  REQUIRE(law.moment(0) == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(law.moment(1) == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(law.moment(2) == Catch::Approx(2.5).margin(1e-6));
  REQUIRE(law.mean_entropy() == Catch::Approx(-std::log(2.0)).margin(1e-6));
  REQUIRE(bures_density(-1.0) == 0.0);
  REQUIRE(bures_density(3.0 * std::sqrt(3.0) + 0.01) == 0.0);
}

TEST_CASE("fuss-catalan moments from the binomial formula", "[laws]") {
  const std::vector<double> catalan{1, 1, 2, 5, 14};
  for (int m = 0; m < 5; ++m) REQUIRE(fc_moment(1, m) == catalan[size_t(m)]);
  const std::vector<double> fc2{1, 1, 3, 12, 55, 273};
  for (int m = 0; m < 6; ++m) REQUIRE(fc_moment(2, m) == fc2[size_t(m)]);
  for (int m = 0; m < 5; ++m) REQUIRE(fc_moment(0, m) == 1.0);
}

TEST_CASE("fuss-catalan density", "[laws]") {
  SECTION("s=1 equals the square-case MP density") {
    for (double x = 0.01; x <= 3.99; x += 0.02)
      REQUIRE(fc_density(x, 1) ==
              Catch::Approx(mp_density(x, 1.0).density).margin(1e-10));
  }

  SECTION("s=2 equals the closed form") {
    for (int i = 0; i < 100; ++i) {
      const double x = 0.01 + (6.74 - 0.01) * i / 99.0;
      REQUIRE(fc_density(x, 2) ==
              Catch::Approx(pi2_closed_form(x)).margin(1e-9));
    }
  }

  SECTION("hypergeometric coefficients recombine at x=1") {
    REQUIRE(fc_density(1.0, 2) ==
            Catch::Approx(pi2_closed_form(1.0)).margin(1e-9));
    REQUIRE(fc_lambda_coefficient(1, 2) ==
            Catch::Approx(std::sqrt(3.0) / (2.0 * M_PI)).margin(1e-12));
    REQUIRE(fc_lambda_coefficient(2, 2) ==
            Catch::Approx(-std::sqrt(3.0) / (6.0 * M_PI)).margin(1e-12));
  }

  SECTION("quadrature moments match the binomial formula for s=2,3,4") {
    for (int s : {2, 3, 4}) {
      const SpectralLaw law = law_fuss_catalan(s);
      for (int m = 0; m <= 5; ++m)
        REQUIRE(law.moment(m) == Catch::Approx(fc_moment(s, m)).margin(1e-6));
    }
  }

  SECTION("bounded at the edge, zero outside") {
    for (int s : {2, 3}) {
      const double b = fc_support_edge(s);
      const double at_edge = fc_density(b * (1.0 - 1e-9), s);
      REQUIRE(std::isfinite(at_edge));
      REQUIRE(at_edge >= 0.0);
      REQUIRE(fc_density(b + 1e-9, s) == 0.0);
    }
  }
}

TEST_CASE("nu_k moments from the generating function", "[laws]") {
  REQUIRE(nu_k_moment(0, 5) == Catch::Approx(1.0));
  for (int k : {2, 3, 7}) REQUIRE(nu_k_moment(1, k) == Catch::Approx(1.0));
  REQUIRE(nu_k_moment(2, 2) == Catch::Approx(1.5));
  REQUIRE(nu_k_moment(2, 4) == Catch::Approx(1.75));

  SECTION("series coefficients agree with density quadrature") {
    for (int k : {2, 3, 5}) {
      const SpectralLaw law = law_nu_k(k);
      for (int p = 0; p <= 6; ++p)
        REQUIRE(law.moment(p) ==
                Catch::Approx(nu_k_moment(p, k)).margin(1e-8));
    }
  }
}

TEST_CASE("unrescaled k-sum law and Brown radial density", "[laws]") {
  SECTION("rescaling identity nu_k(x) = k mu_k(kx)") {
    for (int k : {2, 3, 6}) {
      for (double x = 0.05; x < 4.0 * (k - 1.0) / k; x += 0.11)
        REQUIRE(k * mu_k_density(k * x, k) ==
                Catch::Approx(nu_k_density(x, k)).margin(1e-12));
    }
  }

  SECTION("radial density normalizes on the disk") {
    for (int k : {2, 5}) {
      auto f = [k](double r) {
        return 2.0 * M_PI * r * brown_radial_density(r, k);
      };
      const double total =
          integrate_adaptive(f, 0.0, std::sqrt(double(k)), 1e-12);
      REQUIRE(total == Catch::Approx(1.0).margin(1e-8));
    }
  }

  SECTION("large k approaches the uniform disk after rescaling") {
    const int k = 1000;
    // rescale r -> r/sqrt(k): density k * f(sqrt(k) u) tends to 1/pi
    for (double u : {0.2, 0.5, 0.8}) {
      const double val = k * brown_radial_density(std::sqrt(double(k)) * u, k);
      REQUIRE(std::abs(val - 1.0 / M_PI) < 1e-2);
    }
  }
}

TEST_CASE("joint eigenvalue densities at N=2", "[laws]") {
  SECTION("induced constant C_{2,2} = 3 and normalization") {
    // P(l, 1-l) = 3 (2l-1)^2; the quadrature result pins the constant
    const double c22 =
        std::exp(joint_logdensity_induced({0.75, 0.25}, 2, 2)) /
        ((0.75 - 0.25) * (0.75 - 0.25));
    REQUIRE(c22 == Catch::Approx(3.0).margin(1e-10));
    auto f = [](double l) {
      return std::exp(joint_logdensity_induced({l, 1.0 - l}, 2, 2));
    };
    REQUIRE(integrate_adaptive(f, 0.0, 1.0, 1e-13) ==
            Catch::Approx(1.0).margin(1e-10));
  }

  SECTION("bures constant 2/pi and normalization") {
    const double l = 0.75;
    const double expected = (2.0 / M_PI) / std::sqrt(l * (1.0 - l)) *
                            (2.0 * l - 1.0) * (2.0 * l - 1.0);
    REQUIRE(std::exp(joint_logdensity_bures({l, 1.0 - l}, 2)) ==
            Catch::Approx(expected).margin(1e-12));
    auto f = [](double t) {
      return std::exp(joint_logdensity_bures({t, 1.0 - t}, 2));
    };
    REQUIRE(integrate_support(f, 0.0, 1.0, 0.5) ==
            Catch::Approx(1.0).margin(1e-8));
  }

  SECTION("symmetry and coincident eigenvalues") {
    const double a = joint_logdensity_induced({0.3, 0.3, 0.4}, 3, 5);
    const double b = joint_logdensity_induced({0.4, 0.3, 0.3}, 3, 5);
    REQUIRE(a == Catch::Approx(b).margin(1e-12));
    REQUIRE(std::isinf(joint_logdensity_induced({0.5, 0.5}, 2, 2)));
    REQUIRE(joint_logdensity_induced({0.5, 0.5}, 2, 2) < 0.0);
  }

  SECTION("rejections") {
    REQUIRE_THROWS_AS(joint_logdensity_induced({0.5, 0.6}, 2, 2),
                      config_error);
    REQUIRE_THROWS_AS(joint_logdensity_induced({0.5, 0.5}, 2, 1),
                      config_error);
    REQUIRE_THROWS_AS(joint_logdensity_bures({-0.1, 1.1}, 2), config_error);
  }
}

TEST_CASE("law cdf, support and entropy summaries", "[laws]") {
  SECTION("supports") {
    REQUIRE(law_support(law_fuss_catalan(3)).second ==
            Catch::Approx(256.0 / 27.0).margin(1e-12));
    REQUIRE(law_support(law_arcsine()).second == 2.0);
    REQUIRE(law_support(law_nu_k(4)).second == Catch::Approx(3.0));
    REQUIRE(law_support(law_bures()).second ==
            Catch::Approx(3.0 * std::sqrt(3.0)));
  }

  SECTION("cdf endpoints and monotonicity") {
    for (const SpectralLaw& law :
         {law_arcsine(), law_mp(1.0), law_bures(), law_fuss_catalan(2),
          law_nu_k(3)}) {
      REQUIRE(law_cdf(law, law.lo - 0.1) == 0.0);
      REQUIRE(law_cdf(law, law.hi + 0.1) == Catch::Approx(1.0).margin(1e-8));
      double prev = 0.0;
      for (int i = 1; i < 12; ++i) {
        const double x = law.lo + (law.hi - law.lo) * i / 12.0;
        const double f = law_cdf(law, x);
        REQUIRE(f >= prev - 1e-12);
        prev = f;
      }
    }
    // arcsine has the closed-form cdf (2/pi) asin(sqrt(x/2))
    for (double x : {0.2, 1.0, 1.7})
      REQUIRE(law_cdf(law_arcsine(), x) ==
              Catch::Approx(2.0 / M_PI * std::asin(std::sqrt(x / 2.0)))
                  .margin(1e-9));
  }

  SECTION("mean entropies") {
    REQUIRE(law_mean_entropy(law_mp(1.0)) == Catch::Approx(-0.5).margin(1e-8));
    REQUIRE(law_mean_entropy(law_fuss_catalan(2)) ==
            Catch::Approx(-5.0 / 6.0).margin(1e-6));
    REQUIRE(law_mean_entropy(law_fuss_catalan(3)) ==
            Catch::Approx(-13.0 / 12.0).margin(1e-6));
    REQUIRE(law_mean_entropy(law_nu_k(3)) ==
            Catch::Approx(-0.3781395676).margin(2e-8));
    REQUIRE(law_mean_entropy(law_nu_k(4)) ==
            Catch::Approx(-0.4108613479).margin(2e-8));
    REQUIRE(law_mean_entropy(law_dirac()) == 0.0);
  }

  SECTION("origin singularity exponents") {
    for (const SpectralLaw& law :
         {law_arcsine(), law_mp(1.0), law_nu_k(5), law_bures(),
          law_fuss_catalan(2), law_fuss_catalan(3)}) {
      const double r = law.density(1e-6) / law.density(1e-8);
      const double estimated = -std::log(r) / std::log(100.0);
      REQUIRE(std::abs(estimated - law.origin_exponent) <
              0.01 * law.origin_exponent);
    }
  }
}

TEST_CASE("normalization and unit mean across the law family", "[laws]") {
  std::vector<SpectralLaw> laws = {law_arcsine(), law_bures()};
  for (int k : {2, 3, 5, 10}) laws.push_back(law_nu_k(k));
  for (double c : {0.5, 1.0, 4.0}) laws.push_back(law_mp(c));
  for (int s : {1, 2, 3, 4}) laws.push_back(law_fuss_catalan(s));
  for (const SpectralLaw& law : laws) {
    REQUIRE(law.moment(0) + law.atom_mass == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(law.moment(1) == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("predicted entropies", "[laws]") {
  EnsembleSpec hs = EnsembleSpec::make(EnsembleKind::hilbert_schmidt, 16);
  const double e2 = std::exp(2.0);
  REQUIRE(predicted_entropy(hs, e2) == Catch::Approx(1.5).margin(1e-8));

  REQUIRE(predicted_chebyshev_entropy(1, e2) ==
          Catch::Approx(2.0 - std::log(4.0)).margin(1e-12));
  REQUIRE(predicted_chebyshev_entropy(2, 100.0) ==
          Catch::Approx(std::log(100.0) + 2.0 * std::log(2.0) -
                        3.0 * std::log(3.0))
              .margin(1e-12));

  EnsembleSpec fc2 = EnsembleSpec::make(EnsembleKind::ginibre_product, 64);
  fc2.s = 2;
  REQUIRE(predicted_entropy(fc2, 64.0) ==
          Catch::Approx(std::log(64.0) - 5.0 / 6.0).margin(1e-6));

  EnsembleSpec none = EnsembleSpec::make(EnsembleKind::unit_interpolation, 8);
  none.a = 0.3;
  REQUIRE_THROWS_AS(predicted_entropy(none, 8.0), config_error);
}
