#include "ballotlens/special.hpp"

#include <cmath>

#include "ballotlens/errors.hpp"
#include "doctest.h"

using namespace ballotlens::special;

TEST_CASE("normal two-sided tails") {
  CHECK(tail_probability(Dist::Normal, 0.0) == doctest::Approx(1.0));
  CHECK(tail_probability(Dist::Normal, 1.959964) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(tail_probability(Dist::Normal, -1.959964) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(tail_probability(Dist::Normal, 3.0) == doctest::Approx(0.0026998).epsilon(1e-4));
}

TEST_CASE("student t approaches normal at huge df") {
  double p_t = tail_probability(Dist::StudentT, 1.96, 1e6);
  double p_n = tail_probability(Dist::Normal, 1.96);
  CHECK(std::abs(p_t - p_n) < 1e-4);
  CHECK(p_n == doctest::Approx(0.0500).epsilon(1e-3));
}

TEST_CASE("student t df=1 matches the Cauchy closed form") {
  // P(|T| > t) = 1 - (2/pi) atan(t)
  for (double t : {0.5, 1.0, 2.0, 5.0, 12.0}) {
    double expect = 1.0 - 2.0 / M_PI * std::atan(t);
    CHECK(std::abs(tail_probability(Dist::StudentT, t, 1.0) - expect) < 1e-10);
  }
}

TEST_CASE("chi-square df=2 has the exp(-x/2) closed form") {
  CHECK(std::abs(tail_probability(Dist::ChiSquare, 5.9915, 2.0) - std::exp(-5.9915 / 2.0)) <
        1e-12);
  CHECK(tail_probability(Dist::ChiSquare, 5.9915, 2.0) == doctest::Approx(0.05).epsilon(1e-3));
  for (double x : {0.1, 1.0, 3.0, 10.0, 40.0})
    CHECK(std::abs(tail_probability(Dist::ChiSquare, x, 2.0) - std::exp(-x / 2.0)) < 1e-10);
}

TEST_CASE("chi-square df=1 matches the folded normal") {
  // P(X > x) = P(|Z| > sqrt(x))
  for (double x : {0.25, 1.0, 4.0, 9.0}) {
    double expect = normal_two_sided(std::sqrt(x));
    CHECK(std::abs(tail_probability(Dist::ChiSquare, x, 1.0) - expect) < 1e-10);
  }
}

TEST_CASE("F(1, d) equals squared student t") {
  for (double d : {3.0, 10.0, 100.0}) {
    for (double t : {0.5, 1.5, 2.5}) {
      double pf = tail_probability(Dist::F, t * t, 1.0, d);
      double pt = tail_probability(Dist::StudentT, t, d);
      CHECK(std::abs(pf - pt) < 1e-10);
    }
  }
}

TEST_CASE("incomplete gamma halves sum to one") {
  for (double a : {0.5, 1.0, 2.5, 10.0}) {
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("incomplete beta symmetry and endpoints") {
  CHECK(incbeta(2.0, 3.0, 0.0) == 0.0);
  CHECK(incbeta(2.0, 3.0, 1.0) == 1.0);
  for (double x : {0.1, 0.3, 0.7}) {
    CHECK(incbeta(2.5, 4.0, x) + incbeta(4.0, 2.5, 1.0 - x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // I_x(1,1) = x
  CHECK(std::abs(incbeta(1.0, 1.0, 0.37) - 0.37) < 1e-12);
}

TEST_CASE("invalid df raises") {
  CHECK_THROWS_AS(tail_probability(Dist::StudentT, 1.0), ballotlens::InvalidDf);
  CHECK_THROWS_AS(tail_probability(Dist::ChiSquare, 1.0, -2.0), ballotlens::InvalidDf);
  CHECK_THROWS_AS(tail_probability(Dist::F, 1.0, 2.0), ballotlens::InvalidDf);
}

TEST_CASE("t quantile inverts the tail") {
  for (double df : {5.0, 30.0, 1000.0}) {
    double q = student_t_quantile(0.05, df);
    CHECK(tail_probability(Dist::StudentT, q, df) == doctest::Approx(0.05).epsilon(1e-9));
  }
}
