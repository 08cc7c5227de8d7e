#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>

#include "apelt/special_functions.hpp"

TEST_CASE("digamma matches the Boost reference") {
  for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 5.9, 6.0, 10.0, 42.0, 1e3, 1e6}) {
    CAPTURE(x);
    const double ref = boost::math::digamma(x);
    CHECK(apelt::digamma(x) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("trigamma matches the Boost reference") {
  for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 5.9, 6.0, 10.0, 42.0, 1e3, 1e6}) {
    CAPTURE(x);
    const double ref = boost::math::trigamma(x);
    CHECK(apelt::trigamma(x) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("special values") {
  const double euler_gamma = 0.57721566490153286;
  CHECK(apelt::digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-13));
  CHECK(apelt::trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
  CHECK(apelt::log_beta(1.0, 1.0) == 0.0);
  CHECK(apelt::log_beta(2.0, 3.0) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-14));
}

TEST_CASE("log_beta matches the Boost reference") {
  for (double a : {0.01, 0.3, 1.0, 2.5, 40.0}) {
    for (double b : {0.02, 0.7, 1.0, 9.0, 90.0}) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(apelt::log_beta(a, b) ==
            doctest::Approx(std::log(boost::math::beta(a, b))).epsilon(1e-12).scale(1.0));
    }
  }
}
