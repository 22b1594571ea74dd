#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>
#include <pdmsusy/numerics.hpp>

#include "oracles.hpp"

using pdmsusy::complete_elliptic_e;
using pdmsusy::incomplete_elliptic_e;

TEST(Elliptic, MatchesReferenceOnPrincipalRange) {
  for (double k : {0.0, 0.1, 0.5, 0.9, 0.99, 2.0 / 2.15, 2.0 / 3.0, -0.5, -3.0}) {
    for (double phi : {0.0, 0.2, 0.7, 1.2, 1.5}) {
      EXPECT_NEAR(incomplete_elliptic_e(phi, k), oracle::ellint_e(phi, k), 1e-13)
          << "k=" << k << " phi=" << phi;
    }
  }
}

TEST(Elliptic, MatchesReferenceBeyondHalfPeriod) {
  for (double k : {0.3, 0.93, -1.0}) {
    for (double phi : {2.0, 3.5, 7.3, -4.1, 20.0}) {
      EXPECT_NEAR(incomplete_elliptic_e(phi, k), oracle::ellint_e(phi, k), 1e-11)
          << "k=" << k << " phi=" << phi;
    }
  }
}

TEST(Elliptic, CompleteIntegral) {
  EXPECT_NEAR(complete_elliptic_e(0.0), std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(complete_elliptic_e(1.0), 1.0, 1e-14);
  EXPECT_NEAR(complete_elliptic_e(0.5), oracle::ellint_e(std::numbers::pi / 2.0, 0.5), 1e-14);
}

TEST(Elliptic, ParameterAboveOneIsLimited) {
  const double k = 4.0;
  const double limit = std::asin(0.5);
  EXPECT_NO_THROW(incomplete_elliptic_e(0.9 * limit, k));
  EXPECT_THROW(incomplete_elliptic_e(1.1 * limit, k), std::domain_error);
  EXPECT_THROW(complete_elliptic_e(1.5), std::domain_error);
}

TEST(Elliptic, DerivativeIsIntegrand) {
  const double k = 0.8, phi = 0.9, h = 1e-5;
  const double d = (incomplete_elliptic_e(phi + h, k) - incomplete_elliptic_e(phi - h, k)) / (2.0 * h);
  EXPECT_NEAR(d, std::sqrt(1.0 - k * std::sin(phi) * std::sin(phi)), 1e-9);
}
