// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <numbers>
#include "capres/errors.hpp"
#include "capres/oracles.hpp"

using namespace capres;

TEST_CASE("isolated sphere")
{
  CHECK(oracle::SphereCapacitance(0.2) == doctest::Approx(0.8 * std::numbers::pi));
  CHECK_THROWS_AS(oracle::SphereCapacitance(0.0), DomainError);
}

TEST_CASE("image charges agree with the bispherical series")
{
  for (double d : {0.5, 1.0, 3.0})
  {
    const Eigen::Matrix2d C = oracle::TwoSphereCapacitance(0.2, 0.2, d, 1e-16);
    const double self = oracle::EqualSpheresSelfSeries(0.2, d);
    const double mutual = oracle::EqualSpheresMutualSeries(0.2, d);
    CHECK(std::abs(C(0, 0) - self) / self < 1e-10);
    CHECK(std::abs(C(0, 1) - mutual) / std::abs(mutual) < 1e-10);
    CHECK(std::abs(oracle::EqualSpheresFullSeries(0.2, d) - (self - mutual)) / self < 1e-12);
    CHECK(C(0, 0) == doctest::Approx(C(1, 1)).epsilon(1e-14));
  }
}

TEST_CASE("image-charge matrix properties for unequal spheres")
{
  const Eigen::Matrix2d C = oracle::TwoSphereCapacitance(0.2, 0.35, 1.0, 1e-15);
  CHECK(C(0, 1) == doctest::Approx(C(1, 0)).epsilon(1e-12));
  CHECK(C(0, 1) < 0.0);
  CHECK(C(0, 0) > oracle::SphereCapacitance(0.2));
  CHECK(C(0, 0) + C(0, 1) < oracle::SphereCapacitance(0.2));
  CHECK(C(0, 0) + C(0, 1) > 0.0);
  // Far apart the spheres decouple: C12 ~ -C1 C2 / (4 pi d).
  const double d = 1e3;
  const Eigen::Matrix2d far = oracle::TwoSphereCapacitance(0.2, 0.35, d, 1e-15);
  const double c1 = oracle::SphereCapacitance(0.2), c2 = oracle::SphereCapacitance(0.35);
  CHECK(far(0, 1) == doctest::Approx(-c1 * c2 / (4.0 * std::numbers::pi * d)).epsilon(1e-6));
}

TEST_CASE("image iteration bookkeeping and errors")
{
  const auto st = oracle::TwoSphereImages(0.2, 0.2, 1.0, 1e-14);
  CHECK(st.iterations > 0);
  CHECK(st.last_magnitude < 1e-14);
  CHECK(st.images[0][0].front().offset == 0.0);
  CHECK_THROWS_AS(oracle::TwoSphereCapacitance(0.5, 0.6, 1.0, 1e-12), DomainError);
  CHECK_THROWS_AS(oracle::EqualSpheresSelfSeries(0.5, 1.0), DomainError);
}

TEST_CASE("symmetric dimer and monomer closed forms")
{
  const std::complex<double> beta(0.0, -2.0);
  const auto w = oracle::SymmetricDimerOmegaSq(60.0, beta, 1.0, 0.3);
  CHECK(std::abs(w * (1.0 - beta * 0.09) - 60.0) < 1e-12);
  CHECK(oracle::MonomerOmegaSq(5.0, 0.0, 1.0, 10.0) == std::complex<double>(5.0));
  CHECK_THROWS_AS(oracle::MonomerOmegaSq(5.0, 1.0, 1.0, 1.0), DomainError);
}
