#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "scr1d/charge_moment.hpp"
#include "scr1d/errors.hpp"
#include "scr1d/verify.hpp"

using namespace scr1d;

namespace {

// Uniform slab rho = c on [lo, hi] with exact antiderivatives.
ChargeDensity slab(double c, double lo, double hi) {
  return ChargeDensity([c](double) { return c; }, Interval(lo, hi),
                       [c](double x) { return c * x; },
                       [c](double x) { return 0.5 * c * x * x; });
}

}  // namespace

TEST_CASE("charge density integrates with and without closed forms") {
  const ChargeDensity with = slab(2.0, 0.0, 4.0);
  const ChargeDensity without([](double) { return 2.0; }, Interval(0.0, 4.0));
  CHECK(with.has_antiderivatives());
  CHECK(!without.has_antiderivatives());

  for (const ChargeDensity* d : {&with, &without}) {
    CHECK(d->integral(1.0, 3.0) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(d->first_moment(1.0, 3.0) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(d->integral(2.0, 2.0) == 0.0);
    // Reversed bounds flip the sign.
    CHECK(d->integral(3.0, 1.0) == doctest::Approx(-4.0).epsilon(1e-13));
    CHECK(d->first_moment(3.0, 1.0) == doctest::Approx(-8.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(with.integral(-1.0, 2.0), OutOfDomain);
  CHECK_THROWS_AS(with.first_moment(3.0, 5.0), OutOfDomain);
}

TEST_CASE("charge density rejects inconsistent antiderivatives") {
  CHECK_THROWS_AS(
      ChargeDensity([](double) { return 1.0; }, Interval(0.0, 1.0),
                    [](double x) { return 1.01 * x; },
                    [](double x) { return 0.5 * x * x; }),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ChargeDensity([](double) { return 1.0; }, Interval(0.0, 1.0),
                    [](double x) { return x; },
                    [](double x) { return 0.502 * x * x; }),
      std::invalid_argument);
}

TEST_CASE("region construction validates geometry and support") {
  ChargeDensity d = slab(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(ChargeRegion(d, 1.0, 0.5, 0.5, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChargeRegion(d, -1.0, 0.0, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  // [x1, x2] must lie within the density support.
  CHECK_THROWS_AS(ChargeRegion(d, 1.0, -0.5, 1.0, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("uniform slab with unit density") {
  // rho/eps = 1 on [0, 1], field rising from -1 to 0. The voltage is the
  // first moment 1/2 plus the boundary terms x1*E1 - x2*E2 = 0.
  const ChargeRegion region(slab(1.0, 0.0, 1.0), 1.0, 0.0, 1.0, -1.0, 0.0);
  CHECK(check_boundary_consistency(region).pass);
  CHECK(net_charge(region) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(charge_moment_integral(region) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(scr_voltage(region) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(potential_drop_direct(region) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("translated slab picks up the boundary term") {
  // Same slab moved to [2, 3]: the moment grows to 5/2 but x1*E1 = -2
  // restores the same physical voltage.
  const ChargeRegion region(slab(1.0, 2.0, 3.0), 1.0, 2.0, 3.0, -1.0, 0.0);
  CHECK(charge_moment_integral(region) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(scr_voltage(region) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(potential_drop_direct(region) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("dipole slab pair") {
  // rho = -1 on [0, 1), +1 on [1, 2]: zero net charge, zero boundary fields,
  // voltage from the moment alone.
  auto rho = [](double x) { return x < 1.0 ? -1.0 : 1.0; };
  ChargeDensity d(rho, Interval(0.0, 2.0), {1.0});
  const ChargeRegion region(std::move(d), 1.0, 0.0, 2.0, 0.0, 0.0);
  CHECK(check_boundary_consistency(region).pass);
  CHECK(scr_voltage(region) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(potential_drop_direct(region) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("neutral regions are translation invariant") {
  auto make = [](double shift, double e_edge) {
    auto rho = [shift](double x) { return x - shift < 1.0 ? 1.0 : -1.0; };
    ChargeDensity d(rho, Interval(shift, shift + 2.0), {shift + 1.0});
    return ChargeRegion(std::move(d), 1.0, shift, shift + 2.0, e_edge, e_edge);
  };
  const double v0 = scr_voltage(make(0.0, 2.0));
  const double v5 = scr_voltage(make(5.0, 2.0));
  const double v9 = scr_voltage(make(-9.0, 2.0));
  CHECK(v5 == doctest::Approx(v0).epsilon(1e-12));
  CHECK(v9 == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("inconsistent boundary fields are rejected") {
  const ChargeRegion bad(slab(1.0, 0.0, 1.0), 1.0, 0.0, 1.0, 0.0, 0.5);
  const BoundaryCheck check = check_boundary_consistency(bad);
  CHECK(!check.pass);
  CHECK(check.residual == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK_THROWS_AS(scr_voltage(bad), InconsistentBoundaryFields);
  CHECK_THROWS_AS(potential_drop_direct(bad), InconsistentBoundaryFields);
  CHECK_THROWS_AS(field_profile(bad, 8), InconsistentBoundaryFields);
}

TEST_CASE("field profile closes on the boundary data") {
  const ChargeRegion region(slab(1.0, 0.0, 1.0), 1.0, 0.0, 1.0, -1.0, 0.0);
  const FieldProfile profile = field_profile(region, 16);
  REQUIRE(profile.samples.size() == 17);
  CHECK(profile.samples.front().x == 0.0);
  CHECK(profile.samples.front().e == -1.0);
  CHECK(profile.samples.front().u == 0.0);
  CHECK(profile.samples.back().x == 1.0);
  CHECK(profile.samples.back().e == doctest::Approx(0.0).scale(1.0));
  // u(x2) - u(x1) equals the region voltage.
  CHECK(profile.samples.back().u ==
        doctest::Approx(scr_voltage(region)).epsilon(1e-12));
  // E midway through the slab: E1 + x.
  CHECK(profile.samples[8].e == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(field_profile(region, 1), std::invalid_argument);
}

TEST_CASE("randomized equivalence suites pass at reduced size") {
  const EquivalenceReport equiv = run_equivalence_suite(99, 60);
  CHECK(equiv.cases == 60);
  CHECK(equiv.pass);
  CHECK(equiv.max_residual <= equiv.bound);
  CHECK(!equiv.worst_description.empty());

  const EquivalenceReport trans = run_translation_suite(99, 30);
  CHECK(trans.pass);
}
