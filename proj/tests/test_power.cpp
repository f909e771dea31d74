#include <doctest.h>

#include <cmath>

#include "eemimo/power.hpp"
#include "test_support.hpp"

using namespace eemimo;

namespace {

PowerModel reference_model() {
  PowerModel m;
  m.eta = 0.38;
  m.p_dyn = 83.0;
  m.p_sta = 45.5;
  m.p_max = dbm_to_watt(46.0);
  m.c_min = 0.0;
  return m;
}

}  // namespace

TEST_SUITE("power") {

TEST_CASE("dbm conversions") {
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dbm_to_watt(46.0) == doctest::Approx(39.810717055349734).epsilon(1e-12));
  CHECK(dbm_to_watt(-110.0) == doctest::Approx(1e-14).epsilon(1e-12));
  CHECK(watt_to_dbm(dbm_to_watt(17.3)) == doctest::Approx(17.3).epsilon(1e-12));
}

TEST_CASE("total_power: all-off case and affine structure") {
  const PowerModel m = reference_model();
  CHECK(total_power(0.0, 0, m) == doctest::Approx(m.p_sta));

  // 46 dBm with four active antennas at the reference constants.
  const double p = 39.8107;
  CHECK(total_power(p, 4, m) ==
        doctest::Approx(p / 0.38 + 4 * 83.0 + 45.5).epsilon(1e-12));
  CHECK(total_power(p, 4, m) == doctest::Approx(482.27).epsilon(1e-4));

  // doubling P adds exactly P/eta
  CHECK(total_power(2 * p, 4, m) - total_power(p, 4, m) ==
        doctest::Approx(p / m.eta).epsilon(1e-12));

  CHECK_THROWS_AS(total_power(-1.0, 4, m), std::invalid_argument);
}

TEST_CASE("total_power: strictly increasing in P and M_a") {
  const PowerModel m = reference_model();
  auto rng = testsup::make_rng(17);
  for (int t = 0; t < 50; ++t) {
    const double p = 100.0 * testsup::uniform01(rng);
    const double dp = 1e-3 + testsup::uniform01(rng);
    const int ma = static_cast<int>(8 * testsup::uniform01(rng));
    CHECK(total_power(p + dp, ma, m) > total_power(p, ma, m));
    CHECK(total_power(p, ma + 1, m) > total_power(p, ma, m));
  }
}

TEST_CASE("energy_efficiency: ratios and linear scaling in rate") {
  const PowerModel m = reference_model();
  CHECK(energy_efficiency(0.0, 1.0, 4, m) == 0.0);

  PowerModel flat = m;
  flat.eta = 1.0;
  flat.p_dyn = 0.0;
  flat.p_sta = 0.0;
  CHECK(energy_efficiency(1e6, 100.0, 0, flat) ==
        doctest::Approx(1e4).epsilon(1e-12));

  const double base = energy_efficiency(5e6, 10.0, 4, m);
  CHECK(energy_efficiency(3.0 * 5e6, 10.0, 4, m) ==
        doctest::Approx(3.0 * base).epsilon(1e-12));

  CHECK_THROWS_AS(energy_efficiency(0.0, 0.0, 0, flat), std::domain_error);
  CHECK_THROWS_AS(energy_efficiency(-1.0, 1.0, 0, m), std::invalid_argument);
}

}  // TEST_SUITE
