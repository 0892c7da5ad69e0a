#include "citedist/error.hpp"
#include "citedist/extended_oracle.hpp"
#include "citedist/numerics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace citedist;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("LogValue rejects NaN and +inf, keeps log-zero explicit") {
  CHECK_THROWS_AS(LogValue(std::nan("")), DomainError);
  CHECK_THROWS_AS(LogValue{kInf}, DomainError);
  CHECK(LogValue(-kInf).is_zero());
  CHECK(LogValue::zero().is_zero());
  CHECK(LogValue::from_linear(0.0).is_zero());
  CHECK_THROWS_AS(LogValue::from_linear(-1.0), DomainError);
  CHECK(LogValue::from_linear(2.0).value() == doctest::Approx(std::log(2.0)));
  CHECK((LogValue(1.0) * LogValue(2.0)).value() == 3.0);
  CHECK((LogValue(1.0) / LogValue(2.0)).value() == -1.0);
  CHECK((LogValue::zero() * LogValue(5.0)).is_zero());
  CHECK(LogValue::zero() < LogValue(-1e300));
}

TEST_CASE("log_sum_exp examples") {
  const std::vector<LogValue> two_ones{LogValue(0.0), LogValue(0.0)};
  CHECK(log_sum_exp(two_ones).value() == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const std::vector<LogValue> with_zero{LogValue::zero(), LogValue(std::log(5.0))};
  CHECK(log_sum_exp(with_zero).value() == std::log(5.0));

  // mpmath, 40 digits.
  const std::vector<double> far{-10000.0, -10000.5};
  CHECK(log_sum_exp(far) == doctest::Approx(-9999.52592301581989).epsilon(1e-15));

  const std::vector<double> all_zero{-kInf, -kInf};
  CHECK(log_sum_exp(all_zero) == -kInf);
  CHECK_THROWS_AS(log_sum_exp(std::span<const double>{}), DomainError);
}

TEST_CASE("log_sum_exp bounds and permutation invariance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(1 + trial % 17);
    for (auto& x : t)
      x = u(rng);
    const double lse = log_sum_exp(t);
    const double mx = *std::max_element(t.begin(), t.end());
    CHECK(lse >= mx);
    CHECK(lse <= mx + std::log(static_cast<double>(t.size())) + 1e-12);
    auto shuffled = t;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const double again = log_sum_exp(shuffled);
    CHECK(std::abs(again - lse) <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lse)));
  }
}

TEST_CASE("standard normal CDF") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(10.0) - 1.0) <= 1e-14);
  CHECK(std_normal_cdf(0.405465) == doctest::Approx(0.657432129759675527).epsilon(1e-14));
  for (double x = -8.0; x <= 8.0; x += 0.125)
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-14);
}

TEST_CASE("log of the normal CDF stays finite in the far tail") {
  CHECK(log_std_normal_cdf(-40.0) == doctest::Approx(-804.60844201375379).epsilon(1e-13));
  CHECK(std::isfinite(log_std_normal_cdf(-1e5)));
  CHECK(log_std_normal_cdf(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_std_normal_cdf(40.0) == 0.0);
  // Branches agree where they meet.
  for (double x : {-20.0, 5.0})
    CHECK(log_std_normal_cdf(std::nextafter(x, -kInf)) == doctest::Approx(log_std_normal_cdf(x)).epsilon(1e-12));
  CHECK(log_std_normal_sf(3.0) == doctest::Approx(std::log(std_normal_cdf(-3.0))).epsilon(1e-14));
}

TEST_CASE("log interval mass avoids cancellation") {
  CHECK(log_std_normal_interval(-1.0, 1.0) == doctest::Approx(std::log(std_normal_cdf(1.0) - std_normal_cdf(-1.0))));
  // Upper tail: Phi(9) - Phi(8) would cancel to 0 in double.
  const double upper = log_std_normal_interval(8.0, 9.0);
  CHECK(std::isfinite(upper));
  CHECK(upper == doctest::Approx(std::log(std::erfc(8.0 / std::sqrt(2.0)) / 2 - std::erfc(9.0 / std::sqrt(2.0)) / 2))
                     .epsilon(1e-10));
  CHECK(log_std_normal_interval(2.0, 2.0) == -kInf);
  CHECK_THROWS_AS(log_std_normal_interval(1.0, 0.0), DomainError);
}

TEST_CASE("predict_underflow examples") {
  const auto boundary = predict_underflow(77.0, 0.0, 10000);
  CHECK(boundary.smallest_term_log10 == doctest::Approx(-308.0));
  CHECK(boundary.risk == UnderflowRisk::reduced_accuracy);

  CHECK(predict_underflow(100.0, 200.0, 10000).risk == UnderflowRisk::total_underflow);

  const auto safe = predict_underflow(10.0, 0.0, 10000);
  CHECK(safe.smallest_term_log10 == doctest::Approx(-40.0));
  CHECK(safe.risk == UnderflowRisk::safe);
  CHECK(std::string(to_string(safe.risk)) == "safe");

  // Risk boundaries sit exactly on the double limits.
  CHECK(predict_underflow(30.8, 0.0, 10000).risk == UnderflowRisk::safe);
  CHECK(predict_underflow(81.0, 0.0, 10000).risk == UnderflowRisk::total_underflow);
}

TEST_CASE("extended oracle closed forms") {
  // zeta(2) - 1 and zeta(2), truncated at 1e5 (remainder ~1e-5 in linear terms).
  const double tail = 1.0 / 100000.5;
  const auto shifted = extended_sum_oracle(2.0, 1.0, 99999, 50);
  CHECK(std::log(std::exp(shifted.value()) + tail) == doctest::Approx(-0.43860718935211743).epsilon(1e-12));
  const auto plain = extended_sum_oracle(2.0, 0.0, 100000, 50);
  CHECK(std::log(std::exp(plain.value()) + tail) == doctest::Approx(0.49770030247074535).epsilon(1e-12));

  const auto hard = extended_sum_oracle(100.0, 200.0, 10000, 60);
  CHECK(std::isfinite(hard.value()));
  CHECK(hard.value() < 0.0);

  CHECK_THROWS_AS(extended_sum_oracle(2.0, 0.0, 10, 20), DomainError);
  CHECK_THROWS_AS(extended_sum_oracle(2.0, 0.0, 100000, 400, std::chrono::milliseconds(0)), OracleTimeout);
}
