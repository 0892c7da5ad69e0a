#include "citedist/extended_oracle.hpp"

#include "citedist/error.hpp"

#include <cmath>
#include <mpfr.h>

namespace citedist {

namespace {

class Mpfr {
public:
  explicit Mpfr(mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
  }
  ~Mpfr() {
    mpfr_clear(value_);
  }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() {
    return value_;
  }

private:
  mpfr_t value_;
};

} // namespace

LogValue extended_sum_oracle(double alpha, double offset, std::int64_t truncation,
                             int decimal_digits, std::chrono::milliseconds budget) {
  if (!(alpha > 0.0) || !(offset >= 0.0) || truncation < 1)
    throw DomainError("extended_sum_oracle needs alpha > 0, offset >= 0, truncation >= 1");
  if (decimal_digits < 50)
    throw DomainError("extended_sum_oracle needs at least 50 decimal digits");
  if (truncation > 100000)
    throw DomainError("extended_sum_oracle is limited to truncation <= 100000");

  const auto deadline = std::chrono::steady_clock::now() + budget;
  const auto bits = static_cast<mpfr_prec_t>(std::ceil(decimal_digits * 3.32192809488736234787)) + 32;

  Mpfr sum(bits), base(bits), term(bits), exponent(bits);
  mpfr_set_zero(sum.get(), 1);
  mpfr_set_d(exponent.get(), -alpha, MPFR_RNDN);
  for (std::int64_t n = 1; n <= truncation; ++n) {
    if ((n & 255) == 0 && std::chrono::steady_clock::now() > deadline)
      throw OracleTimeout("extended_sum_oracle exceeded its time budget at n = " + std::to_string(n));
    mpfr_set_d(base.get(), offset, MPFR_RNDN);
    mpfr_add_si(base.get(), base.get(), static_cast<long>(n), MPFR_RNDN);
    mpfr_pow(term.get(), base.get(), exponent.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
  }
  mpfr_log(sum.get(), sum.get(), MPFR_RNDN);
  return LogValue(mpfr_get_d(sum.get(), MPFR_RNDN));
}

} // namespace citedist
