#ifndef CITEDIST_EXTENDED_ORACLE_HPP
#define CITEDIST_EXTENDED_ORACLE_HPP

#include "citedist/numerics.hpp"

#include <chrono>
#include <cstdint>

namespace citedist {

/// ln sum_{n=1}^{truncation} (offset + n)^-alpha evaluated entirely in MPFR
/// arithmetic with `decimal_digits` significant digits.
///
/// Reference implementation for tests of the fast log-domain path. Requires
/// decimal_digits >= 50 and truncation <= 100000; throws OracleTimeout once
/// `budget` is spent.
LogValue extended_sum_oracle(double alpha, double offset, std::int64_t truncation,
                             int decimal_digits,
                             std::chrono::milliseconds budget = std::chrono::seconds(60));

} // namespace citedist

#endif
