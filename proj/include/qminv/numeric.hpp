#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace qminv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using WideFloat = boost::multiprecision::cpp_bin_float_50;

/// floor(pi/4 * sqrt(num/den)) evaluated in 50-digit arithmetic, so the
/// floor is exact for any 64-bit inputs.
std::uint64_t quarter_pi_sqrt_floor(std::uint64_t num, std::uint64_t den = 1);

}  // namespace qminv
