#include "qminv/numeric.hpp"

#include <boost/math/constants/constants.hpp>
#include <stdexcept>

namespace qminv {

std::uint64_t quarter_pi_sqrt_floor(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  const WideFloat value =
      boost::math::constants::pi<WideFloat>() / 4 * boost::multiprecision::sqrt(WideFloat(num) / WideFloat(den));
  return static_cast<std::uint64_t>(boost::multiprecision::floor(value));
}

}  // namespace qminv
