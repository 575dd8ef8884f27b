#ifndef PARBO_NORMAL_HPP
#define PARBO_NORMAL_HPP

#include <cmath>
#include <numbers>

namespace parbo
{
  inline double normal_pdf(double z) noexcept
  {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  }

  inline double normal_cdf(double z) noexcept
  {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
  }

  /// 1 - Phi(z), accurate in the upper tail.
  inline double normal_sf(double z) noexcept
  {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
  }
}

#endif
