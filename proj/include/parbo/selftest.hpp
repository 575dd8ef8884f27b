#ifndef PARBO_SELFTEST_HPP
#define PARBO_SELFTEST_HPP

#include <iosfwd>

namespace parbo
{
  /// Quick invariant suite over the diagnostics; prints one line per check
  /// and returns the number of failures.
  int run_selftest(std::ostream& out);
}

#endif
