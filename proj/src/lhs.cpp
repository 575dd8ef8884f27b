#include "parbo/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace parbo
{
  Eigen::MatrixXd lhs(Eigen::Index n, Eigen::Index d, Rng& rng)
  {
    if (n < 1 || d < 1)
      throw std::invalid_argument("lhs needs n >= 1 and d >= 1");
    Eigen::MatrixXd design(n, d);
    std::vector<Eigen::Index> strata(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < d; ++k)
    {
      std::iota(strata.begin(), strata.end(), Eigen::Index{0});
      // Fisher-Yates.
      for (std::size_t i = strata.size(); i > 1; --i)
      {
        const auto j = static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
        std::swap(strata[i - 1], strata[j]);
      }
      for (Eigen::Index i = 0; i < n; ++i)
      {
        const double u = uniform01(rng);
        double v = (static_cast<double>(strata[static_cast<std::size_t>(i)]) + u) / static_cast<double>(n);
        const double upper = static_cast<double>(strata[static_cast<std::size_t>(i)] + 1) / static_cast<double>(n);
        if (v >= upper)
          v = std::nextafter(upper, 0.0);
        design(i, k) = v;
      }
    }
    return design;
  }

  std::vector<Eigen::Index> nearest_grid(const Eigen::MatrixXd& points, const Eigen::MatrixXd& grid)
  {
    if (grid.rows() < 1)
      throw std::invalid_argument("nearest_grid needs a nonempty grid");
    if (points.cols() != grid.cols())
      throw std::invalid_argument("nearest_grid: points and grid differ in dimension");
    std::vector<Eigen::Index> ids(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i)
    {
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < grid.rows(); ++j)
      {
        const double dist = (grid.row(j) - points.row(i)).squaredNorm();
        if (dist < best_d)
        {
          best_d = dist;
          best = j;
        }
      }
      ids[static_cast<std::size_t>(i)] = best;
    }
    return ids;
  }
}
