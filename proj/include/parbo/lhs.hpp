#ifndef PARBO_LHS_HPP
#define PARBO_LHS_HPP

#include "parbo/random.hpp"

#include <Eigen/Core>

#include <vector>

namespace parbo
{
  /// Latin hypercube design in [0, 1]^d: every column has exactly one point
  /// in each of the n strata [k/n, (k+1)/n).
  Eigen::MatrixXd lhs(Eigen::Index n, Eigen::Index d, Rng& rng);

  /// Row of `grid` nearest (Euclidean) to each row of `points`; ties go to
  /// the lowest row.
  std::vector<Eigen::Index> nearest_grid(const Eigen::MatrixXd& points, const Eigen::MatrixXd& grid);
}

#endif
