#ifndef PARBO_SEARCH_SPACE_HPP
#define PARBO_SEARCH_SPACE_HPP

#include "parbo/acquisition.hpp"
#include "parbo/random.hpp"

#include <Eigen/Core>

namespace parbo
{
  /// Knobs for acquisition maximization on [0, 1]^d.
  struct ContinuousSearch
  {
    Eigen::Index pool_size = 2000;
    int refine_starts = 5;
    int refine_steps = 20;
    double initial_step = 0.05;
  };

  /// Either a finite candidate grid or the unit box.
  class SearchSpace
  {
  public:
    static SearchSpace finite(Eigen::MatrixXd grid);
    static SearchSpace box(Eigen::Index dim, ContinuousSearch search = {});

    bool is_finite() const noexcept { return finite_; }
    Eigen::Index dim() const noexcept { return dim_; }
    const Eigen::MatrixXd& grid() const noexcept { return grid_; }
    Eigen::Index size() const noexcept { return finite_ ? grid_.rows() : 0; }
    const ContinuousSearch& search() const noexcept { return search_; }

    /// The grid itself, or a fresh uniform pool for the box.
    Eigen::MatrixXd candidates(Rng& rng) const;

    /// Maximizer of `af`.  On a grid this is the lowest-index argmax; on the
    /// box the best pool point is refined by coordinate search around the top
    /// few pool points.  `candidate_id` is the grid row, or -1 off-grid.
    struct Result
    {
      Eigen::VectorXd x;
      Eigen::Index candidate_id = -1;
      double value = 0.0;
    };
    Result maximize(const BatchAcquisition& af, const Eigen::MatrixXd& pool) const;

    Result uniform(Rng& rng) const;

  private:
    bool finite_ = true;
    Eigen::Index dim_ = 0;
    Eigen::MatrixXd grid_;
    ContinuousSearch search_;
  };

  /// Regular grid with `levels` points per axis; the grid
  /// {1/L, 2/L, ..., 1} when `include_zero` is false, else {0, 1/(L-1), ..., 1}.
  Eigen::MatrixXd regular_grid(Eigen::Index dim, Eigen::Index levels, bool include_zero);
}

#endif
