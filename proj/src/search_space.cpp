#include "parbo/search_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace parbo
{
  SearchSpace SearchSpace::finite(Eigen::MatrixXd grid)
  {
    if (grid.rows() < 1)
      throw std::invalid_argument("finite search space needs at least one candidate");
    SearchSpace space;
    space.finite_ = true;
    space.dim_ = grid.cols();
    space.grid_ = std::move(grid);
    return space;
  }

  SearchSpace SearchSpace::box(Eigen::Index dim, ContinuousSearch search)
  {
    if (dim < 1)
      throw std::invalid_argument("box search space needs dimension >= 1");
    if (search.pool_size < 1)
      throw std::invalid_argument("continuous search needs a nonempty candidate pool");
    SearchSpace space;
    space.finite_ = false;
    space.dim_ = dim;
    space.search_ = search;
    return space;
  }

  Eigen::MatrixXd SearchSpace::candidates(Rng& rng) const
  {
    if (finite_)
      return grid_;
    Eigen::MatrixXd pool(search_.pool_size, dim_);
    for (Eigen::Index i = 0; i < pool.rows(); ++i)
      for (Eigen::Index k = 0; k < dim_; ++k)
        pool(i, k) = uniform01(rng);
    return pool;
  }

  SearchSpace::Result SearchSpace::maximize(const BatchAcquisition& af, const Eigen::MatrixXd& pool) const
  {
    const Eigen::VectorXd values = af(pool);
    const Eigen::Index best = argmax_over(values);
    if (finite_)
      return {pool.row(best).transpose(), best, values[best]};

    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    const std::size_t starts = std::min<std::size_t>(order.size(), static_cast<std::size_t>(search_.refine_starts));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&values](Eigen::Index a, Eigen::Index b) {
                        return values[a] > values[b] || (values[a] == values[b] && a < b);
                      });

    Result result{pool.row(best).transpose(), -1, values[best]};
    Eigen::MatrixXd probes(2 * dim_, dim_);
    for (std::size_t s = 0; s < starts; ++s)
    {
      Eigen::VectorXd x = pool.row(order[s]).transpose();
      double fx = values[order[s]];
      double step = search_.initial_step;
      for (int it = 0; it < search_.refine_steps; ++it)
      {
        for (Eigen::Index k = 0; k < dim_; ++k)
        {
          probes.row(2 * k) = x.transpose();
          probes.row(2 * k + 1) = x.transpose();
          probes(2 * k, k) = std::min(1.0, x[k] + step);
          probes(2 * k + 1, k) = std::max(0.0, x[k] - step);
        }
        const Eigen::VectorXd pv = af(probes);
        const Eigen::Index pb = argmax_over(pv);
        if (pv[pb] > fx)
        {
          x = probes.row(pb).transpose();
          fx = pv[pb];
        }
        else
          step *= 0.5;
      }
      if (fx > result.value)
        result = {x, -1, fx};
    }
    return result;
  }

  SearchSpace::Result SearchSpace::uniform(Rng& rng) const
  {
    if (finite_)
    {
      std::uniform_int_distribution<Eigen::Index> pick(0, grid_.rows() - 1);
      const Eigen::Index id = pick(rng);
      return {grid_.row(id).transpose(), id, 0.0};
    }
    Eigen::VectorXd x(dim_);
    for (Eigen::Index k = 0; k < dim_; ++k)
      x[k] = uniform01(rng);
    return {x, -1, 0.0};
  }

  Eigen::MatrixXd regular_grid(Eigen::Index dim, Eigen::Index levels, bool include_zero)
  {
    if (dim < 1 || levels < 1)
      throw std::invalid_argument("grid needs dim >= 1 and levels >= 1");
    Eigen::VectorXd axis(levels);
    for (Eigen::Index i = 0; i < levels; ++i)
    {
      if (include_zero)
        axis[i] = levels == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(levels - 1);
      else
        axis[i] = static_cast<double>(i + 1) / static_cast<double>(levels);
    }
    Eigen::Index total = 1;
    for (Eigen::Index k = 0; k < dim; ++k)
      total *= levels;
    Eigen::MatrixXd grid(total, dim);
    for (Eigen::Index r = 0; r < total; ++r)
    {
      Eigen::Index rem = r;
      for (Eigen::Index k = dim - 1; k >= 0; --k)
      {
        grid(r, k) = axis[rem % levels];
        rem /= levels;
      }
    }
    return grid;
  }
}
