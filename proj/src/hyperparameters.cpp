#include "parbo/gp.hpp"

#include "parbo/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace parbo
{
  namespace
  {
    // Lexicographic row order so the search sees the same data however the
    // caller happened to order it.
    Dataset canonical_order(const Dataset& data)
    {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&data](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index k = 0; k < data.dim(); ++k)
          if (data.inputs(a, k) != data.inputs(b, k))
            return data.inputs(a, k) < data.inputs(b, k);
        return data.outputs[a] < data.outputs[b];
      });
      Dataset sorted(data.dim());
      std::int64_t label = 1;
      for (Eigen::Index i : order)
        sorted.push_back(data.inputs.row(i).transpose(), data.outputs[i], label++);
      return sorted;
    }

    struct Bounds
    {
      Eigen::VectorXd lower;
      Eigen::VectorXd upper;
    };

    KernelSpec spec_from_params(const Eigen::VectorXd& params)
    {
      const Eigen::Index d = params.size() - 1;
      KernelSpec spec;
      spec.family = KernelFamily::GaussianArd;
      spec.lengthscales = params.head(d).array().exp();
      spec.output_variance = std::exp(params[d]);
      return spec;
    }

    class Objective
    {
    public:
      Objective(const Dataset& data, double noise) : data_(data), noise_(noise) {}

      double operator()(const Eigen::VectorXd& params) const
      {
        try
        {
          const double lml = GpModel::fit(spec_from_params(params), noise_, data_).log_marginal_likelihood();
          return std::isfinite(lml) ? lml : -std::numeric_limits<double>::infinity();
        }
        catch (const GpError&)
        {
          return -std::numeric_limits<double>::infinity();
        }
      }

    private:
      const Dataset& data_;
      double noise_;
    };

    // Maximizes along one coordinate on [lo, hi]; keeps the current point
    // unless the bracket search finds a strictly better value.
    void golden_section(const Objective& objective, Eigen::VectorXd& params, double& value,
                        Eigen::Index coord, double lo, double hi, int iterations)
    {
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      Eigen::VectorXd probe = params;
      auto eval_at = [&](double v) {
        probe[coord] = v;
        return objective(probe);
      };
      double a = lo;
      double b = hi;
      double c = b - inv_phi * (b - a);
      double d = a + inv_phi * (b - a);
      double fc = eval_at(c);
      double fd = eval_at(d);
      for (int it = 0; it < iterations; ++it)
      {
        if (fc >= fd)
        {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = eval_at(c);
        }
        else
        {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = eval_at(d);
        }
      }
      const double best_x = fc >= fd ? c : d;
      const double best_f = std::max(fc, fd);
      if (best_f > value)
      {
        params[coord] = best_x;
        value = best_f;
      }
    }
  }

  KernelSpec fit_hyperparameters(const Dataset& data, const HyperSearchConfig& search)
  {
    data.validate();
    if (data.size() < 2)
      throw GpError("hyperparameter fitting needs at least two observations");
    if (search.starts < 1)
      throw GpError("hyperparameter search needs at least one start");

    const Dataset sorted = canonical_order(data);
    const Eigen::Index d = data.dim();
    const Objective objective(sorted, search.noise_variance);

    Bounds bounds{Eigen::VectorXd(d + 1), Eigen::VectorXd(d + 1)};
    bounds.lower.head(d).setConstant(std::log(search.min_lengthscale));
    bounds.upper.head(d).setConstant(std::log(search.max_lengthscale));
    bounds.lower[d] = std::log(search.min_output_variance);
    bounds.upper[d] = std::log(search.max_output_variance);

    Rng rng(search.seed);
    std::vector<Eigen::VectorXd> starts;
    if (search.initial)
    {
      const KernelSpec& init = *search.initial;
      if (init.family != KernelFamily::GaussianArd || init.dim() != d)
        throw GpError("initial kernel for hyperparameter search must be Gaussian-ARD of matching dimension");
      Eigen::VectorXd p(d + 1);
      p.head(d) = init.lengthscales.array().log();
      p[d] = std::log(init.output_variance);
      starts.push_back(p.cwiseMax(bounds.lower).cwiseMin(bounds.upper));
    }
    const double ll0 = std::log(search.start_min_lengthscale);
    const double ll1 = std::log(search.start_max_lengthscale);
    const double lv0 = std::log(search.start_min_output_variance);
    const double lv1 = std::log(search.start_max_output_variance);
    while (static_cast<int>(starts.size()) < search.starts)
    {
      Eigen::VectorXd p(d + 1);
      for (Eigen::Index k = 0; k < d; ++k)
        p[k] = ll0 + (ll1 - ll0) * uniform01(rng);
      p[d] = lv0 + (lv1 - lv0) * uniform01(rng);
      starts.push_back(p);
    }

    Eigen::VectorXd best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Eigen::VectorXd params : starts)
    {
      double value = objective(params);
      double width = 1.5;
      for (int sweep = 0; sweep < search.sweeps; ++sweep)
      {
        for (Eigen::Index k = 0; k <= d; ++k)
        {
          const double lo = std::max(bounds.lower[k], params[k] - width);
          const double hi = std::min(bounds.upper[k], params[k] + width);
          golden_section(objective, params, value, k, lo, hi, search.golden_iterations);
        }
        width *= 0.5;
      }
      if (value > best_value)
      {
        best_value = value;
        best = params;
      }
    }
    if (!std::isfinite(best_value))
      throw GpError("hyperparameter search failed: no start produced a factorizable covariance");
    return spec_from_params(best);
  }
}
