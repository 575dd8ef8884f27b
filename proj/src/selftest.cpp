#include "parbo/selftest.hpp"

#include "parbo/diagnostics.hpp"
#include "parbo/gp.hpp"
#include "parbo/kernel.hpp"
#include "parbo/random.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

namespace parbo
{
  namespace
  {
    Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, Rng& rng)
    {
      Eigen::MatrixXd x(n, d);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < d; ++k)
          x(i, k) = uniform01(rng);
      return x;
    }

    bool information_gain_identity()
    {
      Rng rng(11);
      for (int c = 0; c < 5; ++c)
      {
        const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.2 + 0.2 * uniform01(rng));
        const double noise = 0.01 + uniform01(rng);
        const Eigen::MatrixXd x = random_points(12, 2, rng);
        const double direct = information_gain(kernel_matrix(spec, x), noise);
        const double sequential = sequential_information_gain(spec, x, noise);
        if (std::abs(direct - sequential) > 1e-8 * std::max(1.0, std::abs(direct)))
          return false;
      }
      return true;
    }

    bool variance_ratio_bound()
    {
      Rng rng(12);
      for (int c = 0; c < 100; ++c)
      {
        const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.1 + 0.4 * uniform01(rng));
        const double noise = std::pow(10.0, -3.0 * uniform01(rng));
        const auto q = static_cast<Eigen::Index>(1 + (c % 7));
        const Eigen::MatrixXd obs = random_points(5, 2, rng);
        const GpModel model = GpModel::fit(spec, noise, Dataset(obs, Eigen::VectorXd::Zero(5), {1, 2, 3, 4, 5}));
        const Eigen::MatrixXd pending = random_points(q, 2, rng);
        const GpModel full = model.condition(pending, Eigen::VectorXd::Zero(q));
        const Eigen::VectorXd x = random_points(1, 2, rng).row(0).transpose();
        if (variance_ratio(model, full, x) > cq_constant(q, noise) + 1e-6)
          return false;
      }
      return true;
    }

    bool tail_bound()
    {
      for (int i = 0; i <= 200; ++i)
      {
        const double c = 1e-3 * std::pow(8.0 / 1e-3, i / 200.0);
        const TailCheck t = normal_tail_check(c);
        if (t.exact > t.bound)
          return false;
      }
      return true;
    }

    bool mig_monotone()
    {
      Rng rng(13);
      const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.3);
      const Eigen::MatrixXd cand = random_points(30, 2, rng);
      double prev = 0.0;
      for (Eigen::Index T = 1; T <= 30; ++T)
      {
        const double g = greedy_mig(spec, cand, T, 0.1);
        if (g < prev - 1e-12)
          return false;
        prev = g;
      }
      return std::abs(prev - information_gain(kernel_matrix(spec, cand), 0.1)) < 1e-8;
    }

    bool fantasy_refit()
    {
      Rng rng(14);
      const KernelSpec spec = KernelSpec::gaussian_iso(3, 0.4);
      const Eigen::MatrixXd x = random_points(8, 3, rng);
      Eigen::VectorXd y(8);
      for (Eigen::Index i = 0; i < 8; ++i)
        y[i] = standard_normal(rng);
      const GpModel head = GpModel::fit(spec, 0.01, Dataset(x.topRows(5), y.head(5), {1, 2, 3, 4, 5}));
      const GpModel cond = head.condition(x.bottomRows(3), y.tail(3));
      const GpModel full = GpModel::fit(spec, 0.01, Dataset(x, y, {1, 2, 3, 4, 5, 6, 7, 8}));
      const Eigen::MatrixXd test = random_points(10, 3, rng);
      return (cond.means(test) - full.means(test)).cwiseAbs().maxCoeff() < 1e-10 &&
             (cond.variances(test) - full.variances(test)).cwiseAbs().maxCoeff() < 1e-10;
    }
  }

  int run_selftest(std::ostream& out)
  {
    const std::pair<const char*, std::function<bool()>> checks[] = {
        {"information gain: log-det equals sequential sum", information_gain_identity},
        {"variance ratio within C_Q", variance_ratio_bound},
        {"normal tail below exp(-c^2/2)/2", tail_bound},
        {"greedy MIG nondecreasing, full set equals log-det", mig_monotone},
        {"fantasy conditioning equals refit", fantasy_refit},
    };
    int failures = 0;
    for (const auto& [name, check] : checks)
    {
      bool ok = false;
      try
      {
        ok = check();
      }
      catch (const std::exception& e)
      {
        out << "error: " << e.what() << '\n';
      }
      out << (ok ? "ok   " : "FAIL ") << name << '\n';
      if (!ok)
        ++failures;
    }
    out << (failures == 0 ? "selftest passed" : "selftest failed") << '\n';
    return failures;
  }
}
