#include "parbo/objectives.hpp"

#include "parbo/acquisition.hpp"
#include "parbo/gp.hpp"
#include "parbo/sampling.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace parbo
{
  namespace
  {
    constexpr double ackley_half_width = 32.768;

    double ackley(const Eigen::VectorXd& z)
    {
      const double d = static_cast<double>(z.size());
      const double sq = z.squaredNorm() / d;
      const double cs = (2.0 * std::numbers::pi * z.array()).cos().sum() / d;
      return -20.0 * std::exp(-0.2 * std::sqrt(sq)) - std::exp(cs) + 20.0 + std::numbers::e;
    }

    double hartmann6(const Eigen::VectorXd& z)
    {
      static constexpr std::array<double, 4> alpha = {1.0, 1.2, 3.0, 3.2};
      static constexpr double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                                         {0.05, 10, 17, 0.1, 8, 14},
                                         {3, 3.5, 1.7, 10, 17, 8},
                                         {17, 8, 0.05, 10, 0.1, 14}};
      static constexpr double p[4][6] = {{1312, 1696, 5569, 124, 8283, 5886},
                                         {2329, 4135, 8307, 3736, 1004, 9991},
                                         {2348, 1451, 3522, 2883, 3047, 6650},
                                         {4047, 8828, 8732, 5743, 1091, 381}};
      double outer = 0.0;
      for (int i = 0; i < 4; ++i)
      {
        double inner = 0.0;
        for (int j = 0; j < 6; ++j)
        {
          const double diff = z[j] - 1e-4 * p[i][j];
          inner += a[i][j] * diff * diff;
        }
        outer += alpha[i] * std::exp(-inner);
      }
      return -outer;
    }

    double shekel10(const Eigen::VectorXd& z)
    {
      static constexpr double beta[10] = {1, 2, 2, 4, 4, 6, 3, 7, 5, 5};
      static constexpr double c[4][10] = {{4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
                                          {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6},
                                          {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
                                          {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6}};
      double sum = 0.0;
      for (int i = 0; i < 10; ++i)
      {
        double inner = 0.0;
        for (int j = 0; j < 4; ++j)
        {
          const double diff = z[j] - c[j][i];
          inner += diff * diff;
        }
        sum += 1.0 / (inner + 0.1 * beta[i]);
      }
      return -sum;
    }

    double styblinski_tang(const Eigen::VectorXd& z)
    {
      const Eigen::ArrayXd a = z.array();
      return 0.5 * (a.pow(4) - 16.0 * a.square() + 5.0 * a).sum();
    }

    // Box [lo, hi] per coordinate of each function.
    std::pair<double, double> box_of(Benchmark b)
    {
      switch (b)
      {
      case Benchmark::Ackley4: return {-ackley_half_width, ackley_half_width};
      case Benchmark::Hartmann6: return {0.0, 1.0};
      case Benchmark::Shekel4: return {0.0, 10.0};
      case Benchmark::StyblinskiTang3: return {-5.0, 5.0};
      }
      throw ObjectiveError("unknown benchmark");
    }

    std::string trim(std::string_view s)
    {
      const auto first = s.find_first_not_of(" \t\r");
      if (first == std::string_view::npos)
        return {};
      const auto last = s.find_last_not_of(" \t\r");
      return std::string(s.substr(first, last - first + 1));
    }

    std::vector<std::string> split_csv(const std::string& line)
    {
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream in(line);
      while (std::getline(in, cell, ','))
        cells.push_back(trim(cell));
      if (!line.empty() && line.back() == ',')
        cells.emplace_back();
      return cells;
    }

    std::string format_double(double v)
    {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
  }

  std::string to_string(Benchmark b)
  {
    switch (b)
    {
    case Benchmark::Ackley4: return "Ackley4";
    case Benchmark::Hartmann6: return "Hartmann6";
    case Benchmark::Shekel4: return "Shekel4";
    case Benchmark::StyblinskiTang3: return "StyblinskiTang3";
    }
    return "unknown";
  }

  Benchmark benchmark_from_string(const std::string& name)
  {
    for (Benchmark b : {Benchmark::Ackley4, Benchmark::Hartmann6, Benchmark::Shekel4, Benchmark::StyblinskiTang3})
      if (name == to_string(b))
        return b;
    throw ObjectiveError("unknown benchmark '" + name +
                         "' (expected Ackley4, Hartmann6, Shekel4 or StyblinskiTang3)");
  }

  Eigen::Index benchmark_dim(Benchmark b)
  {
    switch (b)
    {
    case Benchmark::Ackley4: return 4;
    case Benchmark::Hartmann6: return 6;
    case Benchmark::Shekel4: return 4;
    case Benchmark::StyblinskiTang3: return 3;
    }
    throw ObjectiveError("unknown benchmark");
  }

  double benchmark_optimum(Benchmark b)
  {
    switch (b)
    {
    case Benchmark::Ackley4:
      return 0.0;
    case Benchmark::Hartmann6:
      return 3.3223680114155147;
    case Benchmark::Shekel4:
      return 10.53644315348353;
    case Benchmark::StyblinskiTang3: {
      // Root of 4x^3 - 32x + 5 = 0 on [-5, -2.5].
      const double x = -2.903534027771177;
      return -3.0 * 0.5 * (std::pow(x, 4) - 16.0 * x * x + 5.0 * x);
    }
    }
    throw ObjectiveError("unknown benchmark");
  }

  double benchmark_eval(Benchmark b, const Eigen::Ref<const Eigen::VectorXd>& x)
  {
    const Eigen::Index d = benchmark_dim(b);
    if (x.size() != d)
      throw ObjectiveError(to_string(b) + " expects " + std::to_string(d) + "-dimensional input, got " +
                           std::to_string(x.size()));
    const auto [lo, hi] = box_of(b);
    const Eigen::VectorXd z = (lo + (hi - lo) * x.array()).matrix();
    switch (b)
    {
    case Benchmark::Ackley4: return -ackley(z);
    case Benchmark::Hartmann6: return -hartmann6(z);
    case Benchmark::Shekel4: return -shekel10(z);
    case Benchmark::StyblinskiTang3: return -styblinski_tang(z);
    }
    throw ObjectiveError("unknown benchmark");
  }

  Objective Objective::from_table(ObjectiveKind kind, Eigen::MatrixXd grid, Eigen::VectorXd values)
  {
    if (grid.rows() < 1)
      throw ObjectiveError("grid objective needs at least one point");
    if (grid.rows() != values.size())
      throw ObjectiveError("grid objective: " + std::to_string(grid.rows()) + " points but " +
                           std::to_string(values.size()) + " values");
    Objective obj;
    obj.kind_ = kind;
    obj.dim_ = grid.cols();
    obj.grid_ = std::move(grid);
    obj.values_ = std::move(values);
    for (Eigen::Index i = 0; i < obj.grid_.rows(); ++i)
    {
      std::vector<double> key(static_cast<std::size_t>(obj.dim_));
      for (Eigen::Index k = 0; k < obj.dim_; ++k)
        key[static_cast<std::size_t>(k)] = obj.grid_(i, k);
      if (!obj.index_.emplace(std::move(key), i).second)
        throw ObjectiveError("grid objective has a duplicated point at row " + std::to_string(i + 1));
    }
    obj.argmax_id_ = argmax_over(obj.values_);
    obj.known_optimum_ = obj.values_[obj.argmax_id_];
    return obj;
  }

  Objective Objective::synthetic_grid(Eigen::MatrixXd grid, Eigen::VectorXd values)
  {
    return from_table(ObjectiveKind::SyntheticGrid, std::move(grid), std::move(values));
  }

  Objective Objective::tabular(Eigen::MatrixXd grid, Eigen::VectorXd values)
  {
    return from_table(ObjectiveKind::Tabular, std::move(grid), std::move(values));
  }

  Objective Objective::analytic(Benchmark b)
  {
    Objective obj;
    obj.kind_ = ObjectiveKind::Analytic;
    obj.benchmark_ = b;
    obj.dim_ = benchmark_dim(b);
    obj.known_optimum_ = benchmark_optimum(b);
    return obj;
  }

  std::optional<Eigen::Index> Objective::find(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    if (x.size() != dim_)
      return std::nullopt;
    std::vector<double> key(x.data(), x.data() + x.size());
    auto it = index_.find(key);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  double Objective::value(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    if (kind_ == ObjectiveKind::Analytic)
      return benchmark_eval(benchmark_, x);
    const auto id = find(x);
    if (!id)
      throw ObjectiveError("input is not a point of the objective's grid");
    return values_[*id];
  }

  Objective synthetic_gp(const KernelSpec& spec, const Eigen::MatrixXd& grid, Rng& rng,
                         const SyntheticOptions& options)
  {
    if (grid.rows() < 1)
      throw ObjectiveError("synthetic objective needs at least one grid point");
    const GpModel prior = GpModel::fit(spec, 0.0, Dataset(grid.cols()));
    Eigen::VectorXd values;
    if (options.force_exact || grid.rows() <= options.exact_limit)
      values = sample_joint(prior, grid, rng);
    else
    {
      const FeatureMap map = build_feature_map(spec, options.rff_features, rng);
      values = sample_path_rff(prior, map, rng).evaluate(grid);
    }
    return Objective::synthetic_grid(grid, std::move(values));
  }

  double observe(const Objective& objective, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double noise_variance, Rng& rng)
  {
    if (!(noise_variance >= 0.0))
      throw ObjectiveError("observation noise variance must be nonnegative");
    const double f = objective.value(x);
    if (noise_variance == 0.0)
      return f;
    return f + std::sqrt(noise_variance) * standard_normal(rng);
  }

  Objective load_tabular(const std::filesystem::path& path)
  {
    std::ifstream in(path);
    if (!in)
      throw ObjectiveError("cannot open tabular objective '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
      throw ObjectiveError(path.string() + ": file is empty (expected a header row)");
    const std::size_t columns = split_csv(line).size();
    if (columns < 2)
      throw ObjectiveError(path.string() + ": header must name at least one input and one output column");

    std::vector<std::vector<double>> rows;
    std::size_t row_number = 1;
    while (std::getline(in, line))
    {
      ++row_number;
      if (trim(line).empty())
        continue;
      const auto cells = split_csv(line);
      if (cells.size() != columns)
        throw ObjectiveError(path.string() + ": row " + std::to_string(row_number) + " has " +
                             std::to_string(cells.size()) + " cells, expected " + std::to_string(columns));
      std::vector<double> row(columns);
      for (std::size_t c = 0; c < columns; ++c)
      {
        const std::string& cell = cells[c];
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
        if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
            !std::isfinite(row[c]))
          throw ObjectiveError(path.string() + ": row " + std::to_string(row_number) + ", column " +
                               std::to_string(c + 1) + ": '" + cell + "' is not a finite number");
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty())
      throw ObjectiveError(path.string() + ": no data rows");

    const auto d = static_cast<Eigen::Index>(columns - 1);
    Eigen::MatrixXd grid(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
      for (Eigen::Index k = 0; k < d; ++k)
        grid(static_cast<Eigen::Index>(r), k) = rows[r][static_cast<std::size_t>(k)];
      values[static_cast<Eigen::Index>(r)] = rows[r].back();
    }
    try
    {
      return Objective::tabular(std::move(grid), std::move(values));
    }
    catch (const ObjectiveError& e)
    {
      throw ObjectiveError(path.string() + ": " + e.what());
    }
  }

  void write_tabular(const std::filesystem::path& path, const Objective& objective)
  {
    if (!objective.is_finite())
      throw ObjectiveError("only grid objectives can be written as tables");
    std::ofstream out(path);
    if (!out)
      throw ObjectiveError("cannot write '" + path.string() + "'");
    for (Eigen::Index k = 0; k < objective.dim(); ++k)
      out << "x_" << (k + 1) << ',';
    out << "y\n";
    for (Eigen::Index i = 0; i < objective.grid().rows(); ++i)
    {
      for (Eigen::Index k = 0; k < objective.dim(); ++k)
        out << format_double(objective.grid()(i, k)) << ',';
      out << format_double(objective.values()[i]) << '\n';
    }
  }
}
