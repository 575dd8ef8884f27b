#ifndef PARBO_OBJECTIVES_HPP
#define PARBO_OBJECTIVES_HPP

#include "parbo/kernel.hpp"
#include "parbo/random.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parbo
{
  class ObjectiveError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Analytic test functions, evaluated on [0, 1]^d mapped affinely to each
  /// function's usual box and negated so that larger is better.
  enum class Benchmark
  {
    Ackley4,
    Hartmann6,
    Shekel4,
    StyblinskiTang3,
  };

  std::string to_string(Benchmark b);
  Benchmark benchmark_from_string(const std::string& name);
  Eigen::Index benchmark_dim(Benchmark b);
  /// Maximum of the negated function.
  double benchmark_optimum(Benchmark b);
  double benchmark_eval(Benchmark b, const Eigen::Ref<const Eigen::VectorXd>& x);

  enum class ObjectiveKind
  {
    SyntheticGrid,
    Analytic,
    Tabular,
  };

  class Objective
  {
  public:
    static Objective synthetic_grid(Eigen::MatrixXd grid, Eigen::VectorXd values);
    static Objective tabular(Eigen::MatrixXd grid, Eigen::VectorXd values);
    static Objective analytic(Benchmark b);

    ObjectiveKind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ != ObjectiveKind::Analytic; }
    Eigen::Index dim() const noexcept { return dim_; }
    const Eigen::MatrixXd& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    std::optional<double> known_optimum() const noexcept { return known_optimum_; }
    Eigen::Index argmax_id() const noexcept { return argmax_id_; }
    Benchmark benchmark() const noexcept { return benchmark_; }

    /// Noise-free f(x).  Finite objectives require x to be a grid row.
    double value(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    std::optional<Eigen::Index> find(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  private:
    static Objective from_table(ObjectiveKind kind, Eigen::MatrixXd grid, Eigen::VectorXd values);

    ObjectiveKind kind_ = ObjectiveKind::Analytic;
    Eigen::Index dim_ = 0;
    Benchmark benchmark_ = Benchmark::Ackley4;
    Eigen::MatrixXd grid_;
    Eigen::VectorXd values_;
    Eigen::Index argmax_id_ = -1;
    std::optional<double> known_optimum_;
    std::map<std::vector<double>, Eigen::Index> index_;
  };

  struct SyntheticOptions
  {
    /// Grids up to this size are drawn exactly; larger ones use an RFF path.
    Eigen::Index exact_limit = 2000;
    Eigen::Index rff_features = 4096;
    bool force_exact = false;
  };

  /// One draw of f ~ GP(0, k) restricted to the grid.
  Objective synthetic_gp(const KernelSpec& spec, const Eigen::MatrixXd& grid, Rng& rng,
                         const SyntheticOptions& options = {});

  /// y = f(x) + eps, eps ~ N(0, noise_variance).
  double observe(const Objective& objective, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double noise_variance, Rng& rng);

  /// CSV with a header row, d input columns and one output column.
  Objective load_tabular(const std::filesystem::path& path);
  void write_tabular(const std::filesystem::path& path, const Objective& objective);
}

#endif
