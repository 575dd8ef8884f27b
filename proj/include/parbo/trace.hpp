#ifndef PARBO_TRACE_HPP
#define PARBO_TRACE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace parbo
{
  /// One optimization iteration.  Batch ids start at 1; initial-design points
  /// are kept separately and never numbered.
  struct RegretRecord
  {
    std::int64_t t = 0;
    std::int64_t batch = 0;
    Eigen::VectorXd x;
    double y = 0.0;
    double best_so_far = 0.0;
    std::optional<double> simple_regret;
  };

  struct Trace
  {
    Eigen::MatrixXd init_inputs;
    Eigen::VectorXd init_outputs;
    std::vector<RegretRecord> records;
    /// Pending count seen by each selection, in selection order.
    std::vector<std::int64_t> pending_at_selection;
  };
}

#endif
