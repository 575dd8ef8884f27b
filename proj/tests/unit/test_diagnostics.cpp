#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "parbo/diagnostics.hpp"

#include <algorithm>
#include <cmath>

using namespace parbo;

TEST_CASE("information gain examples")
{
  CHECK(information_gain(Eigen::MatrixXd::Ones(1, 1), 1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(information_gain(Eigen::MatrixXd::Zero(4, 4), 0.3) == 0.0);
  CHECK(information_gain(Eigen::MatrixXd(0, 0), 0.3) == 0.0);
  CHECK_THROWS(information_gain(Eigen::MatrixXd::Ones(1, 1), 0.0));
}

TEST_CASE("information gain: log-det equals the sequential-variance sum")
{
  std::mt19937_64 g(1);
  for (int c = 0; c < 10; ++c)
  {
    const auto gc = helpers::random_case(g, 15, 2);
    const Eigen::MatrixXd k = kernel_matrix(gc.spec, gc.x);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(15, 15) + k / gc.noise);
    double logdet = 0.0;
    for (int i = 0; i < 15; ++i)
      logdet += std::log(std::abs(lu.matrixLU()(i, i)));
    const double direct = information_gain(k, gc.noise);
    CHECK(std::abs(direct - 0.5 * logdet) < 1e-8);
    CHECK(std::abs(direct - sequential_information_gain(gc.spec, gc.x, gc.noise)) < 1e-8);
  }
}

TEST_CASE("greedy MIG")
{
  const KernelSpec spec = KernelSpec::gaussian_iso(1, 1.0);
  CHECK(greedy_mig(spec, Eigen::MatrixXd::Zero(1, 1), 1, 1.0) == doctest::Approx(0.34657359027997264));

  std::mt19937_64 g(2);
  const KernelSpec s2 = KernelSpec::gaussian(Eigen::Vector2d(0.3, 0.5), 1.7);
  const Eigen::MatrixXd c = helpers::uniform_points(25, 2, g);
  CHECK(greedy_mig(s2, c, 1, 0.2) == doctest::Approx(0.5 * std::log1p(1.7 / 0.2)));
  double prev = 0.0;
  for (Eigen::Index T = 1; T <= 25; ++T)
  {
    const GreedyMig r = greedy_mig_path(s2, c, T, 0.2);
    CHECK(r.gain >= prev - 1e-12);
    prev = r.gain;
    Eigen::MatrixXd chosen(T, 2);
    for (Eigen::Index i = 0; i < T; ++i)
      chosen.row(i) = c.row(r.selected[static_cast<std::size_t>(i)]);
    CHECK(std::abs(r.gain - information_gain(kernel_matrix(s2, chosen), 0.2)) < 1e-8);
  }
  CHECK(std::abs(prev - information_gain(kernel_matrix(s2, c), 0.2)) < 1e-8);
  CHECK_THROWS(greedy_mig(s2, c, 26, 0.2));
}

TEST_CASE("C_1, C_Q and B_T")
{
  CHECK(c1_constant(1.0) == doctest::Approx(2.0 / std::log(2.0)));
  CHECK(c1_constant(1.0) == doctest::Approx(2.8853900817779268).epsilon(1e-14));
  CHECK(cq_constant(7, 1e-3) == doctest::Approx(7001.0));
  CHECK(cq_constant(0, 0.5) == 1.0);

  const ConditionConstants pims(ConditionMethod::Pims, 10000, 1.0);
  CHECK(pims.zeta(3) == doctest::Approx(2.0 + 2.0 * std::log(5000.0)));
  CHECK(pims.zeta(1) == doctest::Approx(19.034386382832476).epsilon(1e-14));
  CHECK(pims.xi(5) == 0.0);
  CHECK(bcr_bound(1.0, pims, 4, 1.0) == doctest::Approx(std::sqrt(c1_constant(1.0) * 4.0 * pims.zeta(1))));
  const double unit = std::sqrt(c1_constant(1.0) * 1.0 * 4.0);
  CHECK(unit == doctest::Approx(3.3972872011520763).epsilon(1e-14));
}

TEST_CASE("condition constants")
{
  const ConditionConstants ucb(ConditionMethod::Ucb, 10000, 0.01);
  for (std::int64_t t = 1; t <= 20; ++t)
  {
    CHECK(ucb.zeta(t) == doctest::Approx(2.0 * std::log(1e4 * t * t / std::sqrt(2.0 * M_PI))));
    CHECK(ucb.xi(t) == doctest::Approx(1.0 / static_cast<double>(t * t)).epsilon(1e-12));
  }
  const ConditionConstants eims(ConditionMethod::Eims, 400, 1e-3);
  const double c2 = 2.0 + 2.0 * std::log(200.0);
  CHECK(eims.zeta(1) == doctest::Approx(c2 + std::sqrt(2.0 * M_PI * c2)));
  CHECK(eims.zeta(11) == doctest::Approx(std::log((1e-3 + 10.0) / 1e-3) + c2 + std::sqrt(2.0 * M_PI * c2)));
  for (ConditionMethod m : {ConditionMethod::IrgpUcb, ConditionMethod::Ts})
  {
    const ConditionConstants k(m, 400, 0.1);
    CHECK(k.zeta(9) == doctest::Approx(c2));
    CHECK(k.xi(9) == 0.0);
  }
  for (ConditionMethod m : {ConditionMethod::Ucb, ConditionMethod::IrgpUcb, ConditionMethod::Pims,
                            ConditionMethod::Eims, ConditionMethod::Ts})
    CHECK(condition_method_from_string(to_string(m)) == m);
}

TEST_CASE("variance ratio")
{
  const KernelSpec spec = KernelSpec::gaussian_iso(1, 0.1);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.5);
  const GpModel prior = GpModel::fit(spec, 1e-3, Dataset(1));
  CHECK(variance_ratio(prior, prior, x) == 1.0);

  const GpModel at_x = prior.condition(x.transpose().replicate(7, 1), Eigen::VectorXd::Zero(7));
  const double r = variance_ratio(prior, at_x, x);
  CHECK(r == doctest::Approx(1.0 + 7.0 * 1.0 / 1e-3).epsilon(1e-9));
  CHECK(r <= cq_constant(7, 1e-3) + 1e-6);
  CHECK(r > 6000.0);

  const GpModel far = prior.condition(Eigen::MatrixXd::Constant(3, 1, 5.0), Eigen::VectorXd::Zero(3));
  CHECK(variance_ratio(prior, far, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: variance ratio never exceeds C_Q")
{
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 300; ++c)
  {
    const auto gc = helpers::random_case(g, 1 + c % 8, 2);
    const GpModel obs = GpModel::fit(gc.spec, gc.noise, helpers::dataset(gc.x, gc.y));
    const Eigen::Index q = 1 + c % 7;
    const GpModel full = obs.condition(helpers::uniform_points(q, 2, g), Eigen::VectorXd::Zero(q));
    const Eigen::VectorXd x = helpers::uniform_points(1, 2, g).row(0).transpose();
    CHECK(variance_ratio(obs, full, x) <= cq_constant(q, gc.noise) * std::max(1.0, gc.spec.output_variance) + 1e-6);
  }
}

TEST_CASE("normal tail check")
{
  const TailCheck small = normal_tail_check(1e-9);
  CHECK(small.exact == doctest::Approx(0.5));
  CHECK(small.bound == doctest::Approx(0.5));
  const TailCheck one = normal_tail_check(1.0);
  CHECK(one.exact == doctest::Approx(0.15865525393145707).epsilon(1e-14));
  CHECK(one.bound == doctest::Approx(0.3032653298563167).epsilon(1e-14));
  const TailCheck three = normal_tail_check(3.0);
  CHECK(three.exact == doctest::Approx(oracle::phi_sf(3.0)).epsilon(1e-13));
  CHECK(three.bound == doctest::Approx(0.005554498269121153).epsilon(1e-14));
  for (int i = 0; i <= 400; ++i)
  {
    const double c = 1e-3 * std::pow(8000.0, i / 400.0);
    const TailCheck t = normal_tail_check(c);
    CHECK(t.exact <= t.bound);
  }
  CHECK_THROWS(normal_tail_check(0.0));
}

namespace
{
  Trace constant_trace(double v, int batches, int workers)
  {
    Trace t;
    for (int b = 1; b <= batches; ++b)
      for (int w = 0; w < workers; ++w)
      {
        RegretRecord r;
        r.t = (b - 1) * workers + w + 1;
        r.batch = b;
        r.best_so_far = -v;
        r.simple_regret = v;
        t.records.push_back(r);
      }
    return t;
  }
}

TEST_CASE("aggregate_traces")
{
  CHECK_THROWS(aggregate_traces({}, Measure::SimpleRegret));
  const auto one = aggregate_traces({constant_trace(2.0, 3, 2)}, Measure::SimpleRegret);
  REQUIRE(one.size() == 3);
  CHECK(one[0].batch == 1);
  CHECK(one[2].batch == 3);
  CHECK(one[1].std_error == 0.0);
  CHECK(one[1].n_trials == 1);

  const auto two = aggregate_traces({constant_trace(1.0, 2, 3), constant_trace(4.0, 2, 3)}, Measure::SimpleRegret);
  CHECK(two[1].mean == doctest::Approx(2.5));
  CHECK(two[1].std_error == doctest::Approx(1.5));
  const auto best = aggregate_traces({constant_trace(1.0, 2, 3), constant_trace(4.0, 2, 3)}, Measure::BestValue);
  CHECK(best[0].mean == doctest::Approx(-2.5));

  const std::vector<Trace> a = {constant_trace(1.0, 2, 2), constant_trace(3.0, 2, 2), constant_trace(8.0, 2, 2)};
  const std::vector<Trace> b = {a[2], a[0], a[1]};
  const auto sa = aggregate_traces(a, Measure::SimpleRegret);
  const auto sb = aggregate_traces(b, Measure::SimpleRegret);
  CHECK(sa[1].mean == doctest::Approx(sb[1].mean));
  CHECK(sa[1].std_error == doctest::Approx(sb[1].std_error));
  CHECK_THROWS(aggregate_traces({constant_trace(1.0, 2, 2), constant_trace(1.0, 3, 2)}, Measure::SimpleRegret));
}
