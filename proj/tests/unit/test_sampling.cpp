#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "parbo/sampling.hpp"

#include <cmath>

using namespace parbo;
using helpers::dataset;

TEST_CASE("discrete draw from the prior at one point")
{
  const GpModel prior = GpModel::fit(KernelSpec::gaussian_iso(1, 1.0), 0.0, Dataset(1));
  const Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1, 1, 0.3);
  double sum = 0.0;
  for (int s = 0; s < 10000; ++s)
  {
    Rng rng(static_cast<std::uint64_t>(s));
    const double v = sample_path_discrete(prior, c, rng).evaluate(c)[0];
    Rng again(static_cast<std::uint64_t>(s));
    CHECK(v == standard_normal(again));
    sum += v;
  }
  CHECK(std::abs(sum / 10000.0) < 0.03);
}

TEST_CASE("seed determinism")
{
  std::mt19937_64 g(1);
  const auto gc = helpers::random_case(g, 8, 2);
  const GpModel m = GpModel::fit(gc.spec, gc.noise, dataset(gc.x, gc.y));
  const Eigen::MatrixXd c = helpers::uniform_points(30, 2, g);
  Rng a(77), b(77);
  CHECK(sample_path_discrete(m, c, a).evaluate(c) == sample_path_discrete(m, c, b).evaluate(c));
  Rng fa(78), fb(78);
  const FeatureMap ma = build_feature_map(gc.spec, 256, fa);
  const FeatureMap mb = build_feature_map(gc.spec, 256, fb);
  CHECK(ma.frequencies == mb.frequencies);
  CHECK(ma.phases == mb.phases);
  const PosteriorSample pa = sample_path_rff(m, ma, fa);
  const PosteriorSample pb = sample_path_rff(m, mb, fb);
  CHECK(pa.evaluate(c) == pb.evaluate(c));
  CHECK(pa.source_model_fingerprint() == m.fingerprint());
}

TEST_CASE("noiseless training point is reproduced exactly")
{
  std::mt19937_64 g(2);
  const Eigen::MatrixXd x = helpers::uniform_points(5, 2, g);
  const Eigen::VectorXd y = helpers::normals(5, g);
  const GpModel m = GpModel::fit(KernelSpec::gaussian_iso(2, 0.3), 0.0, dataset(x, y));
  Eigen::MatrixXd c(3, 2);
  c.row(0) = x.row(2);
  c.row(1) = helpers::uniform_points(1, 2, g);
  c.row(2) = x.row(4);
  for (int s = 0; s < 20; ++s)
  {
    Rng rng(static_cast<std::uint64_t>(s));
    const Eigen::VectorXd v = sample_path_discrete(m, c, rng).evaluate(c);
    CHECK(std::abs(v[0] - y[2]) <= 1e-5);
    CHECK(std::abs(v[2] - y[4]) <= 1e-5);
  }
}

TEST_CASE("Monte Carlo covariance of discrete draws")
{
  std::mt19937_64 g(3);
  const auto gc = helpers::random_case(g, 6, 2);
  const GpModel m = GpModel::fit(gc.spec, gc.noise, dataset(gc.x, gc.y));
  const Eigen::MatrixXd c = helpers::uniform_points(3, 2, g);
  const Eigen::VectorXd mu = m.means(c);
  const Eigen::MatrixXd cov = m.covariance(c);
  const int n = 50000;
  Eigen::MatrixXd draws(n, 3);
  Rng rng(4);
  for (int s = 0; s < n; ++s)
    draws.row(s) = sample_joint(m, c, rng).transpose();
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean;
  const Eigen::MatrixXd emp = centered.transpose() * centered / (n - 1);
  for (int i = 0; i < 3; ++i)
  {
    CHECK(std::abs(mean[i] - mu[i]) < 4.0 * std::sqrt(cov(i, i) / n));
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(emp(i, j) - cov(i, j)) <= 0.05 * std::sqrt(cov(i, i) * cov(j, j)));
  }
}

TEST_CASE("RFF feature map approximates the kernel")
{
  const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.5, 1.3);
  Rng rng(5);
  const FeatureMap map = build_feature_map(spec, 2048, rng);
  CHECK(map.scale == doctest::Approx(std::sqrt(2.0 * 1.3 / 2048)));
  CHECK(map.phases.minCoeff() >= 0.0);
  CHECK(map.phases.maxCoeff() < 2.0 * M_PI);
  std::mt19937_64 g(6);
  double worst = 0.0;
  for (int p = 0; p < 100; ++p)
  {
    const Eigen::MatrixXd pts = helpers::uniform_points(2, 2, g);
    const double approx = map.feature_vector(Eigen::VectorXd(pts.row(0).transpose()))
                              .dot(map.feature_vector(Eigen::VectorXd(pts.row(1).transpose())));
    worst = std::max(worst, std::abs(approx - eval_kernel(spec, pts.row(0).transpose(), pts.row(1).transpose())));
    const double self = map.feature_vector(Eigen::VectorXd(pts.row(0).transpose())).squaredNorm();
    CHECK(std::abs(self - 1.3) < 0.05 * 1.3 + 0.05);
  }
  CHECK(worst < 0.05 * 1.3 + 0.02);
  Rng r2(7);
  CHECK_THROWS(build_feature_map(KernelSpec::matern(Eigen::Vector2d(0.5, 0.5), 1.5), 16, r2));
}

TEST_CASE("RFF path from empty data is the prior path")
{
  const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.4);
  const GpModel prior = GpModel::fit(spec, 1e-3, Dataset(2));
  Rng rng(8);
  const FeatureMap map = build_feature_map(spec, 128, rng);
  const PosteriorSample p = sample_path_rff(prior, map, rng);
  const auto& path = std::get<RffPath>(p.representation());
  CHECK((path.correction_weights.size() == 0 || path.correction_weights.cwiseAbs().maxCoeff() == 0.0));
  std::mt19937_64 g(9);
  const Eigen::MatrixXd c = helpers::uniform_points(5, 2, g);
  CHECK((p.evaluate(c) - map.features(c) * path.prior_weights).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RFF posterior path moments at a held-out point")
{
  std::mt19937_64 g(10);
  const KernelSpec spec = KernelSpec::gaussian_iso(2, 0.4);
  const Eigen::MatrixXd x = helpers::uniform_points(6, 2, g);
  const Eigen::VectorXd y = helpers::normals(6, g);
  const GpModel m = GpModel::fit(spec, 1e-2, dataset(x, y));
  const Eigen::VectorXd t = Eigen::Vector2d(0.5, 0.5);
  const double mu = m.mean(t);
  const double var = m.variance(t);
  const int n = 2000;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < n; ++s)
  {
    Rng rng(1000 + static_cast<std::uint64_t>(s));
    const FeatureMap map = build_feature_map(spec, 2048, rng);
    const double v = sample_path_rff(m, map, rng).evaluate_at(t);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double emp_var = sq / n - mean * mean;
  CHECK(std::abs(mean - mu) <= 3.0 * (std::sqrt(var / n) + 0.05));
  CHECK(std::abs(emp_var - var) <= 0.15 * var);
}

TEST_CASE("sample_max")
{
  const Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 1);
  const PosteriorSample s(DiscreteValues{Eigen::Vector3d(3.0, 1.0, 2.0)}, 0);
  const SampleMax best = sample_max(s, c);
  CHECK(best.argmax == 0);
  CHECK(best.max_value == 3.0);

  const PosteriorSample tie(DiscreteValues{Eigen::Vector3d(1.0, 5.0, 5.0)}, 0);
  CHECK(sample_max(tie, c).argmax == 1);

  const PosteriorSample one(DiscreteValues{Eigen::VectorXd::Constant(1, -4.0)}, 0);
  CHECK(sample_max(one, Eigen::MatrixXd::Zero(1, 1)).argmax == 0);

  std::mt19937_64 g(11);
  for (int k = 0; k < 50; ++k)
  {
    const Eigen::VectorXd v = helpers::normals(40, g);
    const PosteriorSample r(DiscreteValues{v}, 0);
    const SampleMax sm = sample_max(r, Eigen::MatrixXd::Zero(40, 1));
    CHECK(sm.argmax == oracle::scan_argmax(v));
    CHECK(sm.max_value == v.maxCoeff());
  }
  CHECK_THROWS(sample_max(s, Eigen::MatrixXd::Zero(4, 1)));
}

TEST_CASE("law of total expectation under fantasy conditioning")
{
  std::mt19937_64 g(12);
  const auto gc = helpers::random_case(g, 8, 2);
  const GpModel m = GpModel::fit(gc.spec, gc.noise, dataset(gc.x, gc.y));
  const Eigen::MatrixXd pending = helpers::uniform_points(2, 2, g);
  const Eigen::VectorXd t = helpers::uniform_points(1, 2, g).row(0).transpose();
  const int n = 2000;
  Eigen::VectorXd means(n);
  Rng rng(13);
  for (int s = 0; s < n; ++s)
  {
    Eigen::VectorXd yf = sample_joint(m, pending, rng);
    for (Eigen::Index i = 0; i < yf.size(); ++i)
      yf[i] += std::sqrt(gc.noise) * standard_normal(rng);
    means[s] = m.condition(pending, yf).mean(t);
  }
  const double avg = means.mean();
  const double se = std::sqrt((means.array() - avg).square().sum() / (n - 1) / n);
  CHECK(std::abs(avg - m.mean(t)) <= 3.0 * se + 1e-12);
}
