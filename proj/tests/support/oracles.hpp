#ifndef PARBO_TEST_ORACLES_HPP
#define PARBO_TEST_ORACLES_HPP

// Reference implementations for the tests: explicit loops, QR/LU solves,
// Boost for the normal distribution.

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace oracle
{
  inline double gauss_k(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& ls, double var)
  {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
      const double z = (a[i] - b[i]) / ls[i];
      s += z * z;
    }
    return var * std::exp(-0.5 * s);
  }

  inline Eigen::MatrixXd gauss_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::VectorXd& ls,
                                    double var)
  {
    Eigen::MatrixXd k(x.rows(), y.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < y.rows(); ++j)
        k(i, j) = gauss_k(x.row(i).transpose(), y.row(j).transpose(), ls, var);
    return k;
  }

  struct DenseGp
  {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd ls;
    double var;
    double noise;

    Eigen::MatrixXd system() const
    {
      Eigen::MatrixXd a = gauss_gram(x, x, ls, var);
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        a(i, i) += noise;
      return a;
    }

    double mean(const Eigen::VectorXd& t) const
    {
      if (x.rows() == 0)
        return 0.0;
      const Eigen::VectorXd k = gauss_gram(x, t.transpose(), ls, var).col(0);
      return k.dot(system().colPivHouseholderQr().solve(y));
    }

    double variance(const Eigen::VectorXd& t) const
    {
      if (x.rows() == 0)
        return var;
      const Eigen::VectorXd k = gauss_gram(x, t.transpose(), ls, var).col(0);
      return var - k.dot(system().colPivHouseholderQr().solve(k));
    }

    double lml() const
    {
      const Eigen::MatrixXd a = system();
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
      double logdet = 0.0;
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        logdet += std::log(std::abs(lu.matrixLU()(i, i)));
      const double n = static_cast<double>(a.rows());
      return -0.5 * y.dot(lu.solve(y)) - 0.5 * logdet - 0.5 * n * std::log(2.0 * M_PI);
    }
  };

  inline double phi_cdf(double z)
  {
    return boost::math::cdf(boost::math::normal_distribution<double>(0.0, 1.0), z);
  }

  inline double phi_sf(double z)
  {
    return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(0.0, 1.0), z));
  }

  inline double phi_pdf(double z)
  {
    return boost::math::pdf(boost::math::normal_distribution<double>(0.0, 1.0), z);
  }

  template <class V>
  long scan_argmax(const V& v)
  {
    long best = 0;
    for (long i = 1; i < static_cast<long>(v.size()); ++i)
      if (v[i] > v[best])
        best = i;
    return best;
  }

  // Standard (minimization) forms on their native boxes.
  inline double ackley(const std::vector<double>& z)
  {
    const double n = static_cast<double>(z.size());
    double a = 0.0, b = 0.0;
    for (double v : z)
    {
      a += v * v;
      b += std::cos(2.0 * M_PI * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(a / n)) - std::exp(b / n) + 20.0 + std::exp(1.0);
  }

  inline double hartmann6(const std::vector<double>& z)
  {
    const double alpha[] = {1.0, 1.2, 3.0, 3.2};
    const double A[4][6] = {{10, 3, 17, 3.50, 1.7, 8}, {0.05, 10, 17, 0.1, 8, 14}, {3, 3.5, 1.7, 10, 17, 8},
                            {17, 8, 0.05, 10, 0.1, 14}};
    const double P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                            {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                            {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                            {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
    double out = 0.0;
    for (int i = 0; i < 4; ++i)
    {
      double e = 0.0;
      for (int j = 0; j < 6; ++j)
        e += A[i][j] * (z[j] - P[i][j]) * (z[j] - P[i][j]);
      out -= alpha[i] * std::exp(-e);
    }
    return out;
  }

  inline double shekel10(const std::vector<double>& z)
  {
    const double beta[] = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
    const double C[10][4] = {{4, 4, 4, 4}, {1, 1, 1, 1}, {8, 8, 8, 8}, {6, 6, 6, 6}, {3, 7, 3, 7},
                             {2, 9, 2, 9}, {5, 3, 5, 3}, {8, 1, 8, 1}, {6, 2, 6, 2}, {7, 3.6, 7, 3.6}};
    double out = 0.0;
    for (int i = 0; i < 10; ++i)
    {
      double s = beta[i];
      for (int j = 0; j < 4; ++j)
        s += (z[j] - C[i][j]) * (z[j] - C[i][j]);
      out -= 1.0 / s;
    }
    return out;
  }

  inline double styblinski_tang(const std::vector<double>& z)
  {
    double s = 0.0;
    for (double v : z)
      s += v * v * v * v - 16.0 * v * v + 5.0 * v;
    return s / 2.0;
  }
}

#endif
