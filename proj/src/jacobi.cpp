#include "sdetect/jacobi.hpp"

#include "sdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sdetect {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a)
{
  double sum = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = p + 1; q < a.cols(); ++q)
      sum += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(sum);
}

} // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double rel_tol, int max_sweeps)
{
  if (input.rows() != input.cols())
    throw ArgumentError("eigensolver needs a square matrix");
  const Eigen::Index n = input.rows();

  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double norm = a.norm();
  const double target = rel_tol * norm;

  SymmetricEigen result;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      result.converged = true;
      break;
    }
    ++result.sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // After a few sweeps an element below the rounding level of both
        // diagonal entries can be dropped outright.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }

        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!result.converged && off_diagonal_norm(a) <= target)
    result.converged = true;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    result.values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    result.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return result;
}

} // namespace sdetect
