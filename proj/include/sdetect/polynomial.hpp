#pragma once

#include "sdetect/point_set.hpp"

#include <vector>

namespace sdetect {

/// Sparse bivariate polynomial sum_t c_t x^i_t y^j_t.
class Polynomial2
{
public:
  struct Term
  {
    int x_power{ 0 };
    int y_power{ 0 };
    double coefficient{ 0.0 };
  };

  Polynomial2() = default;
  explicit Polynomial2(std::vector<Term> terms);

  /// Dense coefficients in monomial_index order for the given degree.
  static Polynomial2 from_monomial_coefficients(int degree,
                                                const std::vector<double>& coefficients);

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;

  double operator()(Point2 p) const;
  /// Gradient (dF/dx, dF/dy).
  Point2 gradient(Point2 p) const;

  Polynomial2 operator*(const Polynomial2& other) const;

private:
  /// Merges like terms and drops zeros; keeps (i, j) ascending.
  void canonicalize();

  std::vector<Term> terms_;
};

} // namespace sdetect
