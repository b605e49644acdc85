#include "sdetect/polynomial.hpp"

#include "sdetect/basis.hpp"
#include "sdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sdetect {

namespace {

double ipow(double base, int e)
{
  double r = 1.0;
  for (int k = 0; k < e; ++k)
    r *= base;
  return r;
}

} // namespace

Polynomial2::Polynomial2(std::vector<Term> terms)
  : terms_(std::move(terms))
{
  for (const auto& t : terms_) {
    if (t.x_power < 0 || t.y_power < 0)
      throw ArgumentError("polynomial powers must be >= 0");
    if (!std::isfinite(t.coefficient))
      throw ArgumentError("polynomial coefficients must be finite");
  }
  canonicalize();
}

Polynomial2 Polynomial2::from_monomial_coefficients(int degree,
                                                    const std::vector<double>& coefficients)
{
  const Basis basis = Basis::monomial(degree);
  if (coefficients.size() != basis.size())
    throw ArgumentError("degree " + std::to_string(degree) + " needs " +
                        std::to_string(basis.size()) + " coefficients, got " +
                        std::to_string(coefficients.size()));
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const auto [i, j] = basis.monomial_powers(k);
    terms.push_back({ i, j, coefficients[k] });
  }
  return Polynomial2(std::move(terms));
}

int Polynomial2::degree() const
{
  int d = 0;
  for (const auto& t : terms_)
    d = std::max(d, t.x_power + t.y_power);
  return d;
}

double Polynomial2::operator()(Point2 p) const
{
  double sum = 0.0;
  for (const auto& t : terms_)
    sum += t.coefficient * ipow(p.x, t.x_power) * ipow(p.y, t.y_power);
  return sum;
}

Point2 Polynomial2::gradient(Point2 p) const
{
  Point2 g;
  for (const auto& t : terms_) {
    if (t.x_power > 0)
      g.x += t.coefficient * t.x_power * ipow(p.x, t.x_power - 1) * ipow(p.y, t.y_power);
    if (t.y_power > 0)
      g.y += t.coefficient * t.y_power * ipow(p.x, t.x_power) * ipow(p.y, t.y_power - 1);
  }
  return g;
}

Polynomial2 Polynomial2::operator*(const Polynomial2& other) const
{
  std::vector<Term> out;
  for (const auto& a : terms_)
    for (const auto& b : other.terms_)
      out.push_back({ a.x_power + b.x_power, a.y_power + b.y_power,
                      a.coefficient * b.coefficient });
  return Polynomial2(std::move(out));
}

void Polynomial2::canonicalize()
{
  std::map<std::pair<int, int>, double> merged;
  for (const auto& t : terms_)
    merged[{ t.x_power, t.y_power }] += t.coefficient;
  terms_.clear();
  for (const auto& [powers, c] : merged)
    if (c != 0.0)
      terms_.push_back({ powers.first, powers.second, c });
}

} // namespace sdetect
