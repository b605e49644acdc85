#include "sdetect/report.hpp"

#include "sdetect/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sdetect {

namespace {

Eigen::VectorXd monomial_exact(const Polynomial2& poly, const Basis& basis)
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& t : poly.terms()) {
    if (t.x_power + t.y_power > basis.degree())
      throw ArgumentError("curve polynomial of degree " + std::to_string(poly.degree()) +
                          " is not in the span of " + basis.to_string());
    c[static_cast<Eigen::Index>(monomial_index(basis.degree(), t.x_power, t.y_power))] =
      t.coefficient;
  }
  return c;
}

Eigen::VectorXd fourier_exact(const CurveSpec& spec, const Basis& basis)
{
  std::vector<std::pair<FourierTerm, double>> terms;
  switch (spec.kind()) {
    case CurveSpec::Kind::circle:
      terms = { { { 2, 0, false }, 1.0 }, { { 0, 0, false }, -spec.radius() * spec.radius() } };
      break;
    case CurveSpec::Kind::semicircles:
      terms = { { { 2, 0, false }, 1.0 },
                { { 1, 0, false }, -(spec.r1() + spec.r2()) },
                { { 0, 0, false }, spec.r1() * spec.r2() } };
      break;
    case CurveSpec::Kind::xshape:
      // r^2 cos 2t = x^2 - y^2; dividing by r keeps the zero set.
      terms = { { { 1, 2, false }, 1.0 } };
      break;
    case CurveSpec::Kind::lshape:
      // xy - y0 x - x0 y + x0 y0
      terms = { { { 2, 2, true }, 0.5 },
                { { 1, 1, false }, -spec.y0() },
                { { 1, 1, true }, -spec.x0() },
                { { 0, 0, false }, spec.x0() * spec.y0() } };
      break;
    case CurveSpec::Kind::custom_poly:
      throw ArgumentError("no polar Fourier form for a custom polynomial curve");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [term, value] : terms) {
    if (value == 0.0)
      continue;
    const std::size_t idx = basis.fourier_index(term);
    if (idx >= basis.size())
      throw ArgumentError("curve " + spec.name() + " is not in the span of " +
                          basis.to_string());
    c[static_cast<Eigen::Index>(idx)] = value;
  }
  return c;
}

std::string fixed(double v, int precision)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

std::string pad(std::string s, std::size_t width)
{
  if (s.size() < width)
    s.insert(0, width - s.size(), ' ');
  return s;
}

} // namespace

Eigen::VectorXd exact_coefficients(const CurveSpec& spec, const Basis& basis)
{
  Eigen::VectorXd c = basis.kind() == Basis::Kind::monomial
                        ? monomial_exact(spec.polynomial(), basis)
                        : fourier_exact(spec, basis);
  c /= c.norm();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[best]))
      best = i;
  if (c[best] < 0.0)
    c = -c;
  return c;
}

CoefficientError coefficient_error(const Eigen::VectorXd& fitted, const Eigen::VectorXd& exact)
{
  if (fitted.size() != exact.size())
    throw ArgumentError("coefficient vectors differ in length");
  const double plus = (fitted - exact).norm();
  const double minus = (fitted + exact).norm();
  CoefficientError e;
  e.sign = minus < plus ? -1 : 1;
  e.l2 = std::min(plus, minus);
  e.max_abs = (fitted - e.sign * exact).cwiseAbs().maxCoeff();
  return e;
}

std::string coefficient_table(const Basis& basis, const Eigen::VectorXd& fitted,
                              const std::optional<Eigen::VectorXd>& exact)
{
  if (static_cast<std::size_t>(fitted.size()) != basis.size())
    throw ArgumentError("coefficient count does not match basis " + basis.to_string());
  std::optional<CoefficientError> err;
  if (exact)
    err = coefficient_error(fitted, *exact);

  std::size_t label_w = 4;
  for (std::size_t i = 0; i < basis.size(); ++i)
    label_w = std::max(label_w, basis.term_label(i).size());

  std::ostringstream os;
  os << pad("term", label_w) << pad("fitted", 12);
  if (exact)
    os << pad("exact", 12) << pad("|error|", 12);
  os << '\n';
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    os << pad(basis.term_label(i), label_w) << pad(fixed(fitted[k], 6), 12);
    if (exact) {
      const double ex = err->sign * (*exact)[k];
      os << pad(fixed(ex, 6), 12) << pad(fixed(std::abs(fitted[k] - ex), 6), 12);
    }
    os << '\n';
  }
  if (err)
    os << "sign-aligned L2 error " << fixed(err->l2, 6) << ", max term error "
       << fixed(err->max_abs, 6) << '\n';
  return os.str();
}

} // namespace sdetect
