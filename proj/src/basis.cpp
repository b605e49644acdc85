#include "sdetect/basis.hpp"

#include "sdetect/error.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace sdetect {

namespace {

int parse_int(std::string_view text, std::string_view spec)
{
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ptr != end || ec != std::errc())
    throw ArgumentError("bad basis spec '" + std::string(spec) + "'");
  return value;
}

std::string power_label(const char* var, int p)
{
  if (p == 0)
    return "";
  if (p == 1)
    return var;
  return std::string(var) + "^" + std::to_string(p);
}

} // namespace

std::size_t monomial_index(int n, int i, int j)
{
  if (n < 0 || i < 0 || j < 0 || i + j > n)
    throw ArgumentError("monomial powers (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") out of range for degree " +
                        std::to_string(n));
  return static_cast<std::size_t>(i * (n + 2) - i * (i + 1) / 2 + j);
}

Basis Basis::monomial(int degree)
{
  if (degree < 0)
    throw ArgumentError("polynomial degree must be >= 0");
  const auto n = static_cast<std::size_t>(degree);
  return Basis(Kind::monomial, degree, 0, (n + 1) * (n + 2) / 2);
}

Basis Basis::fourier_polar(int radial_order, int angular_order)
{
  if (radial_order < 0 || angular_order < 0)
    throw ArgumentError("Fourier orders must be >= 0");
  const auto J = static_cast<std::size_t>(radial_order);
  const auto M = static_cast<std::size_t>(angular_order);
  return Basis(Kind::fourier_polar, radial_order, angular_order,
               (J + 1) * (M + 1) + (J + 1) * M);
}

Basis Basis::parse(std::string_view spec)
{
  if (spec.starts_with("poly:"))
    return monomial(parse_int(spec.substr(5), spec));
  if (spec.starts_with("fourier:")) {
    const auto rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos)
      throw ArgumentError("bad basis spec '" + std::string(spec) +
                          "', expected fourier:<J>:<M>");
    return fourier_polar(parse_int(rest.substr(0, colon), spec),
                         parse_int(rest.substr(colon + 1), spec));
  }
  throw ArgumentError("bad basis spec '" + std::string(spec) +
                      "', expected poly:<n> or fourier:<J>:<M>");
}

void Basis::eval(Point2 p, std::span<double> out) const
{
  if (out.size() != size_)
    throw ArgumentError("feature buffer has wrong length");

  if (kind_ == Kind::monomial) {
    const int n = degree_;
    std::vector<double> xp(n + 1), yp(n + 1);
    xp[0] = yp[0] = 1.0;
    for (int e = 1; e <= n; ++e) {
      xp[e] = xp[e - 1] * p.x;
      yp[e] = yp[e - 1] * p.y;
    }
    std::size_t k = 0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n - i; ++j)
        out[k++] = xp[i] * yp[j];
    return;
  }

  const double r = std::hypot(p.x, p.y);
  const double theta = std::atan2(p.y, p.x);
  std::vector<double> cos_m(angular_ + 1), sin_m(angular_ + 1);
  for (int m = 0; m <= angular_; ++m) {
    cos_m[m] = std::cos(m * theta);
    sin_m[m] = std::sin(m * theta);
  }
  std::size_t k = 0;
  double rj = 1.0;
  for (int j = 0; j <= degree_; ++j) {
    for (int m = 0; m <= angular_; ++m) {
      out[k++] = rj * cos_m[m];
      if (m > 0)
        out[k++] = rj * sin_m[m];
    }
    rj *= r;
  }
}

Eigen::VectorXd Basis::features(Point2 p) const
{
  Eigen::VectorXd v(static_cast<Eigen::Index>(size_));
  eval(p, std::span<double>(v.data(), size_));
  return v;
}

std::pair<int, int> Basis::monomial_powers(std::size_t index) const
{
  if (kind_ != Kind::monomial || index >= size_)
    throw ArgumentError("not a monomial term index");
  for (int i = 0; i <= degree_; ++i) {
    const std::size_t start = monomial_index(degree_, i, 0);
    const std::size_t count = static_cast<std::size_t>(degree_ - i + 1);
    if (index < start + count)
      return { i, static_cast<int>(index - start) };
  }
  throw ArgumentError("not a monomial term index");
}

FourierTerm Basis::fourier_term(std::size_t index) const
{
  if (kind_ != Kind::fourier_polar || index >= size_)
    throw ArgumentError("not a Fourier term index");
  const std::size_t per_radial = 2 * static_cast<std::size_t>(angular_) + 1;
  const auto j = static_cast<int>(index / per_radial);
  const std::size_t rem = index % per_radial;
  if (rem == 0)
    return { j, 0, false };
  const auto m = static_cast<int>((rem + 1) / 2);
  return { j, m, rem % 2 == 0 };
}

std::size_t Basis::fourier_index(FourierTerm term) const
{
  if (kind_ != Kind::fourier_polar || term.radial < 0 || term.radial > degree_ ||
      term.angular < 0 || term.angular > angular_ || (term.angular == 0 && term.sine))
    return size_;
  const std::size_t per_radial = 2 * static_cast<std::size_t>(angular_) + 1;
  std::size_t offset = 0;
  if (term.angular > 0)
    offset = 2 * static_cast<std::size_t>(term.angular) - 1 + (term.sine ? 1 : 0);
  return static_cast<std::size_t>(term.radial) * per_radial + offset;
}

std::string Basis::term_label(std::size_t index) const
{
  if (kind_ == Kind::monomial) {
    const auto [i, j] = monomial_powers(index);
    if (i == 0 && j == 0)
      return "1";
    return power_label("x", i) + power_label("y", j);
  }
  const FourierTerm t = fourier_term(index);
  std::string radial = power_label("r", t.radial);
  if (t.angular == 0)
    return radial.empty() ? "1" : radial;
  std::string angle = t.angular == 1 ? "t" : std::to_string(t.angular) + "t";
  std::string trig = std::string(t.sine ? "sin(" : "cos(") + angle + ")";
  return radial.empty() ? trig : radial + "*" + trig;
}

std::string Basis::to_string() const
{
  if (kind_ == Kind::monomial)
    return "poly:" + std::to_string(degree_);
  return "fourier:" + std::to_string(degree_) + ":" + std::to_string(angular_);
}

} // namespace sdetect
