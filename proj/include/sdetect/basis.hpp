#pragma once

#include "sdetect/point_set.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace sdetect {

/// Position of the x^i y^j coefficient in a degree-n monomial basis:
/// k = i(n+2) - i(i+1)/2 + j. Throws ArgumentError unless i, j >= 0 and i + j <= n.
std::size_t monomial_index(int n, int i, int j);

/// One polar Fourier term r^j cos(m t) or r^j sin(m t).
struct FourierTerm
{
  int radial{ 0 };
  int angular{ 0 };
  bool sine{ false };

  friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

/// Ordered family of feature functions for the detection ansatz f = sum_i c_i phi_i.
///
/// Monomial bases follow the index map of monomial_index(), so for degree 2 the
/// order is [1, y, y^2, x, xy, x^2].
///
/// Polar Fourier bases list, for each radial power j ascending and each
/// angular order m ascending, r^j cos(m t) followed by r^j sin(m t). The m = 0
/// sine terms vanish identically and are left out, which keeps the Gram matrix
/// free of a spurious null direction.
class Basis
{
public:
  enum class Kind
  {
    monomial,
    fourier_polar
  };

  static Basis monomial(int degree);
  static Basis fourier_polar(int radial_order, int angular_order);

  /// "poly:<n>" or "fourier:<J>:<M>".
  static Basis parse(std::string_view spec);

  Kind kind() const { return kind_; }
  /// Polynomial degree n (monomial) or radial order J (Fourier).
  int degree() const { return degree_; }
  int angular_order() const { return angular_; }
  std::size_t size() const { return size_; }

  /// Writes all features at p into out (out.size() must equal size()).
  void eval(Point2 p, std::span<double> out) const;
  Eigen::VectorXd features(Point2 p) const;

  /// (i, j) powers of x^i y^j for monomial bases.
  std::pair<int, int> monomial_powers(std::size_t index) const;
  FourierTerm fourier_term(std::size_t index) const;
  /// Index of a Fourier term, or size() when the term is not in the basis.
  std::size_t fourier_index(FourierTerm term) const;

  /// Human-readable term name, e.g. "x^2y", "r^2*sin(2t)".
  std::string term_label(std::size_t index) const;
  std::string to_string() const;

  friend bool operator==(const Basis&, const Basis&) = default;

private:
  Basis(Kind kind, int degree, int angular, std::size_t size)
    : kind_(kind)
    , degree_(degree)
    , angular_(angular)
    , size_(size)
  {}

  Kind kind_;
  int degree_;
  int angular_;
  std::size_t size_;
};

} // namespace sdetect
