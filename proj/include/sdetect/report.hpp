#pragma once

#include "sdetect/basis.hpp"
#include "sdetect/synthgen.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace sdetect {

/// Unit-norm coefficients of the curve's F* in the given basis, with the
/// largest-magnitude entry positive. Fourier bases use the lowest-radial-power
/// form with the same zero set (for the semicircles (r - r1)(r - r2)).
/// Throws ArgumentError when F* does not lie in the span of the basis.
Eigen::VectorXd exact_coefficients(const CurveSpec& spec, const Basis& basis);

/// Sign-aligned comparison: s in {+1, -1} minimises |c - s c*|.
struct CoefficientError
{
  double l2{ 0.0 };
  double max_abs{ 0.0 };
  int sign{ 1 };
};

CoefficientError coefficient_error(const Eigen::VectorXd& fitted,
                                   const Eigen::VectorXd& exact);

/// Term-labelled table: term, fitted, and (when given) exact and |error|,
/// with the exact column sign-aligned to the fit.
std::string coefficient_table(const Basis& basis, const Eigen::VectorXd& fitted,
                              const std::optional<Eigen::VectorXd>& exact = std::nullopt);

} // namespace sdetect
