#pragma once

#include <functional>
#include <span>

#include "scr1d/errors.hpp"

namespace scr1d {

/// Finite coordinate interval [lo, hi] with lo < hi strictly.
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

 private:
  double lo_;
  double hi_;
};

/// Accuracy budget for the iterative kernels.  `max_steps` bounds
/// subdivisions (quadrature) or iterations (root finding, fixed point).
class Tolerance {
 public:
  Tolerance(double abs_tol, double rel_tol, int max_steps);

  double abs_tol() const noexcept { return abs_tol_; }
  double rel_tol() const noexcept { return rel_tol_; }
  int max_steps() const noexcept { return max_steps_; }

  static Tolerance quadrature() { return {1e-12, 1e-10, 2000}; }
  static Tolerance root() { return {1e-15, 1e-12, 200}; }
  static Tolerance fixed_point() { return {1e-12, 0.0, 200}; }

 private:
  double abs_tol_;
  double rel_tol_;
  int max_steps_;
};

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over iv.
///
/// The worst panel (largest embedded-rule error estimate) is bisected until
/// the summed error estimate drops below max(abs_tol*resabs, rel_tol*|Q|),
/// where resabs is the integral of |f|: the absolute term scales with the
/// integrand's natural magnitude, so the same tolerance serves integrals of
/// any unit system.  A roundoff floor of 50*eps*resabs keeps heavily
/// cancelling integrands from demanding more accuracy than double precision
/// carries.  Deterministic for identical inputs.
///
/// Throws NonFiniteEvaluation if f produces a non-finite value and
/// SubdivisionLimitExceeded if the budget runs out before convergence.
double integrate(const RealFn& f, const Interval& iv,
                 const Tolerance& tol = Tolerance::quadrature());

/// Same, but the initial panel list is split at the given interior
/// breakpoints (known kinks or jumps of f).  Breakpoints outside the open
/// interval are ignored.
double integrate(const RealFn& f, const Interval& iv, const Tolerance& tol,
                 std::span<const double> breakpoints);

/// Bracketed root of f: inverse-quadratic / secant steps with a bisection
/// safeguard, so convergence is guaranteed for any sign-changing bracket.
/// The result always lies inside the original bracket.
///
/// Requires f(lo)*f(hi) <= 0 (NoSignChange otherwise); stops once the
/// bracket width reaches max(abs_tol, rel_tol*|x|) plus the machine floor.
double find_root(const RealFn& f, const Interval& bracket,
                 const Tolerance& tol = Tolerance::root());

/// Error function, |error| <= 1e-12 over the full real line.
///
/// Computed on |x| (scaled Maclaurin series for |x| <= 3, Laplace
/// continued fraction for the complement above) and mirrored, so
/// erf(-x) == -erf(x) holds bit-exactly.
double erf(double x);

/// Damped fixed-point iteration x <- (1-damping)*x + damping*g(x),
/// damping in (0, 1].  Returns x once |x - g(x)| <= max(abs_tol,
/// rel_tol*|x|); throws IterationLimitExceeded instead of returning an
/// unconverged value.
double fixed_point(const RealFn& g, double x0, double damping,
                   const Tolerance& tol = Tolerance::fixed_point());

}  // namespace scr1d
