#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scr1d/numerics.hpp"

namespace scr1d {

// Space charge density rho(x) in C/m^3 over a declared support interval.
//
// A density may carry closed-form antiderivatives
//   A0(x) = integral of rho,  A1(x) = integral of x*rho,
// which integral() and first_moment() then use instead of quadrature.
// Supplied antiderivatives are cross-checked against quadrature on 100
// deterministic random subintervals at construction unless self_check is
// false (callers that construct densities in an inner loop and validate the
// closed forms elsewhere should skip the check).
//
// Breakpoints mark interior kinks or jumps of rho; quadrature-based paths
// split panels there so piecewise densities converge at full accuracy.
class ChargeDensity {
 public:
  ChargeDensity(RealFn rho, Interval support,
                std::vector<double> breakpoints = {});
  ChargeDensity(RealFn rho, Interval support, RealFn antiderivative,
                RealFn first_moment_antiderivative,
                std::vector<double> breakpoints = {}, bool self_check = true);

  double operator()(double x) const { return rho_(x); }
  const Interval& support() const { return support_; }
  bool has_antiderivatives() const { return a0_.has_value(); }
  std::span<const double> breakpoints() const { return breakpoints_; }

  // Integral of rho over [a, b] in C/m^2; [a, b] must lie within the support.
  double integral(double a, double b) const;

  // Integral of x*rho over [a, b] in C/m.
  double first_moment(double a, double b) const;

 private:
  void check_antiderivatives() const;

  RealFn rho_;
  Interval support_;
  std::optional<RealFn> a0_;
  std::optional<RealFn> a1_;
  std::vector<double> breakpoints_;
};

// A space charge region [x1, x2] with scalar permittivity and the electric
// field values at both edges. Gauss's law ties the four together:
//   E2 - E1 = (1/epsilon) * integral of rho over [x1, x2],
// which check_boundary_consistency verifies and scr_voltage requires.
class ChargeRegion {
 public:
  ChargeRegion(ChargeDensity rho, double epsilon, double x1, double x2,
               double e1, double e2);

  const ChargeDensity& rho() const { return rho_; }
  double epsilon() const { return epsilon_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double e1() const { return e1_; }
  double e2() const { return e2_; }

 private:
  ChargeDensity rho_;
  double epsilon_;
  double x1_;
  double x2_;
  double e1_;
  double e2_;
};

struct BoundaryCheck {
  bool pass;
  double residual;   // E2 - E1 - net_charge/epsilon, V/m
  double tolerance;  // largest residual magnitude that passes, V/m
};

struct FieldSample {
  double x;  // m
  double e;  // V/m
  double u;  // V, gauge u = 0 at the region's lower edge
};

struct FieldProfile {
  std::vector<FieldSample> samples;
};

// Total charge per unit area over the region, C/m^2.
double net_charge(const ChargeRegion& region);

// Verifies E2 - E1 = net_charge/epsilon within a scale-aware tolerance of
// 1e-9 * max(|E1|, |E2|, |net_charge/epsilon|, 1).
BoundaryCheck check_boundary_consistency(const ChargeRegion& region);

// Samples E and u on n uniform panels (n + 1 points, n >= 2).
//   E(x) = E1 + (1/epsilon) * integral of rho from x1 to x
//   u(x) = -integral of E from x1 to x, so u(x1) = 0.
// Throws InconsistentBoundaryFields when the region fails the boundary check.
FieldProfile field_profile(const ChargeRegion& region, int n);

// u(x2) - u(x1) by double integration of the Poisson equation: E is
// reconstructed from rho by quadrature and -E integrated by quadrature.
// Deliberately shares no code with charge_moment_integral or the closed-form
// antiderivatives so the two voltage routes stay independent checks.
double potential_drop_direct(const ChargeRegion& region);

// Integral of x*rho/epsilon over the region, V.
double charge_moment_integral(const ChargeRegion& region);

// u(x2) - u(x1) from the charge-moment identity:
//   V = integral(x*rho/epsilon) + x1*E1 - x2*E2.
// Requires a boundary-consistent region; throws InconsistentBoundaryFields.
double scr_voltage(const ChargeRegion& region);

}  // namespace scr1d
