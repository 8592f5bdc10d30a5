#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scr1d/charge_moment.hpp"
#include "scr1d/numerics.hpp"

namespace scr1d {

// Net doping N(x) is signed throughout: positive for donors, negative for
// acceptors, in m^-3. Positions are in m.

// Step junction: N = -N_A below x_j, +N_D above.
struct Abrupt {
  double n_a;
  double n_d;
  double x_j;
};

// Linearly graded junction: N(x) = a * (x - x_j), a in m^-4.
struct LinearGrade {
  double a;
  double x_j;
};

// Acceptor Gaussian diffused from the surface at x = 0 into a uniform donor
// substrate: N(x) = n_b - c0 * exp(-x^2 / l^2), defined for x >= 0 only.
struct GaussianDiffusion {
  double c0;
  double l;
  double n_b;
};

// Sampled net doping, linearly interpolated between strictly increasing
// abscissae; must cross zero exactly once.
struct Tabulated {
  std::vector<double> x;
  std::vector<double> n;
};

class DopingProfile {
 public:
  using Form = std::variant<Abrupt, LinearGrade, GaussianDiffusion, Tabulated>;

  explicit DopingProfile(const Abrupt& form);
  explicit DopingProfile(const LinearGrade& form);
  explicit DopingProfile(const GaussianDiffusion& form);
  explicit DopingProfile(Tabulated form);

  double net_doping(double x) const;  // m^-3; OutOfDomain outside domain()
  double metallurgical_junction() const { return x_j_; }
  const Interval& domain() const { return domain_; }

  // Integrals of N and of x*N over [a, b] (m^-2 and m^-1). Closed forms for
  // Abrupt, LinearGrade and GaussianDiffusion; breakpoint-aware quadrature
  // for Tabulated.
  double dopant_integral(double a, double b) const;
  double dopant_first_moment(double a, double b) const;

  bool has_closed_forms() const;
  std::span<const double> breakpoints() const { return breakpoints_; }
  const Form& form() const { return form_; }

 private:
  Form form_;
  double x_j_;
  Interval domain_;
  std::vector<double> breakpoints_;
};

class JunctionSpec {
 public:
  JunctionSpec(DopingProfile profile, double eps_r, double temperature,
               double n_i, std::optional<double> v_bi_override = std::nullopt);

  const DopingProfile& profile() const { return profile_; }
  double eps_r() const { return eps_r_; }
  double temperature() const { return temperature_; }
  double n_i() const { return n_i_; }
  const std::optional<double>& v_bi_override() const { return v_bi_override_; }

  double epsilon() const;          // eps_r * eps0, F/m
  double thermal_voltage() const;  // kT/q, V

 private:
  DopingProfile profile_;
  double eps_r_;
  double temperature_;
  double n_i_;
  std::optional<double> v_bi_override_;
};

struct DepletionSolution {
  double x1;                   // p-side edge, m
  double x2;                   // n-side edge, m
  double w;                    // x2 - x1, m
  double v_applied;            // forward positive, V
  double v_bi;                 // built-in voltage used, V
  double residual_neutrality;  // q * integral of N over [x1, x2], C/m^2
  double residual_moment;      // moment minus (v_bi - v_applied), V
  double e_peak;               // field magnitude at the junction, V/m
};

struct Capacitance {
  double c_w;   // eps / W, F/m^2
  double c_dq;  // finite-difference dQ/dV_reverse, F/m^2
};

struct CVPoint {
  double v;            // V
  double w;            // m; NaN unless status == "ok"
  double c_area;       // F/m^2; NaN unless status == "ok"
  double q_area;       // C/m^2; NaN unless status == "ok"
  std::string status;  // "ok" or the error code of the failed solve
};

struct CVCurve {
  std::vector<CVPoint> points;
};

// (kT/q) * ln(|N(x1)| * N(x2) / n_i^2) from the edge dopings, or the
// override when the JunctionSpec carries one. Requires N(x1) < 0 < N(x2);
// throws WrongEdgePolarity otherwise.
double builtin_voltage(const JunctionSpec& spec, double x1, double x2);

// Depletion-approximation solution at the given bias (forward positive,
// reverse negative): finds x1 < x_j < x2 with
//   neutrality:  integral of q*N over [x1, x2] = 0
//   moment:      integral of x*q*N/eps over [x1, x2] = V_bi - V_applied
// V_bi is evaluated self-consistently at the solved edges by a damped fixed
// point unless the JunctionSpec overrides it.
// Throws BiasExceedsBuiltIn when V_applied >= V_bi - 1e-3; SurfaceReached
// when a GaussianDiffusion junction would deplete past the surface (the
// exception carries the estimated limiting bias); ConvergenceFailure when a
// Tabulated profile's domain cannot contain the depletion region.
DepletionSolution solve_depletion(const JunctionSpec& spec, double v_applied);

// Areal charge of the donor side, q * integral of N over [x_j, x2], C/m^2.
double positive_side_charge(const JunctionSpec& spec,
                            const DepletionSolution& solution);

// c_w = eps/W at v_applied; c_dq = [Q(v-dv) - Q(v+dv)] / (2*dv), the charge
// removed per volt of added reverse bias. The +/- dv solves hold V_bi at the
// center solution's value: the barrier capacitance is the depletion response
// at a fixed barrier, and letting V_bi float would scale c_dq by the
// quasi-static drift factor 1 - dV_bi/dV. The two agree to first order in dv
// under the depletion approximation.
Capacitance capacitance(const JunctionSpec& spec, double v_applied,
                        double dv = 1e-3);

// n evenly spaced biases from v_min to v_max. Points where the solve fails
// with SurfaceReached or BiasExceedsBuiltIn are marked by status and carry
// NaN values; other errors propagate. Throws ConvergenceFailure if no point
// succeeds.
CVCurve cv_sweep(const JunctionSpec& spec, double v_min, double v_max, int n);

// The solution's space charge region: rho = q*N(x) on [x1, x2] with E1 = 0
// and E2 = net_charge/eps (the tiny neutrality residual, kept so the region
// is boundary-consistent by construction).
ChargeRegion depletion_region(const JunctionSpec& spec,
                              const DepletionSolution& solution);

}  // namespace scr1d
