#include "scr1d/junction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <utility>

#include "scr1d/constants.hpp"
#include "scr1d/errors.hpp"

namespace scr1d {

namespace {

using constants::eps0;
using constants::k_boltzmann;
using constants::q;
using constants::sqrt_pi;

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

std::vector<double> clip_breakpoints(std::span<const double> pts, double lo,
                                     double hi) {
  std::vector<double> out;
  for (double p : pts) {
    if (p > lo && p < hi) out.push_back(p);
  }
  return out;
}

double interp_tabulated(const Tabulated& t, double x) {
  auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  if (it == t.x.begin()) return t.n.front();
  if (it == t.x.end()) return t.n.back();
  const std::size_t i = static_cast<std::size_t>(it - t.x.begin()) - 1;
  const double f = (x - t.x[i]) / (t.x[i + 1] - t.x[i]);
  return t.n[i] + f * (t.n[i + 1] - t.n[i]);
}

double tabulated_junction(const Tabulated& t) {
  // Locate the single sign change of the interpolant. All negative entries
  // must precede all positive ones, with at most one zero node between.
  std::ptrdiff_t neg_last = -1, pos_first = -1;
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    if (t.n[i] < 0.0) neg_last = static_cast<std::ptrdiff_t>(i);
    if (t.n[i] > 0.0 && pos_first < 0) pos_first = static_cast<std::ptrdiff_t>(i);
  }
  if (neg_last < 0 || pos_first < 0) {
    throw NoSignChange("Tabulated: net doping never changes sign");
  }
  if (neg_last > pos_first || pos_first - neg_last > 2) {
    throw NoSignChange("Tabulated: net doping must change sign exactly once");
  }
  if (pos_first - neg_last == 2) return t.x[static_cast<std::size_t>(neg_last) + 1];
  const std::size_t i = static_cast<std::size_t>(neg_last);
  return t.x[i] - t.n[i] * (t.x[i + 1] - t.x[i]) / (t.n[i + 1] - t.n[i]);
}

constexpr double kDomainPad = 1.0;  // m; working span for unbounded profiles

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::invalid_argument(std::string("DopingProfile: ") + name +
                                " must be positive and finite");
  }
}

}  // namespace

DopingProfile::DopingProfile(const Abrupt& form)
    : form_(form),
      x_j_(form.x_j),
      domain_(form.x_j - kDomainPad, form.x_j + kDomainPad),
      breakpoints_{form.x_j} {
  require_positive(form.n_a, "Abrupt n_a");
  require_positive(form.n_d, "Abrupt n_d");
  if (!std::isfinite(form.x_j)) {
    throw std::invalid_argument("DopingProfile: Abrupt x_j must be finite");
  }
}

DopingProfile::DopingProfile(const LinearGrade& form)
    : form_(form),
      x_j_(form.x_j),
      domain_(form.x_j - kDomainPad, form.x_j + kDomainPad) {
  if (!(std::isfinite(form.a) && form.a != 0.0)) {
    throw std::invalid_argument(
        "DopingProfile: LinearGrade a must be nonzero and finite");
  }
  if (!std::isfinite(form.x_j)) {
    throw std::invalid_argument("DopingProfile: LinearGrade x_j must be finite");
  }
}

DopingProfile::DopingProfile(const GaussianDiffusion& form)
    : form_(form),
      x_j_(form.l * std::sqrt(std::log(form.c0 / form.n_b))),
      domain_(0.0, form.l * std::sqrt(std::log(form.c0 / form.n_b)) + kDomainPad) {
  require_positive(form.c0, "GaussianDiffusion c0");
  require_positive(form.l, "GaussianDiffusion l");
  require_positive(form.n_b, "GaussianDiffusion n_b");
  if (!(form.c0 > form.n_b)) {
    throw std::invalid_argument(
        "DopingProfile: GaussianDiffusion requires c0 > n_b, otherwise the "
        "net doping never changes sign");
  }
}

DopingProfile::DopingProfile(Tabulated form)
    : form_(std::move(form)),
      x_j_(0.0),
      domain_(0.0, 1.0) {
  const Tabulated& t = std::get<Tabulated>(form_);
  if (t.x.size() != t.n.size() || t.x.size() < 2) {
    throw std::invalid_argument(
        "DopingProfile: Tabulated needs matching x and n arrays of length >= 2");
  }
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (!std::isfinite(t.x[i]) || !std::isfinite(t.n[i])) {
      throw std::invalid_argument("DopingProfile: Tabulated entries must be finite");
    }
    if (i > 0 && !(t.x[i] > t.x[i - 1])) {
      throw std::invalid_argument(
          "DopingProfile: Tabulated abscissae must be strictly increasing");
    }
  }
  x_j_ = tabulated_junction(t);
  domain_ = Interval(t.x.front(), t.x.back());
  breakpoints_.assign(t.x.begin() + 1, t.x.end() - 1);
}

double DopingProfile::net_doping(double x) const {
  if (!domain_.contains(x)) {
    throw OutOfDomain(fmt("net_doping: x = %.17g outside the profile domain", x));
  }
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Abrupt>) {
          return x < f.x_j ? -f.n_a : f.n_d;
        } else if constexpr (std::is_same_v<T, LinearGrade>) {
          return f.a * (x - f.x_j);
        } else if constexpr (std::is_same_v<T, GaussianDiffusion>) {
          const double s = x / f.l;
          return f.n_b - f.c0 * std::exp(-s * s);
        } else {
          return interp_tabulated(f, x);
        }
      },
      form_);
}

bool DopingProfile::has_closed_forms() const {
  return !std::holds_alternative<Tabulated>(form_);
}

namespace {

// Antiderivatives of N and x*N, continuous across the junction.
double anti0(const DopingProfile::Form& form, double x) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Abrupt>) {
          return x < f.x_j ? -f.n_a * (x - f.x_j) : f.n_d * (x - f.x_j);
        } else if constexpr (std::is_same_v<T, LinearGrade>) {
          const double d = x - f.x_j;
          return 0.5 * f.a * d * d;
        } else if constexpr (std::is_same_v<T, GaussianDiffusion>) {
          return f.n_b * x - f.c0 * (0.5 * f.l * sqrt_pi) * erf(x / f.l);
        } else {
          return 0.0;  // Tabulated handled by quadrature
        }
      },
      form);
}

double anti1(const DopingProfile::Form& form, double x) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Abrupt>) {
          const double d = 0.5 * (x * x - f.x_j * f.x_j);
          return x < f.x_j ? -f.n_a * d : f.n_d * d;
        } else if constexpr (std::is_same_v<T, LinearGrade>) {
          return f.a * (x * x * x / 3.0 - 0.5 * f.x_j * x * x);
        } else if constexpr (std::is_same_v<T, GaussianDiffusion>) {
          const double s = x / f.l;
          return 0.5 * f.n_b * x * x +
                 0.5 * f.c0 * f.l * f.l * std::exp(-s * s);
        } else {
          return 0.0;
        }
      },
      form);
}

}  // namespace

double DopingProfile::dopant_integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -dopant_integral(b, a);
  if (a < domain_.lo() || b > domain_.hi()) {
    throw OutOfDomain("dopant_integral: range outside the profile domain");
  }
  if (const auto* t = std::get_if<Tabulated>(&form_)) {
    const auto cuts = clip_breakpoints(breakpoints_, a, b);
    return integrate([t](double x) { return interp_tabulated(*t, x); },
                     Interval(a, b), Tolerance::quadrature(), cuts);
  }
  return anti0(form_, b) - anti0(form_, a);
}

double DopingProfile::dopant_first_moment(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -dopant_first_moment(b, a);
  if (a < domain_.lo() || b > domain_.hi()) {
    throw OutOfDomain("dopant_first_moment: range outside the profile domain");
  }
  if (const auto* t = std::get_if<Tabulated>(&form_)) {
    const auto cuts = clip_breakpoints(breakpoints_, a, b);
    return integrate([t](double x) { return x * interp_tabulated(*t, x); },
                     Interval(a, b), Tolerance::quadrature(), cuts);
  }
  return anti1(form_, b) - anti1(form_, a);
}

JunctionSpec::JunctionSpec(DopingProfile profile, double eps_r,
                           double temperature, double n_i,
                           std::optional<double> v_bi_override)
    : profile_(std::move(profile)),
      eps_r_(eps_r),
      temperature_(temperature),
      n_i_(n_i),
      v_bi_override_(v_bi_override) {
  if (!(std::isfinite(eps_r) && eps_r > 0.0)) {
    throw std::invalid_argument("JunctionSpec: eps_r must be positive");
  }
  if (!(std::isfinite(temperature) && temperature > 0.0)) {
    throw std::invalid_argument("JunctionSpec: temperature must be positive");
  }
  if (!(std::isfinite(n_i) && n_i > 0.0)) {
    throw std::invalid_argument("JunctionSpec: n_i must be positive");
  }
  if (v_bi_override && !(std::isfinite(*v_bi_override) && *v_bi_override > 0.0)) {
    throw std::invalid_argument("JunctionSpec: v_bi_override must be positive");
  }
}

double JunctionSpec::epsilon() const { return eps_r_ * eps0; }

double JunctionSpec::thermal_voltage() const {
  return k_boltzmann * temperature_ / q;
}

double builtin_voltage(const JunctionSpec& spec, double x1, double x2) {
  if (spec.v_bi_override()) return *spec.v_bi_override();
  const double n1 = spec.profile().net_doping(x1);
  const double n2 = spec.profile().net_doping(x2);
  if (!(n1 < 0.0 && n2 > 0.0)) {
    throw WrongEdgePolarity(
        fmt("builtin_voltage: needs net acceptors at x1 and net donors at x2 "
            "(got N(x1) = %.6g, N(x2) = %.6g m^-3)",
            n1, n2));
  }
  return spec.thermal_voltage() *
         std::log(-n1 * n2 / (spec.n_i() * spec.n_i()));
}

// ---------------------------------------------------------------------------
// Depletion solver
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxExpand = 60;

struct SolveContext {
  const JunctionSpec* spec;
  const DopingProfile* profile;
  double eps;
  double x_j;
  double lo_cap;        // lowest admissible x1
  double hi_cap;        // highest admissible x2
  bool finite_supply;   // acceptor side ends at lo_cap (Gaussian, Tabulated)
  bool gaussian;        // lo_cap is a physical surface
};

SolveContext make_context(const JunctionSpec& spec) {
  const DopingProfile& p = spec.profile();
  SolveContext c;
  c.spec = &spec;
  c.profile = &p;
  c.eps = spec.epsilon();
  c.x_j = p.metallurgical_junction();
  c.lo_cap = p.domain().lo();
  c.hi_cap = p.domain().hi();
  c.gaussian = std::holds_alternative<GaussianDiffusion>(p.form());
  c.finite_supply =
      c.gaussian || std::holds_alternative<Tabulated>(p.form());
  return c;
}

// Signed edge dopings sampled 10 nm from the junction (closer when the
// domain is narrower); used for bracket seeding and the V_bi start value.
struct EdgeDopings {
  double n_a;  // magnitude of the acceptor-side net doping
  double n_d;  // donor-side net doping
};

EdgeDopings seed_dopings(const SolveContext& c) {
  const double below = c.x_j - std::min(1e-8, 0.45 * (c.x_j - c.lo_cap));
  const double above = c.x_j + std::min(1e-8, 0.45 * (c.hi_cap - c.x_j));
  const double n1 = c.profile->net_doping(below);
  const double n2 = c.profile->net_doping(above);
  if (!(n1 < 0.0 && n2 > 0.0)) {
    throw WrongEdgePolarity(
        fmt("solve_depletion: profile must be net-acceptor just below the "
            "junction and net-donor just above (got %.6g and %.6g m^-3)",
            n1, n2));
  }
  return {-n1, n2};
}

const Tolerance kEdgeTol(1e-18, 1e-14, 200);

// Neutrality partner of x2: the x1 < x_j with integral of N over [x1, x2]
// zero. The residual is strictly increasing in x1, so the bracket is safe.
double inner_x1(const SolveContext& c, double x2) {
  auto g = [&](double x1) { return c.profile->dopant_integral(x1, x2); };
  const double g_hi = g(c.x_j);
  if (g_hi <= 0.0) return c.x_j;  // x2 at the junction itself, within noise

  double w = x2 - c.x_j;
  double lo = c.x_j - w;
  for (int i = 0;; ++i) {
    if (lo <= c.lo_cap) lo = c.lo_cap;
    const double g_lo = g(lo);
    if (g_lo == 0.0) return lo;
    if (g_lo < 0.0) break;
    if (lo == c.lo_cap || i >= kMaxExpand) {
      throw ConvergenceFailure(
          "solve_depletion: acceptor side cannot neutralize the donor charge");
    }
    w *= 2.0;
    lo = c.x_j - w;
  }
  return find_root(g, Interval(lo, c.x_j), kEdgeTol);
}

struct Edges {
  double x1;
  double x2;
};

// Solves neutrality plus the moment condition
//   (q/eps) * integral of x*N over [x1, x2] = v_bi - v_applied
// by an outer root find in x2 with the neutrality solve nested inside.
Edges solve_edges(const SolveContext& c, double v_bi, double v_applied) {
  const double target = v_bi - v_applied;
  if (!(target > 0.0)) {
    throw BiasExceedsBuiltIn(
        fmt("solve_depletion: applied bias %.6g V does not leave a positive "
            "junction voltage (V_bi = %.6g V)",
            v_applied, v_bi));
  }

  const EdgeDopings ed = seed_dopings(c);
  const double n_a = std::max(ed.n_a, 1e10);
  const double n_d = std::max(ed.n_d, 1e10);
  const double w_eq =
      std::sqrt(2.0 * c.eps * target * (n_a + n_d) / (q * n_a * n_d));
  double w2 = w_eq * n_a / (n_a + n_d);  // donor-side extent of the seed

  double cap = c.hi_cap;
  if (c.finite_supply) {
    // Largest realizable junction voltage: x1 pinned at the domain edge and
    // x2 at its neutrality partner.
    auto g_total = [&](double x2) {
      return c.profile->dopant_integral(c.lo_cap, x2);
    };
    if (!(g_total(c.hi_cap) > 0.0)) {
      throw ConvergenceFailure(
          "solve_depletion: donor side of the tabulated domain cannot "
          "neutralize the acceptor charge");
    }
    const double x2_max =
        find_root(g_total, Interval(c.x_j, c.hi_cap), kEdgeTol);
    const double target_max =
        (q / c.eps) * c.profile->dopant_first_moment(c.lo_cap, x2_max);
    if (!(target < target_max * (1.0 - 1e-9))) {
      // Quote the limit for the capped configuration itself, not for the
      // current V_bi iterate: with x1 at the cap and x2 at its neutrality
      // partner the edge dopings are known, so this estimate is already
      // self-consistent and iteration-independent.
      double v_bi_cap = v_bi;
      try {
        v_bi_cap = builtin_voltage(*c.spec, c.lo_cap, x2_max);
      } catch (const WrongEdgePolarity&) {
      }
      const double v_limit = v_bi_cap - target_max;
      if (c.gaussian) {
        throw SurfaceReached(
            fmt("solve_depletion: depletion reaches the surface; bias must "
                "stay above about %.6g V",
                v_limit),
            v_limit);
      }
      throw ConvergenceFailure(
          fmt("solve_depletion: depletion would extend below the tabulated "
              "domain; bias must stay above about %.6g V",
              v_limit));
    }
    cap = std::min(cap, x2_max);
  }

  auto residual = [&](double x2) {
    const double x1 = inner_x1(c, x2);
    return (q / c.eps) * c.profile->dopant_first_moment(x1, x2) - target;
  };

  // The moment grows monotonically with x2 and vanishes as x2 -> x_j, so a
  // far-inside lower bound is immediately negative; expand the upper bound
  // geometrically from the abrupt-equivalent seed until the sign flips.
  double lo = c.x_j + std::min(1e-6 * w2, 0.5 * (cap - c.x_j));
  double r_lo = residual(lo);
  for (int i = 0; r_lo > 0.0; ++i) {
    if (i >= kMaxExpand) {
      throw ConvergenceFailure(
          "solve_depletion: could not bracket the depletion edge from below");
    }
    lo = c.x_j + 0.25 * (lo - c.x_j);
    r_lo = residual(lo);
  }
  if (r_lo == 0.0) return {inner_x1(c, lo), lo};

  double hi = std::min(c.x_j + w2, cap);
  double r_hi = residual(hi);
  for (int i = 0; r_hi < 0.0; ++i) {
    if (hi >= cap || i >= kMaxExpand) {
      throw ConvergenceFailure(
          "solve_depletion: could not bracket the depletion edge from above");
    }
    w2 *= 2.0;
    hi = std::min(c.x_j + w2, cap);
    r_hi = residual(hi);
  }

  const double x2 = (r_hi == 0.0)
                        ? hi
                        : find_root(residual, Interval(lo, hi), kEdgeTol);
  return {inner_x1(c, x2), x2};
}

double max_abs_doping(const DopingProfile& p, double x1, double x2,
                      double x_j) {
  double m = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double x = x1 + (x2 - x1) * i / 32.0;
    m = std::max(m, std::abs(p.net_doping(x)));
  }
  const double h = 1e-3 * (x2 - x1);
  m = std::max(m, std::abs(p.net_doping(std::max(x1, x_j - h))));
  m = std::max(m, std::abs(p.net_doping(std::min(x2, x_j + h))));
  return m;
}

}  // namespace

DepletionSolution solve_depletion(const JunctionSpec& spec, double v_applied) {
  if (!std::isfinite(v_applied)) {
    throw std::invalid_argument("solve_depletion: v_applied must be finite");
  }
  const SolveContext c = make_context(spec);

  double v_bi;
  if (spec.v_bi_override()) {
    v_bi = *spec.v_bi_override();
  } else {
    const EdgeDopings ed = seed_dopings(c);
    const double v0 = spec.thermal_voltage() *
                      std::log(ed.n_a * ed.n_d / (spec.n_i() * spec.n_i()));
    auto iterate = [&](double v) {
      const Edges e = solve_edges(c, v, v_applied);
      return builtin_voltage(spec, e.x1, e.x2);
    };
    v_bi = fixed_point(iterate, v0, 0.5, Tolerance(1e-9, 0.0, 100));
  }
  if (!(v_applied < v_bi - 1e-3)) {
    throw BiasExceedsBuiltIn(
        fmt("solve_depletion: applied bias %.6g V must stay below the "
            "built-in voltage %.6g V by at least 1 mV",
            v_applied, v_bi));
  }

  const Edges e = solve_edges(c, v_bi, v_applied);
  const DopingProfile& p = spec.profile();
  const double w = e.x2 - e.x1;
  const double target = v_bi - v_applied;
  const double residual_neutrality = q * p.dopant_integral(e.x1, e.x2);
  const double residual_moment =
      (q / c.eps) * p.dopant_first_moment(e.x1, e.x2) - target;
  const double e_peak =
      (q / c.eps) * std::abs(p.dopant_integral(e.x1, c.x_j));

  if (!(e.x1 < c.x_j && c.x_j < e.x2 && w > 0.0)) {
    throw ConvergenceFailure(
        "solve_depletion: solved edges do not straddle the junction");
  }
  const double n_max = max_abs_doping(p, e.x1, e.x2, c.x_j);
  if (std::abs(residual_neutrality) > 1e-9 * q * n_max * w ||
      std::abs(residual_moment) > 1e-9 * target) {
    throw ConvergenceFailure(
        fmt("solve_depletion: converged residuals out of bounds (neutrality "
            "%.6g C/m^2, moment %.6g V)",
            residual_neutrality, residual_moment));
  }

  return {e.x1,   e.x2,  w,
          v_applied, v_bi, residual_neutrality,
          residual_moment, e_peak};
}

double positive_side_charge(const JunctionSpec& spec,
                            const DepletionSolution& solution) {
  const double x_j = spec.profile().metallurgical_junction();
  return q * spec.profile().dopant_integral(x_j, solution.x2);
}

Capacitance capacitance(const JunctionSpec& spec, double v_applied,
                        double dv) {
  if (!(std::isfinite(dv) && dv > 0.0)) {
    throw std::invalid_argument("capacitance: dv must be positive");
  }
  const DepletionSolution sol = solve_depletion(spec, v_applied);
  // The small-signal difference is taken at a fixed barrier: re-solving
  // V_bi self-consistently at v +/- dv would fold the quasi-static drift
  // of the equilibrium barrier (a factor 1 - dV_bi/dV) into what should be
  // the pure depletion response dQ/dU = eps/W.
  const JunctionSpec frozen(spec.profile(), spec.eps_r(), spec.temperature(),
                            spec.n_i(), sol.v_bi);
  const DepletionSolution fwd = solve_depletion(frozen, v_applied + dv);
  const DepletionSolution rev = solve_depletion(frozen, v_applied - dv);
  const double c_w = spec.epsilon() / sol.w;
  const double c_dq = (positive_side_charge(frozen, rev) -
                       positive_side_charge(frozen, fwd)) /
                      (2.0 * dv);
  return {c_w, c_dq};
}

CVCurve cv_sweep(const JunctionSpec& spec, double v_min, double v_max, int n) {
  if (n < 2) throw std::invalid_argument("cv_sweep: requires n >= 2");
  if (!(std::isfinite(v_min) && std::isfinite(v_max) && v_min <= v_max)) {
    throw std::invalid_argument("cv_sweep: requires v_min <= v_max, finite");
  }
  if (spec.v_bi_override() && !(v_max < *spec.v_bi_override() - 1e-3)) {
    throw BiasExceedsBuiltIn(
        fmt("cv_sweep: v_max %.6g V must stay below the built-in voltage "
            "%.6g V by at least 1 mV",
            v_max, *spec.v_bi_override()));
  }

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  CVCurve curve;
  curve.points.reserve(n);
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    const double v = v_min + (v_max - v_min) * i / (n - 1);
    try {
      const DepletionSolution sol = solve_depletion(spec, v);
      curve.points.push_back({v, sol.w, spec.epsilon() / sol.w,
                              positive_side_charge(spec, sol), "ok"});
      ++ok;
    } catch (const SurfaceReached& err) {
      curve.points.push_back({v, nan, nan, nan, err.code()});
    } catch (const BiasExceedsBuiltIn& err) {
      curve.points.push_back({v, nan, nan, nan, err.code()});
    }
  }
  if (ok == 0) {
    throw ConvergenceFailure("cv_sweep: no bias point could be solved");
  }
  return curve;
}

ChargeRegion depletion_region(const JunctionSpec& spec,
                              const DepletionSolution& solution) {
  auto profile = std::make_shared<const DopingProfile>(spec.profile());
  const Interval support = profile->domain();
  std::vector<double> cuts(profile->breakpoints().begin(),
                           profile->breakpoints().end());
  auto rho = [profile](double x) { return q * profile->net_doping(x); };

  ChargeDensity density =
      profile->has_closed_forms()
          ? ChargeDensity(
                rho, support,
                [profile, ref = profile->metallurgical_junction()](double x) {
                  return q * profile->dopant_integral(ref, x);
                },
                [profile, ref = profile->metallurgical_junction()](double x) {
                  return q * profile->dopant_first_moment(ref, x);
                },
                std::move(cuts), /*self_check=*/false)
          : ChargeDensity(rho, support, std::move(cuts));

  const double e2 = solution.residual_neutrality / spec.epsilon();
  return ChargeRegion(std::move(density), spec.epsilon(), solution.x1,
                      solution.x2, 0.0, e2);
}

}  // namespace scr1d
