#include "scr1d/charge_moment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "scr1d/detail/random.hpp"
#include "scr1d/errors.hpp"

namespace scr1d {

namespace {

std::vector<double> clip_breakpoints(std::span<const double> pts, double lo,
                                     double hi) {
  std::vector<double> out;
  for (double p : pts) {
    if (p > lo && p < hi) out.push_back(p);
  }
  return out;
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s returned a non-finite value", what);
    throw NonFiniteEvaluation(buf);
  }
  return v;
}

}  // namespace

ChargeDensity::ChargeDensity(RealFn rho, Interval support,
                             std::vector<double> breakpoints)
    : rho_(std::move(rho)),
      support_(support),
      breakpoints_(std::move(breakpoints)) {
  if (!rho_) throw std::invalid_argument("ChargeDensity: null density function");
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

ChargeDensity::ChargeDensity(RealFn rho, Interval support,
                             RealFn antiderivative,
                             RealFn first_moment_antiderivative,
                             std::vector<double> breakpoints, bool self_check)
    : rho_(std::move(rho)),
      support_(support),
      a0_(std::move(antiderivative)),
      a1_(std::move(first_moment_antiderivative)),
      breakpoints_(std::move(breakpoints)) {
  if (!rho_) throw std::invalid_argument("ChargeDensity: null density function");
  if (!*a0_ || !*a1_) {
    throw std::invalid_argument(
        "ChargeDensity: antiderivatives must both be callable");
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  if (self_check) check_antiderivatives();
}

double ChargeDensity::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  if (a < support_.lo() || b > support_.hi()) {
    throw OutOfDomain("ChargeDensity::integral: range outside the support");
  }
  if (a0_) return checked((*a0_)(b) - (*a0_)(a), "antiderivative");
  const auto cuts = clip_breakpoints(breakpoints_, a, b);
  return integrate(rho_, Interval(a, b), Tolerance::quadrature(), cuts);
}

double ChargeDensity::first_moment(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -first_moment(b, a);
  if (a < support_.lo() || b > support_.hi()) {
    throw OutOfDomain("ChargeDensity::first_moment: range outside the support");
  }
  if (a1_) return checked((*a1_)(b) - (*a1_)(a), "moment antiderivative");
  const auto cuts = clip_breakpoints(breakpoints_, a, b);
  return integrate([this](double x) { return x * rho_(x); }, Interval(a, b),
                   Tolerance::quadrature(), cuts);
}

void ChargeDensity::check_antiderivatives() const {
  const double lo = support_.lo();
  const double hi = support_.hi();
  const auto cuts_all = clip_breakpoints(breakpoints_, lo, hi);

  // Magnitude scales for the near-zero-integral case, where a pure relative
  // comparison would be meaningless.
  const double scale0 = integrate([this](double x) { return std::abs(rho_(x)); },
                                  support_, Tolerance(1e-30, 1e-6, 2000),
                                  cuts_all);
  const double scale1 =
      integrate([this](double x) { return std::abs(x * rho_(x)); }, support_,
                Tolerance(1e-30, 1e-6, 2000), cuts_all);

  std::mt19937_64 rng(0x5eed0c0de5ULL);
  const double w = support_.width();
  for (int k = 0; k < 100; ++k) {
    double a, b;
    do {
      a = lo + w * detail::uniform01(rng);
      b = lo + w * detail::uniform01(rng);
      if (a > b) std::swap(a, b);
    } while (b - a < 1e-3 * w);

    // The roundoff floor covers the cancellation in A(b) - A(a) when the
    // antiderivative values dwarf their difference; a wrong antiderivative
    // errs in proportion to the difference itself and still trips the check.
    constexpr double kUlps = 64.0 * std::numeric_limits<double>::epsilon();
    const auto cuts = clip_breakpoints(breakpoints_, a, b);
    const Tolerance strict(1e-14, 1e-12, 4000);

    const double q0 = integrate(rho_, Interval(a, b), strict, cuts);
    const double a0b = checked((*a0_)(b), "antiderivative");
    const double a0a = checked((*a0_)(a), "antiderivative");
    const double c0 = a0b - a0a;
    if (std::abs(c0 - q0) >
        1e-9 * std::max({std::abs(c0), std::abs(q0), 1e-3 * scale0}) +
            kUlps * (std::abs(a0b) + std::abs(a0a))) {
      char buf[192];
      std::snprintf(buf, sizeof(buf),
                    "ChargeDensity: antiderivative disagrees with quadrature "
                    "of rho on [%.9g, %.9g]: closed %.9g vs quadrature %.9g",
                    a, b, c0, q0);
      throw std::invalid_argument(buf);
    }

    const double q1 = integrate([this](double x) { return x * rho_(x); },
                                Interval(a, b), strict, cuts);
    const double a1b = checked((*a1_)(b), "moment antiderivative");
    const double a1a = checked((*a1_)(a), "moment antiderivative");
    const double c1 = a1b - a1a;
    if (std::abs(c1 - q1) >
        1e-9 * std::max({std::abs(c1), std::abs(q1), 1e-3 * scale1}) +
            kUlps * (std::abs(a1b) + std::abs(a1a))) {
      char buf[192];
      std::snprintf(buf, sizeof(buf),
                    "ChargeDensity: moment antiderivative disagrees with "
                    "quadrature of x*rho on [%.9g, %.9g]: closed %.9g vs "
                    "quadrature %.9g",
                    a, b, c1, q1);
      throw std::invalid_argument(buf);
    }
  }
}

ChargeRegion::ChargeRegion(ChargeDensity rho, double epsilon, double x1,
                           double x2, double e1, double e2)
    : rho_(std::move(rho)), epsilon_(epsilon), x1_(x1), x2_(x2), e1_(e1), e2_(e2) {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
    throw std::invalid_argument("ChargeRegion: epsilon must be positive");
  }
  if (!(std::isfinite(x1) && std::isfinite(x2) && x1 < x2)) {
    throw std::invalid_argument("ChargeRegion: requires x1 < x2");
  }
  if (!(std::isfinite(e1) && std::isfinite(e2))) {
    throw std::invalid_argument("ChargeRegion: boundary fields must be finite");
  }
  if (x1 < rho_.support().lo() || x2 > rho_.support().hi()) {
    throw std::invalid_argument(
        "ChargeRegion: [x1, x2] must lie within the density's support");
  }
}

double net_charge(const ChargeRegion& region) {
  return region.rho().integral(region.x1(), region.x2());
}

BoundaryCheck check_boundary_consistency(const ChargeRegion& region) {
  const double step = net_charge(region) / region.epsilon();
  const double residual = region.e2() - region.e1() - step;
  const double tolerance =
      1e-9 * std::max({std::abs(region.e1()), std::abs(region.e2()),
                       std::abs(step), 1.0});
  return {std::abs(residual) <= tolerance, residual, tolerance};
}

namespace {

void require_consistent(const ChargeRegion& region, const char* op) {
  const BoundaryCheck check = check_boundary_consistency(region);
  if (!check.pass) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s: boundary fields violate Gauss's law (residual %.6g V/m, "
                  "allowed %.6g V/m)",
                  op, check.residual, check.tolerance);
    throw InconsistentBoundaryFields(buf);
  }
}

}  // namespace

FieldProfile field_profile(const ChargeRegion& region, int n) {
  if (n < 2) throw std::invalid_argument("field_profile: requires n >= 2");
  require_consistent(region, "field_profile");

  const ChargeDensity& rho = region.rho();
  const double x1 = region.x1();
  const double h = (region.x2() - x1) / n;

  FieldProfile profile;
  profile.samples.reserve(n + 1);
  profile.samples.push_back({x1, region.e1(), 0.0});
  for (int i = 1; i <= n; ++i) {
    const FieldSample& prev = profile.samples.back();
    const double x = (i == n) ? region.x2() : x1 + i * h;
    const double q0 = rho.integral(prev.x, x);
    const double q1 = rho.first_moment(prev.x, x);
    const double e = prev.e + q0 / region.epsilon();
    // Integral of E over the panel via Fubini:
    //   int E = E_prev*(x - x_prev) + (1/eps) * int (x - t) rho(t) dt.
    const double drop =
        prev.e * (x - prev.x) + (x * q0 - q1) / region.epsilon();
    profile.samples.push_back({x, e, prev.u - drop});
  }
  return profile;
}

double potential_drop_direct(const ChargeRegion& region) {
  require_consistent(region, "potential_drop_direct");

  const ChargeDensity& rho = region.rho();
  const double x1 = region.x1();
  const double x2 = region.x2();
  const double inv_eps = 1.0 / region.epsilon();
  const auto cuts = clip_breakpoints(rho.breakpoints(), x1, x2);

  const Tolerance outer = Tolerance::quadrature();
  const Tolerance inner(0.01 * outer.abs_tol(), 0.01 * outer.rel_tol(),
                        outer.max_steps());

  auto field = [&](double x) {
    if (x <= x1) return region.e1();
    std::vector<double> inner_cuts;
    for (double c : cuts) {
      if (c < x) inner_cuts.push_back(c);
    }
    const double accumulated = integrate(
        [&rho](double t) { return rho(t); }, Interval(x1, x), inner, inner_cuts);
    return region.e1() + inv_eps * accumulated;
  };
  return -integrate(field, Interval(x1, x2), outer, cuts);
}

double charge_moment_integral(const ChargeRegion& region) {
  return region.rho().first_moment(region.x1(), region.x2()) / region.epsilon();
}

double scr_voltage(const ChargeRegion& region) {
  require_consistent(region, "scr_voltage");
  return charge_moment_integral(region) + region.x1() * region.e1() -
         region.x2() * region.e2();
}

}  // namespace scr1d
