#include "scr1d/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "scr1d/constants.hpp"

namespace scr1d {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string at_x(const char* what, double x) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s at x = %.17g", what, x);
  return buf;
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw std::invalid_argument("Interval: endpoints must be finite");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("Interval: requires lo < hi strictly");
  }
}

Tolerance::Tolerance(double abs_tol, double rel_tol, int max_steps)
    : abs_tol_(abs_tol), rel_tol_(rel_tol), max_steps_(max_steps) {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) {
    throw std::invalid_argument("Tolerance: abs_tol and rel_tol must be >= 0");
  }
  if (abs_tol == 0.0 && rel_tol == 0.0) {
    throw std::invalid_argument("Tolerance: abs_tol and rel_tol cannot both be zero");
  }
  if (max_steps <= 0) {
    throw std::invalid_argument("Tolerance: max_steps must be positive");
  }
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

// Kronrod-15 abscissae (positive half, descending) and weights; the odd
// indices plus the centre are the embedded Gauss-7 nodes.
constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double kWg[4] = {0.12948496616886969327, 0.27970539148927666790,
                           0.38183005050511894495, 0.41795918367346938776};

struct Panel {
  double a;
  double b;
  double value;   // K15 estimate
  double error;   // |K15 - G7|
  double resabs;  // K15 estimate of the integral of |f|
};

Panel gk15(const RealFn& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw NonFiniteEvaluation(at_x("integrand returned a non-finite value", x));
    }
    return v;
  };

  const double fc = eval(centre);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double flo = eval(centre - dx);
    const double fhi = eval(centre + dx);
    kron += kWgk[i] * (flo + fhi);
    resabs += kWgk[i] * (std::abs(flo) + std::abs(fhi));
    if (i % 2 == 1) gauss += kWg[i / 2] * (flo + fhi);
  }
  return {a, b, kron * half, std::abs((kron - gauss) * half), resabs * half};
}

// Heap order: largest error first; ties broken by lower left endpoint so the
// subdivision sequence is fully deterministic.
struct PanelWorse {
  bool operator()(const Panel& p, const Panel& q) const {
    if (p.error != q.error) return p.error < q.error;
    return p.a > q.a;
  }
};

}  // namespace

double integrate(const RealFn& f, const Interval& iv, const Tolerance& tol,
                 std::span<const double> breakpoints) {
  // Initial panels: iv split at interior breakpoints.
  std::vector<double> cuts;
  cuts.push_back(iv.lo());
  if (!breakpoints.empty()) {
    std::vector<double> inner(breakpoints.begin(), breakpoints.end());
    std::sort(inner.begin(), inner.end());
    const double min_sep = 1e-14 * iv.width();
    for (double x : inner) {
      if (x > iv.lo() + min_sep && x < iv.hi() - min_sep &&
          x - cuts.back() > min_sep) {
        cuts.push_back(x);
      }
    }
  }
  cuts.push_back(iv.hi());

  std::vector<Panel> heap;
  heap.reserve(cuts.size() + 16);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(gk15(f, cuts[i], cuts[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end(), PanelWorse{});

  auto sums = [&heap]() {
    double value = 0.0, error = 0.0, resabs = 0.0;
    for (const Panel& p : heap) {
      value += p.value;
      error += p.error;
      resabs += p.resabs;
    }
    return std::array<double, 3>{value, error, resabs};
  };

  int splits = 0;
  int ineffective = 0;
  for (;;) {
    const auto [value, error, resabs] = sums();
    // The absolute term scales with the integral of |f| so that one default
    // works across magnitude regimes; 50*eps*resabs is the roundoff floor
    // below which subdividing cannot help.
    const double target =
        std::max({tol.abs_tol() * resabs, tol.rel_tol() * std::abs(value),
                  50.0 * kEps * resabs});
    if (error <= target) return value;
    // Once splitting repeatedly fails to reduce the worst panel's estimate,
    // the estimates are measuring arithmetic noise, not truncation error, and
    // further refinement only accumulates more noise. Accept the value.
    if (ineffective >= 50) return value;

    if (splits >= tol.max_steps()) {
      const Panel& w = *std::max_element(heap.begin(), heap.end(), PanelWorse{});
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "integrate: tolerance not met within the subdivision "
                    "budget on [%.17g, %.17g]: error %.6g vs target %.6g, "
                    "worst panel [%.17g, %.17g] error %.6g",
                    iv.lo(), iv.hi(), error, target, w.a, w.b, w.error);
      throw SubdivisionLimitExceeded(buf);
    }
    std::pop_heap(heap.begin(), heap.end(), PanelWorse{});
    const Panel worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw SubdivisionLimitExceeded(
          "integrate: panel width reached machine resolution before the "
          "tolerance was met");
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    if (left.error + right.error > 0.99 * worst.error) ++ineffective;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), PanelWorse{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), PanelWorse{});
    ++splits;
  }
}

double integrate(const RealFn& f, const Interval& iv, const Tolerance& tol) {
  return integrate(f, iv, tol, {});
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

double find_root(const RealFn& f, const Interval& bracket,
                 const Tolerance& tol) {
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw NonFiniteEvaluation(at_x("root function returned a non-finite value", x));
    }
    return v;
  };

  double a = bracket.lo();
  double b = bracket.hi();
  double fa = eval(a);
  double fb = eval(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoSignChange("find_root: f does not change sign across the bracket");
  }

  // Brent's method: a tracks the previous iterate, c the contrapoint.
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < tol.max_steps(); ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * kEps * std::abs(b) +
        0.5 * std::max(tol.abs_tol(), tol.rel_tol() * std::abs(b));
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Attempt interpolation: secant, or inverse quadratic when possible.
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = eval(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw IterationLimitExceeded("find_root: iteration budget exhausted");
}

// ---------------------------------------------------------------------------
// Error function
// ---------------------------------------------------------------------------

namespace {

// erf(x) = (2/sqrt(pi)) * x * exp(-x^2) * sum_{n>=0} (2x^2)^n / (2n+1)!!
// All terms positive, so there is no cancellation anywhere on [0, 3].
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 200; ++n) {
    term *= 2.0 * x2 / static_cast<double>(2 * n + 3);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return constants::two_over_sqrt_pi * x * std::exp(-x2) * sum;
}

// Laplace continued fraction for the complement, x > 3:
//   erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm.
double erfc_continued_fraction(double x) {
  const double tiny = 1e-300;
  double frac = x;
  double c = frac;
  double den = 0.0;
  for (int n = 1; n <= 300; ++n) {
    const double an = 0.5 * static_cast<double>(n);
    den = x + an * den;
    if (den == 0.0) den = tiny;
    c = x + an / c;
    if (c == 0.0) c = tiny;
    den = 1.0 / den;
    const double delta = c * den;
    frac *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / constants::sqrt_pi / frac;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  double r;
  if (ax <= 3.0) {
    r = erf_series(ax);
  } else if (ax > 27.0) {
    r = 1.0;  // erfc underflows below 1e-300
  } else {
    r = 1.0 - erfc_continued_fraction(ax);
  }
  return std::copysign(r, x);
}

// ---------------------------------------------------------------------------
// Fixed point
// ---------------------------------------------------------------------------

double fixed_point(const RealFn& g, double x0, double damping,
                   const Tolerance& tol) {
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("fixed_point: damping must lie in (0, 1]");
  }
  double x = x0;
  for (int iter = 0; iter < tol.max_steps(); ++iter) {
    const double gx = g(x);
    if (!std::isfinite(gx)) {
      throw NonFiniteEvaluation(at_x("fixed-point map returned a non-finite value", x));
    }
    if (std::abs(x - gx) <=
        std::max(tol.abs_tol(), tol.rel_tol() * std::abs(x))) {
      return x;
    }
    x = (1.0 - damping) * x + damping * gx;
  }
  throw IterationLimitExceeded("fixed_point: iteration budget exhausted");
}

}  // namespace scr1d
