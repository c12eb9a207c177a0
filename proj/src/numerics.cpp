#include "linnik/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <string>
#include <vector>

#include "linnik/error.hpp"

namespace linnik {

void QuadratureSpec::validate() const {
  if (!(abs_tolerance > 0.0) || !(rel_tolerance > 0.0))
    throw Error(ErrorCode::InvalidInput, "quadrature tolerances must be strictly positive");
  if (max_subdivisions < 1) throw Error(ErrorCode::InvalidInput, "max_subdivisions must be >= 1");
}

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; every
// second abscissa is a 7-point Gauss node.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const RealFn& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw Error(ErrorCode::NonConvergence, "integrand is not finite at x = " + std::to_string(x));
  return v;
}

Segment gauss_kronrod(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = checked(f, center - dx) + checked(f, center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec,
                           std::span<const double> breakpoints) {
  spec.validate();
  if (!(a < b)) {
    if (a == b) return {};
    throw Error(ErrorCode::InvalidInput, "integration bounds must satisfy a < b");
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> active;
  std::vector<Segment> frozen;  // too narrow to split further
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) active.push(gauss_kronrod(f, cuts[i], cuts[i + 1]));

  int subdivisions = static_cast<int>(cuts.size()) - 1;
  auto totals = [&] {
    double value = 0.0, error = 0.0;
    auto copy = active;
    for (; !copy.empty(); copy.pop()) {
      value += copy.top().value;
      error += copy.top().error;
    }
    for (const auto& s : frozen) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();

  while (error > std::max(spec.abs_tolerance, spec.rel_tolerance * std::abs(value))) {
    if (active.empty() || subdivisions >= spec.max_subdivisions) {
      throw Error(ErrorCode::NonConvergence,
                  "adaptive quadrature did not reach tolerance (error estimate " + std::to_string(error) +
                      ", " + std::to_string(subdivisions) + " subdivisions)");
    }
    const Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++subdivisions;

    // running sums drift; refresh before trusting a convergence decision
    if (error <= std::max(spec.abs_tolerance, spec.rel_tolerance * std::abs(value))) {
      std::tie(value, error) = totals();
    }
  }
  return {value, error, subdivisions};
}

QuadratureResult integrate_semi_infinite_detailed(const RealFn& f, const QuadratureSpec& spec,
                                                  std::span<const double> breakpoints) {
  spec.validate();
  auto mapped = [&f](double t) {
    const double one_minus = 1.0 - t;
    const double y = t / one_minus;
    if (!std::isfinite(y)) return 0.0;
    return f(y) / (one_minus * one_minus);
  };
  std::vector<double> tcuts;
  for (double y : breakpoints)
    if (y > 0.0 && std::isfinite(y)) tcuts.push_back(y / (1.0 + y));
  return integrate(mapped, 0.0, 1.0, spec, tcuts);
}

double integrate_semi_infinite(const RealFn& f, const QuadratureSpec& spec, std::span<const double> breakpoints) {
  return integrate_semi_infinite_detailed(f, spec, breakpoints).value;
}

double gamma_function(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::InvalidInput, "gamma_function of NaN");
  if (x <= 0.0 && x == std::floor(x))
    throw Error(ErrorCode::PoleError, "gamma_function has a pole at " + std::to_string(x));

  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;

  if (x < 0.5) return constants::pi / (std::sin(constants::pi * x) * gamma_function(1.0 - x));

  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  return std::sqrt(2.0 * constants::pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "normal_quantile requires p in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * constants::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double solve_1d(const RealFn& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "solve_1d tolerance must be positive");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0))
    throw Error(ErrorCode::NoSignChange, "f has the same sign at both ends of [" + std::to_string(lo) + ", " +
                                             std::to_string(hi) + "]");

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, or secant when only two points differ
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) throw Error(ErrorCode::NonConvergence, "solve_1d: f is not finite inside the bracket");
  }
  throw Error(ErrorCode::NonConvergence, "solve_1d did not converge");
}

Vec2 Box2::project(const Vec2& p) const {
  return {std::clamp(p[0], lower[0], upper[0]), std::clamp(p[1], lower[1], upper[1])};
}

namespace {

bool finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }
double sq_norm(const Vec2& v) { return v[0] * v[0] + v[1] * v[1]; }
double max_norm(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

Solve2dResult solve_2d_detailed(const Fn2& F, Vec2 start, const Box2& bounds, double tol, int max_iterations) {
  if (!(tol > 0.0) || max_iterations < 1) throw Error(ErrorCode::InvalidInput, "solve_2d: bad tolerance or limit");
  Vec2 x = bounds.project(start);
  Vec2 fx = F(x);
  if (!finite(fx)) throw Error(ErrorCode::OutOfDomain, "solve_2d: F is not finite at the starting point");

  const double step_scale = std::cbrt(std::numeric_limits<double>::epsilon());
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (max_norm(fx) <= tol) return {x, iter, max_norm(fx)};

    // jac[i][j] = dF_i / dx_j
    std::array<Vec2, 2> jac{};
    for (int j = 0; j < 2; ++j) {
      const double h = step_scale * std::max(1.0, std::abs(x[j]));
      Vec2 fwd = x, bwd = x;
      fwd[j] = std::min(x[j] + h, bounds.upper[j]);
      bwd[j] = std::max(x[j] - h, bounds.lower[j]);
      const double width = fwd[j] - bwd[j];
      if (!(width > 0.0)) throw Error(ErrorCode::OutOfDomain, "solve_2d: degenerate bounds");
      const Vec2 f_fwd = fwd[j] == x[j] ? fx : F(fwd);
      const Vec2 f_bwd = bwd[j] == x[j] ? fx : F(bwd);
      if (!finite(f_fwd) || !finite(f_bwd))
        throw Error(ErrorCode::OutOfDomain, "solve_2d: F is not finite near the current iterate");
      jac[0][j] = (f_fwd[0] - f_bwd[0]) / width;
      jac[1][j] = (f_fwd[1] - f_bwd[1]) / width;
    }

    Vec2 step;
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    const double scale = std::abs(jac[0][0] * jac[1][1]) + std::abs(jac[0][1] * jac[1][0]);
    if (std::abs(det) > 1e-14 * scale && scale > 0.0) {
      step = {(-fx[0] * jac[1][1] + fx[1] * jac[0][1]) / det, (-fx[1] * jac[0][0] + fx[0] * jac[1][0]) / det};
    } else {
      // Levenberg-regularized step when the Jacobian is (nearly) singular
      const double a = jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0];
      const double b = jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1];
      const double c = jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1];
      const double mu = 1e-6 * std::max(1.0, a + c);
      const Vec2 g = {jac[0][0] * fx[0] + jac[1][0] * fx[1], jac[0][1] * fx[0] + jac[1][1] * fx[1]};
      const double dd = (a + mu) * (c + mu) - b * b;
      if (!(dd > 0.0)) throw Error(ErrorCode::NonConvergence, "solve_2d: singular Jacobian");
      step = {(-g[0] * (c + mu) + g[1] * b) / dd, (-g[1] * (a + mu) + g[0] * b) / dd};
    }

    const double current = sq_norm(fx);
    bool accepted = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Vec2 trial = bounds.project({x[0] + t * step[0], x[1] + t * step[1]});
      const Vec2 ft = F(trial);
      if (finite(ft) && sq_norm(ft) < (1.0 - 1e-4 * t) * current) {
        x = trial;
        fx = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (max_norm(fx) <= tol) return {x, iter, max_norm(fx)};
      throw Error(ErrorCode::NonConvergence,
                  "solve_2d stalled with residual " + std::to_string(max_norm(fx)) + " (no descent within bounds)");
    }
  }
  if (max_norm(fx) <= tol) return {x, max_iterations, max_norm(fx)};
  throw Error(ErrorCode::NonConvergence, "solve_2d did not converge within " + std::to_string(max_iterations) +
                                             " iterations (residual " + std::to_string(max_norm(fx)) + ")");
}

Vec2 solve_2d(const Fn2& F, Vec2 start, const Box2& bounds, double tol, int max_iterations) {
  return solve_2d_detailed(F, start, bounds, tol, max_iterations).root;
}

}  // namespace linnik
