#include "levymech/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace levymech::quad {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gauss_kronrod(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  fv[7] = f(c);
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodNodes[i];
    fv[7 - i] = f(c - dx);
    fv[7 + i] = f(c + dx);
  }
  double kronrod = kKronrodWeights[0] * fv[7];
  double gauss = kGaussWeights[0] * fv[7];
  for (int i = 1; i < 8; ++i) {
    kronrod += kKronrodWeights[i] * (fv[7 - i] + fv[7 + i]);
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fv[7 - i] + fv[7 + i]);
  }
  kronrod *= h;
  gauss *= h;
  const double diff = std::abs(kronrod - gauss);
  // Standard QUADPACK-style error sharpening.
  const double err = diff > 0.0 ? std::min(diff, 200.0 * diff * std::sqrt(diff)) : 0.0;
  return {kronrod, std::max(err, std::abs(kronrod) * 1e-16)};
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
  Result res;
  if (!(a < b)) {
    if (a == b) return res;
    std::swap(a, b);  // caller gave reversed bounds
  }
  auto first = gauss_kronrod(f, a, b);
  res.evaluations = 15;
  std::priority_queue<Segment> heap;
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  const auto tol = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  int splits = 0;
  const int max_splits = 1 << 14;
  while (total_err > tol() && splits < max_splits) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
      heap.push({worst.a, worst.b, worst.value, 0.0});
      total_err -= worst.error;
      continue;
    }
    auto left = gauss_kronrod(f, worst.a, mid);
    auto right = gauss_kronrod(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++splits;
  }
  res.value = total;
  res.error_estimate = total_err;
  res.converged = total_err <= tol();
  if (!res.converged && opt.throw_on_failure) {
    throw QuadratureError("adaptive quadrature failed to converge", total_err);
  }
  return res;
}

Result integrate_to_zero(const Integrand& f, double b, const Options& opt) {
  Result res;
  if (!(b > 0.0)) return res;
  Options panel_opt = opt;
  panel_opt.abs_tol = std::max(opt.abs_tol * 0.25, 1e-300);
  double hi = b;
  double prev = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double lo = 0.5 * hi;
    Result piece = integrate(f, lo, hi, panel_opt);
    res += piece;
    hi = lo;
    // Dyadic panels of an algebraic singularity decay geometrically; once the
    // ratio settles, the leftover below `hi` is the geometric sum of the
    // remaining panels.
    if (k > 4 && std::abs(piece.value) < std::abs(prev)) {
      const double r = prev != 0.0 ? std::abs(piece.value / prev) : 0.0;
      const double remainder = r < 1.0 ? std::abs(piece.value) * r / (1.0 - r) : 0.0;
      if (remainder < 0.25 * std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value))) {
        const double sign = piece.value >= 0.0 ? 1.0 : -1.0;
        res.value += sign * remainder;
        res.error_estimate += remainder;
        return res;
      }
    }
    prev = piece.value;
    if (hi < 1e-300) break;
  }
  res.converged = false;
  if (opt.throw_on_failure)
    throw QuadratureError("singular panel recursion did not terminate", res.error_estimate);
  return res;
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opt) {
  Result res;
  if (!(a > 0.0)) throw QuadratureError("integrate_to_infinity requires a > 0", 0.0);
  const auto transformed = [&f](double t) {
    const double y = 1.0 / t;
    return f(y) * y * y;
  };
  return integrate_to_zero(transformed, 1.0 / a, opt);
}

Result integrate_oscillatory(const Integrand& f, double u, double a, double b,
                             const Options& opt) {
  Result res;
  if (!(a < b)) return res;
  u = std::abs(u);
  const double period = u > 0.0 ? 2.0 * M_PI / u : (b - a);
  const double panel = std::min(b - a, period);
  const long n_panels = std::max<long>(1, static_cast<long>(std::ceil((b - a) / panel)));
  Options panel_opt = opt;
  panel_opt.abs_tol = std::max(opt.abs_tol / static_cast<double>(n_panels), 1e-300);
  const auto g = [&](double y) { return f(y) * std::cos(u * y); };
  double lo = a;
  for (long i = 0; i < n_panels; ++i) {
    const double hi = (i + 1 == n_panels) ? b : std::min(b, a + (i + 1) * panel);
    if (hi <= lo) break;
    res += integrate(g, lo, hi, panel_opt);
    lo = hi;
  }
  return res;
}

double cosine_power_tail(double Z, double alpha, const Options& opt) {
  if (!(Z > 0.0)) throw QuadratureError("cosine_power_tail requires Z > 0", 0.0);
  const double z_far = std::max(Z, 1000.0);
  double head = 0.0;
  if (z_far > Z) {
    const auto g = [alpha](double t) { return std::pow(t, -1.0 - alpha); };
    head = integrate_oscillatory(g, 1.0, Z, z_far, opt).value;
  }
  // Asymptotic tail by repeated integration by parts:
  //   \int_Z cos(t) g(t) dt = -sin(Z) g - cos(Z) g' + sin(Z) g'' + cos(Z) g''' - ...
  // with g = t^{-1-alpha}; successive derivatives gain a factor -(k+alpha)/t.
  double deriv = std::pow(z_far, -1.0 - alpha);  // g^(0)(z_far), sign tracked below
  const double s = std::sin(z_far);
  const double c = std::cos(z_far);
  const double trig[4] = {-s, -c, s, c};
  double tail = 0.0;
  double magnitude = deriv;
  double sign = 1.0;
  for (int k = 0; k < 8; ++k) {
    tail += trig[k % 4] * sign * magnitude;
    const double next = magnitude * (alpha + 1.0 + k) / z_far;
    if (next >= magnitude) break;  // series started diverging
    magnitude = next;
    sign = -sign;
    if (magnitude < 1e-18 * (std::abs(tail) + 1e-30)) break;
  }
  return head + tail;
}

}  // namespace levymech::quad
