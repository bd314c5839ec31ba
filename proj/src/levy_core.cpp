#include "levymech/levy_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levymech/parallel.hpp"

namespace levymech {

double small_moment(const LevyMeasure& m, int power, double eps, const quad::Options& opt) {
  if (!(eps > 0.0)) return 0.0;
  const auto f = [&m, power](double y) { return std::pow(y, power) * m.density(y); };
  return 2.0 * quad::integrate_to_zero(f, eps, opt).value;
}

double small_jump_variance(const LevyMeasure& m, double eps, const quad::Options& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("small_jump_variance requires eps > 0");
  return small_moment(m, 2, eps, opt);
}

double tail_mass_one_sided(const LevyMeasure& m, double s, const quad::Options& opt) {
  if (m.tail.available()) {
    const double from = std::max(s, m.tail.valid_from);
    double mass = m.tail.coeff * std::pow(from, -m.tail.exponent) / m.tail.exponent;
    if (from > s) mass += quad::integrate(m.density, s, from, opt).value;
    return mass;
  }
  // No model: truncate at the hint; the dropped mass beyond it is the
  // caller-visible tail bound.
  const double hi = std::max(m.tail_cutoff_hint, 2.0 * s);
  return quad::integrate(m.density, s, hi, opt).value;
}

double tail_mass(const LevyMeasure& m, double s, const quad::Options& opt) {
  return 2.0 * tail_mass_one_sided(m, s, opt);
}

LevyMeasure cauchy_measure() {
  LevyMeasure m;
  m.density = [](double y) { return 1.0 / (M_PI * y * y); };
  m.singularity_order = 2.0;
  m.tail_cutoff_hint = 1e4;
  m.tail = AlgebraicTail{1.0 / M_PI, 1.0, 1.0};
  m.exact_power_law = true;
  m.name = "cauchy";
  return m;
}

LevyMeasure measure_from_name(const std::string& name) {
  if (name == "cauchy") return cauchy_measure();
  throw std::invalid_argument("unknown measure '" + name + "'");
}

std::vector<std::string> measure_names() { return {"cauchy"}; }

LevyMeasure measure_from_table(const std::vector<double>& y,
                               const std::vector<double>& density,
                               double singularity_order) {
  if (y.size() != density.size() || y.size() < 4)
    throw std::invalid_argument("measure table needs at least 4 (y, density) rows");
  auto ys = std::make_shared<std::vector<double>>();
  auto ds = std::make_shared<std::vector<double>>();
  {
    std::vector<std::pair<double, double>> rows;
    rows.reserve(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
      if (!(y[i] > 0.0) || !(density[i] > 0.0) || !std::isfinite(density[i]))
        throw std::invalid_argument("measure table rows must have y > 0, density > 0");
      rows.emplace_back(std::log(y[i]), std::log(density[i]));
    }
    std::sort(rows.begin(), rows.end());
    for (auto& [ly, ld] : rows) {
      ys->push_back(ly);
      ds->push_back(ld);
    }
  }

  // Tail fit over the last decade (log-log least squares).
  double tail_coeff = 0.0, tail_alpha = 0.0;
  {
    const double lo = ys->back() - std::log(10.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = 0; i < ys->size(); ++i) {
      if ((*ys)[i] < lo) continue;
      sx += (*ys)[i];
      sy += (*ds)[i];
      sxx += (*ys)[i] * (*ys)[i];
      sxy += (*ys)[i] * (*ds)[i];
      ++cnt;
    }
    if (cnt >= 3) {
      const double denom = cnt * sxx - sx * sx;
      if (std::abs(denom) > 1e-12) {
        const double slope = (cnt * sxy - sx * sy) / denom;
        tail_alpha = -slope - 1.0;
        tail_coeff = std::exp((sy - slope * sx) / cnt);
      }
    }
  }

  const double y_first = std::exp(ys->front());
  const double y_last = std::exp(ys->back());
  const double d_first = std::exp(ds->front());
  const double head_coeff = d_first * std::pow(y_first, singularity_order);

  LevyMeasure m;
  m.singularity_order = singularity_order;
  m.tail_cutoff_hint = 10.0 * y_last;
  if (tail_alpha > 0.0 && tail_coeff > 0.0)
    m.tail = AlgebraicTail{tail_coeff, tail_alpha, y_last};
  m.name = "table";
  m.density = [ys, ds, y_first, y_last, head_coeff, singularity_order, tail_coeff,
               tail_alpha](double yv) {
    const double ay = std::abs(yv);
    if (ay <= 0.0) return std::numeric_limits<double>::infinity();
    if (ay < y_first) return head_coeff * std::pow(ay, -singularity_order);
    if (ay > y_last) {
      if (tail_alpha > 0.0 && tail_coeff > 0.0)
        return tail_coeff * std::pow(ay, -1.0 - tail_alpha);
      return 0.0;
    }
    const double ly = std::log(ay);
    auto it = std::upper_bound(ys->begin(), ys->end(), ly);
    size_t hi = std::min<size_t>(std::distance(ys->begin(), it), ys->size() - 1);
    if (hi == 0) hi = 1;
    const size_t lo = hi - 1;
    const double t = ((*ys)[hi] > (*ys)[lo]) ? (ly - (*ys)[lo]) / ((*ys)[hi] - (*ys)[lo]) : 0.0;
    return std::exp((1.0 - t) * (*ds)[lo] + t * (*ds)[hi]);
  };
  return m;
}

std::string TripletValidation::summary() const {
  std::ostringstream os;
  os << (passed() ? "PASS" : "FAIL");
  os << " [gaussian=" << (gaussian_ok ? "ok" : "bad") << " drift=" << (drift_ok ? "ok" : "bad")
     << " finite=" << (finite_ok ? "ok" : "bad") << " symmetric=" << (symmetric_ok ? "ok" : "bad")
     << " positive=" << (positive_ok ? "ok" : "bad")
     << " integrable=" << (integrable_ok ? "ok" : "bad") << "]";
  os << " int(|y|^2 ∧ 1) l(dy) = " << square_one_integral;
  for (const auto& issue : issues) os << "\n  - " << issue.check << ": " << issue.detail;
  return os.str();
}

TripletValidation validate_triplet(const GeneratingTriplet& t, const quad::Options& opt) {
  TripletValidation v;
  if (!(t.a >= 0.0)) {
    v.gaussian_ok = false;
    v.issues.push_back({"gaussian", "a = " + std::to_string(t.a) + " must be >= 0"});
  }
  if (t.drift != 0.0) {
    v.drift_ok = false;
    v.issues.push_back({"drift", "symmetric processes require drift = 0"});
  }
  if (!t.levy) return v;
  const LevyMeasure& m = *t.levy;

  const double hi = std::min(m.tail_cutoff_hint, 1e6);
  const int sweeps = 120;
  for (int i = 0; i < sweeps; ++i) {
    const double y =
        std::exp(std::log(1e-6) + (std::log(hi) - std::log(1e-6)) * i / (sweeps - 1.0));
    const double dp = m.density(y);
    const double dm = m.density(-y);
    if (!std::isfinite(dp) || !std::isfinite(dm)) {
      v.finite_ok = false;
      v.issues.push_back({"finite", "non-finite density at |y| = " + std::to_string(y)});
      break;
    }
    const double scale = std::max({std::abs(dp), std::abs(dm), 1e-300});
    if (std::abs(dp - dm) > 1e-10 * scale) {
      if (v.symmetric_ok)
        v.issues.push_back({"symmetry", "density(y) != density(-y) at y = " + std::to_string(y)});
      v.symmetric_ok = false;
    }
    if (dp < 0.0 || dm < 0.0) {
      if (v.positive_ok)
        v.issues.push_back({"positivity", "negative density at |y| = " + std::to_string(y)});
      v.positive_ok = false;
    }
  }

  if (v.finite_ok) {
    try {
      const double sq = small_moment(m, 2, 1.0, opt);
      const double tm = tail_mass(m, 1.0, opt);
      v.square_one_integral = sq + tm;
      if (!std::isfinite(v.square_one_integral)) {
        v.integrable_ok = false;
        v.issues.push_back({"integrability", "(|y|^2 ∧ 1) integral diverges"});
      }
    } catch (const quad::QuadratureError& e) {
      v.integrable_ok = false;
      v.issues.push_back({"integrability", e.what()});
    }
  }
  return v;
}

namespace {

/// Jump part of eta: int (cos(u y) - 1) l(dy), singularity-split.
double jump_symbol(const LevyMeasure& m, double u, const quad::Options& opt) {
  const double au = std::abs(u);
  if (au == 0.0) return 0.0;

  // Taylor band: |u y| <= 1e-2 keeps the quartic correction dominant over
  // the residual by ten orders.
  double eps = 1e-2 / au;
  const bool has_model = m.tail.available();
  double Y = has_model ? std::max(m.tail.valid_from, 30.0 / au) : m.tail_cutoff_hint;
  eps = std::min(eps, 0.5 * Y);

  const double s2 = small_moment(m, 2, eps, opt);
  const double s4 = small_moment(m, 4, eps, opt);
  double value = -0.5 * u * u * s2 + std::pow(u, 4) * s4 / 24.0;

  // Mid range: oscillation-aware panels on the compensated integrand.
  const auto mid = [&m, au](double y) { return (std::cos(au * y) - 1.0) * m.density(y); };
  const double period = 2.0 * M_PI / au;
  {
    quad::Options panel_opt = opt;
    const long n_panels =
        std::max<long>(1, static_cast<long>(std::ceil((Y - eps) / std::min(Y - eps, period))));
    panel_opt.abs_tol = std::max(opt.abs_tol / (2.0 * n_panels), 1e-300);
    double lo = eps;
    const double panel = std::min(Y - eps, period);
    for (long i = 0; i < n_panels; ++i) {
      const double hi = (i + 1 == n_panels) ? Y : std::min(Y, eps + (i + 1) * panel);
      if (hi <= lo) break;
      value += 2.0 * quad::integrate(mid, lo, hi, panel_opt).value;
      lo = hi;
    }
  }

  if (has_model) {
    // Beyond Y the density follows c |y|^{-1-alpha}: subtract the exact mass
    // and add the oscillatory remainder via the asymptotic cosine tail.
    const double c = m.tail.coeff;
    const double alpha = m.tail.exponent;
    value -= 2.0 * c * std::pow(Y, -alpha) / alpha;
    value += 2.0 * c * std::pow(au, alpha) * quad::cosine_power_tail(au * Y, alpha, opt);
  } else {
    // Truncation: account for the non-oscillatory -1 part and drop the
    // remaining cos integral (bounded by the mass itself).
    value -= tail_mass(m, Y, opt);
  }
  return value;
}

}  // namespace

double log_characteristic(const GeneratingTriplet& t, double u, const quad::Options& opt) {
  if (u == 0.0) return 0.0;
  double eta = -0.5 * t.a * u * u;
  if (t.levy) eta += jump_symbol(*t.levy, u, opt);
  return eta;
}

Complex transition_char_function(const GeneratingTriplet& t, double u, double time,
                                 const quad::Options& opt) {
  if (!(time >= 0.0)) throw std::invalid_argument("transition time must be >= 0");
  if (time == 0.0) return Complex(1.0, 0.0);
  return std::exp(Complex(time * log_characteristic(t, u, opt), 0.0));
}

SpectralSymbol::SpectralSymbol(std::function<double(double)> eval, std::string name)
    : eval_(std::move(eval)), name_(std::move(name)) {}

double SpectralSymbol::operator()(double u) const {
  if (u == 0.0) return 0.0;
  return eval_(std::abs(u));
}

ArrayXd fft_frequencies(const Grid& g) {
  ArrayXd u(g.n);
  const double du = 2.0 * M_PI / g.length();
  for (Index k = 0; k < g.n; ++k) {
    const Index kk = (k <= g.n / 2) ? k : k - g.n;
    u[k] = du * static_cast<double>(kk);
  }
  return u;
}

const ArrayXd& SpectralSymbol::table_for(const Grid& g) const {
  const auto key = std::make_pair(g.n, g.length());
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->tables.find(key);
    if (it != cache_->tables.end()) return it->second;
  }
  const ArrayXd u = fft_frequencies(g);
  ArrayXd table(g.n);
  // Symbol is even: evaluate distinct |u| once.
  const Index half = g.n / 2;
  ArrayXd values(half + 1);
  parallel_for(half + 1, [&](std::ptrdiff_t k) {
    values[k] = (k == 0) ? 0.0 : eval_(std::abs(u[k]));
  });
  for (Index k = 0; k < g.n; ++k) {
    const Index kk = (k <= half) ? k : g.n - k;
    table[k] = values[kk];
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->tables.emplace(key, std::move(table)).first->second;
}

SpectralSymbol make_symbol(const GeneratingTriplet& t, const quad::Options& opt) {
  std::string nm = "eta";
  if (t.levy) nm += "[" + t.levy->name + "]";
  if (t.a > 0.0) nm += "+gauss";
  return SpectralSymbol([t, opt](double u) { return log_characteristic(t, u, opt); }, nm);
}

}  // namespace levymech
