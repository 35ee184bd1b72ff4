#include "wits/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "wits/core.hpp"

namespace wits {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> xs(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions == 0 ||
      !(truncation_radius >= 8.0)) {
    throw Error(Errc::InvalidArgument,
                "QuadratureConfig: tolerances must be > 0 and truncation_radius >= 8");
  }
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  if (!std::isfinite(value)) {
    throw Error(Errc::NonConvergence, "integrate_interval: non-finite integrand value");
  }
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_interval(const RealFn& f, double a, double b,
                                    const QuadratureConfig& cfg, std::size_t initial_panels) {
  cfg.validate();
  if (a == b) return {};
  initial_panels = std::max<std::size_t>(initial_panels, 1);
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  const auto edges = linspace(a, b, initial_panels + 1);
  for (std::size_t i = 0; i < initial_panels; ++i) {
    Panel p = kronrod15(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  std::size_t subdivisions = initial_panels;
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (subdivisions >= cfg.max_subdivisions) {
      std::ostringstream os;
      os << "integrate_interval: error estimate " << total_err << " after " << subdivisions
         << " panels on [" << a << ", " << b << "]";
      throw Error(Errc::NonConvergence, os.str());
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    // Panels below machine resolution cannot be split further.
    if (mid <= worst.a || mid >= worst.b) break;
  }
  // Recompute the sums from the panels to shed accumulated update rounding.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  return {total, total_err, subdivisions};
}

double gauss_weighted_integral(const RealFn& f, const QuadratureConfig& cfg) {
  const double r = cfg.truncation_radius;
  auto integrand = [&f](double x) {
    const double w = normal_pdf(x);
    return w == 0.0 ? 0.0 : f(x) * w;
  };
  return integrate_interval(integrand, -r, r, cfg, 8).value;
}

double integral_real_line(const RealFn& f, const QuadratureConfig& cfg) {
  const double r = cfg.truncation_radius;
  return integrate_interval(f, -r, r, cfg, 8).value;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2); }

double log_normal_pdf(double x) {
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

constexpr double kMillsSwitch = -10.0;

// Phi(-t) / phi(t) for t > 0 via the continued fraction
// 1/(t + 1/(t + 2/(t + 3/(t + ...)))), evaluated with the modified Lentz method.
double upper_tail_ratio(double t) {
  constexpr double tiny = 1e-300;
  double f = t;
  double c = t;
  double d = 0.0;
  for (int k = 1; k < 2000; ++k) {
    const double ak = static_cast<double>(k);
    d = t + ak * d;
    if (d == 0.0) d = tiny;
    c = t + ak / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

}  // namespace

double log_normal_cdf(double x) {
  if (x >= kMillsSwitch) return std::log(normal_cdf(x));
  return log_normal_pdf(x) + std::log(upper_tail_ratio(-x));
}

double mills_ratio(double x) {
  if (x >= kMillsSwitch) return normal_pdf(x) / normal_cdf(x);
  return 1.0 / upper_tail_ratio(-x);
}

double find_root(const RealFn& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream os;
    os << "find_root: f(" << lo << ")=" << fa << " and f(" << hi << ")=" << fb
       << " have the same sign";
    throw Error(Errc::NoBracket, os.str());
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
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
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
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
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw Error(Errc::NonConvergence, "find_root: iteration limit reached");
}

Minimum minimize_1d(const RealFn& f, double lo, double hi, std::size_t grid, double tol,
                    Execution ex) {
  if (!(lo < hi) || grid < 3) {
    throw Error(Errc::InvalidArgument, "minimize_1d: need lo < hi and grid >= 3");
  }
  const auto xs = linspace(lo, hi, grid);
  const auto ys = map_grid(xs, f, ex);
  std::size_t best = grid;
  for (std::size_t i = 0; i < grid; ++i) {
    if (std::isfinite(ys[i]) && (best == grid || ys[i] < ys[best])) best = i;
  }
  if (best == grid) {
    throw Error(Errc::EmptyFeasibleSet, "minimize_1d: objective infeasible at every grid point");
  }
  Minimum result{xs[best], ys[best]};

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[best + 1 == grid ? grid - 1 : best + 1];
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  auto consider = [&result](double x, double y) {
    if (std::isfinite(y) && y < result.value) result = {x, y};
  };
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc < fd || (fc == fd && !std::isfinite(fd) && std::isfinite(fc))) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return result;
}

}  // namespace wits
