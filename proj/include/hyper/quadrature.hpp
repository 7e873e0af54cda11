#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hyper/errors.hpp"

namespace hyper {

using cplx = std::complex<double>;

/// Weight attached to one endpoint of an integration interval.
///
/// With a flag set the caller integrates only the regular part g; the engine
/// multiplies by the weight and removes the singularity by substitution:
///   inverse_sqrt_cosh at endpoint e:  |cosh e - cosh t|^beta
///   inverse_sqrt_poly at endpoint e:  |e - t|^beta
/// beta defaults to -1/2 and must exceed -1.
enum class EndpointKind { none, inverse_sqrt_cosh, inverse_sqrt_poly };

struct EndpointWeight {
  EndpointKind kind = EndpointKind::none;
  double exponent = -0.5;

  static EndpointWeight none() { return {}; }
  static EndpointWeight cosh_gap(double beta = -0.5) { return {EndpointKind::inverse_sqrt_cosh, beta}; }
  static EndpointWeight poly_gap(double beta = -0.5) { return {EndpointKind::inverse_sqrt_poly, beta}; }
  bool active() const { return kind != EndpointKind::none && exponent != 0.0; }
};

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
  EndpointWeight lower;
  EndpointWeight upper;

  QuadSpec with_lower(EndpointWeight w) const {
    QuadSpec s = *this;
    s.lower = w;
    return s;
  }
  QuadSpec with_upper(EndpointWeight w) const {
    QuadSpec s = *this;
    s.upper = w;
    return s;
  }
  QuadSpec plain() const {
    QuadSpec s = *this;
    s.lower = s.upper = EndpointWeight{};
    return s;
  }
  QuadSpec tolerances(double abs, double rel) const {
    QuadSpec s = *this;
    s.abs_tol = abs;
    s.rel_tol = rel;
    return s;
  }
};

template <class T>
struct QuadResult {
  T value;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

enum class Decay { exponential, oscillatory };

// Value type of an integrand, with Eigen expression templates evaluated.
template <class X, class = void>
struct plain_value {
  using type = std::decay_t<X>;
};
template <class X>
struct plain_value<X, std::void_t<typename std::decay_t<X>::PlainObject>> {
  using type = typename std::decay_t<X>::PlainObject;
};
template <class X>
using plain_t = typename plain_value<X>::type;

// Evaluates an Eigen expression before its operands go out of scope.
template <class X>
plain_t<X> materialize(X&& x) {
  return plain_t<X>(std::forward<X>(x));
}

// Entrywise max-norm used for error control of scalar, vector and matrix integrands.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class T>
inline bool all_finite(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return std::isfinite(v);
  } else if constexpr (std::is_same_v<T, cplx>) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return v.allFinite();
  }
}

// |cosh e - cosh t| without cancellation near t = e.
inline double cosh_gap(double e, double t) {
  return std::abs(2.0 * std::sinh(0.5 * (e + t)) * std::sinh(0.5 * (e - t)));
}

// Nonnegative root of cosh(t) = cosh(e) + delta, accurate when cosh(t) - 1 is small.
inline double acosh_shift(double e, double delta) {
  const double sh = std::sinh(0.5 * e);
  const double cm1 = std::max(0.0, 2.0 * sh * sh + delta);
  return std::log1p(cm1 + std::sqrt(cm1 * (cm1 + 2.0)));
}

inline double endpoint_factor(const EndpointWeight& w, double endpoint, double t) {
  if (!w.active()) return 1.0;
  const double gap = w.kind == EndpointKind::inverse_sqrt_cosh ? cosh_gap(endpoint, t) : std::abs(endpoint - t);
  return std::pow(gap, w.exponent);
}

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool splittable;
};

template <class F>
auto gk15(F& f, double a, double b) {
  using T = plain_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  std::array<T, 7> f1, f2;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = f(c - dx);
    f2[j] = f(c + dx);
    const T sum = f1[j] + f2[j];
    resk = resk + sum * kWgk[j];
    if (j % 2 == 1) resg = resg + sum * kWg[j / 2];
  }
  // QUADPACK error heuristic with resasc computed from the max-norm.
  const T mean = resk * 0.5;
  double resasc = kWgk[7] * magnitude(T(fc - mean));
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (magnitude(T(f1[j] - mean)) + magnitude(T(f2[j] - mean)));
  resasc *= std::abs(h);
  const T value = resk * h;
  double err = magnitude(T((resk - resg) * h));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return std::pair<T, double>(value, err);
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b] with no endpoint weights.
/// Throws NonConvergence when max_subdivisions is exhausted.
template <class F>
auto adaptive_gk(F&& f, double a, double b, double abs_tol, double rel_tol, int max_subdivisions) {
  using T = plain_t<decltype(f(a))>;
  using Seg = detail::Segment<T>;
  auto cmp = [](const Seg& l, const Seg& r) { return l.error < r.error; };
  std::vector<Seg> heap;
  int evals = 0;
  auto make = [&](double lo, double hi) {
    auto [v, e] = detail::gk15(f, lo, hi);
    evals += 15;
    const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(lo), std::abs(hi), 1e-300});
    return Seg{lo, hi, v, e, (hi - lo) > width_floor};
  };
  heap.push_back(make(a, b));
  T total = heap.front().value;
  double total_err = heap.front().error;
  if (!all_finite(total)) throw NonConvergence("non-finite integrand value");
  double frozen_err = 0.0;
  while (total_err + frozen_err > std::max(abs_tol, rel_tol * magnitude(total))) {
    if (static_cast<int>(heap.size()) >= max_subdivisions) {
      throw NonConvergence("subdivision budget exhausted", magnitude(total), total_err + frozen_err);
    }
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Seg worst = heap.back();
    heap.pop_back();
    if (!worst.splittable) {
      // Interval at roundoff width: keep its estimate and stop refining it.
      frozen_err += worst.error;
      total_err -= worst.error;
      worst.error = 0.0;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      if (frozen_err > std::max(abs_tol, rel_tol * magnitude(total))) {
        throw NonConvergence("roundoff limits accuracy", magnitude(total), total_err + frozen_err);
      }
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Seg left = make(worst.a, mid);
    Seg right = make(mid, worst.b);
    total = total + (left.value + right.value - worst.value);
    total_err += left.error + right.error - worst.error;
    if (!all_finite(left.value) || !all_finite(right.value)) throw NonConvergence("non-finite integrand value");
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
    if (total_err < 0.0) total_err = 0.0;
  }
  // Resum in interval order so the result does not depend on update history.
  std::sort(heap.begin(), heap.end(), [](const Seg& l, const Seg& r) { return l.a < r.a; });
  T sum = heap.front().value;
  double err = heap.front().error;
  for (std::size_t i = 1; i < heap.size(); ++i) {
    sum = sum + heap[i].value;
    err += heap[i].error;
  }
  return QuadResult<T>{sum, err + frozen_err, evals, static_cast<int>(heap.size())};
}

namespace detail {

template <class T>
void accumulate(QuadResult<T>& into, const QuadResult<T>& part, bool first) {
  into.value = first ? part.value : T(into.value + part.value);
  into.error += part.error;
  into.evaluations += part.evaluations;
  into.intervals += part.intervals;
}

// Integral of g(t)*w(t) over [lo, hi] where w is the weight flagged at `at`
// (the lower end if at_lower, else the upper end) and sinh t does not vanish
// in the interior of [lo, hi].
template <class G>
auto substituted_piece(G& g, double lo, double hi, const EndpointWeight& w, bool at_lower, const QuadSpec& spec) {
  const double beta = w.exponent;
  if (!(beta > -1.0)) throw std::invalid_argument("endpoint exponent must exceed -1");
  const double p = 1.0 / (beta + 1.0);
  const double e = at_lower ? lo : hi;
  const double other = at_lower ? hi : lo;
  if (w.kind == EndpointKind::inverse_sqrt_poly) {
    const double smax = std::pow(std::abs(other - e), beta + 1.0);
    auto h = [&](double s) {
      const double d = std::pow(s, p);
      const double t = at_lower ? e + d : e - d;
      return materialize(g(t) * p);
    };
    return adaptive_gk(h, 0.0, smax, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
  }
  // cosh gap: g_ap = |cosh e - cosh t| = s^p, dt = p ds / |sinh t|.
  const double smax = std::pow(cosh_gap(e, other), beta + 1.0);
  // Direction of cosh t relative to cosh e and sign of t on the piece.
  const double tmid = 0.5 * (lo + hi);
  const double sign_t = tmid >= 0.0 ? 1.0 : -1.0;
  const double dir = std::cosh(tmid) > std::cosh(e) ? 1.0 : -1.0;
  auto h = [&](double s) {
    const double gap = std::pow(s, p);
    double t = sign_t * acosh_shift(e, dir * gap);
    t = std::clamp(t, lo, hi);
    const double sh = std::abs(std::sinh(t));
    return materialize(g(t) * (p / sh));
  };
  return adaptive_gk(h, 0.0, smax, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

// One flagged endpoint; splits off a plain part so that sinh t stays away from 0.
template <class G>
auto one_flag(G& g, double a, double b, const EndpointWeight& w, bool at_lower, const QuadSpec& spec) {
  using T = plain_t<decltype(g(a))>;
  const double e = at_lower ? a : b;
  double c = at_lower ? b : a;
  if (w.kind == EndpointKind::inverse_sqrt_cosh) {
    if (at_lower && e < 0.0 && b > 0.5 * e) c = 0.5 * e;
    if (!at_lower && e > 0.0 && a < 0.5 * e) c = 0.5 * e;
  }
  auto weighted = [&](double t) { return materialize(g(t) * endpoint_factor(w, e, t)); };
  QuadResult<T> out{};
  bool first = true;
  if (at_lower) {
    accumulate(out, substituted_piece(g, a, c, w, true, spec), first);
    first = false;
    if (c < b) accumulate(out, adaptive_gk(weighted, c, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions), false);
  } else {
    if (a < c) {
      accumulate(out, adaptive_gk(weighted, a, c, spec.abs_tol, spec.rel_tol, spec.max_subdivisions), first);
      first = false;
    }
    accumulate(out, substituted_piece(g, c, b, w, false, spec), first);
  }
  return out;
}

}  // namespace detail

/// Adaptive integral of f over [a, b], applying the endpoint weights in spec.
template <class F>
auto integrate(F&& f, double a, double b, const QuadSpec& spec = {}) {
  using T = plain_t<decltype(f(a))>;
  if (!(a <= b)) throw std::invalid_argument("integrate requires a <= b");
  if (a == b) return QuadResult<T>{f(a) * 0.0, 0.0, 1, 0};
  const bool lo = spec.lower.active();
  const bool hi = spec.upper.active();
  if (!lo && !hi) return adaptive_gk(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
  if (lo && !hi) return detail::one_flag(f, a, b, spec.lower, true, spec);
  if (!lo && hi) return detail::one_flag(f, a, b, spec.upper, false, spec);
  const double m = 0.5 * (a + b);
  auto left = [&](double t) { return materialize(f(t) * endpoint_factor(spec.upper, b, t)); };
  auto right = [&](double t) { return materialize(f(t) * endpoint_factor(spec.lower, a, t)); };
  QuadResult<T> out = detail::one_flag(left, a, m, spec.lower, true, spec);
  detail::accumulate(out, detail::one_flag(right, m, b, spec.upper, false, spec), false);
  return out;
}

/// Polynomial extrapolation to h = 0 by Neville's scheme. Returns the value
/// and the difference between the two highest-order estimates.
template <class T>
std::pair<T, double> neville_to_zero(const std::vector<double>& h, const std::vector<T>& v) {
  std::vector<T> p = v;
  const std::size_t n = v.size();
  T prev = p[0];
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      p[i] = (p[i + 1] * h[i] - p[i] * h[i + k]) / (h[i] - h[i + k]);
    }
    if (k == n - 1) break;
    prev = p[0];
  }
  return {p[0], magnitude(T(p[0] - prev))};
}

struct OscillatoryOptions {
  double frequency = 1.0;  // smallest angular frequency of the tail oscillation
  int ladder = 6;          // number of regulator values
  double ratio = 1.25;     // ratio between consecutive regulator values
  double eps_cap = 0.05;
};

/// Integral over [a, inf). Exponential class: doubling chunks until two
/// consecutive chunks fall below tolerance. Oscillatory class: Gaussian
/// regulator exp(-(eps (x-a))^2) on a ladder of eps, extrapolated to eps = 0
/// in powers of eps^2. The lower endpoint weight of spec applies at a.
template <class F>
auto integrate_semi_infinite(F&& f, double a, Decay decay, const QuadSpec& spec = {},
                             const OscillatoryOptions& osc = {}, double min_reach = 32.0) {
  using T = plain_t<decltype(f(a))>;
  if (decay == Decay::exponential) {
    QuadResult<T> out{};
    double lo = a, width = 1.0;
    int quiet = 0;
    bool first = true;
    for (int k = 0; k < 64; ++k) {
      const double hi = lo + width;
      QuadSpec piece = spec;
      piece.upper = EndpointWeight{};
      if (!first) piece.lower = EndpointWeight{};
      piece.abs_tol = spec.abs_tol / 8.0;
      auto part = integrate(f, lo, hi, piece);
      if (!all_finite(part.value)) throw NonConvergence("tail integrand is not finite");
      detail::accumulate(out, part, first);
      first = false;
      const double tol = std::max(spec.abs_tol, spec.rel_tol * magnitude(out.value));
      quiet = magnitude(part.value) <= 0.1 * tol ? quiet + 1 : 0;
      lo = hi;
      if (quiet >= 2 && lo - a >= min_reach) return out;
      width *= 2.0;
      if (lo - a > 1e5) break;
    }
    throw NonConvergence("exponential tail did not decay", magnitude(out.value), out.error);
  } else if constexpr (!(std::is_same_v<T, double> || std::is_same_v<T, cplx>)) {
    throw std::invalid_argument("oscillatory mode takes scalar integrands");
  } else {
    const int n = std::max(3, osc.ladder);
    const double eps_max = std::min(osc.eps_cap, osc.frequency / 10.0);
    std::vector<double> eps(n), h(n);
    for (int k = 0; k < n; ++k) {
      eps[k] = eps_max / std::pow(osc.ratio, k);
      h[k] = eps[k] * eps[k];
    }
    const double reach = 7.0 / eps[n - 1];
    using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
    auto vec = [&](double x) {
      const cplx fx = cplx(f(x));
      Vec v(n);
      const double d = x - a;
      for (int k = 0; k < n; ++k) v[k] = fx * std::exp(-(eps[k] * d) * (eps[k] * d));
      return v;
    };
    const double panel = 4.0 * 3.14159265358979323846 / osc.frequency;
    const int panels = static_cast<int>(std::ceil(reach / panel));
    QuadResult<Vec> acc{};
    for (int j = 0; j < panels; ++j) {
      QuadSpec piece = spec;
      piece.upper = EndpointWeight{};
      if (j > 0) piece.lower = EndpointWeight{};
      piece.abs_tol = spec.abs_tol / (4.0 * panels);
      piece.rel_tol = spec.rel_tol / 4.0;
      auto part = integrate(vec, a + j * panel, a + (j + 1) * panel, piece);
      detail::accumulate(acc, part, j == 0);
    }
    std::vector<cplx> vals(acc.value.data(), acc.value.data() + n);
    auto [v, diff] = neville_to_zero(h, vals);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(v));
    if (!(diff <= tol)) throw NonConvergence("regulator ladder did not stabilize", std::abs(v), diff);
    QuadResult<T> out{};
    if constexpr (std::is_same_v<T, double>) {
      out.value = v.real();
    } else {
      out.value = v;
    }
    out.error = diff + acc.error;
    out.evaluations = acc.evaluations;
    out.intervals = acc.intervals;
    return out;
  }
}

}  // namespace hyper
