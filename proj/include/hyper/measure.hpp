#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "hyper/quadrature.hpp"

namespace hyper {

using RealFn = std::function<double(double)>;

struct Atom {
  double location;
  double weight;
};

// Density regular(t) * w_lower(t) * w_upper(t) on [lo, hi].
struct DensityPiece {
  double lo, hi;
  RealFn regular;
  EndpointWeight lower;
  EndpointWeight upper;

  double at(double t) const;
};

// Image of weight(theta) d theta on [lo, hi] under theta -> map(theta).
struct PushforwardPiece {
  double lo, hi;
  RealFn map;
  RealFn weight;
  EndpointWeight lower;
  EndpointWeight upper;
};

/// Positive measure on [support_lo, support_hi]: atoms plus densities, where a
/// density may also be given as a pushforward from an auxiliary variable.
struct RadonMeasure {
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<Atom> atoms;
  std::vector<DensityPiece> densities;
  std::vector<PushforwardPiece> pushforwards;

  static RadonMeasure point(double x, double weight = 1.0);
  bool is_atomic() const { return densities.empty() && pushforwards.empty(); }
  // Sum of the density pieces at t (pushforwards excluded).
  double density(double t) const;
  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Sum of w_i f(x_i) plus the integrals of f against each density piece.
/// f is assumed to vanish above clip_hi, which lets callers skip empty range.
template <class F>
auto integrate_measure(F&& f, const RadonMeasure& mu, const QuadSpec& spec = {},
                       double clip_hi = std::numeric_limits<double>::infinity()) {
  using T = plain_t<decltype(f(mu.support_lo))>;
  QuadResult<T> out{};
  bool first = true;
  auto add = [&](const QuadResult<T>& part) {
    detail::accumulate(out, part, first);
    first = false;
  };
  for (const Atom& a : mu.atoms) {
    if (a.location > clip_hi) continue;
    add(QuadResult<T>{T(f(a.location) * a.weight), 0.0, 1, 0});
  }
  for (const DensityPiece& p : mu.densities) {
    if (p.lo >= clip_hi) continue;
    if (p.hi <= clip_hi) {
      QuadSpec s = spec;
      s.lower = p.lower;
      s.upper = p.upper;
      auto g = [&](double t) { return T(f(t) * p.regular(t)); };
      add(integrate(g, p.lo, p.hi, s));
    } else {
      QuadSpec s = spec;
      s.lower = p.lower;
      s.upper = EndpointWeight{};
      auto g = [&](double t) { return T(f(t) * (p.regular(t) * endpoint_factor(p.upper, p.hi, t))); };
      add(integrate(g, p.lo, clip_hi, s));
    }
  }
  for (const PushforwardPiece& p : mu.pushforwards) {
    QuadSpec s = spec;
    s.lower = p.lower;
    s.upper = p.upper;
    auto g = [&](double th) { return T(f(p.map(th)) * p.weight(th)); };
    add(integrate(g, p.lo, p.hi, s));
  }
  if (first) out.value = T(f(mu.support_lo) * 0.0);
  return out;
}

double total_mass(const RadonMeasure& mu, const QuadSpec& spec = {});

}  // namespace hyper
