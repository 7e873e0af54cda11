#include "hyper/transforms.hpp"

#include <cmath>
#include <numbers>

#include "hyper/rng.hpp"

namespace hyper {

namespace {

constexpr double kPi = std::numbers::pi;

void check_strip(const HypergroupInstance& H, cplx l, const ForwardOptions& opt) {
  if (opt.allow_outside_strip) return;
  if (std::abs(l.imag()) > H.omega0 * (1.0 + 1e-12))
    throw StripViolation(H.name + ": |Im lambda| exceeds omega0 at lambda = (" + std::to_string(l.real()) + ", " +
                         std::to_string(l.imag()) + ")");
}

QuadResult<cplx> half_line(const std::function<cplx(double)>& g, Tail tail, double support_hi, double frequency,
                           const ForwardOptions& opt) {
  switch (tail) {
    case Tail::compact:
      return integrate(g, 0.0, support_hi, opt.spec);
    case Tail::oscillatory: {
      if (!(frequency >= 0.1)) throw NonConvergence("oscillatory tail needs |Re lambda| >= 0.1");
      OscillatoryOptions osc;
      osc.frequency = frequency;
      osc.ladder = opt.ladder;
      return integrate_semi_infinite(g, 0.0, Decay::oscillatory, opt.spec, osc);
    }
    case Tail::exponential:
    default:
      return integrate_semi_infinite(g, 0.0, Decay::exponential, opt.spec);
  }
}

QuadSpec inversion_spec(const InverseOptions& opt) {
  QuadSpec s = opt.spec;
  s.max_subdivisions = std::max(s.max_subdivisions, 20000);
  return s;
}

}  // namespace

QuadSpec transform_spec() {
  QuadSpec s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-8;
  s.max_subdivisions = 20000;
  return s;
}

TransformTable forward(const HypergroupInstance& H, const TransformInput& f, const std::vector<cplx>& lambdas,
                       const ForwardOptions& opt) {
  for (const cplx& l : lambdas) check_strip(H, l, opt);
  if (H.inverse_involution) {
    std::vector<cplx> s(lambdas.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = cplx(0.0, 1.0) * lambdas[i];
    TransformTable t = mellin_forward({f.f, f.descriptor, 0.0}, s, opt);
    t.instance = H.name;
    t.lambda = lambdas;
    t.character_source = H.character_formula;
    return t;
  }
  TransformTable t;
  t.instance = H.name;
  t.descriptor = f.descriptor;
  t.character_source = H.character_formula;
  t.lambda = lambdas;
  t.values.resize(lambdas.size());
  t.errors.resize(lambdas.size());
  parallel_for(lambdas.size(), opt.exec, [&](std::size_t i) {
    const cplx l = lambdas[i];
    auto g = [&](double x) -> cplx { return f.f(x) * H.character(l, x) * H.haar_density(x); };
    const auto r = half_line(g, f.tail, f.support_hi, std::abs(l.real()), opt);
    t.values[i] = r.value;
    t.errors[i] = r.error;
  });
  return t;
}

TransformTable forward(const HypergroupInstance& H, const GridFunction& f, const std::vector<cplx>& lambdas,
                       const ForwardOptions& opt) {
  for (const cplx& l : lambdas) check_strip(H, l, opt);
  TransformTable t;
  t.instance = H.name;
  t.descriptor = "grid function: " + f.grid.describe();
  t.character_source = H.character_formula;
  t.lambda = lambdas;
  t.values.resize(lambdas.size());
  t.errors.assign(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), opt.exec, [&](std::size_t i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j)
      acc += f.grid.haar_weights[j] * f.values[j] * H.character(lambdas[i], f.grid.nodes[j]);
    t.values[i] = acc;
  });
  return t;
}

TransformTable mellin_forward(const MellinInput& f, const std::vector<cplx>& s_nodes, const ForwardOptions& opt) {
  TransformTable t;
  t.instance = "multiplicative";
  t.descriptor = f.descriptor;
  t.character_source = "x^(s-1)";
  t.lambda = s_nodes;
  t.values.resize(s_nodes.size());
  t.errors.resize(s_nodes.size());
  parallel_for(s_nodes.size(), opt.exec, [&](std::size_t i) {
    const cplx s = s_nodes[i];
    // (0, 1] with x = e^{-v}
    auto lower = [&](double v) -> cplx { return f.f(std::exp(-v)) * std::exp(-s * v); };
    auto lo = integrate_semi_infinite(lower, 0.0, Decay::exponential, opt.spec);
    QuadResult<cplx> hi;
    if (f.upper_frequency > 0.0) {
      auto upper = [&](double x) -> cplx { return f.f(x) * std::pow(cplx(x), s - 1.0); };
      OscillatoryOptions osc;
      osc.frequency = f.upper_frequency;
      osc.ladder = opt.ladder;
      hi = integrate_semi_infinite(upper, 1.0, Decay::oscillatory, opt.spec, osc);
    } else {
      auto upper = [&](double v) -> cplx { return f.f(std::exp(v)) * std::exp(s * v); };
      hi = integrate_semi_infinite(upper, 0.0, Decay::exponential, opt.spec);
    }
    t.values[i] = lo.value + hi.value;
    t.errors[i] = lo.error + hi.error;
  });
  return t;
}

InverseResult mellin_inverse(const ComplexOfComplex& f_star, const std::vector<double>& z_nodes,
                             const InverseOptions& opt) {
  InverseResult out;
  out.x = z_nodes;
  out.values.resize(z_nodes.size());
  const QuadSpec spec = inversion_spec(opt);
  parallel_for(z_nodes.size(), opt.exec, [&](std::size_t i) {
    const double lz = std::log(z_nodes[i]);
    auto half = [&](double sign) {
      auto g = [&](double tau) -> cplx {
        const cplx s(opt.sigma, sign * tau);
        return std::exp(-s * lz) * f_star(s);
      };
      return integrate_semi_infinite(g, 0.0, Decay::exponential, spec).value;
    };
    out.values[i] = (half(1.0) + half(-1.0)) / (2.0 * kPi);
  });
  return out;
}

InverseResult inverse_plancherel(const HypergroupInstance& H, const std::function<cplx(double)>& fhat,
                                 const std::vector<double>& x_nodes, const InverseOptions& opt) {
  if (!H.plancherel_constant) throw NormalizationUnset(H.name + ": Plancherel constant not calibrated");
  const double c = *H.plancherel_constant;
  InverseResult out;
  out.x = x_nodes;
  out.values.resize(x_nodes.size());
  std::vector<double> envelope(x_nodes.size(), 0.0);
  const QuadSpec spec = inversion_spec(opt);
  const bool two_sided = std::isinf(H.plancherel_lo);
  parallel_for(x_nodes.size(), opt.exec, [&](std::size_t i) {
    const double x = x_nodes[i];
    auto g = [&](double l) -> cplx { return fhat(l) * std::conj(H.character(l, x)) * H.plancherel_density(l); };
    cplx v = integrate(g, 0.0, opt.lambda_max, spec).value;
    double env = std::abs(g(opt.lambda_max));
    if (two_sided) {
      v += integrate(g, -opt.lambda_max, 0.0, spec).value;
      env = std::max(env, std::abs(g(-opt.lambda_max)));
    }
    out.values[i] = c * v;
    envelope[i] = c * env;
  });
  for (double e : envelope) out.tail_envelope = std::max(out.tail_envelope, e);
  return out;
}

NormCheck plancherel_norm_check(const HypergroupInstance& H, const TransformInput& f, double lambda_max) {
  if (!H.plancherel_constant) throw NormalizationUnset(H.name + ": Plancherel constant not calibrated");
  NormCheck nc;
  ForwardOptions fo;
  fo.exec = Exec::serial;
  if (H.inverse_involution) {
    auto lower = [&](double v) { return std::norm(f.f(std::exp(-v))); };
    auto upper = [&](double v) { return std::norm(f.f(std::exp(v))); };
    nc.lhs = integrate_semi_infinite(lower, 0.0, Decay::exponential, fo.spec).value +
             integrate_semi_infinite(upper, 0.0, Decay::exponential, fo.spec).value;
  } else {
    auto sq = [&](double x) { return std::norm(f.f(x)) * H.haar_density(x); };
    const Tail tail = f.tail == Tail::oscillatory ? Tail::exponential : f.tail;
    nc.lhs = half_line(sq, tail, f.support_hi, 0.0, fo).value.real();
  }
  auto g = [&](double l) {
    const cplx v = forward(H, f, {cplx(l)}, fo).values[0];
    return std::norm(v) * H.plancherel_density(l);
  };
  QuadSpec spec = transform_spec();
  spec.rel_tol = 1e-9;
  double rhs = integrate(g, 0.0, lambda_max, spec).value;
  if (std::isinf(H.plancherel_lo)) rhs += integrate(g, -lambda_max, 0.0, spec).value;
  nc.rhs = *H.plancherel_constant * rhs;
  return nc;
}

std::vector<TransformPair> calibration_pairs(const HypergroupInstance& H) {
  std::vector<TransformPair> pairs;
  if (H.name == "mehler_fock") {
    pairs.push_back({{[](double x) { return cplx(1.0 / std::cosh(0.5 * x)); }, "sech(x/2)", Tail::oscillatory},
                     [](double l) { return cplx(2.0 / (l * std::sinh(kPi * l))); }});
    pairs.push_back({{[](double x) { return cplx(std::pow(std::cosh(0.5 * x), -3)); }, "sech^3(x/2)"},
                     [](double l) { return cplx(8.0 * l / std::sinh(kPi * l)); }});
  } else if (H.name == "jacobi_sl2c") {
    for (double a : {1.0, 2.0}) {
      pairs.push_back({{[a](double x) { return cplx(std::exp(-a * x * x)); }, "exp(-" + std::to_string(a) + " x^2)"},
                       [a](double l) {
                         return cplx(0.5 * std::sqrt(kPi / a) * std::exp((1.0 - l * l) / (4.0 * a)) *
                                     std::sin(l / (2.0 * a)) / l);
                       }});
    }
  } else if (H.name == "bessel_kingman") {
    const double g = H.gamma;
    for (double a : {0.5, 1.0}) {
      pairs.push_back({{[a](double x) { return cplx(std::exp(-a * x * x)); }, "exp(-" + std::to_string(a) + " x^2)"},
                       [a, g](double l) {
                         return cplx(std::pow(2.0, g) * std::tgamma(g + 1.0) * std::pow(2.0 * a, -g - 1.0) *
                                     std::exp(-l * l / (4.0 * a)));
                       }});
    }
  } else if (H.name == "multiplicative") {
    pairs.push_back({{[](double x) { return cplx((4.0 / kPi) * x * x / (1.0 + x * x * x * x)); }, "h_2"},
                     [](double l) { return cplx(1.0 / std::cosh(kPi * l / 4.0)); }});
    pairs.push_back({{[](double x) { return cplx(std::exp(-std::log(x) * std::log(x))); }, "exp(-log^2 x)"},
                     [](double l) { return cplx(std::sqrt(kPi) * std::exp(-l * l / 4.0)); }});
  }
  return pairs;
}

Calibration calibrate_plancherel(const HypergroupInstance& H, const std::vector<double>& x_nodes,
                                 const InverseOptions& opt) {
  HypergroupInstance unit = H;
  unit.plancherel_constant = 1.0;
  double num = 0.0, den = 0.0, ff = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (const auto& p : calibration_pairs(H)) {
    const auto inv = inverse_plancherel(unit, p.fhat, x_nodes, opt);
    for (std::size_t i = 0; i < x_nodes.size(); ++i) {
      const double fx = p.f.f(x_nodes[i]).real();
      const double I = inv.values[i].real();
      num += fx * I;
      den += I * I;
      ff += fx * fx;
      samples.push_back({fx, I});
    }
  }
  Calibration cal;
  if (den == 0.0) throw NormalizationUnset(H.name + ": no calibration pairs available");
  cal.constant = num / den;
  double r = 0.0;
  for (const auto& [fx, I] : samples) r += (fx - cal.constant * I) * (fx - cal.constant * I);
  cal.residual = std::sqrt(r / ff);
  cal.samples = static_cast<int>(samples.size());
  return cal;
}

StripReport strip_analyticity_check(const ComplexOfComplex& F, double width, int n_probe, double re_lo, double re_hi,
                                    std::uint64_t seed) {
  StripReport rep;
  CounterRng rng(seed);
  const cplx I(0.0, 1.0);
  for (int k = 0; k < n_probe; ++k) {
    const cplx z0(rng.uniform(re_lo, re_hi), 0.8 * width * rng.uniform(-1.0, 1.0));
    ++rep.probes;
    try {
      const cplx f0 = F(z0);
      const double scale = std::max(1.0, std::abs(f0));
      rep.sup_bound = std::max(rep.sup_bound, std::abs(f0));
      if (width > 0.0) {
        const double h = 1e-3 * std::min(1.0, width);
        auto d = [&](cplx dir) {
          return (-F(z0 + 2.0 * h * dir) + 8.0 * F(z0 + h * dir) - 8.0 * F(z0 - h * dir) + F(z0 - 2.0 * h * dir)) /
                 (12.0 * h);
        };
        rep.cr_residual = std::max(rep.cr_residual, std::abs(d(1.0) + I * d(I)) / scale);
        const double r = std::min(0.25, 0.5 * (width - std::abs(z0.imag())));
        const int N = 32;
        cplx avg = 0.0;
        for (int j = 0; j < N; ++j) {
          const cplx zj = z0 + r * std::exp(I * (2.0 * kPi * j / N));
          const cplx v = F(zj);
          rep.sup_bound = std::max(rep.sup_bound, std::abs(v));
          avg += v;
        }
        avg /= double(N);
        rep.cauchy_residual = std::max(rep.cauchy_residual, std::abs(avg - f0) / scale);
      }
    } catch (const NumericError& e) {
      rep.diverged = true;
      if (rep.divergence.empty()) rep.divergence = e.what();
    }
  }
  return rep;
}

LpBound lp_extension_bound(const HypergroupInstance& H, const TransformInput& f, double nu, double alpha, int n_probe,
                           std::uint64_t seed) {
  LpBound b;
  b.p = nu / (nu + alpha - 1.0);
  b.q = b.p / (b.p - 1.0);
  ForwardOptions fo;
  fo.exec = Exec::serial;
  const Tail tail = f.tail == Tail::oscillatory ? Tail::exponential : f.tail;
  auto fp = [&](double x) { return std::pow(std::abs(f.f(x)), b.p) * H.haar_density(x); };
  const double norm_p = std::pow(half_line(fp, tail, f.support_hi, 0.0, fo).value.real(), 1.0 / b.p);
  auto ph = [&](double x) { return std::pow(H.phi0(x), (1.0 - alpha) * b.q) * H.haar_density(x); };
  const double kern = std::pow(half_line(ph, Tail::exponential, 0.0, 0.0, fo).value.real(), 1.0 / b.q);
  b.bound = std::pow(H.M0, alpha) * norm_p * kern;
  const double w = alpha * H.omega0;
  std::vector<cplx> probes;
  for (int k = 0; k <= 4; ++k) probes.push_back(cplx(0.0, w * k / 4.0));
  CounterRng rng(seed);
  for (int k = 0; k < n_probe; ++k) probes.push_back(cplx(rng.uniform(0.0, 4.0), w * rng.uniform(-1.0, 1.0)));
  ForwardOptions po;
  po.exec = Exec::serial;
  TransformInput g = f;
  g.tail = tail;
  const auto t = forward(H, g, probes, po);
  for (const cplx& v : t.values) b.sup_fhat = std::max(b.sup_fhat, std::abs(v));
  return b;
}

}  // namespace hyper
