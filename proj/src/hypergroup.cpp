#include "hyper/hypergroup.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyper/geom.hpp"
#include "hyper/rng.hpp"
#include "hyper/specfun.hpp"

namespace hyper {

namespace {

constexpr double kPi = std::numbers::pi;

// x / sinh x, stable for small and large x.
double x_over_sinh(double x) {
  if (x < 1e-4) return 1.0 - x * x / 6.0;
  if (x > 20.0) return 2.0 * x * std::exp(-x) / (1.0 - std::exp(-2.0 * x));
  return x / std::sinh(x);
}

// sin(z) / z with the removable singularity at 0.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

RadonMeasure symmetric_density(double x, double scale) {
  RadonMeasure mu;
  mu.support_lo = -x;
  mu.support_hi = x;
  mu.densities.push_back({-x, x, [scale](double) { return scale; }, {}, {}});
  return mu;
}

HypergroupInstance multiplicative() {
  HypergroupInstance H;
  H.name = "multiplicative";
  H.haar_density = [](double x) { return 1.0 / x; };
  H.conv_point = [](double x, double y) { return RadonMeasure::point(x * y); };
  H.character = [](cplx lambda, double x) { return std::exp(cplx(0.0, 1.0) * lambda * std::log(x)); };
  H.plancherel_density = [](double) { return 1.0; };
  H.plancherel_lo = -std::numeric_limits<double>::infinity();
  H.omega0 = 0.0;
  H.M0 = 1.0;
  H.identity = 1.0;
  H.inverse_involution = true;
  H.domain_lo = 0.0;
  H.plancherel_constant = 1.0 / (2.0 * kPi);
  H.haar_formula = "dx/x";
  H.character_formula = "x^(i lambda)";
  H.plancherel_formula = "d lambda on R";
  return H;
}

HypergroupInstance bessel_kingman(double g) {
  if (!(g > -0.5)) throw std::invalid_argument("bessel_kingman needs gamma > -1/2");
  HypergroupInstance H;
  H.name = "bessel_kingman";
  H.gamma = g;
  H.haar_density = [g](double x) { return std::pow(x, 2.0 * g + 1.0); };
  const double c = std::tgamma(g + 1.0) / (std::sqrt(kPi) * std::tgamma(g + 0.5));
  H.conv_point = [g, c](double x, double y) {
    if (x == 0.0) return RadonMeasure::point(y);
    if (y == 0.0) return RadonMeasure::point(x);
    RadonMeasure mu;
    mu.support_lo = std::abs(x - y);
    mu.support_hi = x + y;
    auto map = [x, y](double th) {
      const double s = std::sin(0.5 * th);
      return std::sqrt((x - y) * (x - y) + 4.0 * x * y * s * s);
    };
    if (g == 0.0) {
      mu.pushforwards.push_back({0.0, kPi, map, [c](double) { return c; }, {}, {}});
    } else {
      // sin^{2g} theta = [sin theta / (theta (pi - theta))]^{2g} * theta^{2g} (pi - theta)^{2g}
      auto w = [g, c](double th) {
        const double den = th * (kPi - th);
        const double r = den > 0.0 ? std::sin(th) / den : 1.0 / kPi;
        return c * std::pow(r, 2.0 * g);
      };
      const EndpointWeight e = EndpointWeight::poly_gap(2.0 * g);
      mu.pushforwards.push_back({0.0, kPi, map, w, e, e});
    }
    return mu;
  };
  H.character = [g](cplx lambda, double x) { return bessel_kingman_character(g, lambda, x); };
  H.laplace_kernel = [g, c](double x) {
    if (x == 0.0) return RadonMeasure::point(0.0);
    RadonMeasure mu;
    mu.support_lo = -x;
    mu.support_hi = x;
    const double scale = c / std::pow(x, 2.0 * g);
    const double beta = g - 0.5;
    const EndpointWeight e = beta == 0.0 ? EndpointWeight{} : EndpointWeight::poly_gap(beta);
    mu.densities.push_back({-x, x, [scale](double) { return scale; }, e, e});
    return mu;
  };
  H.plancherel_density = [g](double lambda) { return std::pow(lambda, 2.0 * g + 1.0); };
  H.omega0 = 0.0;
  H.M0 = 1.0;
  H.plancherel_constant = 1.0 / (std::pow(4.0, g) * std::pow(std::tgamma(g + 1.0), 2));
  H.haar_formula = "x^(2 gamma + 1) dx";
  H.character_formula = "2^gamma Gamma(gamma+1) (lambda x)^(-gamma) J_gamma(lambda x)";
  H.plancherel_formula = "lambda^(2 gamma + 1) d lambda";
  return H;
}

HypergroupInstance jacobi_sl2c() {
  HypergroupInstance H;
  H.name = "jacobi_sl2c";
  H.haar_density = [](double x) {
    const double s = std::sinh(x);
    return s * s;
  };
  H.conv_point = [](double x, double y) { return hyperbolic_conv(3, x, y); };
  H.character = jacobi_character;
  H.laplace_kernel = [](double x) {
    if (x == 0.0) return RadonMeasure::point(0.0);
    return symmetric_density(x, 1.0 / (2.0 * std::sinh(x)));
  };
  H.plancherel_density = [](double lambda) { return lambda * lambda / (4.0 * kPi); };
  H.omega0 = 1.0;
  H.M0 = 1.0;
  H.plancherel_constant = 8.0;
  H.haar_formula = "sinh^2 x dx";
  H.character_formula = "sin(lambda x) / (lambda sinh x)";
  H.plancherel_formula = "lambda^2 / (4 pi) d lambda";
  return H;
}

HypergroupInstance mehler_fock() {
  HypergroupInstance H;
  H.name = "mehler_fock";
  H.haar_density = [](double x) { return std::sinh(x); };
  H.conv_point = [](double x, double y) { return hyperbolic_conv(2, x, y); };
  H.character = [](cplx lambda, double x) {
    // phi decays like x e^{-x/2}; keep the absolute tolerance relative to that scale.
    QuadSpec spec = legendre_spec();
    spec.abs_tol *= std::min(1.0, (1.0 + x) * std::exp(-0.5 * x));
    return legendre_conical(lambda, x, spec);
  };
  H.laplace_kernel = [](double x) {
    if (x == 0.0) return RadonMeasure::point(0.0);
    RadonMeasure mu;
    mu.support_lo = -x;
    mu.support_hi = x;
    const double scale = 1.0 / (kPi * std::sqrt(2.0));
    auto reg = [scale](double) { return scale; };
    mu.densities.push_back({-x, 0.0, reg, EndpointWeight::cosh_gap(), {}});
    mu.densities.push_back({0.0, x, reg, {}, EndpointWeight::cosh_gap()});
    return mu;
  };
  H.plancherel_density = [](double lambda) { return lambda * std::tanh(kPi * lambda); };
  H.omega0 = 0.5;
  H.M0 = 1.0;
  H.plancherel_constant = 1.0;
  H.haar_formula = "sinh x dx";
  H.character_formula = "P_{i lambda - 1/2}(cosh x)";
  H.plancherel_formula = "lambda tanh(pi lambda) d lambda";
  return H;
}

}  // namespace

cplx jacobi_character(cplx lambda, double x) {
  if (x == 0.0) return 1.0;
  return sinc(lambda * x) * x_over_sinh(x);
}

cplx bessel_kingman_character(double g, cplx lambda, double x) {
  if (lambda.imag() == 0.0) return bessel_normalized(g, std::abs(lambda.real()) * x);
  const cplx z = lambda * x;
  if (std::abs(z) < 25.0) {
    // sum_k (-1)^k (z/2)^{2k} Gamma(g+1) / (k! Gamma(k+g+1))
    const cplx h2 = 0.25 * z * z;
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 400; ++k) {
      term *= -h2 / (k * (k + g));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  const double c = std::tgamma(g + 1.0) / (std::sqrt(kPi) * std::tgamma(g + 0.5));
  QuadSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-12;
  // (1 - u^2)^{g - 1/2} cos(z u) on [-1, 1]
  const double beta = g - 0.5;
  if (beta != 0.0) spec = spec.with_lower(EndpointWeight::poly_gap(beta)).with_upper(EndpointWeight::poly_gap(beta));
  return c * integrate([z](double u) { return std::cos(z * u); }, -1.0, 1.0, spec).value;
}

HypergroupInstance make_instance(const std::string& name, double gamma) {
  if (name == "multiplicative") return multiplicative();
  if (name == "bessel_kingman") return bessel_kingman(gamma);
  if (name == "jacobi_sl2c") return jacobi_sl2c();
  if (name == "mehler_fock") return mehler_fock();
  throw UnknownInstance("unknown hypergroup instance: " + name);
}

std::vector<std::string> instance_names() { return {"multiplicative", "bessel_kingman", "jacobi_sl2c", "mehler_fock"}; }

QuadSpec translate_spec() {
  QuadSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-10;
  spec.max_subdivisions = 4000;
  return spec;
}

Grid Grid::composite(const HypergroupInstance& H, double lo, double hi, int panels, int order) {
  if (!(hi > lo) || panels < 1 || order < 2) throw std::invalid_argument("grid needs hi > lo, panels >= 1, order >= 2");
  Grid g;
  g.lo = lo;
  g.hi = hi;
  g.panels = panels;
  g.order = order;
  g.log_scale = H.inverse_involution;
  if (g.log_scale && !(lo > 0.0)) throw std::invalid_argument("log-scale grid needs lo > 0");
  auto [xi, wi] = gauss_legendre(order);
  const double a = g.log_scale ? std::log(lo) : lo;
  const double b = g.log_scale ? std::log(hi) : hi;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < order; ++j) {
      const double u = a + h * (p + 0.5 * (xi[j] + 1.0));
      const double du = 0.5 * h * wi[j];
      const double x = g.log_scale ? std::exp(u) : u;
      const double dx = g.log_scale ? du * x : du;
      g.nodes.push_back(x);
      g.dx_weights.push_back(dx);
      g.haar_weights.push_back(dx * H.haar_density(x));
    }
  }
  for (int j = 0; j < order; ++j) g.bary.push_back((j % 2 ? -1.0 : 1.0) * std::sqrt((1.0 - xi[j] * xi[j]) * wi[j]));
  return g;
}

cplx Grid::interpolate(const std::vector<cplx>& values, double x) const {
  if (!(x >= lo && x <= hi)) return 0.0;
  const double a = log_scale ? std::log(lo) : lo;
  const double b = log_scale ? std::log(hi) : hi;
  const double u = log_scale ? std::log(x) : x;
  const double h = (b - a) / panels;
  int p = static_cast<int>((u - a) / h);
  p = std::clamp(p, 0, panels - 1);
  // Local coordinate in [-1, 1].
  const double s = 2.0 * (u - a - p * h) / h - 1.0;
  cplx num = 0.0;
  double den = 0.0;
  for (int j = 0; j < order; ++j) {
    const std::size_t k = static_cast<std::size_t>(p) * order + j;
    const double uj = log_scale ? std::log(nodes[k]) : nodes[k];
    const double sj = 2.0 * (uj - a - p * h) / h - 1.0;
    const double d = s - sj;
    if (d == 0.0) return values[k];
    const double w = bary[j] / d;
    num += w * values[k];
    den += w;
  }
  return num / den;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << (log_scale ? "log-" : "") << "composite Gauss-Legendre on [" << lo << ", " << hi << "], " << panels
     << " panels x " << order << " nodes";
  return os.str();
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<cplx(double)>& f) {
  GridFunction g;
  g.grid = grid;
  g.values.reserve(grid.size());
  for (double x : grid.nodes) g.values.push_back(f(x));
  return g;
}

double GridFunction::sup_norm() const {
  double s = 0.0;
  for (const cplx& v : values) s = std::max(s, std::abs(v));
  return s;
}

double GridFunction::lp_norm(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.haar_weights[i] * std::pow(std::abs(values[i]), p);
  return std::pow(s, 1.0 / p);
}

GridFunction convolve(const HypergroupInstance& H, const GridFunction& f, const GridFunction& g, Exec exec,
                      const QuadSpec& spec) {
  GridFunction out;
  out.grid = f.grid;
  out.values.assign(f.grid.size(), 0.0);
  const double scale = std::max(g.sup_norm(), 1e-300);
  QuadSpec s = spec;
  s.abs_tol = spec.abs_tol * scale;
  auto gi = [&g](double t) { return g(t); };
  parallel_for(f.grid.size(), exec, [&](std::size_t i) {
    const double x = f.grid.nodes[i];
    cplx acc = 0.0;
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
      if (f.values[j] == 0.0) continue;
      const double y = H.involution(f.grid.nodes[j]);
      acc += f.grid.haar_weights[j] * f.values[j] * translate(H, gi, x, y, s, g.grid.hi);
    }
    out.values[i] = acc;
  });
  return out;
}

AxiomReport check_hypergroup_axioms(const HypergroupInstance& H, const std::vector<double>& grid, const QuadSpec& spec) {
  AxiomReport rep;
  rep.instance = H.name;
  const std::vector<std::function<double(double)>> battery = {
      [](double t) { return std::cos(1.3 * t); }, [](double t) { return std::exp(-t); },
      [](double t) { return 1.0 / (1.0 + t * t); }};
  const bool geodesic = !H.inverse_involution;
  for (double x : grid) {
    const RadonMeasure ident = H.conv_point(x, H.identity);
    for (const auto& f : battery) {
      rep.max_identity_violation = std::max(rep.max_identity_violation, std::abs(integrate_measure(f, ident, spec).value - f(x)));
    }
    for (double y : grid) {
      ++rep.pairs;
      const RadonMeasure xy = H.conv_point(x, y);
      const RadonMeasure yx = H.conv_point(y, x);
      rep.max_mass_violation = std::max(rep.max_mass_violation, std::abs(total_mass(xy, spec) - 1.0));
      for (const auto& f : battery) {
        const double d = integrate_measure(f, xy, spec).value - integrate_measure(f, yx, spec).value;
        rep.max_commutativity_violation = std::max(rep.max_commutativity_violation, std::abs(d));
      }
      double lo_bound = geodesic ? std::abs(x - y) : x * y;
      double hi_bound = geodesic ? x + y : x * y;
      double viol = std::max({0.0, lo_bound - xy.support_lo, xy.support_hi - hi_bound});
      for (const Atom& a : xy.atoms) viol = std::max({viol, lo_bound - a.location, a.location - hi_bound});
      for (const DensityPiece& p : xy.densities) viol = std::max({viol, lo_bound - p.lo, p.hi - hi_bound});
      for (const PushforwardPiece& p : xy.pushforwards) {
        for (int k = 0; k <= 16; ++k) {
          const double d = p.map(p.lo + (p.hi - p.lo) * k / 16.0);
          viol = std::max({viol, lo_bound - d - 1e-14 * hi_bound, d - hi_bound - 1e-14 * hi_bound});
        }
      }
      rep.max_support_violation = std::max(rep.max_support_violation, viol);
    }
  }
  return rep;
}

MultiplicativityReport check_multiplicativity(const HypergroupInstance& H, int trials, std::uint64_t seed,
                                              double strip_fraction, double x_max, Exec exec) {
  struct Trial {
    cplx lambda;
    double x, y;
    double err = 0.0;
  };
  std::vector<Trial> t(trials);
  CounterRng rng(seed);
  for (Trial& tr : t) {
    tr.lambda = cplx(rng.uniform(0.0, 4.0), H.omega0 * strip_fraction * rng.uniform(-1.0, 1.0));
    if (H.inverse_involution) {
      tr.x = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      tr.y = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    } else {
      tr.x = rng.uniform(0.05, x_max);
      tr.y = rng.uniform(0.05, x_max);
    }
  }
  parallel_for(t.size(), exec, [&](std::size_t i) {
    Trial& tr = t[i];
    auto phi = [&](double s) { return H.character(tr.lambda, s); };
    const cplx prod = phi(tr.x) * phi(tr.y);
    QuadSpec spec = translate_spec();
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-11;
    tr.err = std::abs(translate(H, phi, tr.x, tr.y, spec) - prod) / (1.0 + std::abs(prod));
  });
  MultiplicativityReport rep;
  rep.trials = trials;
  for (const Trial& tr : t) {
    if (tr.err >= rep.max_scaled_error) {
      rep.max_scaled_error = tr.err;
      rep.worst_lambda_re = tr.lambda.real();
      rep.worst_lambda_im = tr.lambda.imag();
      rep.worst_x = tr.x;
      rep.worst_y = tr.y;
    }
  }
  return rep;
}

}  // namespace hyper
