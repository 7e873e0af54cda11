#include "hyper/slode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <limits>

namespace hyper {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 4>;

// coth x - 1/x and its derivative 1/x^2 - csch^2 x, with series near 0.
double langevin(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 - x2 / 45.0 + 2.0 * x2 * x2 / 945.0);
  }
  return 1.0 / std::tanh(x) - 1.0 / x;
}

double langevin_prime(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 15.0 + 2.0 * x2 * x2 / 189.0;
  }
  const double s = std::sinh(x);
  return 1.0 / (x * x) - 1.0 / (s * s);
}

double sinhc(double x) { return std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

struct Start {
  double x;
  cplx phi, dphi;
};

double start_point(cplx lambda) { return 1e-3 * std::min(std::max(1.0, 1.0 / std::abs(lambda)), 10.0); }

// phi = 1 + a x^2 + b x^4 about the regular singular point.
Start frobenius(const SLWeight& w, cplx lambda, double x) {
  const cplx E = w.omega0 * w.omega0 + lambda * lambda;
  const double h = 1e-4;
  const double beta1 = w.log_q_derivative(h) / h;
  const cplx a = -E / (4.0 * (w.gamma + 1.0));
  const cplx b = -a * (E + 2.0 * beta1) / (8.0 * (w.gamma + 2.0));
  const double x2 = x * x;
  return {x, 1.0 + a * x2 + b * x2 * x2, 2.0 * a * x + 4.0 * b * x2 * x};
}

// Integrates a complex second-order equation y'' = f(x, y, y') through the
// output times, storing values at each.
template <class Rhs>
void integrate_to(Rhs rhs, const Start& s, const std::vector<double>& times, double tol, double abs_tol, std::vector<cplx>& y,
                  std::vector<cplx>& dy) {
  if (times.empty()) return;
  State st = {s.phi.real(), s.phi.imag(), s.dphi.real(), s.dphi.imag()};
  auto sys = [&](const State& u, State& du, double x) {
    const cplx v(u[0], u[1]), dv(u[2], u[3]);
    const cplx d2 = rhs(x, v, dv);
    du = {u[2], u[3], d2.real(), d2.imag()};
  };
  std::vector<double> t;
  t.reserve(times.size() + 1);
  t.push_back(s.x);
  t.insert(t.end(), times.begin(), times.end());
  std::size_t k = 0;
  auto obs = [&](const State& u, double) {
    if (k > 0) {
      y[k - 1] = cplx(u[0], u[1]);
      dy[k - 1] = cplx(u[2], u[3]);
    }
    ++k;
  };
  auto stepper = odeint::make_dense_output(abs_tol, tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, sys, st, t.begin(), t.end(), 1e-3 * s.x, obs, odeint::max_step_checker(100000));
  } catch (const odeint::step_adjustment_error& e) {
    throw StepFailure(std::string("character ODE: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw StepFailure(std::string("character ODE: ") + e.what());
  }
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(std::abs(y[i])) || !std::isfinite(std::abs(dy[i])))
      throw StepFailure("character ODE produced non-finite values");
}

std::vector<double> output_nodes(double x_max, const SolveOptions& opt) {
  if (!opt.nodes.empty()) {
    if (!std::is_sorted(opt.nodes.begin(), opt.nodes.end()) || opt.nodes.front() < 0.0)
      throw std::invalid_argument("solve_character nodes must be sorted and nonnegative");
    return opt.nodes;
  }
  if (!(x_max > 0.0) || opt.points < 2) throw std::invalid_argument("solve_character needs x_max > 0 and points >= 2");
  std::vector<double> x(opt.points);
  for (int i = 0; i < opt.points; ++i) x[i] = x_max * i / (opt.points - 1);
  return x;
}

}  // namespace

double SLWeight::log_q_derivative(double x) const {
  if (beta) return (*beta)(x);
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (std::log(q(x + h)) - std::log(q(x - h))) / (2.0 * h);
}

double SLWeight::log_q_second_derivative(double x) const {
  if (beta_prime) return (*beta_prime)(x);
  const double h = 1e-3 * std::max(1.0, std::abs(x));
  return (log_q_derivative(x + h) - log_q_derivative(x - h)) / (2.0 * h);
}

double SLWeight::langer_potential(double x) const {
  const double b = log_q_derivative(x);
  return 0.5 * log_q_second_derivative(x) + 0.25 * b * b + (2.0 * gamma + 1.0) * b / (2.0 * x) - omega0 * omega0;
}

SLWeight builtin_weight(const std::string& name, double param) {
  SLWeight w;
  w.name = name;
  if (name == "jacobi") {
    w.gamma = 0.5;
    w.q = [](double x) { return sinhc(x) * sinhc(x); };
    w.beta = [](double x) { return 2.0 * langevin(x); };
    w.beta_prime = [](double x) { return 2.0 * langevin_prime(x); };
    w.omega0 = 1.0;
  } else if (name == "mehler") {
    w.gamma = 0.0;
    w.q = sinhc;
    w.beta = langevin;
    w.beta_prime = langevin_prime;
    w.omega0 = 0.5;
  } else if (name == "bessel") {
    w.gamma = param;
    w.q = [](double) { return 1.0; };
    w.beta = [](double) { return 0.0; };
    w.beta_prime = [](double) { return 0.0; };
    w.omega0 = 0.0;
  } else if (name == "cosh") {
    const double k = param > 0.0 ? param : 3.0;
    w.gamma = -0.5;
    w.q = [k](double x) { return std::pow(std::cosh(x), k); };
    w.beta = [k](double x) { return k * std::tanh(x); };
    w.beta_prime = [k](double x) {
      const double c = std::cosh(x);
      return k / (c * c);
    };
    w.omega0 = 0.5 * k;
  } else {
    throw std::invalid_argument("unknown builtin weight: " + name);
  }
  return w;
}

CharacterSolution solve_character(const SLWeight& w, cplx lambda, double x_max, const SolveOptions& opt) {
  if (!(w.gamma > -0.5)) throw SingularStart("solve_character requires gamma > -1/2");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_character needs tol > 0");
  CharacterSolution sol;
  sol.lambda = lambda;
  sol.x = output_nodes(x_max, opt);
  sol.phi.resize(sol.x.size());
  sol.dphi.resize(sol.x.size());
  const Start s = frobenius(w, lambda, start_point(lambda));
  const cplx E = w.omega0 * w.omega0 + lambda * lambda;
  std::vector<double> later;
  std::size_t first = 0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double x = sol.x[i];
    if (x <= s.x) {
      const Start v = frobenius(w, lambda, x);
      sol.phi[i] = v.phi;
      sol.dphi[i] = v.dphi;
      first = i + 1;
    } else {
      later.push_back(x);
    }
  }
  std::vector<cplx> y(later.size()), dy(later.size());
  integrate_to([&](double x, cplx v, cplx dv) { return -w.log_m_derivative(x) * dv - E * v; }, s, later, opt.tol, 1e-6 * opt.tol, y, dy);
  std::copy(y.begin(), y.end(), sol.phi.begin() + first);
  std::copy(dy.begin(), dy.end(), sol.dphi.begin() + first);
  return sol;
}

std::vector<CharacterSolution> solve_characters(const SLWeight& w, const std::vector<cplx>& lambdas, double x_max,
                                                const SolveOptions& opt, Exec exec) {
  std::vector<CharacterSolution> out(lambdas.size());
  parallel_for(lambdas.size(), exec, [&](std::size_t i) { out[i] = solve_character(w, lambdas[i], x_max, opt); });
  return out;
}

LangerSolution langer_transform(const SLWeight& w, const CharacterSolution& sol, double tol) {
  LangerSolution out;
  out.x = sol.x;
  out.psi.resize(sol.x.size());
  out.psi_ode.resize(sol.x.size());
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double x = sol.x[i];
    out.psi[i] = x > 0.0 ? std::exp(0.5 * w.log_m(x)) * sol.phi[i] : 0.0;
  }
  const Start s = frobenius(w, sol.lambda, start_point(sol.lambda));
  const double sm = std::exp(0.5 * w.log_m(s.x));
  const Start p{s.x, sm * s.phi, sm * (s.dphi + 0.5 * w.log_m_derivative(s.x) * s.phi)};
  const double c = (4.0 * w.gamma * w.gamma - 1.0) / 4.0;
  const cplx l2 = sol.lambda * sol.lambda;
  std::vector<double> later;
  std::size_t first = 0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    if (sol.x[i] <= s.x) {
      out.psi_ode[i] = out.psi[i];
      first = i + 1;
    } else {
      later.push_back(sol.x[i]);
    }
  }
  std::vector<cplx> y(later.size()), dy(later.size());
  integrate_to([&](double x, cplx v, cplx) { return (c / (x * x) + w.langer_potential(x) - l2) * v; }, p, later, 0.1 * tol, 0.1 * tol, y,
               dy);
  std::copy(y.begin(), y.end(), out.psi_ode.begin() + first);
  for (std::size_t i = 0; i < out.x.size(); ++i)
    out.max_residual = std::max(out.max_residual, std::abs(out.psi[i] - out.psi_ode[i]) / std::max(1.0, std::abs(out.psi[i])));
  return out;
}

HOmegaReport check_H_omega0(const SLWeight& w, const std::vector<double>& grid, double limit_tol) {
  HOmegaReport rep;
  if (grid.size() < 5) throw std::invalid_argument("check_H_omega0 needs at least 5 grid points");
  if (!(w.gamma > -0.5)) {
    rep.covered = false;
    rep.note = "not covered: gamma = " + std::to_string(w.gamma) + " is outside gamma > -1/2";
  }
  const std::size_t n = grid.size();
  double prev_logm = w.log_m(grid[0]);
  double prev_d = w.log_m_derivative(grid[0]);
  double prev_Q = w.langer_potential(grid[0]);
  if (!(prev_Q > 0.0)) {
    rep.potential_ok = false;
    rep.potential_witness = grid[0];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double x = grid[i];
    const double lm = w.log_m(x);
    const double d = w.log_m_derivative(x);
    const double Q = w.langer_potential(x);
    if (rep.m_increasing && !(lm > prev_logm)) {
      rep.m_increasing = false;
      rep.m_increasing_witness = x;
    }
    if (rep.log_derivative_decreasing && d > prev_d + 1e-12 * std::abs(prev_d)) {
      rep.log_derivative_decreasing = false;
      rep.decreasing_witness = x;
    }
    if (rep.potential_ok && (!(Q > 0.0) || Q > prev_Q + 1e-12 * std::abs(prev_Q))) {
      rep.potential_ok = false;
      rep.potential_witness = x;
    }
    prev_logm = lm;
    prev_d = d;
    prev_Q = Q;
  }
  // m'/m ~ 2 omega0 + c/x over the last 20% of the grid, fitted by least squares in 1/x.
  const std::size_t tail = std::max<std::size_t>(2, n / 5);
  double su = 0, sd = 0, suu = 0, sud = 0;
  for (std::size_t i = n - tail; i < n; ++i) {
    const double u = 1.0 / grid[i], d = w.log_m_derivative(grid[i]);
    su += u;
    sd += d;
    suu += u * u;
    sud += u * d;
  }
  const double t = static_cast<double>(tail);
  const double slope = (t * sud - su * sd) / (t * suu - su * su);
  rep.omega0_estimate = 0.5 * (sd - slope * su) / t;
  rep.limit_ok = std::abs(rep.omega0_estimate - w.omega0) <= limit_tol;
  if (rep.potential_ok) {
    // Q ~ x^-p on the tail; integrable when p > 1.
    const double x0 = grid[n - tail], x1 = grid[n - 1];
    const double q0 = w.langer_potential(x0), q1 = w.langer_potential(x1);
    rep.potential_tail = -std::log(q1 / q0) / std::log(x1 / x0);
    if (!(rep.potential_tail > 1.0)) {
      rep.potential_ok = false;
      rep.potential_witness = x1;
    }
  }
  return rep;
}

double growth_rate(const CharacterSolution& sol) {
  const std::size_t n = sol.x.size();
  const std::size_t tail = std::max<std::size_t>(2, n / 5);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - tail; i < n; ++i) {
    const double x = sol.x[i], y = std::log(std::abs(sol.phi[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(tail);
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace hyper
