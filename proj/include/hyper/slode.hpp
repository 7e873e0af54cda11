#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyper/errors.hpp"
#include "hyper/parallel.hpp"

namespace hyper {

using cplx = std::complex<double>;

/// Weight m(x) = x^(2 gamma + 1) q(x) with q smooth, even and positive.
/// beta = q'/q and its derivative may be supplied; otherwise they are taken
/// from central differences of q.
struct SLWeight {
  std::string name;
  double gamma = 0.0;
  std::function<double(double)> q;
  std::optional<std::function<double(double)>> beta;
  std::optional<std::function<double(double)>> beta_prime;
  double omega0 = 0.0;

  double log_q_derivative(double x) const;
  double log_q_second_derivative(double x) const;
  // m'/m
  double log_m_derivative(double x) const { return (2.0 * gamma + 1.0) / x + log_q_derivative(x); }
  double log_m(double x) const { return (2.0 * gamma + 1.0) * std::log(x) + std::log(q(x)); }
  // Q = beta'/2 + beta^2/4 + (2 gamma + 1) beta / (2x) - omega0^2
  double langer_potential(double x) const;
};

/// Builtins: "jacobi" (m = sinh^2), "mehler" (m = sinh), "bessel" (m = x^(2 gamma + 1)),
/// "cosh" (m = cosh^k x, gamma = -1/2, outside the covered class).
SLWeight builtin_weight(const std::string& name, double param = 0.0);

struct CharacterSolution {
  cplx lambda;
  std::vector<double> x;
  std::vector<cplx> phi;
  std::vector<cplx> dphi;
};

struct SolveOptions {
  double tol = 1e-11;
  int points = 201;  // uniform output grid on [0, x_max], used when nodes is empty
  std::vector<double> nodes;
};

/// Solves phi'' + (m'/m) phi' + (omega0^2 + lambda^2) phi = 0 with phi(0) = 1,
/// phi'(0) = 0. A two-term Frobenius series carries the solution off the
/// singular point, then dopri5 with dense output takes over.
/// Throws SingularStart for gamma <= -1/2 and StepFailure when the stepper stalls.
CharacterSolution solve_character(const SLWeight& w, cplx lambda, double x_max, const SolveOptions& opt = {});

std::vector<CharacterSolution> solve_characters(const SLWeight& w, const std::vector<cplx>& lambdas, double x_max,
                                                const SolveOptions& opt = {}, Exec exec = Exec::parallel);

struct LangerSolution {
  std::vector<double> x;
  std::vector<cplx> psi;       // sqrt(m) phi from the character solution
  std::vector<cplx> psi_ode;   // independent solve of -psi'' + V psi = lambda^2 psi
  double max_residual = 0.0;   // max |psi - psi_ode| / max(1, |psi|)
};

/// psi = sqrt(m) phi, checked against a direct integration of the Liouville
/// normal form with potential (4 gamma^2 - 1)/(4 x^2) + Q(x).
LangerSolution langer_transform(const SLWeight& w, const CharacterSolution& sol, double tol = 1e-11);

struct HOmegaReport {
  bool covered = true;  // gamma > -1/2
  std::string note;
  bool m_increasing = true;
  double m_increasing_witness = 0.0;
  double omega0_estimate = 0.0;  // half the intercept of m'/m against 1/x on the tail
  bool limit_ok = true;
  bool log_derivative_decreasing = true;  // condition (iii)
  double decreasing_witness = 0.0;
  bool potential_ok = true;  // condition (iv): Q > 0, decreasing, integrable tail
  double potential_witness = 0.0;
  double potential_tail = 0.0;
  bool passed() const { return covered && m_increasing && limit_ok && (log_derivative_decreasing || potential_ok); }
};

/// Grid check of the growth conditions on m. limit_tol bounds |omega0_estimate - omega0|.
HOmegaReport check_H_omega0(const SLWeight& w, const std::vector<double>& grid, double limit_tol = 1e-2);

/// Slope of log |phi| over the last 20% of the grid.
double growth_rate(const CharacterSolution& sol);

}  // namespace hyper
