#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyper/opcalc.hpp"
#include "hyper/specfun.hpp"

using namespace hyper;
using std::numbers::pi;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double max_abs(const CMatrix& M) { return M.cwiseAbs().maxCoeff(); }

CMatrix diag_in(const CosineFamily& C, const std::function<cplx(cplx)>& g) {
  CVector d(C.n);
  for (int j = 0; j < C.n; ++j) d[j] = g(C.eigenvalues[j]);
  return C.basis * d.asDiagonal() * C.basis.adjoint();
}

// f = e^{-x^2} on the Jacobi instance: (sqrt(pi)/(2 l)) e^{(1-l^2)/4} sin(l/2)
cplx jacobi_gauss_hat(cplx l) {
  if (std::abs(l) < 1e-8) return std::sqrt(pi) / 4.0 * std::exp(0.25);
  return std::sqrt(pi) / (2.0 * l) * std::exp((1.0 - l * l) / 4.0) * std::sin(l / 2.0);
}

}  // namespace

TEST_CASE("normal cosine families") {
  const CMatrix I2 = CMatrix::Identity(2, 2);
  const auto Z = cos_family_normal(CVector::Zero(2), I2, 0.0);
  for (double t : {0.0, 1.0, 7.5}) CHECK(max_abs(Z.cos(t) - I2) == 0.0);

  CounterRng rng(11);
  const CMatrix U = random_unitary(2, rng);
  CVector ev(2);
  ev << 1.0, cplx(2.0, 0.5);
  const auto C = cos_family_normal(ev, U, 0.5);
  CHECK(C.certified);
  CHECK(C.kappa == 1.0);
  // direct oracle: SVD of the assembled matrix against the scalar values
  const double expect = std::max(std::abs(std::cos(3.0)), std::abs(std::cos(cplx(6.0, 1.5))));
  CHECK(std::abs(spectral_norm(C.cos(3.0)) - expect) < 1e-12 * expect);
  for (double t : {0.5, 2.0, 6.0}) CHECK(spectral_norm(C.cos(t)) <= std::cosh(0.5 * t) * (1.0 + 1e-14));
  CHECK(dalembert_defect(C, 50, 3) < 1e-12);

  CVector real_ev(3);
  real_ev << -2.0, 0.3, 1.7;
  const auto Hm = cos_family_normal(real_ev, random_unitary(3, rng), 0.0);
  for (double t : {0.1, 1.0, 5.0, 40.0}) CHECK(spectral_norm(Hm.cos(t)) <= 1.0 + 1e-14);

  CVector bad(2);
  bad << 1.0, cplx(0.0, 0.7);
  CHECK_THROWS_AS(cos_family_normal(bad, I2, 0.5), SpectrumOutsideStrip);
}

TEST_CASE("dense cosine families") {
  CMatrix J(2, 2);
  J << 1.0, 1.0, 0.0, 1.0;
  const auto D = cos_family_dense(J);
  CHECK_FALSE(D.certified);
  for (double t : {0.5, 2.0, 7.0}) {
    CMatrix ref(2, 2);
    ref << std::cos(t), -t * std::sin(t), 0.0, std::cos(t);
    CHECK(max_abs(D.cos(t) - ref) < 1e-10);
  }
  CHECK(dalembert_defect(D, 30, 5) < 1e-10);

  const auto Z = cos_family_dense(CMatrix::Zero(3, 3));
  CHECK(max_abs(Z.cos(4.0) - CMatrix::Identity(3, 3)) == 0.0);
  CHECK(Z.omega0 == 0.0);

  CounterRng rng(7);
  CVector ev(4);
  ev << cplx(0.5, 0.4), cplx(-1.2, -0.1), cplx(2.0, 0.25), cplx(3.1, 0.0);
  const auto N = cos_family_normal(ev, random_unitary(4, rng), 0.4);
  const auto Nd = cos_family_dense(N.generator);
  for (double t : {0.5, 3.0, 8.0}) CHECK(max_abs(Nd.cos(t) - N.cos(t)) < 1e-9 * std::cosh(0.4 * t));
  CHECK(std::abs(Nd.omega0 - 0.4) < 0.02);
  CHECK(Nd.omega0_band < 0.05);

  CHECK_THROWS_AS(cos_family_dense(100.0 * CMatrix::Identity(2, 2)), OverflowRisk);
}

TEST_CASE("operator-valued characters") {
  const auto J = make_instance("jacobi_sl2c");
  const auto M = make_instance("mehler_fock");
  const auto Z = cos_family_normal(CVector::Zero(3), CMatrix::Identity(3, 3), 0.0);
  for (double x : {0.0, 0.7, 3.0}) {
    CHECK(max_abs(phi_A(J, Z, x).matrix - J.phi0(x) * CMatrix::Identity(3, 3)) < 1e-12);
    CHECK(max_abs(phi_A(M, Z, x).matrix - M.phi0(x) * CMatrix::Identity(3, 3)) < 1e-11);
  }

  CounterRng rng(5);
  const auto C = random_normal_family(4, 1.0, 1.0, rng);
  double sup = 0.0;
  for (double x = 0.5; x <= 8.0 + 1e-12; x += 0.5) {
    const auto r = phi_A(J, C, x);
    const CMatrix ref = diag_in(C, [x](cplx l) { return std::sin(x * l) / (l * std::sinh(x)); });
    CHECK(max_abs(r.matrix - ref) < 1e-8);
    sup = std::max(sup, spectral_norm(r.matrix));
  }
  CHECK(sup <= C.kappa * J.M0 + 1e-8);

  const auto big = cos_family_normal(CVector::Constant(2, cplx(0.0, 0.9)), CMatrix::Identity(2, 2), 0.9);
  CHECK(phi_A(M, big, 1.0).quadrature_report.find("warning") != std::string::npos);
  CHECK_THROWS_AS(phi_A(make_instance("multiplicative"), Z, 1.0), std::invalid_argument);
}

TEST_CASE("operational calculus T_A") {
  const auto J = make_instance("jacobi_sl2c");
  const TransformInput gauss{[](double x) { return cplx(std::exp(-x * x)); }, "gauss"};

  const auto Z = cos_family_normal(CVector::Zero(2), CMatrix::Identity(2, 2), 0.0);
  const double t0 = simpson([](double x) { return std::exp(-x * x) * x * std::sinh(x); }, 0.0, 12.0, 4000);
  CHECK(max_abs(T_A(J, Z, gauss).matrix - t0 * CMatrix::Identity(2, 2)) < 1e-9);

  CounterRng rng(9);
  const auto C = random_normal_family(4, 0.9, 1.0, rng);
  const auto T = T_A(J, C, gauss);
  CHECK(max_abs(T.matrix - diag_in(C, jacobi_gauss_hat)) < 1e-6);

  const double alpha = 0.6;
  const auto Ta = T_A(J, C, gauss, alpha);
  const auto Ts = T_A(J, C.scaled(alpha), gauss, 1.0);
  CHECK(max_abs(Ta.matrix - Ts.matrix) < 1e-10);
  CHECK(max_abs(Ta.matrix - diag_in(C, [&](cplx l) { return jacobi_gauss_hat(alpha * l); })) < 1e-6);
}

TEST_CASE("homomorphism battery") {
  for (const char* name : {"jacobi_sl2c", "mehler_fock"}) {
    const auto H = make_instance(name);
    BatteryOptions opt;
    opt.trials = 3;
    opt.seed = 42;
    const auto rows = homomorphism_battery(H, opt);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      INFO(name << " trial " << r.index);
      CHECK(r.rel_error <= 1e-5);
      for (const cplx& l : r.eigenvalues) CHECK(std::abs(l.imag()) <= 0.9 * H.omega0);
    }
  }
  const auto H = make_instance("jacobi_sl2c");
  BatteryOptions s;
  s.trials = 2;
  s.exec = Exec::serial;
  BatteryOptions p = s;
  p.exec = Exec::parallel;
  const auto a = homomorphism_battery(H, s);
  const auto b = homomorphism_battery(H, p);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].rel_error == b[k].rel_error);

  const auto bounds = boundedness_battery(H, s);
  for (const auto& r : bounds) {
    CHECK(r.sup_phi <= r.bound + 1e-8);
    CHECK(r.cosine_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("sine form of the Jacobi calculus") {
  CVector ev(3);
  ev << 0.0, 1.3, cplx(2.0, 0.5);
  CounterRng rng(4);
  const auto C = cos_family_normal(ev, random_unitary(3, rng), 1.0);
  for (double x : {0.0, 1e-3, 0.8, 3.0}) {
    const CMatrix ref = diag_in(C, [x](cplx l) { return std::abs(l) == 0.0 ? cplx(x) : std::sin(x * l) / l; });
    CHECK(max_abs(sin_over(C, x) - ref) < 1e-14);
  }
  const auto zero = cos_family_normal(CVector::Zero(1), CMatrix::Identity(1, 1), 0.0);
  CHECK(sin_over(zero, 2.5)(0, 0) == cplx(2.5));

  const auto J = make_instance("jacobi_sl2c");
  const TransformInput gauss{[](double x) { return cplx(std::exp(-x * x)); }, "gauss"};
  for (double alpha : {1.0, 0.5}) {
    const auto a = T_jacobi_sine(C, gauss, alpha);
    const auto b = T_A(J, C, gauss, alpha);
    CHECK(max_abs(a.matrix - b.matrix) < 1e-6);
  }

  // e^{-x/4} sech^2 x: finite and stable under refinement
  auto f = [](double x) { return cplx(std::exp(-0.25 * x) / std::pow(std::cosh(x), 2)); };
  const auto coarse = T_jacobi_sine(C, f, Grid::composite(J, 0.0, 80.0, 80, 12), 0.5);
  const auto fine = T_jacobi_sine(C, f, Grid::composite(J, 0.0, 80.0, 160, 12), 0.5);
  CHECK(coarse.matrix.allFinite());
  CHECK(max_abs(coarse.matrix - fine.matrix) < 1e-10 * max_abs(fine.matrix));
}

TEST_CASE("Mellin operator calculus") {
  auto h2 = [](double x) { return 4.0 / pi * x * x / (1.0 + std::pow(x, 4)); };
  auto sec = [](cplx s) { return 1.0 / std::cos(pi * s / 4.0); };
  CMatrix A = CMatrix::Zero(3, 3);
  A(0, 0) = 0.5;
  A(1, 1) = 1.0;
  A(2, 2) = 2.0;
  const auto r = mellin_operator_calculus(A, sec);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(r.matrix(j, j) - h2(A(j, j).real())) < 1e-6);
  CHECK(max_abs(r.matrix - r.matrix.diagonal().asDiagonal().toDenseMatrix()) < 1e-12);

  const auto z = mellin_operator_calculus(A, [](cplx) { return cplx(0.0); });
  CHECK(max_abs(z.matrix) == 0.0);

  const auto rows = mellin_calculus_battery(4, 3, 77, Exec::serial);
  for (const auto& t : rows) CHECK(t.error < 1e-6);

  CMatrix neg = CMatrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(mellin_operator_calculus(neg, sec), std::invalid_argument);
}

TEST_CASE("discretized convolution operators") {
  const auto J = make_instance("jacobi_sl2c");
  const Grid grid = Grid::composite(J, 0.0, 6.0, 24, 8);
  std::vector<double> wsum;
  for (double eps : {0.3, 0.15}) {
    const double mass = simpson([&](double x) { return battery_bump(x, 0.0, eps) * std::sinh(x) * std::sinh(x); }, 0.0, eps, 2000);
    auto f = [&](double x) { return cplx(battery_bump(x, 0.0, eps) / mass); };
    const auto L = lambda_op(J, f, grid);
    CHECK(L.asymmetry < 1e-12);
    Eigen::VectorXcd g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) g[i] = std::exp(-0.5 * grid.nodes[i] * grid.nodes[i]);
    const Eigen::VectorXcd Kg = L.K * g;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      num += grid.haar_weights[i] * std::norm(Kg[i] - g[i]);
      den += grid.haar_weights[i] * std::norm(g[i]);
    }
    wsum.push_back(std::sqrt(num / den));
  }
  CHECK(wsum[1] < wsum[0]);
  CHECK(wsum[1] < 2e-2);

  // K g against the grid convolution of the same data (translation on g instead of f)
  auto wide = [](double x) { return cplx(battery_bump(x, 0.0, 1.5)); };
  const auto Lw = lambda_op(J, wide, grid);
  const auto G = GridFunction::sample(grid, [](double x) { return cplx(std::exp(-0.5 * x * x)); });
  const auto FG = convolve(J, GridFunction::sample(grid, wide), G);
  Eigen::VectorXcd g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = G.values[i];
  const Eigen::VectorXcd Kg = Lw.K * g;
  double cross = 0.0, top = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cross = std::max(cross, std::abs(Kg[i] - FG.values[i]));
    top = std::max(top, std::abs(FG.values[i]));
  }
  CHECK(cross < 1e-9 * top);

  // ||Lambda_f|| against sup |f^| = f^(0) for a positive bump
  auto bump = [](double x) { return cplx(battery_bump(x, 0.0, 1.0)); };
  const double sup = forward(J, {bump, "bump", Tail::compact, 1.0}, {0.0}).values[0].real();
  const double coarse = lambda_op(J, bump, Grid::composite(J, 0.0, 12.0, 24, 8)).norm();
  const double fine = lambda_op(J, bump, Grid::composite(J, 0.0, 24.0, 48, 8)).norm();
  CHECK(std::abs(coarse / sup - 1.0) < 0.02);
  CHECK(std::abs(fine / sup - 1.0) < std::abs(coarse / sup - 1.0));
}

TEST_CASE("translation cosine families") {
  const auto flat = translation_cosine([](double) { return 1.0; }, 2.0, 5.0, 100);
  for (double t : {0.0, 0.5, 3.0}) CHECK(flat.shift_norm(t) == 1.0);
  CHECK(flat.w_p() == 0.0);

  const auto T = translation_cosine([](double x) { return std::pow(std::cosh(x), 2); }, 2.0, 10.0, 200);
  CHECK(std::abs(T.w_p() - 1.0) < 1e-3);
  const auto fit = fit_shift_growth(T, 4.0);
  CHECK(fit.exponent <= 1.05 * fit.bound);
  CHECK(fit.exponent > 0.9);

  // exact shift norm against the SVD of the weighted shift matrix
  const std::size_t n = T.nodes.size();
  for (double t : {0.5, 2.0}) {
    const long m = std::lround(t / T.h);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (long k = 0; k < static_cast<long>(n); ++k)
      if (k + m < static_cast<long>(n)) S(k, k + m) = std::sqrt(T.q(T.nodes[k]) / T.q(T.nodes[k + m]));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
    CHECK(std::abs(T.shift_norm(t) - svd.singularValues()(0)) < 1e-12 * svd.singularValues()(0));
    CHECK(T.cosine_norm(t) <= 0.5 * (T.shift_norm(t) + T.shift_norm(-t)) * (1.0 + 1e-12));
  }
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = std::exp(-T.nodes[k] * T.nodes[k]);
  const auto c = T.cosine(f, 1.0);
  const std::size_t mid = n / 2;
  CHECK(std::abs(c[mid] - std::exp(-1.0)) < 1e-15);

  auto a = [](double l) { return std::pow(1.0 - l * l, 2); };
  CHECK(intertwining_residual(make_instance("jacobi_sl2c"), a, 1.0, {0.5, 1.5}, {0.5, 1.0, 2.0, 4.0}) <= 1e-5);
  CHECK(intertwining_residual(make_instance("mehler_fock"), a, 1.0, {0.7}, {0.5, 2.0}) <= 1e-5);
}

TEST_CASE("fractional integrals") {
  const double lam = 1.0;
  auto c = [lam](double t) { return cplx(std::cos(lam * t)); };
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(std::abs(frac_integrate(FracKind::U, 1.0, c, x) - std::sin(lam * x) / lam) < 1e-9);
  }
  for (double x : {0.5, 1.0, 2.0}) {
    const cplx u = frac_integrate(FracKind::U, 0.5, c, x);
    CHECK(std::abs(u - std::sqrt(pi / 2.0) * legendre_conical(lam, x)) < 1e-6);
  }
  auto u_half = [&](double t) { return frac_integrate(FracKind::U, 0.5, c, t); };
  for (double x : {0.5, 1.0, 2.0}) CHECK(std::abs(frac_integrate(FracKind::W, 0.5, u_half, x) - std::sin(lam * x) / lam) < 1e-6);

  auto g = [](double t) { return cplx(std::exp(-0.3 * t) * std::cos(0.7 * t)); };
  for (const auto& [a, b] : {std::pair{cplx(0.5), cplx(0.7)}, std::pair{cplx(0.5, 0.3), cplx(0.4, -0.1)}}) {
    auto inner = [&](double t) { return frac_integrate(FracKind::W, b, g, t); };
    for (double x : {0.5, 1.5}) {
      CHECK(std::abs(frac_integrate(FracKind::W, a, inner, x) - frac_integrate(FracKind::W, a + b, g, x)) < 1e-6);
    }
  }
  const double h = 1e-4;
  for (double x : {0.4, 1.7}) {
    const cplx d = (frac_integrate(FracKind::U, 1.0, g, x + h) - frac_integrate(FracKind::U, 1.0, g, x - h)) / (2.0 * h);
    CHECK(std::abs(d - g(x)) < 1e-6);
  }
  CHECK(frac_integrate(FracKind::U, 0.5, c, 0.0) == cplx(0.0));
  CHECK_THROWS_AS(frac_integrate(FracKind::U, cplx(-0.1, 1.0), c, 1.0), std::domain_error);
}

TEST_CASE("fractional cosine family") {
  const auto M = make_instance("mehler_fock");
  const auto Z = cos_family_normal(CVector::Zero(2), CMatrix::Identity(2, 2), 0.0);
  for (double x : {0.5, 2.0}) {
    CHECK(max_abs(frac_cosine_family(Z, x).matrix - std::sqrt(pi / 2.0) * M.phi0(x) * CMatrix::Identity(2, 2)) < 1e-9);
  }
  CounterRng rng(21);
  const auto C = random_normal_family(3, 0.5, 0.5, rng);
  for (double x : {0.5, 1.0, 2.0, 4.0}) {
    const auto u = frac_cosine_family(C, x);
    const auto p = phi_A(M, C, x);
    CHECK(max_abs(u.matrix - std::sqrt(pi / 2.0) * p.matrix) < 1e-6);
    CHECK(spectral_norm(u.matrix) <= std::sqrt(pi / 2.0) * C.kappa * M.M0 + 1e-8);
  }
}
