// hyperharm: characters, transforms, operator calculus, acceptance checks and geometry tables.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "hyper/geom.hpp"
#include "hyper/io.hpp"
#include "hyper/opcalc.hpp"
#include "hyper/rng.hpp"
#include "hyper/slode.hpp"
#include "hyper/specfun.hpp"
#include "hyper/transforms.hpp"
#include "hyper/verify.hpp"

using namespace hyper;
using std::numbers::pi;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON config: scalars and arrays set options, objects hold subcommand sections.
class ConfigJSON : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, v] : j.items()) {
      if (v.is_object()) {
        auto p = parents;
        p.push_back(key);
        collect(v, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(v));
      }
      out.push_back(std::move(item));
    }
  }
};

struct Output {
  std::string path = "-";
  std::string format = "csv";
  std::uint64_t seed = 20240607;
};

void add_output(CLI::App* sc, Output& o) {
  sc->add_option("--out,-o", o.path, "output file, '-' for stdout");
  sc->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sc->add_option("--seed", o.seed, "seed for random batteries (recorded in every output)");
}

void emit(const Table& t, const Output& o) {
  write_output(o.path, o.format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv());
}

std::string spec_text(const QuadSpec& s) {
  return "abs_tol " + fmt_short(s.abs_tol) + ", rel_tol " + fmt_short(s.rel_tol) + ", max_subdivisions " + fmt(s.max_subdivisions);
}

Metadata base_meta(const std::string& command, const std::string& computes, const Output& o) {
  Metadata m;
  m.add("command", command);
  m.add("computes", computes);
  m.add("seed", std::to_string(o.seed));
  m.add("rng", CounterRng::kName);
  return m;
}

// "1.5", "2i", "-0.5i", "1+0.3i", "1-2i"
cplx parse_cplx(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw UsageError("empty number");
  auto num = [&s](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + s + "'");
    }
    if (used != t.size()) throw UsageError("cannot parse number '" + s + "'");
    return v;
  };
  if (s.back() != 'i') return num(s);
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [&](const std::string& t) { return t.empty() || t == "+" ? 1.0 : t == "-" ? -1.0 : num(t); };
  if (split == std::string::npos) return {0.0, imag(body)};
  return {num(body.substr(0, split)), imag(body.substr(split))};
}

std::vector<cplx> parse_cplx_list(const std::vector<std::string>& v) {
  std::vector<cplx> out;
  for (const auto& s : v) out.push_back(parse_cplx(s));
  return out;
}

std::string cplx_text(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

std::string instance_meta(const HypergroupInstance& H) {
  return H.name + " (omega0 " + fmt_short(H.omega0) + ", M0 " + fmt_short(H.M0) + ", gamma " + fmt_short(H.gamma) + ", c_H " +
         (H.plancherel_constant ? fmt_short(*H.plancherel_constant) : std::string("unset")) + ")";
}

// ---------------------------------------------------------------- characters

struct CharactersCfg {
  std::string instance = "jacobi_sl2c";
  double gamma = 0.0;
  std::vector<std::string> lambda = {"1"};
  double xmax = 5.0;
  int points = 51;
  std::string method = "both";
  double ode_tol = 1e-11;
  Output out;
};

std::optional<SLWeight> ode_weight(const HypergroupInstance& H) {
  if (H.name == "jacobi_sl2c") return builtin_weight("jacobi");
  if (H.name == "mehler_fock") return builtin_weight("mehler");
  if (H.name == "bessel_kingman") return builtin_weight("bessel", H.gamma);
  return std::nullopt;
}

int cmd_characters(const CharactersCfg& c) {
  if (c.lambda.empty()) throw UsageError("empty lambda grid");
  if (c.points < 1) throw UsageError("empty x grid");
  if (!(c.xmax > 0.0)) throw UsageError("--xmax must be positive");
  const auto H = make_instance(c.instance, c.gamma);
  const auto ls = parse_cplx_list(c.lambda);
  const bool mult = H.inverse_involution;
  std::vector<double> xs;
  for (int k = 0; k < c.points; ++k) {
    const double u = c.points == 1 ? 0.0 : c.xmax * k / (c.points - 1);
    xs.push_back(mult ? std::exp(2.0 * u - c.xmax) : u);
  }
  const auto w = ode_weight(H);
  const bool want_closed = c.method != "ode";
  const bool want_ode = c.method != "closed";
  if (want_ode && !w && c.method == "ode") throw UsageError("no ODE path for the " + H.name + " instance");

  Table t;
  t.meta = base_meta("characters", "phi_lambda(x) by closed form " + H.character_formula +
                                       (want_ode && w ? " and by the radial ODE phi'' + (m'/m) phi' + (omega0^2 + lambda^2) phi = 0"
                                                      : ""),
                     c.out);
  t.meta.add("instance", instance_meta(H));
  t.meta.add("grid", mult ? "x = exp(u), u uniform on [-" + fmt_short(c.xmax) + ", " + fmt_short(c.xmax) + "], " + fmt(c.points) + " points"
                          : "x uniform on [0, " + fmt_short(c.xmax) + "], " + fmt(c.points) + " points");
  t.meta.add("lambda", join(c.lambda));
  if (want_ode && w) t.meta.add("tolerances", "ODE abs/rel tol " + fmt_short(c.ode_tol));
  if (want_ode && !w) t.meta.add("note", "no ODE path for this instance; closed form only");
  t.columns = {"x", "lambda_re", "lambda_im", "closed_re", "closed_im", "ode_re", "ode_im", "disagreement"};

  std::vector<CharacterSolution> sols;
  if (want_ode && w) {
    SolveOptions opt;
    opt.tol = c.ode_tol;
    opt.nodes = xs;
    sols = solve_characters(*w, ls, c.xmax, opt);
  }
  for (std::size_t j = 0; j < ls.size(); ++j)
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<std::string> row = {fmt(xs[i]), fmt(ls[j].real()), fmt(ls[j].imag())};
      cplx a, b;
      if (want_closed) {
        a = H.character(ls[j], xs[i]);
        row.push_back(fmt(a.real()));
        row.push_back(fmt(a.imag()));
      } else {
        row.insert(row.end(), {"", ""});
      }
      if (!sols.empty()) {
        b = sols[j].phi[i];
        row.push_back(fmt(b.real()));
        row.push_back(fmt(b.imag()));
      } else {
        row.insert(row.end(), {"", ""});
      }
      row.push_back(want_closed && !sols.empty() ? fmt(std::abs(a - b)) : "");
      t.add_row(std::move(row));
    }
  emit(t, c.out);
  return 0;
}

// ----------------------------------------------------------------- transform

struct TransformCfg {
  std::string instance = "mehler_fock";
  double gamma = 0.0;
  std::string f = "sech_half";
  int N = 2;
  bool mellin = false;
  bool inverse = false;
  std::vector<std::string> lambda = {"0.5", "1", "2", "4"};
  std::vector<std::string> s = {"0.5i", "1i", "2i"};
  std::vector<double> x = {0.1, 0.5, 1.0, 2.0, 3.0};
  double lambda_max = 40.0;
  double sigma = 0.0;
  double abs_tol = 0.0, rel_tol = 0.0;
  Output out;
};

struct Named {
  TransformInput f;
  std::function<cplx(cplx)> fhat;  // empty when no closed form is known
  std::string fhat_formula;
};

double cosech(double t) { return 1.0 / std::sinh(t); }

Named hypergroup_input(const HypergroupInstance& H, const TransformCfg& c) {
  const bool mf = H.name == "mehler_fock";
  Named n;
  auto sech_pow = [](int k) { return [k](double x) { return cplx(std::pow(std::cosh(0.5 * x), -k)); }; };
  if (c.f == "sech_half") {
    n.f = {sech_pow(1), "sech(x/2)", mf ? Tail::oscillatory : Tail::exponential};
    if (mf) {
      n.fhat = [](cplx l) { return 2.0 / l / std::sinh(pi * l); };
      n.fhat_formula = "(2/lambda) cosech(pi lambda)";
    }
  } else if (c.f == "sech3_half") {
    n.f = {sech_pow(3), "sech^3(x/2)"};
    if (mf) {
      n.fhat = [](cplx l) { return 8.0 * l / std::sinh(pi * l); };
      n.fhat_formula = "8 lambda cosech(pi lambda)";
    }
  } else if (c.f == "sech5_half") {
    n.f = {sech_pow(5), "sech^5(x/2)"};
    if (mf) {
      n.fhat = [](cplx l) { return 32.0 / 9.0 * l * (1.0 + l * l) / std::sinh(pi * l); };
      n.fhat_formula = "(32/9) lambda (1 + lambda^2) cosech(pi lambda), from the sech^3 pair and the radial operator";
    }
  } else if (c.f == "gauss") {
    if (H.inverse_involution) {
      n.f = {[](double x) { return cplx(std::exp(-std::log(x) * std::log(x))); }, "exp(-log^2 x)"};
      n.fhat = [](cplx l) { return std::sqrt(pi) * std::exp(-l * l / 4.0); };
      n.fhat_formula = "sqrt(pi) exp(-lambda^2/4)";
    } else {
      n.f = {[](double x) { return cplx(std::exp(-x * x)); }, "exp(-x^2)"};
      if (H.name == "jacobi_sl2c") {
        n.fhat = [](cplx l) {
          if (std::abs(l) < 1e-8) return cplx(std::sqrt(pi) / 4.0 * std::exp(0.25));
          return std::sqrt(pi) / (2.0 * l) * std::exp((1.0 - l * l) / 4.0) * std::sin(l / 2.0);
        };
        n.fhat_formula = "(sqrt(pi)/(2 lambda)) exp((1 - lambda^2)/4) sin(lambda/2)";
      } else if (H.name == "bessel_kingman") {
        const double g = H.gamma;
        n.fhat = [g](cplx l) { return std::tgamma(g + 1.0) / 2.0 * std::exp(-l * l / 4.0); };
        n.fhat_formula = "Gamma(gamma+1)/2 exp(-lambda^2/4)";
      }
    }
  } else if (c.f == "bump") {
    if (H.inverse_involution) {
      n.f = {[](double x) { return cplx(battery_bump(std::log(x), 0.0, 2.0)); }, "(1 - (log x/2)^2)^8", Tail::exponential};
    } else {
      n.f = {[](double x) { return cplx(battery_bump(x, 0.0, 2.0)); }, "(1 - (x/2)^2)^8", Tail::compact, 2.0};
    }
  } else if (c.f == "h_N") {
    if (!H.inverse_involution) throw UsageError("h_N is a Mellin-side function; use --mellin or the multiplicative instance");
    const int N = c.N;
    n.f = {[N](double x) { return cplx(2.0 * N / pi * std::pow(x, N) / (1.0 + std::pow(x, 2 * N))); }, "h_" + std::to_string(N)};
    n.fhat = [N](cplx l) { return 1.0 / std::cos(pi * cplx(0.0, 1.0) * l / (2.0 * N)); };
    n.fhat_formula = "sec(pi i lambda / 2N)";
  } else {
    throw UsageError("unknown function '" + c.f + "' for " + H.name);
  }
  return n;
}

struct NamedMellin {
  MellinInput f;
  std::function<cplx(cplx)> fstar;
  std::string formula;
};

NamedMellin mellin_input(const TransformCfg& c) {
  NamedMellin n;
  if (c.f == "h_N") {
    if (c.N < 1) throw UsageError("--N must be at least 1");
    const int N = c.N;
    n.f = {[N](double x) { return cplx(2.0 * N / pi * std::pow(x, N) / (1.0 + std::pow(x, 2 * N))); },
           "h_" + std::to_string(N) + "(x) = (2N/pi) x^N/(1+x^2N)"};
    n.fstar = [N](cplx s) { return 1.0 / std::cos(pi * s / (2.0 * N)); };
    n.formula = "sec(pi s / 2N)";
  } else if (c.f == "sqrt_j0") {
    n.f = {[](double x) { return cplx(std::sqrt(x) * std::cyl_bessel_j(0.0, x)); }, "sqrt(x) J_0(x)", 1.0};
    n.fstar = [](cplx s) {
      const cplx g = gamma_complex(s / 2.0 + 0.25);
      return std::pow(2.0, s - 0.5) / pi * std::sin(pi * (s / 2.0 + 0.25)) * g * g;
    };
    n.formula = "(2^{s-1/2}/pi) sin(pi(s/2+1/4)) Gamma(s/2+1/4)^2";
  } else if (c.f == "exp") {
    n.f = {[](double x) { return cplx(std::exp(-x)); }, "exp(-x)"};
    n.fstar = gamma_complex;
    n.formula = "Gamma(s)";
  } else {
    throw UsageError("unknown Mellin function '" + c.f + "' (h_N, sqrt_j0, exp)");
  }
  return n;
}

QuadSpec user_spec(const TransformCfg& c) {
  QuadSpec s = transform_spec();
  if (c.abs_tol > 0.0) s.abs_tol = c.abs_tol;
  if (c.rel_tol > 0.0) s.rel_tol = c.rel_tol;
  return s;
}

void add_value_row(Table& t, cplx at, cplx v, double err, const std::function<cplx(cplx)>& ref) {
  std::vector<std::string> row = {fmt(at.real()), fmt(at.imag()), fmt(v.real()), fmt(v.imag()), fmt(err)};
  if (ref) {
    const cplx r = ref(at);
    row.insert(row.end(), {fmt(r.real()), fmt(r.imag()), fmt(std::abs(v - r) / std::abs(r))});
  } else {
    row.insert(row.end(), {"", "", ""});
  }
  t.add_row(std::move(row));
}

void add_inverse_rows(Table& t, const InverseResult& r, const std::function<cplx(double)>& f) {
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const cplx o = f(r.x[i]);
    t.add_row({fmt(r.x[i]), fmt(r.values[i].real()), fmt(r.values[i].imag()), fmt(o.real()), fmt(o.imag()),
               fmt(std::abs(r.values[i] - o))});
  }
}

int cmd_transform(const TransformCfg& c) {
  const QuadSpec spec = user_spec(c);
  Table t;
  if (c.mellin) {
    const auto n = mellin_input(c);
    if (c.inverse) {
      if (c.x.empty()) throw UsageError("empty x grid");
      InverseOptions io;
      io.sigma = c.sigma;
      io.spec = spec;
      const auto r = mellin_inverse(n.fstar, c.x, io);
      t.meta = base_meta("transform --mellin --inverse",
                         "f(x) = (1/2 pi) int x^{-(sigma + i tau)} f*(sigma + i tau) d tau with f* = " + n.formula, c.out);
      t.meta.add("f", n.f.descriptor);
      t.meta.add("grid", "x in {" + [&] {
        std::vector<std::string> v;
        for (double x : c.x) v.push_back(fmt_short(x));
        return join(v);
      }() + "}, line Re s = " + fmt_short(c.sigma));
      t.meta.add("tolerances", spec_text(spec));
      t.meta.add("tail_envelope", r.tail_envelope);
      t.columns = {"x", "recovered_re", "recovered_im", "original_re", "original_im", "abs_error"};
      add_inverse_rows(t, r, n.f.f);
    } else {
      if (c.s.empty()) throw UsageError("empty s grid");
      ForwardOptions fo;
      fo.spec = spec;
      const auto s = parse_cplx_list(c.s);
      const auto r = mellin_forward(n.f, s, fo);
      t.meta = base_meta("transform --mellin", "f*(s) = int_0^inf f(x) x^{s-1} dx against " + n.formula, c.out);
      t.meta.add("f", n.f.descriptor);
      t.meta.add("grid", "s in {" + join(c.s) + "}");
      t.meta.add("tolerances", spec_text(spec));
      t.columns = {"s_re", "s_im", "value_re", "value_im", "quadrature_error", "reference_re", "reference_im", "rel_error"};
      for (std::size_t i = 0; i < s.size(); ++i) add_value_row(t, s[i], r.values[i], r.errors[i], n.fstar);
    }
    emit(t, c.out);
    return 0;
  }

  const auto H = make_instance(c.instance, c.gamma);
  const auto n = hypergroup_input(H, c);
  if (c.inverse) {
    if (c.x.empty()) throw UsageError("empty x grid");
    InverseOptions io;
    io.lambda_max = c.lambda_max;
    io.spec = spec;
    ForwardOptions fo;
    fo.spec = spec;
    fo.exec = Exec::serial;
    std::function<cplx(double)> fhat;
    std::string source;
    if (n.fhat) {
      fhat = [&](double l) { return n.fhat(cplx(l)); };
      source = n.fhat_formula;
    } else {
      fhat = [&](double l) { return forward(H, n.f, {cplx(l)}, fo).values[0]; };
      source = "forward transform at each lambda";
    }
    const auto r = inverse_plancherel(H, fhat, c.x, io);
    t.meta = base_meta("transform --inverse", "f(x) = c_H int f^(lambda) conj(phi_lambda(x)) pi0(lambda) d lambda, " +
                                                  H.plancherel_formula,
                       c.out);
    t.meta.add("instance", instance_meta(H));
    t.meta.add("f", n.f.descriptor);
    t.meta.add("fhat", source);
    t.meta.add("grid", "lambda in [0, " + fmt_short(c.lambda_max) + "]");
    t.meta.add("tolerances", spec_text(spec));
    t.meta.add("tail_envelope", r.tail_envelope);
    t.columns = {"x", "recovered_re", "recovered_im", "original_re", "original_im", "abs_error"};
    add_inverse_rows(t, r, n.f.f);
  } else {
    if (c.lambda.empty()) throw UsageError("empty lambda grid");
    const auto ls = parse_cplx_list(c.lambda);
    ForwardOptions fo;
    fo.spec = spec;
    const auto r = forward(H, n.f, ls, fo);
    t.meta = base_meta("transform", "f^(lambda) = int_0^inf f(x) phi_lambda(x) m(x) dx, phi = " + H.character_formula +
                                        ", m = " + H.haar_formula +
                                        (n.fhat ? ", against " + n.fhat_formula : std::string()),
                       c.out);
    t.meta.add("instance", instance_meta(H));
    t.meta.add("f", n.f.descriptor);
    t.meta.add("grid", "lambda in {" + join(c.lambda) + "}");
    t.meta.add("tolerances", spec_text(spec));
    t.columns = {"lambda_re", "lambda_im", "value_re", "value_im", "quadrature_error", "reference_re", "reference_im", "rel_error"};
    for (std::size_t i = 0; i < ls.size(); ++i) add_value_row(t, ls[i], r.values[i], r.errors[i], n.fhat);
  }
  emit(t, c.out);
  return 0;
}

// -------------------------------------------------------------------- opcalc

struct OpcalcCfg {
  std::string instance = "jacobi_sl2c";
  std::string matrix;  // JSON file; random normal draw when empty
  int dim = 4;
  double strip_fraction = 0.9;
  int trials = 20;
  double xmax = 8.0;
  double step = 0.25;
  double center = 0.0, width = 1.0;
  std::string emit = "sweep";
  Output out;
};

CMatrix read_matrix(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("matrix file is not valid JSON: " + std::string(e.what()));
  }
  if (j.is_object() && j.contains("matrix")) j = j["matrix"];
  if (!j.is_array() || j.empty()) throw UsageError("matrix must be a nonempty array of rows");
  const std::size_t n = j.size();
  CMatrix A(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw UsageError("matrix must be square");
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = j[r][k];
      if (e.is_number()) {
        A(r, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        A(r, k) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw UsageError("matrix entries are numbers or [re, im] pairs");
      }
    }
  }
  return A;
}

// Normal matrices get the spectral family through the Schur form; others the dense series.
CosineFamily family_from(const CMatrix& A, double omega0) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A * A.adjoint() - A.adjoint() * A).cwiseAbs().maxCoeff() <= 1e-12 * scale * scale) {
    Eigen::ComplexSchur<CMatrix> schur(A);
    const CMatrix T = schur.matrixT();
    return cos_family_normal(T.diagonal(), schur.matrixU(), omega0);
  }
  return cos_family_dense(A);
}

int cmd_opcalc(const OpcalcCfg& c) {
  if (c.xmax < 0.0 || !(c.step > 0.0)) throw UsageError("empty x grid");
  const auto H = make_instance(c.instance);
  if (!H.laplace_kernel) throw UsageError("the " + H.name + " instance has no Laplace kernel");
  Table t;
  BatteryOptions b;
  b.trials = c.trials;
  b.dimension = c.dim;
  b.seed = c.out.seed;
  b.strip_fraction = c.strip_fraction;

  if (c.emit == "homomorphism") {
    if (c.trials < 1 || c.dim < 1) throw UsageError("empty battery");
    const auto rows = homomorphism_battery(H, b);
    const auto bounds = boundedness_battery(H, b, c.xmax);
    t.meta = base_meta("opcalc --emit homomorphism",
                       "||T_A(f*g) - T_A(f) T_A(g)||_F / (||T_A(f)||_F ||T_A(g)||_F) and sup_x ||phi_A(x)||_2 against kappa M0", c.out);
    t.meta.add("instance", instance_meta(H));
    t.meta.add("battery", fmt(c.trials) + " random normal " + fmt(c.dim) + "x" + fmt(c.dim) + " matrices, spectrum in |Im| <= " +
                              fmt_short(c.strip_fraction) + " omega0; bumps (1 - ((x-c)/w)^2)^8");
    t.meta.add("grid", "convolution grid composite Gauss-Legendre on [0, 3.5], 20 panels x 12 nodes; sup over x in {0, 0.25, ..., " +
                           fmt_short(c.xmax) + "}");
    t.meta.add("tolerances", spec_text(operator_spec()));
    t.columns = {"trial", "eigenvalues", "f_center", "f_width", "g_center", "g_width", "rel_error", "sup_phi", "kappa_M0"};
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<std::string> ev;
      for (const cplx& l : rows[k].eigenvalues) ev.push_back(cplx_text(l));
      t.add_row({fmt(rows[k].index), join(ev), fmt(rows[k].f_center), fmt(rows[k].f_width), fmt(rows[k].g_center),
                 fmt(rows[k].g_width), fmt(rows[k].rel_error), fmt(bounds[k].sup_phi), fmt(bounds[k].bound)});
    }
    emit(t, c.out);
    return 0;
  }

  CosineFamily C;
  std::string source;
  if (!c.matrix.empty()) {
    C = family_from(read_matrix(c.matrix), H.omega0);
    source = "matrix file " + c.matrix;
  } else {
    if (c.dim < 1) throw UsageError("--dim must be positive");
    CounterRng rng = CounterRng(c.out.seed).substream(0);
    C = random_normal_family(c.dim, c.strip_fraction * H.omega0, H.omega0, rng);
    source = "random normal " + fmt(c.dim) + "x" + fmt(c.dim) + ", spectrum in |Im| <= " + fmt_short(c.strip_fraction) + " omega0";
  }
  auto family_meta = [&](Table& tb) {
    tb.meta.add("instance", instance_meta(H));
    tb.meta.add("matrix", source);
    tb.meta.add("family", C.method_tag + ", kappa " + fmt_short(C.kappa) + ", omega0 " + fmt_short(C.omega0) +
                              (C.certified ? ", certified" : ", fitted band " + fmt_short(C.omega0_band)));
    tb.meta.add("tolerances", spec_text(operator_spec()));
  };

  if (c.emit == "sweep") {
    t.meta = base_meta("opcalc --emit sweep", "||phi_A(x)||_2 with phi_A(x) = int cos(tA) tau_x(dt), against kappa M0", c.out);
    family_meta(t);
    t.meta.add("grid", "x in {0, " + fmt_short(c.step) + ", ..., " + fmt_short(c.xmax) + "}");
    t.columns = {"x", "norm_phi_A", "kappa_M0", "quadrature_error"};
    const int count = static_cast<int>(std::floor(c.xmax / c.step + 1e-9)) + 1;
    std::vector<OperatorResult> res(static_cast<std::size_t>(count));
    parallel_for(res.size(), Exec::parallel, [&](std::size_t k) { res[k] = phi_A(H, C, c.step * static_cast<double>(k)); });
    for (int k = 0; k < count; ++k)
      t.add_row({fmt(c.step * k), fmt(spectral_norm(res[k].matrix)), fmt(C.kappa * H.M0), fmt(res[k].error)});
  } else if (c.emit == "ta") {
    if (!(c.width > 0.0)) throw UsageError("--width must be positive");
    const double cc = c.center, w = c.width;
    const TransformInput f{[cc, w](double x) { return cplx(battery_bump(x, cc, w)); }, "(1 - ((x-c)/w)^2)^8", Tail::compact, cc + w};
    const auto r = T_A(H, C, f);
    t.meta = base_meta("opcalc --emit ta", "T_A(f) = int_0^inf f(x) phi_A(x) m(x) dx", c.out);
    family_meta(t);
    t.meta.add("f", "(1 - ((x-" + fmt_short(cc) + ")/" + fmt_short(w) + ")^2)^8");
    t.meta.add("grid", "adaptive on [" + fmt_short(std::max(0.0, cc - w)) + ", " + fmt_short(cc + w) + "]");
    t.meta.add("quadrature_error", r.error);
    t.columns = {"row", "col", "re", "im"};
    for (Eigen::Index i = 0; i < r.matrix.rows(); ++i)
      for (Eigen::Index j = 0; j < r.matrix.cols(); ++j)
        t.add_row({fmt(static_cast<int>(i)), fmt(static_cast<int>(j)), fmt(r.matrix(i, j).real()), fmt(r.matrix(i, j).imag())});
  } else {
    throw UsageError("unknown --emit " + c.emit);
  }
  emit(t, c.out);
  return 0;
}

// -------------------------------------------------------------------- verify

struct VerifyCfg {
  std::vector<std::string> only;
  std::string inject_fault;
  bool serial = false;
  Output out;
};

int cmd_verify(const VerifyCfg& c) {
  VerifyOptions opt;
  opt.only = c.only;
  opt.seed = c.out.seed;
  opt.inject_fault = c.inject_fault;
  opt.exec = c.serial ? Exec::serial : Exec::parallel;
  for (const auto& k : opt.only) criterion_id(k);  // unknown names are usage errors
  if (!opt.inject_fault.empty() && opt.inject_fault != "plancherel") throw UsageError("unknown fault " + opt.inject_fault);
  const auto rep = run_verify(opt);
  for (const auto& r : rep.results)
    std::fprintf(stderr, "%s %2d %-28s %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str());
  if (c.out.format == "csv") {
    Table t;
    t.meta = base_meta("verify", "acceptance criteria", c.out);
    t.meta.add("inject_fault", c.inject_fault.empty() ? "none" : c.inject_fault);
    t.columns = {"id", "name", "passed", "summary", "computes"};
    for (const auto& r : rep.results) t.add_row({fmt(r.id), r.name, r.passed ? "true" : "false", r.summary, r.computes});
    emit(t, c.out);
  } else {
    write_output(c.out.path, rep.to_json().dump(2) + "\n");
  }
  if (!rep.all_passed()) {
    std::fprintf(stderr, "failing: %s\n", join(rep.failing()).c_str());
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------- geom

struct GeomCfg {
  std::vector<int> n = {2, 3, 4, 5, 6};
  double xmax = 6.0;
  int points = 60;
  double slope_r = 15.0;
  std::string table;
  Output out;
};

int cmd_geom(const GeomCfg& c) {
  Table t;
  if (!c.table.empty()) {
    RadialTable rt;
    try {
      rt = read_radial_table_csv(c.table);
    } catch (const NumericError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    if (rt.r.empty()) throw UsageError("radial table is empty");
    const auto rep = check_radial_table(rt);
    t.meta = base_meta("geom --table", "sigma/m monotonicity, m increments against int sigma, and (log m)'' on a tabulated profile", c.out);
    t.meta.add("grid", c.table + ", " + fmt(rt.r.size()) + " rows");
    t.columns = {"max_sigma_vs_dm", "ratio_decreasing", "ratio_infimum", "ratio_tail", "max_log_m_second_derivative"};
    t.add_row({fmt(rep.max_sigma_vs_dm), rep.ratio_decreasing ? "true" : "false", fmt(rep.ratio_infimum), fmt(rep.ratio_tail),
               fmt(rep.max_log_m_second_derivative)});
    emit(t, c.out);
    return 0;
  }
  if (c.n.empty() || c.points < 1 || !(c.xmax > 0.0)) throw UsageError("empty grid");
  for (int n : c.n)
    if (n < 2) throw UsageError("dimension must be at least 2");
  std::vector<double> xs;
  for (int k = 1; k <= c.points; ++k) xs.push_back(c.xmax * k / c.points);
  t.meta = base_meta("geom",
                     "h0 = n cosh x I_n - sinh^{n+1} x, h1 = n I_n - cosh x sinh^{n-1} x (I_n = int_0^x sinh^n), "
                     "(log m)'' for the curvature -1 ball volume, and sigma/m at r",
                     c.out);
  t.meta.add("grid", "x in (0, " + fmt_short(c.xmax) + "], " + fmt(c.points) + " uniform points; slope at r = " + fmt_short(c.slope_r));
  t.meta.add("tolerances", "h0 <= 0, h1 <= 0, (log m)'' <= 1e-8, |sigma/m - (n-1)| <= 1e-3");
  t.columns = {"n", "x", "h0", "h1", "d2_log_m", "slope_at_r"};
  for (int n : c.n) {
    const auto rep = log_concavity_witness(n, xs);
    const double slope = log_volume_slope(n, c.slope_r);
    for (std::size_t i = 0; i < xs.size(); ++i)
      t.add_row({fmt(n), fmt(xs[i]), fmt(rep.h0[i]), fmt(rep.h1[i]), fmt(rep.d2_log_m[i]), fmt(slope)});
  }
  emit(t, c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergroup harmonic analysis toolkit"};
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON file with defaults; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  CharactersCfg ch;
  auto* sc = app.add_subcommand("characters", "tabulate phi_lambda(x) from the closed form and the ODE");
  sc->add_option("--instance", ch.instance, "multiplicative, bessel_kingman, jacobi_sl2c or mehler_fock");
  sc->add_option("--gamma", ch.gamma, "Bessel-Kingman index");
  sc->add_option("--lambda", ch.lambda, "spectral points, e.g. 1,0.5+0.2i")->delimiter(',');
  sc->add_option("--xmax", ch.xmax, "upper end of the x grid");
  sc->add_option("--points", ch.points, "number of x points");
  sc->add_option("--method", ch.method, "closed, ode or both")->check(CLI::IsMember({"closed", "ode", "both"}));
  sc->add_option("--ode-tol", ch.ode_tol, "ODE tolerance");
  add_output(sc, ch.out);

  TransformCfg tr;
  auto* st = app.add_subcommand("transform", "forward and inverse transforms");
  st->add_option("--instance", tr.instance, "hypergroup instance");
  st->add_option("--gamma", tr.gamma, "Bessel-Kingman index");
  st->add_option("--f", tr.f, "sech_half, sech3_half, sech5_half, gauss, bump, h_N, sqrt_j0, exp");
  st->add_option("--N", tr.N, "index of h_N");
  st->add_flag("--mellin", tr.mellin, "Mellin transform instead of the hypergroup transform");
  st->add_flag("--inverse", tr.inverse, "inversion round trip on the x grid");
  st->add_option("--lambda", tr.lambda, "spectral points")->delimiter(',');
  st->add_option("--s", tr.s, "Mellin points")->delimiter(',');
  st->add_option("--x", tr.x, "inversion points")->delimiter(',');
  st->add_option("--lambda-max", tr.lambda_max, "cut of the Plancherel integral");
  st->add_option("--sigma", tr.sigma, "Mellin inversion line Re s");
  st->add_option("--abs-tol", tr.abs_tol, "quadrature absolute tolerance");
  st->add_option("--rel-tol", tr.rel_tol, "quadrature relative tolerance");
  add_output(st, tr.out);

  OpcalcCfg op;
  auto* so = app.add_subcommand("opcalc", "operator-valued characters and calculus");
  so->add_option("--instance", op.instance, "hypergroup instance with a Laplace kernel");
  so->add_option("--matrix", op.matrix, "JSON matrix file (rows of numbers or [re, im] pairs)");
  so->add_option("--dim", op.dim, "dimension of random matrices");
  so->add_option("--strip-fraction", op.strip_fraction, "spectrum in |Im| <= fraction * omega0");
  so->add_option("--trials", op.trials, "battery size");
  so->add_option("--xmax", op.xmax, "end of the x sweep");
  so->add_option("--step", op.step, "x step of the sweep");
  so->add_option("--center", op.center, "bump center for T_A(f)");
  so->add_option("--width", op.width, "bump half-width for T_A(f)");
  so->add_option("--emit", op.emit, "sweep, ta or homomorphism")->check(CLI::IsMember({"sweep", "ta", "homomorphism"}));
  add_output(so, op.out);

  VerifyCfg ve;
  ve.out.format = "json";
  auto* sv = app.add_subcommand("verify", "run the acceptance criteria");
  sv->add_option("--only", ve.only, "criterion names or ids")->delimiter(',');
  sv->add_option("--inject-fault", ve.inject_fault, "corrupt a constant: plancherel");
  sv->add_flag("--serial", ve.serial, "serial reference path");
  add_output(sv, ve.out);

  GeomCfg ge;
  auto* sg = app.add_subcommand("geom", "log-concavity witnesses and radial tables");
  sg->add_option("--n", ge.n, "dimensions")->delimiter(',');
  sg->add_option("--xmax", ge.xmax, "end of the x grid");
  sg->add_option("--points", ge.points, "number of x points");
  sg->add_option("--slope-r", ge.slope_r, "radius for sigma/m");
  sg->add_option("--table", ge.table, "CSV with columns r, sigma, m to check instead");
  add_output(sg, ge.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sc->parsed()) return cmd_characters(ch);
    if (st->parsed()) return cmd_transform(tr);
    if (so->parsed()) return cmd_opcalc(op);
    if (sv->parsed()) return cmd_verify(ve);
    if (sg->parsed()) return cmd_geom(ge);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
