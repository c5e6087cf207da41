#include "fraclap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "fraclap/approx.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/sbasis.hpp"
#include "fraclap/showcase.hpp"

namespace fraclap::cli {

namespace {

struct RunConfig {
  std::string config;
  double s = 0.5;
  std::optional<double> epsilon;
  std::string target;
  std::string output;
  int grid = 0;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  // Quadrature overrides.
  QuadConfig quad;
  std::optional<double> tail_growth;
  // approximate
  double poly_fraction = 0.5;
  int max_degree = 30;
  int residual_points = 21;
  // demo
  std::string demo;
  std::string sigma = "const:1";
  std::string mu = "const:1";
  double x = 0.3;
  std::vector<double> rho{1e-1, 1e-2, 1e-3};
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(const RunConfig& c) {
  FracParams{c.s}.validate();
  if (c.epsilon && !(*c.epsilon > 0.0 && std::isfinite(*c.epsilon))) {
    throw ConfigError("epsilon must be positive");
  }
  if (c.grid < 2) throw ConfigError("grid resolution must be at least 2");
}

std::vector<double> grid(const RunConfig& c, double a, double b) {
  a = c.grid_min.value_or(a);
  b = c.grid_max.value_or(b);
  if (!(a < b)) throw ConfigError("grid-min must be below grid-max");
  std::vector<double> xs(static_cast<std::size_t>(c.grid));
  for (int i = 0; i < c.grid; ++i) {
    xs[i] = i == c.grid - 1 ? b : a + (b - a) * i / (c.grid - 1);
  }
  return xs;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  return f;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f = open_output(path);
  f << j.dump(2) << '\n';
}

// A function handed to the kernel: values, kinks and growth exponent.
struct KernelTarget {
  RealFunction f;
  std::vector<double> kinks;
  std::optional<double> growth;
};

KernelTarget kernel_target(const std::string& spec, double s) {
  if (spec.starts_with("block:")) {
    SHBlock b;
    std::stringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("block target: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      char* end = nullptr;
      const double v = std::strtod(val.c_str(), &end);
      if (val.empty() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("block target: malformed number '" + val + "'");
      }
      if (key == "t") b.t = v;
      else if (key == "c") b.c = BigFloat(v);
      else if (key == "r") b.r = v;
      else throw ConfigError("block target: unknown key '" + key + "'");
    }
    if (!(b.r > 0.0)) throw ConfigError("block target: r must be positive");
    return KernelTarget{[b, s](double x) { return block_eval(b, x, s); }, {-b.t / b.r}, s};
  }
  if (spec.starts_with("csv:")) {
    auto g = std::make_shared<GridFunction>(GridFunction::read_csv(spec.substr(4)));
    return KernelTarget{[g](double x) { return g->evaluate(x); }, {g->a(), g->b()}, 0.0};
  }
  if (spec == "x2" || spec == "exp") {
    throw ConfigError("target '" + spec + "' grows too fast for the fractional Laplacian");
  }
  const Target t = parse_target(spec);
  return KernelTarget{t.f, {}, 0.0};
}

int cmd_fraclap(const RunConfig& c, std::ostream& out) {
  if (c.target.empty()) throw ConfigError("fraclap needs --target");
  const KernelTarget kt = kernel_target(c.target, c.s);
  QuadConfig q = c.quad;
  q.tail_growth_exponent = c.tail_growth ? c.tail_growth : kt.growth;
  const FracParams p{c.s};
  q.validate(p);
  const std::vector<double> xs = grid(c, -0.9, 0.9);
  std::vector<FracEvaluation> ev;
  ev.reserve(xs.size());
  for (double x : xs) ev.push_back(frac_laplacian_eval(kt.f, x, p, q, kt.kinks));

  const std::string path = c.output.empty() ? "fraclap.csv" : c.output;
  std::ofstream f = open_output(path);
  f << "x,value,fraclap_value,tail_halfwidth\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f << fmt(xs[i]) << ',' << fmt(kt.f(xs[i])) << ',' << fmt(ev[i].value) << ','
      << fmt(ev[i].tail_halfwidth) << '\n';
    worst = std::max(worst, std::abs(ev[i].value));
  }
  out << "wrote " << path << " (" << xs.size() << " points, max |fraclap| " << fmt(worst) << ")\n";
  return kOk;
}

ApproxConfig approx_config(const RunConfig& c) {
  ApproxConfig a;
  a.poly_fraction = c.poly_fraction;
  a.max_degree = c.max_degree;
  a.residual_points = c.residual_points;
  return a;
}

int cmd_approximate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.target.empty()) throw ConfigError("approximate needs --target");
  const Target target = parse_target(c.target);
  const double eps = c.epsilon.value_or(0.0625);
  const std::string prefix = c.output.empty() ? "approx" : c.output;
  std::optional<ApproxResult> res;
  try {
    res.emplace(approximate(target, eps, c.s, approx_config(c)));
  } catch (const ApproxFailure& e) {
    write_json(prefix + ".report.json", report_to_json(e.report()));
    err << "approximation failed at stage " << e.report().stage << ": " << e.what() << '\n';
    return kApproximation;
  }
  write_json(prefix + ".report.json", report_to_json(res->report));
  write_json(prefix + ".combo.json", combo_to_json(res->combo));

  std::ofstream f = open_output(prefix + ".csv");
  f << "x,target,approx,diff,residual\n";
  for (double x : grid(c, -1.0, 1.0)) {
    const double t = target.eval(x), v = res->combo.eval(x);
    f << fmt(x) << ',' << fmt(t) << ',' << fmt(v) << ',' << fmt(t - v) << ','
      << fmt(combo_fraclap_mp(res->combo, x).value) << '\n';
  }
  out << "epsilon_total " << fmt(res->report.epsilon_total) << " <= " << fmt(eps) << ", "
      << res->combo.size() << " blocks, residual_max " << fmt(res->report.residual_max) << '\n';
  out << "wrote " << prefix << ".report.json, " << prefix << ".combo.json, " << prefix << ".csv\n";
  return kOk;
}

int demo_harnack(const RunConfig& c, std::ostream& out) {
  const HarnackWitness w = harnack_counterexample(c.s, c.epsilon.value_or(1.0 / 16.0), approx_config(c));
  const std::string prefix = c.output.empty() ? "harnack" : c.output;
  write_json(prefix + ".json", harnack_to_json(w));
  std::ofstream f = open_output(prefix + ".csv");
  f << "x,v,u\n";
  for (double x : grid(c, -1.0, 1.0)) f << fmt(x) << ',' << fmt(w.v.eval(x)) << ',' << fmt(w.u(x)) << '\n';
  out << "iota " << fmt(w.iota) << "\ninf_inner " << fmt(w.inf_inner) << "\nsup_inner "
      << fmt(w.sup_inner) << "\nsup_outer_complement " << fmt(w.sup_outer_complement)
      << "\nnonneg_margin " << fmt(w.nonneg_margin) << "\nexterior_min " << fmt(w.exterior_min)
      << " at x = " << fmt(w.exterior_argmin) << '\n';
  out << "wrote " << prefix << ".json, " << prefix << ".csv\n";
  return kOk;
}

int demo_logistic(const RunConfig& c, std::ostream& out) {
  const Target sigma = parse_target(c.sigma);
  const Target mu = parse_target(c.mu);
  const LogisticWitness w =
      logistic_resource_plan(sigma, mu, c.epsilon.value_or(0.05), c.s, approx_config(c));
  const std::string prefix = c.output.empty() ? "logistic" : c.output;
  write_json(prefix + ".json", logistic_to_json(w));
  std::ofstream f = open_output(prefix + ".csv");
  f << "x,u,sigma,sigma_eps,residual\n";
  for (std::size_t i = 0; i < w.residual_x.size(); ++i) {
    const double x = w.residual_x[i];
    f << fmt(x) << ',' << fmt(w.u_eps.eval(x)) << ',' << fmt(sigma.eval(x)) << ','
      << fmt(logistic_sigma_eps(w, mu, x)) << ',' << fmt(w.right[i] - w.left[i]) << '\n';
  }
  out << "sigma_error " << fmt(w.sigma_error) << "\nfeasibility_margin " << fmt(w.feasibility_margin)
      << "\nleft_max " << fmt(w.left_max) << "\nright_max " << fmt(w.right_max) << '\n';
  out << "wrote " << prefix << ".json, " << prefix << ".csv\n";
  return kOk;
}

int demo_meanvalue(const RunConfig& c, std::ostream& out) {
  const Target t = parse_target(c.target.empty() ? "x2" : c.target);
  for (double r : c.rho)
    if (!(r > 0.0)) throw ConfigError("rho values must be positive");
  const auto rows = mean_value_table(t, c.x, c.rho);
  const std::string path = c.output.empty() ? "meanvalue.csv" : c.output;
  std::ofstream f = open_output(path);
  f << "rho,ball,sphere,ball_error,sphere_error\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-24s %-24s %-10s %-10s\n", "rho", "ball", "sphere",
                "ball_err", "sphere_err");
  out << line;
  for (const auto& r : rows) {
    f << fmt(r.rho) << ',' << fmt(r.ball) << ',' << fmt(r.sphere) << ',' << fmt(r.ball_error)
      << ',' << fmt(r.sphere_error) << '\n';
    std::snprintf(line, sizeof line, "%-10.3g %-24.17g %-24.17g %-10.3e %-10.3e\n", r.rho, r.ball,
                  r.sphere, r.ball_error, r.sphere_error);
    out << line;
  }
  out << "exact " << fmt(-t.eval(c.x, 2)) << "\nwrote " << path << '\n';
  return kOk;
}

// Inserts config-file entries right after the subcommand, so that later
// command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::vector<std::string> out{args.front()};
  for (const auto& [k, v] : read_config_file(path)) out.push_back("--" + k + "=" + v);
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || key == "config") {
      throw ConfigError(path + ":" + std::to_string(n) + ": invalid key");
    }
    kv.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Fractional Laplacian quadrature and s-harmonic approximation"};
  app.name("fraclap");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--config", c.config, "flat key=value file; flags override it");
    sub->add_option("--s", c.s, "fractional order in (0, 1)")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "C2 error budget");
    sub->add_option("--output", c.output, "output file or prefix");
    sub->add_option("--grid", c.grid, "grid resolution (>= 2)");
    sub->add_option("--grid-min", c.grid_min, "left end of the output grid");
    sub->add_option("--grid-max", c.grid_max, "right end of the output grid");
  };
  auto approx_opts = [&c](CLI::App* sub) {
    sub->add_option("--poly-fraction", c.poly_fraction, "share of epsilon for the polynomial step");
    sub->add_option("--max-degree", c.max_degree, "Chebyshev degree cap (<= 30)");
    sub->add_option("--residual-points", c.residual_points, "points of the residual check");
  };

  CLI::App* fr = app.add_subcommand("fraclap", "evaluate (-Delta)^s of a target on a grid");
  common(fr);
  fr->add_option("--target", c.target, "const:<c> | sin | gauss | csv:<path> | block:t=..,c=..,r=..");
  fr->add_option("--inner-radius", c.quad.inner_radius, "near-field radius");
  fr->add_option("--outer-radius", c.quad.outer_radius, "far-field radius");
  fr->add_option("--near-points", c.quad.near_points, "near-field points");
  fr->add_option("--mid-points", c.quad.mid_points, "mid-field points");
  fr->add_option("--tail-growth", c.tail_growth, "growth exponent of the target at infinity");

  CLI::App* ap = app.add_subcommand("approximate", "build an s-harmonic C2 approximant on [-1, 1]");
  common(ap);
  approx_opts(ap);
  ap->add_option("--target", c.target, "x2 | sin | exp | gauss | const:<c> | csv:<path>");

  CLI::App* dm = app.add_subcommand("demo", "harnack | logistic | meanvalue");
  common(dm);
  approx_opts(dm);
  dm->add_option("name", c.demo, "demo name")
      ->required()
      ->check(CLI::IsMember({"harnack", "logistic", "meanvalue"}));
  dm->add_option("--target", c.target, "meanvalue target");
  dm->add_option("--sigma", c.sigma, "logistic resource sigma");
  dm->add_option("--mu", c.mu, "logistic coefficient mu");
  dm->add_option("--x", c.x, "meanvalue evaluation point");
  dm->add_option("--rho", c.rho, "meanvalue radii")->delimiter(',');

  try {
    std::vector<std::string> args = expand_config(raw);
    // CLI11 consumes the argument vector back to front.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (c.grid == 0) c.grid = fr->parsed() ? 101 : 21;
    validate(c);
    if (fr->parsed()) return cmd_fraclap(c, out);
    if (ap->parsed()) return cmd_approximate(c, out, err);
    if (c.demo == "harnack") return demo_harnack(c, out);
    if (c.demo == "logistic") return demo_logistic(c, out);
    return demo_meanvalue(c, out);
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kEvaluation;
  } catch (const ApproximationError& e) {
    err << "approximation error: " << e.what() << '\n';
    return kApproximation;
  } catch (const ConditioningError& e) {
    err << "conditioning error: " << e.what() << '\n';
    return kApproximation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kEvaluation;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace fraclap::cli
