#include "wtv/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "wtv/grid_io.hpp"
#include "wtv/metrics.hpp"

namespace wtv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string to_string(Problem p) { return p == Problem::Deblur ? "deblur" : "cs_mri"; }

Problem parse_problem(std::string_view name) {
  if (name == "deblur") return Problem::Deblur;
  if (name == "cs_mri") return Problem::CsMri;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (n < 32) throw ConfigError("n must be at least 32");
  if (problem == Problem::Deblur) {
    if (!(blur_sigma > 0.0)) throw ConfigError("blur_sigma must be positive");
    if (blur_size % 2 == 0 || blur_size > n) throw ConfigError("blur_size must be odd and <= n");
  } else if (mask_lines < 1) {
    throw ConfigError("mask_lines must be >= 1");
  }
  if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance must be >= 0");
  if (solvers.empty()) throw ConfigError("solver list is empty");
  for (InnerSolver s : solvers) {
    if (s == InnerSolver::Direct && n > 32) throw ConfigError("direct inner solver needs n <= 32");
  }
  solver.validate();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  }
  return x;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int x{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + std::string(key) + "': expected true/false");
}

std::vector<InnerSolver> to_solvers(std::string_view v) {
  std::vector<InnerSolver> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(parse_inner_solver(item));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  SolverConfig& s = c.solver;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(view.substr(0, eq));
    const auto val = trim(view.substr(eq + 1));

    if (key == "problem") c.problem = parse_problem(val);
    else if (key == "n") c.n = to_int<std::size_t>(key, val);
    else if (key == "blur_sigma") c.blur_sigma = to_double(key, val);
    else if (key == "blur_size") c.blur_size = to_int<std::size_t>(key, val);
    else if (key == "mask_lines") c.mask_lines = to_int<std::size_t>(key, val);
    else if (key == "noise_variance") c.noise_variance = to_double(key, val);
    else if (key == "seed") c.seed = to_int<std::uint64_t>(key, val);
    else if (key == "solvers") c.solvers = to_solvers(val);
    else if (key == "output_dir") c.output_dir = std::string(val);
    else if (key == "parallel") c.parallel = to_bool(key, val);
    else if (key == "lambda") s.lambda = to_double(key, val);
    else if (key == "r0") s.r0 = to_double(key, val);
    else if (key == "beta") s.beta = to_double(key, val);
    else if (key == "beta_fraction") s.beta_fraction = to_double(key, val);
    else if (key == "a") s.a = to_double(key, val);
    else if (key == "epsilon") s.epsilon = to_double(key, val);
    else if (key == "max_fb") s.max_fb = to_int<int>(key, val);
    else if (key == "weight_mode") s.weight_mode = parse_weight_mode(val);
    else if (key == "mu") s.mu = to_double(key, val);
    else if (key == "mu_scale") s.mu_scale = to_double(key, val);
    else if (key == "theta") s.theta = to_double(key, val);
    else if (key == "theta_fraction") s.theta_fraction = to_double(key, val);
    else if (key == "tau") s.tau = to_double(key, val);
    else if (key == "tau_inner") s.tau_inner = to_double(key, val);
    else if (key == "max_outer") s.max_outer = to_int<int>(key, val);
    else if (key == "max_inner") s.max_inner = to_int<int>(key, val);
    else if (key == "no_accel") s.no_accel = to_bool(key, val);
    else if (key == "power_tol") s.power_tol = to_double(key, val);
    else if (key == "power_max_iter") s.power_max_iter = to_int<int>(key, val);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  return parse_config(is);
}

std::string write_config(const ExperimentConfig& c) {
  const SolverConfig& s = c.solver;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  kv("problem", to_string(c.problem));
  kv("n", std::to_string(c.n));
  kv("blur_sigma", format_double(c.blur_sigma));
  kv("blur_size", std::to_string(c.blur_size));
  kv("mask_lines", std::to_string(c.mask_lines));
  kv("noise_variance", format_double(c.noise_variance));
  kv("seed", std::to_string(c.seed));
  std::string names;
  for (InnerSolver x : c.solvers) names += (names.empty() ? "" : ",") + to_string(x);
  kv("solvers", names);
  kv("output_dir", c.output_dir.string());
  kv("parallel", b(c.parallel));
  kv("lambda", format_double(s.lambda));
  if (s.r0) kv("r0", format_double(*s.r0));
  if (s.beta) kv("beta", format_double(*s.beta));
  kv("beta_fraction", format_double(s.beta_fraction));
  kv("a", format_double(s.a));
  kv("epsilon", format_double(s.epsilon));
  kv("max_fb", std::to_string(s.max_fb));
  kv("weight_mode", to_string(s.weight_mode));
  if (s.mu) kv("mu", format_double(*s.mu));
  kv("mu_scale", format_double(s.mu_scale));
  if (s.theta) kv("theta", format_double(*s.theta));
  kv("theta_fraction", format_double(s.theta_fraction));
  kv("tau", format_double(s.tau));
  kv("tau_inner", format_double(s.tau_inner));
  kv("max_outer", std::to_string(s.max_outer));
  kv("max_inner", std::to_string(s.max_inner));
  kv("no_accel", b(s.no_accel));
  kv("power_tol", format_double(s.power_tol));
  kv("power_max_iter", std::to_string(s.power_max_iter));
  return os.str();
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
  if (cfg.output_dir.is_absolute()) return cfg.output_dir;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return std::filesystem::path(root) / cfg.output_dir;
  return cfg.output_dir;
}

TestProblem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  TestProblem p;
  const NoiseSpec noise{cfg.noise_variance, cfg.seed};
  if (cfg.problem == Problem::Deblur) {
    p.truth = piecewise_test_image(cfg.n);
    auto model = std::make_unique<GaussianBlurModel>(cfg.n, cfg.blur_sigma, cfg.blur_size);
    p.z = add_gaussian_noise(Data(model->blur(p.truth)), noise);
    p.observation = std::get<Image>(p.z);
    p.sampling_percentage = std::numeric_limits<double>::quiet_NaN();
    p.model = std::move(model);
  } else {
    p.truth = shepp_logan(cfg.n);
    RadialMask mask = radial_mask(cfg.n, cfg.mask_lines);
    p.sampling_percentage = mask.sampling_percentage;
    auto model = std::make_unique<FourierMaskModel>(std::move(mask.mask));
    // Noise only on the acquired samples.
    p.z = model->restrict(std::get<ComplexGrid>(add_gaussian_noise(model->apply(p.truth), noise)));
    p.observation = model->zero_filled(std::get<ComplexGrid>(p.z));
    p.model = std::move(model);
  }
  return p;
}

bool ExperimentSummary::all_failed() const {
  for (const auto& o : outcomes) {
    if (o.result) return false;
  }
  return true;
}

namespace {

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

SolverOutcome run_one(const TestProblem& p, const SolverConfig& base, InnerSolver solver) {
  SolverOutcome o{solver, std::nullopt, {}};
  SolverConfig cfg = base;
  cfg.solver = solver;
  try {
    o.result = afb_solve(*p.model, p.z, cfg, &p.truth);
  } catch (const DivergenceError& e) {
    o.error = std::string(e.what()) + " (iteration " + std::to_string(e.iteration()) + ")";
  }
  return o;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string trace_csv(const RunTrace& trace) {
  std::string out = "n,psnr,objective,rel_change,cum_seconds,inner_iters\n";
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.n) + ',' + format_double(r.psnr) + ',' + format_double(r.objective) + ',' +
           format_double(r.rel_change) + ',' + fixed3(r.cum_seconds) + ',' + std::to_string(r.inner_iters) + '\n';
  }
  return out;
}

std::string summary_csv(const ExperimentSummary& summary) {
  std::string out =
      "solver,status,final_psnr,total_seconds,fb_iterations,inner_iterations,converged,lambda,beta,theta,mu,"
      "observation_psnr,sampling_percentage,timings_comparable\n";
  for (const SolverOutcome& o : summary.outcomes) {
    out += to_string(o.solver) + ',';
    if (o.result) {
      const AfbResult& r = *o.result;
      long inner = 0;
      for (const auto& row : r.trace.rows) inner += row.inner_iters;
      const TraceRow last = r.trace.rows.empty() ? TraceRow{} : r.trace.rows.back();
      out += "ok," + format_double(last.psnr) + ',' + fixed3(last.cum_seconds) + ',' +
             std::to_string(r.trace.rows.size()) + ',' + std::to_string(inner) + ',' +
             (r.converged ? "true" : "false") + ',' + format_double(r.lambda) + ',' + format_double(r.beta) +
             ',' + format_double(r.theta) + ',' + format_double(r.mu) + ',';
    } else {
      out += "diverged,nan,nan,0,0,false,nan,nan,nan,nan,";
    }
    out += format_double(summary.observation_psnr) + ',' + format_double(summary.sampling_percentage) + ',' +
           (summary.timings_comparable ? "true" : "false") + '\n';
  }
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
  const TestProblem p = build_problem(cfg);
  ExperimentSummary summary;
  summary.observation_psnr = psnr(p.observation, p.truth);
  summary.sampling_percentage = p.sampling_percentage;
  summary.timings_comparable = !cfg.parallel || cfg.solvers.size() < 2;

  if (cfg.parallel) {
    std::vector<std::future<SolverOutcome>> jobs;
    for (InnerSolver s : cfg.solvers) {
      jobs.push_back(std::async(std::launch::async, [&p, &cfg, s] { return run_one(p, cfg.solver, s); }));
    }
    for (auto& j : jobs) summary.outcomes.push_back(j.get());
  } else {
    for (InnerSolver s : cfg.solvers) summary.outcomes.push_back(run_one(p, cfg.solver, s));
  }

  if (write_outputs) {
    const auto dir = resolve_output_dir(cfg);
    ensure_dir(dir);
    write_text(dir / "config_resolved.txt", write_config(cfg));
    write_text(dir / "summary.csv", summary_csv(summary));
    write_grid(dir / "truth.wtvgrid", p.truth);
    write_pgm(dir / "truth.pgm", p.truth);
    write_grid(dir / "observation.wtvgrid", p.observation);
    write_pgm(dir / "observation.pgm", p.observation);
    if (const auto* m = dynamic_cast<const FourierMaskModel*>(p.model.get())) {
      write_grid(dir / "mask.wtvgrid", m->centered_mask());
      write_pgm(dir / "mask.pgm", m->centered_mask());
    }
    for (const SolverOutcome& o : summary.outcomes) {
      if (!o.result) continue;
      const std::string name = to_string(o.solver);
      write_text(dir / ("trace_" + name + ".csv"), trace_csv(o.result->trace));
      write_grid(dir / ("recon_" + name + ".wtvgrid"), o.result->u);
      write_pgm(dir / ("recon_" + name + ".pgm"), o.result->u);
    }
  }
  return summary;
}

SweepResult sweep_lambda(const ExperimentConfig& cfg, const std::vector<double>& lambdas, bool write_outputs) {
  if (lambdas.empty()) throw ConfigError("lambda grid is empty");
  const TestProblem p = build_problem(cfg);
  SweepResult res{{}, std::numeric_limits<double>::quiet_NaN(), -std::numeric_limits<double>::infinity()};
  for (double lambda : lambdas) {
    SolverConfig sc = cfg.solver;
    sc.lambda = lambda;
    sc.r0.reset();
    SolverOutcome o = run_one(p, sc, cfg.solvers.front());
    SweepPoint pt{lambda, std::numeric_limits<double>::quiet_NaN(), 0, false, o.error};
    if (o.result) {
      pt.psnr = o.result->trace.rows.back().psnr;
      pt.fb_iterations = static_cast<int>(o.result->trace.rows.size());
      pt.converged = o.result->converged;
      if (pt.psnr > res.best_psnr) {
        res.best_psnr = pt.psnr;
        res.best_lambda = lambda;
      }
    }
    res.curve.push_back(std::move(pt));
  }
  if (write_outputs) {
    const auto dir = resolve_output_dir(cfg);
    ensure_dir(dir);
    std::string csv = "lambda,psnr,fb_iterations,converged\n";
    for (const auto& pt : res.curve) {
      csv += format_double(pt.lambda) + ',' + format_double(pt.psnr) + ',' + std::to_string(pt.fb_iterations) +
             ',' + (pt.converged ? "true" : "false") + '\n';
    }
    write_text(dir / "lambda_curve.csv", csv);
    write_text(dir / "config_resolved.txt", write_config(cfg));
  }
  return res;
}

}  // namespace wtv
