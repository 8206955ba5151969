// Experiment runner: FWSB vs Gauss-Seidel inner solvers for weighted-TV
// restoration, plus mask and fixture generation.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "wtv/experiment.hpp"
#include "wtv/grid_io.hpp"
#include "wtv/operators.hpp"
#include "wtv/testdata.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kDiverged = 3, kIo = 4 };

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw wtv::ConfigError("bad lambda value '" + item + "'");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void print_summary(const wtv::ExperimentSummary& s) {
  std::printf("observation PSNR: %.3f dB\n", s.observation_psnr);
  if (s.sampling_percentage == s.sampling_percentage) std::printf("sampling percentage: %.3f %%\n", s.sampling_percentage);
  std::printf("%-14s %10s %10s %8s %10s\n", "solver", "PSNR[dB]", "time[s]", "FB its", "inner its");
  for (const auto& o : s.outcomes) {
    if (!o.result) {
      std::printf("%-14s diverged: %s\n", wtv::to_string(o.solver).c_str(), o.error.c_str());
      continue;
    }
    long inner = 0;
    for (const auto& r : o.result->trace.rows) inner += r.inner_iters;
    const auto& last = o.result->trace.rows.back();
    std::printf("%-14s %10.3f %10.3f %8zu %10ld\n", wtv::to_string(o.solver).c_str(), last.psnr, last.cum_seconds,
                o.result->trace.rows.size(), inner);
  }
  if (!s.timings_comparable) std::printf("(solvers ran in parallel; timings are not comparable)\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-TV restoration experiments (accelerated forward-backward + split Bregman)"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run every listed inner solver on one test problem");
  run->add_option("config", run_config, "Key-value config file")->required();

  std::string sweep_config, lambda_list;
  auto* sweep = app.add_subcommand("sweep", "Pick the PSNR-optimal lambda over a grid");
  sweep->add_option("config", sweep_config, "Key-value config file")->required();
  sweep->add_option("--lambda", lambda_list, "Comma-separated lambda values")->required();

  std::size_t mask_lines = 10, mask_n = 256;
  std::string mask_out;
  auto* mask = app.add_subcommand("mask", "Write a radial k-space mask (WTVGRID1, centred layout)");
  mask->add_option("--lines", mask_lines, "Number of radial lines")->required();
  mask->add_option("--n", mask_n, "Grid side")->required();
  mask->add_option("--out", mask_out, "Output file")->required();

  std::string fixtures_dir;
  std::size_t fixtures_n = 256;
  auto* fixtures = app.add_subcommand("fixtures", "Write phantoms and masks used by the test problems");
  fixtures->add_option("--out", fixtures_dir, "Output directory")->required();
  fixtures->add_option("--n", fixtures_n, "Grid side");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = wtv::load_config(run_config);
      const auto summary = wtv::run_experiment(cfg);
      print_summary(summary);
      std::printf("outputs in %s\n", wtv::resolve_output_dir(cfg).string().c_str());
      return summary.all_failed() ? kDiverged : kOk;
    }
    if (*sweep) {
      const auto cfg = wtv::load_config(sweep_config);
      const auto res = wtv::sweep_lambda(cfg, parse_lambda_list(lambda_list));
      for (const auto& pt : res.curve) {
        std::printf("lambda %-12s PSNR %8.3f dB  FB its %4d%s\n", wtv::format_double(pt.lambda).c_str(), pt.psnr,
                    pt.fb_iterations, pt.error.empty() ? "" : "  (diverged)");
      }
      if (res.best_psnr == -std::numeric_limits<double>::infinity()) return kDiverged;
      std::printf("best lambda %s (PSNR %.3f dB)\n", wtv::format_double(res.best_lambda).c_str(), res.best_psnr);
      return kOk;
    }
    if (*mask) {
      const auto m = wtv::radial_mask(mask_n, mask_lines);
      wtv::write_grid(mask_out, m.mask);
      std::printf("lines %zu n %zu sampling %.4f %%\n", mask_lines, mask_n, m.sampling_percentage);
      return kOk;
    }
    if (*fixtures) {
      const std::filesystem::path dir(fixtures_dir);
      std::filesystem::create_directories(dir);
      const auto n = std::to_string(fixtures_n);
      const auto sl = wtv::shepp_logan(fixtures_n);
      const auto cartoon = wtv::piecewise_test_image(fixtures_n);
      wtv::write_grid(dir / ("shepp_logan_" + n + ".wtvgrid"), sl);
      wtv::write_pgm(dir / ("shepp_logan_" + n + ".pgm"), sl);
      wtv::write_grid(dir / ("cartoon_" + n + ".wtvgrid"), cartoon);
      wtv::write_pgm(dir / ("cartoon_" + n + ".pgm"), cartoon);
      for (std::size_t lines : {8u, 10u}) {
        const auto m = wtv::radial_mask(fixtures_n, lines);
        const auto stem = "mask_" + std::to_string(lines) + "lines_" + n;
        wtv::write_grid(dir / (stem + ".wtvgrid"), m.mask);
        wtv::write_pgm(dir / (stem + ".pgm"), m.mask);
        std::printf("%s: sampling %.4f %%\n", stem.c_str(), m.sampling_percentage);
      }
      return kOk;
    }
  } catch (const wtv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const wtv::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const wtv::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
