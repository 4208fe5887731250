// Command-line driver: run, restart, precision-lab, report.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hgks/config.hpp"
#include "hgks/precision_lab.hpp"
#include "hgks/simulation.hpp"

namespace {

struct Common {
  std::string config;
  int workers = 0;
  std::string precision;
  std::string output;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "Case config file (key = value lines)")->required()->check(CLI::ExistingFile);
  cmd->add_option("-n,--workers", c.workers, "Worker count (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_option("-p,--precision", c.precision, "fp32 or fp64 (overrides the config)")
      ->check(CLI::IsMember({"fp32", "fp64"}));
  cmd->add_option("-o,--output", c.output, "Output directory (overrides the config)");
  cmd->add_option("--set", c.set, "Extra key=value overrides, applied last");
}

hgks::RunConfig load(const Common& c) {
  std::ifstream in(c.config);
  std::stringstream text;
  text << in.rdbuf() << '\n';
  if (c.workers > 0) text << "workers = " << c.workers << '\n';
  if (!c.precision.empty()) text << "precision = " << c.precision << '\n';
  if (!c.output.empty()) text << "output_dir = " << c.output << '\n';
  for (const auto& kv : c.set) text << kv << '\n';
  hgks::RunConfig cfg = hgks::parse_config(text.str());
  cfg.validate();
  return cfg;
}

int report_run(const hgks::RunResult& r) {
  if (!r.ok) {
    std::cerr << "run failed: " << r.error << '\n';
    return 1;
  }
  std::cout << "t = " << hgks::format_double(r.t) << ", steps = " << r.step
            << ", wall = " << hgks::format_double(r.wall_seconds) << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order gas-kinetic DNS solver"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run a case from its initial condition");
  add_common(run, run_opts);

  Common restart_opts;
  std::string checkpoint;
  auto* restart = app.add_subcommand("restart", "Continue a run from a checkpoint");
  add_common(restart, restart_opts);
  restart->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);

  Common lab_opts;
  auto* lab = app.add_subcommand("precision-lab", "Run FP32 and FP64 twins and compare them");
  add_common(lab, lab_opts);

  std::vector<std::string> timing_files;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Merge timing CSVs into a scalability table");
  report->add_option("timing", timing_files, "timing.csv files from runs with different worker counts")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("-o,--output", report_out, "Write the table here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    hgks::RunOptions opt;
    opt.echo = &std::cerr;
    if (*run) return report_run(hgks::run_simulation(load(run_opts), opt));
    if (*restart) {
      const hgks::Checkpoint c = hgks::read_checkpoint(checkpoint);
      opt.restart = &c;
      return report_run(hgks::run_simulation(load(restart_opts), opt));
    }
    if (*lab) {
      const auto r = hgks::precision_lab(load(lab_opts), opt);
      hgks::write_precision_report(std::cout, r);
      return r.ok ? 0 : 1;
    }
    if (*report) {
      std::vector<hgks::TimingRow> rows;
      for (const auto& f : timing_files) {
        std::ifstream in(f);
        const auto part = hgks::read_timing_csv(in);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const auto table = hgks::scalability(rows);
      if (report_out.empty()) {
        hgks::write_scalability_csv(std::cout, table);
      } else {
        std::ofstream out(report_out);
        hgks::write_scalability_csv(out, table);
      }
      return 0;
    }
  } catch (const hgks::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const hgks::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
