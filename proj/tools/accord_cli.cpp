// Command-line front end for the accord shared library. Talks to the core
// exclusively through the C API in accord.h.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "accord.h"

namespace {

int exit_code_for(accord_status st) {
  switch (st) {
    case ACCORD_OK: return 0;
    case ACCORD_ERR_NUMERIC: return 3;
    default: return 2;
  }
}

[[noreturn]] void fail(accord_status st) {
  std::cerr << "accord: " << accord_last_error() << "\n";
  std::exit(exit_code_for(st));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "accord: cannot open '" << path << "'\n";
    std::exit(2);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    std::cerr << "accord: cannot write '" << path << "'\n";
    std::exit(2);
  }
}

struct OutputOptions {
  std::string out_dir = ".";
  std::string format = "json";
  bool svg = false;
};

void emit_report(accord_report* rep, const OutputOptions& opts,
                 const std::string& plot_name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  const fs::path dir(opts.out_dir);
  write_file((dir / "report.json").string(), accord_report_json(rep));
  if (opts.format == "csv" && accord_report_has_plot(rep)) {
    char* csv = nullptr;
    const accord_status st = accord_report_points_csv(rep, &csv);
    if (st != ACCORD_OK) fail(st);
    write_file((dir / (plot_name + "_points.csv")).string(), csv);
    accord_string_free(csv);
  }
  if (opts.svg && accord_report_has_plot(rep)) {
    char* svg = nullptr;
    const accord_status st = accord_report_svg(rep, &svg);
    if (st != ACCORD_OK) fail(st);
    write_file((dir / (plot_name + ".svg")).string(), svg);
    accord_string_free(svg);
  }
  accord_report_free(rep);
}

accord_dataset* load_dataset(const std::string& path) {
  accord_dataset* ds = nullptr;
  const accord_status st = accord_dataset_read_csv(path.c_str(), &ds);
  if (st != ACCORD_OK) fail(st);
  return ds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accord - measurement agreement toolkit"};
  app.require_subcommand(1);

  std::string input, variable = "QLTY";
  double alpha = 0.05;
  OutputOptions out_opts;
  auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
    if (needs_input)
      cmd->add_option("--input", input, "input CSV file")->required();
    cmd->add_option("--variable", variable, "variable name (default QLTY)");
    cmd->add_option("--alpha", alpha, "significance level (default 0.05)");
    cmd->add_option("--out", out_opts.out_dir, "output directory");
    cmd->add_option("--format", out_opts.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--svg", out_opts.svg, "emit plot SVG");
  };

  auto* score = app.add_subcommand("score", "score test outcomes");
  std::string granularity = "method";
  add_common(score);
  score->add_option("--granularity", granularity,
                    "class, method or assertion");

  auto* accuracy =
      app.add_subcommand("accuracy", "repeatability / intermediate precision");
  std::string coverage = "fixed2";
  double s_r = 0.0, reference = 0.0, epsilon = 0.5;
  bool has_reference = false;
  std::string truth_path;
  add_common(accuracy);
  accuracy->add_option("--coverage", coverage, "t, normal or fixed2")
      ->check(CLI::IsMember({"t", "normal", "fixed2"}));
  accuracy->add_option("--s-r", s_r, "externally supplied repeatability sd");
  accuracy->add_option("--reference", reference, "reference value for trueness")
      ->each([&](const std::string&) { has_reference = true; });
  accuracy->add_option("--truth", truth_path,
                       "truth CSV (object_id,value) for deviation analysis");
  accuracy->add_option("--epsilon", epsilon,
                       "diagonal tolerance band (default 0.5)");

  auto* ba = app.add_subcommand("bland-altman", "limits of agreement");
  double k = 2.0;
  std::string instrument_a, instrument_b;
  add_common(ba);
  ba->add_option("--k", k, "limit multiplier (default 2)");
  ba->add_option("--instrument-a", instrument_a, "first instrument id");
  ba->add_option("--instrument-b", instrument_b, "second instrument id");

  auto* icc = app.add_subcommand("icc", "intraclass correlation ICC(3,1)");
  add_common(icc);

  auto* correlate = app.add_subcommand("correlate", "Pearson correlation");
  add_common(correlate);
  correlate->add_option("--instrument-a", instrument_a, "first instrument id");
  correlate->add_option("--instrument-b", instrument_b,
                        "second instrument id");

  auto* mixed = app.add_subcommand("mixed", "REML mixed-model fit");
  add_common(mixed);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo oracle");
  std::string spec_path, estimator = "s_M";
  int reps = 100;
  add_common(simulate, /*needs_input=*/false);
  simulate->add_option("--spec", spec_path, "process spec JSON")->required();
  simulate->add_option("--reps", reps, "replicate count (default 100)");
  simulate->add_option("--estimator", estimator,
                       "estimator to run per replicate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  accord_report* rep = nullptr;
  accord_status st = ACCORD_OK;

  if (score->parsed()) {
    const std::string text = read_file(input);
    st = accord_score(text.c_str(), granularity.c_str(), &rep);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "score");
  } else if (accuracy->parsed()) {
    accord_dataset* ds = load_dataset(input);
    std::string truth_text;
    if (!truth_path.empty()) truth_text = read_file(truth_path);
    st = accord_accuracy(ds, variable.c_str(), coverage.c_str(), alpha, s_r,
                         has_reference ? 1 : 0, reference,
                         truth_path.empty() ? nullptr : truth_text.c_str(),
                         epsilon, &rep);
    accord_dataset_free(ds);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "deviation");
  } else if (ba->parsed()) {
    accord_dataset* ds = load_dataset(input);
    st = accord_bland_altman(
        ds, variable.c_str(),
        instrument_a.empty() ? nullptr : instrument_a.c_str(),
        instrument_b.empty() ? nullptr : instrument_b.c_str(), k, &rep);
    accord_dataset_free(ds);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "bland_altman");
  } else if (icc->parsed()) {
    accord_dataset* ds = load_dataset(input);
    st = accord_icc(ds, variable.c_str(), &rep);
    accord_dataset_free(ds);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "icc");
  } else if (correlate->parsed()) {
    accord_dataset* ds = load_dataset(input);
    st = accord_correlate(
        ds, variable.c_str(),
        instrument_a.empty() ? nullptr : instrument_a.c_str(),
        instrument_b.empty() ? nullptr : instrument_b.c_str(), &rep);
    accord_dataset_free(ds);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "correlation");
  } else if (mixed->parsed()) {
    const std::string text = read_file(input);
    st = accord_mixed(text.c_str(), variable.c_str(), &rep);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "mixed");
  } else if (simulate->parsed()) {
    const std::string spec_text = read_file(spec_path);
    st = accord_simulate(spec_text.c_str(), estimator.c_str(), reps, &rep);
    if (st != ACCORD_OK) fail(st);
    emit_report(rep, out_opts, "simulation");
  }

  return 0;
}
