// Command-line front end for the Gram interpolation experiments.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gramint/sim/experiments.hpp"

namespace sim = gramint::sim;

namespace {

struct Args {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string plot_path;
  unsigned threads = 1;
  std::string scale = "desk";
  bool stamp = false;
  bool dump_config = false;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run(sim::ExperimentKind kind, const Args& args) {
  sim::ExperimentConfig config = sim::preset(kind, sim::parse_scale(args.scale));
  if (!args.config_path.empty()) config = sim::load_config(args.config_path, config);
  if (config.kind != kind)
    throw sim::ConfigError("config declares kind '" + std::string(sim::to_string(config.kind)) +
                           "' but subcommand is '" + std::string(sim::to_string(kind)) + "'");
  if (args.seed) config.seed = *args.seed;
  sim::validate_config(config);

  if (args.dump_config) {
    std::cout << sim::serialize(config);
    return 0;
  }

  sim::RunOptions options;
  options.threads = args.threads;
  if (args.stamp) options.timestamp = utc_now();

  const sim::ResultTable table = sim::run_experiment(config, options);
  if (args.out_path.empty() || args.out_path == "-") {
    sim::write_csv(std::cout, table);
  } else {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + args.out_path + "'");
    sim::write_csv(out, table);
  }
  if (!args.plot_path.empty()) {
    std::ofstream plot(args.plot_path, std::ios::binary);
    if (!plot) throw std::runtime_error("cannot write '" + args.plot_path + "'");
    plot << sim::plot_json(sim::plot_spec(config, table), table,
                           args.out_path.empty() ? "-" : args.out_path);
  }
  if (kind == sim::ExperimentKind::kValidate && !sim::all_passed(table)) {
    std::cerr << "validate: one or more properties failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gram-matrix interpolation experiments for massive MU-MIMO-OFDM"};
  app.require_subcommand(1);
  Args args;

  const std::vector<std::pair<sim::ExperimentKind, std::string>> commands{
      {sim::ExperimentKind::kMse, "Gram entry MSE: closed forms vs. Monte-Carlo oracle"},
      {sim::ExperimentKind::kBer, "uplink BER vs. SNR per Gram method"},
      {sim::ExperimentKind::kComplexity, "analytical and instrumented Gram costs"},
      {sim::ExperimentKind::kTradeoff, "required SNR vs. complexity"},
      {sim::ExperimentKind::kValidate, "property suite; nonzero exit on failure"},
  };
  for (const auto& [kind, help] : commands) {
    auto* sub = app.add_subcommand(std::string(sim::to_string(kind)), help);
    sub->add_option("--config", args.config_path, "config file; keys override the scale preset")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "root seed (overrides the config)");
    sub->add_option("--out", args.out_path, "CSV output path (default stdout)");
    sub->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--scale", args.scale, "preset parameterization")
        ->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--plot", args.plot_path, "write a JSON plot definition");
    sub->add_flag("--stamp", args.stamp, "add a generation timestamp to the metadata");
    sub->add_flag("--dump-config", args.dump_config, "print the effective config and exit");
  }

  CLI11_PARSE(app, argc, argv);
  try {
    for (const auto& [kind, help] : commands)
      if (app.got_subcommand(std::string(sim::to_string(kind)))) return run(kind, args);
  } catch (const sim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
