// bec-lab: command-line driver for the rotating condensate experiments.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "beclab/config.hpp"
#include "beclab/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  int threads = 0;
  double a = 0.0, omega = 0.0;
  bool has_a = false, has_omega = false;
};

int run(const std::string& kind_name, const CommonArgs& args) {
  using namespace beclab;
  Config cfg;
  ExperimentConfig ec;
  try {
    if (!args.config.empty()) cfg = Config::load(args.config);
    Overrides ov;
    if (args.has_a) ov.a = args.a;
    if (args.has_omega) ov.omega = args.omega;
    if (!args.out.empty()) ov.out_dir = args.out;
    if (args.threads > 0) ov.threads = args.threads;
    ec = make_experiment(cfg, experiment_kind_from_string(kind_name), ov);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const nlohmann::json record = run_experiment(ec);
    std::cout << record["results"].dump(2) << '\n';
    std::cerr << "wrote " << (ec.out_dir / "record.json").string() << '\n';
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of rotating Bose-Einstein condensates in 2D"};
  app.require_subcommand(1);
  CommonArgs args;
  const char* kinds[] = {"townes", "solve", "sweep", "smallomega", "critical", "trial", "uniqueness"};
  for (const char* k : kinds) {
    CLI::App* sub = app.add_subcommand(k, std::string("run the ") + k + " experiment");
    sub->add_option("--config", args.config, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides [output] dir)");
    sub->add_option("--threads", args.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option_function<double>("--a", [&](double v) { args.a = v; args.has_a = true; }, "interaction strength");
    sub->add_option_function<double>("--omega", [&](double v) { args.omega = v; args.has_omega = true; },
                                     "rotation speed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(app.get_subcommands().front()->get_name(), args);
}
