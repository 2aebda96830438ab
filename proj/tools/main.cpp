#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lawmine/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lawmine - relational rule mining for numeric time series"};
  app.require_subcommand(1);

  lawmine::RunConfig config;
  std::string config_path;
  std::string learner = "mmdr";
  bool alpha_set = false, max_body_set = false, seed_set = false, jobs_set = false;
  double alpha = 0.05;
  int max_body = 3;
  std::uint64_t seed = 17;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", config.input_path, "input CSV (date,attr,...)");
    cmd->add_option("--knowledge", config.knowledge_path, "knowledge declaration file");
    cmd->add_option("--hypotheses", config.hypotheses_path,
                    "catalogue rules over encoded predicates, one per line");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--config", config_path, "sectioned key=value config file");
    cmd->add_option("--learner", learner, "foil | focl | mmdr");
    cmd->add_option("--alpha", alpha, "significance level")->each([&](std::string) {
      alpha_set = true;
    });
    cmd->add_option("--max-body", max_body, "maximum body literals")
        ->each([&](std::string) { max_body_set = true; });
    cmd->add_option("--seed", seed, "random seed")->each([&](std::string) {
      seed_set = true;
    });
    cmd->add_option("--jobs", jobs, "worker threads")->each([&](std::string) {
      jobs_set = true;
    });
  };

  add_common(app.add_subcommand("encode", "dump the relational encoding as facts.tsv"));
  add_common(app.add_subcommand("mine", "learn rules; writes rules.txt (+trace/counters)"));
  add_common(app.add_subcommand("forecast", "mine and emit per-day forecast stream"));
  add_common(app.add_subcommand("backtest", "walk-forward evaluation with baselines"));
  add_common(app.add_subcommand("inspect", "pretty-print knowledge or series summary"));

  CLI11_PARSE(app, argc, argv);

  try {
    config.command = lawmine::command_from_name(app.get_subcommands().front()->get_name());
    if (!config_path.empty()) lawmine::apply_config_file(config, config_path);
    config.learner = lawmine::learner_from_name(learner);
    // command line wins over the config file
    if (alpha_set) config.alpha = alpha;
    if (max_body_set) config.max_body = max_body;
    if (seed_set) config.seed = seed;
    if (jobs_set) config.jobs = jobs;
    lawmine::run(config);
  } catch (const lawmine::Error& e) {
    std::cerr << "error (" << lawmine::err_name(e.code()) << "): " << e.what() << "\n";
    return lawmine::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
