#pragma once

// Command orchestration shared by the CLI and the test suites: config
// loading, artifact writing and error-to-exit-code mapping.

#include <cstdint>
#include <string>
#include <vector>

#include "lawmine/backtest.hpp"
#include "lawmine/focl.hpp"
#include "lawmine/mmdr.hpp"

namespace lawmine {

enum class Command { encode, mine, forecast, backtest, inspect };
enum class LearnerKind { foil, focl, mmdr };

struct RunConfig {
  Command command = Command::inspect;
  LearnerKind learner = LearnerKind::mmdr;
  std::string input_path;       // CSV series
  std::string knowledge_path;   // knowledge declaration file
  std::string hypotheses_path;  // extra catalogue rules over encoded predicates
  std::string out_dir = ".";

  double alpha = 0.05;
  bool bonferroni = false;
  int max_body = 3;
  std::uint64_t seed = 17;
  int jobs = 1;
  bool quiet = false;  // suppress stdout summaries

  LearnConfig learn;
  EncodeOptions encoding;
  std::vector<std::string> grammar_predicates;  // empty -> every derived body predicate
  int grammar_existential_vars = 0;
  bool grammar_negation = false;
  BacktestConfig backtest;
};

// Sectioned key=value text; command-line flags are applied afterwards and
// win. See README for keys.
void apply_config_file(RunConfig& config, const std::string& path);

Command command_from_name(const std::string& name);
LearnerKind learner_from_name(const std::string& name);

// Grammar over the encoded predicates: configured body predicates, or every
// derived day predicate that is not a forecast head.
HypothesisGrammar grammar_for(const RunConfig& config, const EncodedDataset& dataset);

// Runs one command, writing artifacts under out_dir. Throws Error.
void run(const RunConfig& config);

// ConfigError -> 2, data errors -> 3, learner errors -> 4.
int exit_code_for(const Error& e);

}  // namespace lawmine
