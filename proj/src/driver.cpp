#include "lawmine/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lawmine {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(Err::ConfigError, "bad boolean '" + v + "' for " + key);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (...) {
  }
  fail(Err::ConfigError, "bad number '" + v + "' for " + key);
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    int i = std::stoi(v, &used);
    if (used == v.size()) return i;
  } catch (...) {
  }
  fail(Err::ConfigError, "bad integer '" + v + "' for " + key);
}

HeadSpec parse_head_spec(const std::string& text) {
  HeadSpec head;
  if (text == "sign_up") return HeadSpec{HeadKind::sign_up, 0.0, ""};
  if (text == "sign_down") return HeadSpec{HeadKind::sign_down, 0.0, ""};
  size_t colon = text.find(':');
  if (colon != std::string::npos) {
    std::string kind = text.substr(0, colon);
    std::string value = text.substr(colon + 1);
    double threshold = parse_double(value, "head threshold");
    if (kind == "above") return HeadSpec{HeadKind::above, threshold, value};
    if (kind == "below") return HeadSpec{HeadKind::below, threshold, value};
  }
  fail(Err::ConfigError, "bad head form '" + text + "'");
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string where = section.empty() ? key : section + "." + key;
  if (section == "run" || section.empty()) {
    if (key == "alpha") c.alpha = parse_double(value, where);
    else if (key == "bonferroni") c.bonferroni = parse_bool(value, where);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "jobs") c.jobs = parse_int(value, where);
    else if (key == "max_body") c.max_body = parse_int(value, where);
    else fail(Err::ConfigError, "unknown config key '" + where + "'");
    return;
  }
  if (section == "learn") {
    if (key == "max_new_vars") c.learn.max_new_vars = parse_int(value, where);
    else if (key == "min_clause_pos") c.learn.min_clause_pos = parse_int(value, where);
    else if (key == "max_clause_len") c.learn.max_clause_len = parse_int(value, where);
    else if (key == "neg_tolerance") c.learn.neg_tolerance = parse_double(value, where);
    else if (key == "allow_negated") c.learn.allow_negated = parse_bool(value, where);
    else if (key == "use_typing") c.learn.use_typing = parse_bool(value, where);
    else if (key == "use_constraints") c.learn.use_constraints = parse_bool(value, where);
    else if (key == "prune") c.learn.prune = parse_bool(value, where);
    else if (key == "depth_limit") c.learn.depth_limit = parse_int(value, where);
    else if (key == "time_budget_ms")
      c.learn.time_budget = std::chrono::milliseconds(parse_int(value, where));
    else fail(Err::ConfigError, "unknown config key '" + where + "'");
    return;
  }
  if (section == "encode") {
    if (key == "target") c.encoding.target_attr = value;
    else if (key == "lags") {
      c.encoding.lags.clear();
      for (const auto& item : split_list(value))
        c.encoding.lags.push_back(parse_int(item, where));
    } else if (key == "binary_greater") c.encoding.binary_greater = parse_bool(value, where);
    else if (key == "weekday_predicates")
      c.encoding.weekday_predicates = parse_bool(value, where);
    else if (key == "heads") {
      c.encoding.heads.clear();
      for (const auto& item : split_list(value))
        c.encoding.heads.push_back(parse_head_spec(item));
    } else if (key.rfind("thresholds.", 0) == 0) {
      std::string attr = key.substr(11);
      for (const auto& item : split_list(value))
        c.encoding.thresholds[attr].emplace_back(parse_double(item, where), item);
    } else if (key.rfind("quantiles.", 0) == 0) {
      std::string attr = key.substr(10);
      for (const auto& item : split_list(value))
        c.encoding.quantiles[attr].push_back(parse_double(item, where));
    } else fail(Err::ConfigError, "unknown config key '" + where + "'");
    return;
  }
  if (section == "grammar") {
    if (key == "max_body") c.max_body = parse_int(value, where);
    else if (key == "max_existential_vars")
      c.grammar_existential_vars = parse_int(value, where);
    else if (key == "negation") c.grammar_negation = parse_bool(value, where);
    else if (key == "predicates") c.grammar_predicates = split_list(value);
    else fail(Err::ConfigError, "unknown config key '" + where + "'");
    return;
  }
  if (section == "backtest") {
    if (key == "train_window") c.backtest.train_window = parse_int(value, where);
    else if (key == "test_window") c.backtest.test_window = parse_int(value, where);
    else if (key == "step") c.backtest.step = parse_int(value, where);
    else if (key == "risk_free_rate") c.backtest.risk_free_rate = parse_double(value, where);
    else if (key == "transaction_cost")
      c.backtest.transaction_cost = parse_double(value, where);
    else if (key == "strategy") {
      if (value == "long_cash") c.backtest.strategy = Strategy::long_cash;
      else if (value == "long_short") c.backtest.strategy = Strategy::long_short;
      else fail(Err::ConfigError, "unknown strategy '" + value + "'");
    } else fail(Err::ConfigError, "unknown config key '" + where + "'");
    return;
  }
  fail(Err::ConfigError, "unknown config section '" + section + "'");
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ConfigError, "cannot open config file '" + path + "'");
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Err::ConfigError, path + ":" + std::to_string(line_no) + ": expected key = value");
    apply_key(config, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

Command command_from_name(const std::string& name) {
  if (name == "encode") return Command::encode;
  if (name == "mine") return Command::mine;
  if (name == "forecast") return Command::forecast;
  if (name == "backtest") return Command::backtest;
  if (name == "inspect") return Command::inspect;
  fail(Err::ConfigError, "unknown command '" + name + "'");
}

LearnerKind learner_from_name(const std::string& name) {
  if (name == "foil") return LearnerKind::foil;
  if (name == "focl") return LearnerKind::focl;
  if (name == "mmdr") return LearnerKind::mmdr;
  fail(Err::ConfigError, "unknown learner '" + name + "'");
}

HypothesisGrammar grammar_for(const RunConfig& config, const EncodedDataset& dataset) {
  HypothesisGrammar grammar;
  grammar.max_body_literals = config.max_body;
  grammar.max_existential_vars = config.grammar_existential_vars;
  for (const auto& head : config.encoding.heads)
    grammar.head_predicates.push_back(
        head_predicate_name(config.encoding.target_attr, head));
  if (!config.grammar_predicates.empty()) {
    for (const auto& pred : config.grammar_predicates)
      grammar.body_predicates.push_back({pred, config.grammar_negation});
    return grammar;
  }
  for (const auto& [pred, sig] : dataset.store.signatures()) {
    if (dataset.head_forms.count(pred)) continue;
    if (sig.arity() != 1 || sig.arg_types[0] != dataset.day_type) continue;
    grammar.body_predicates.push_back({pred, config.grammar_negation});
  }
  return grammar;
}

namespace {

void write_artifact(const RunConfig& config, const std::string& name,
                    const std::string& content) {
  std::filesystem::create_directories(config.out_dir);
  std::filesystem::path path = std::filesystem::path(config.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::ConfigError, "cannot write '" + path.string() + "'");
  out << content;
}

MarketSeries require_series(const RunConfig& config) {
  if (config.input_path.empty())
    fail(Err::ConfigError, "this command needs --input <csv>");
  return load_series(config.input_path);
}

std::vector<Rule> load_catalogue(const std::string& path, const FactStore& store) {
  std::vector<Rule> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) fail(Err::ConfigError, "cannot open hypotheses file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Rule r;
    r.clauses.push_back(parse_clause(line, store));
    out.push_back(std::move(r));
  }
  return out;
}

// Task framing of an encoded target head: positives are defined rows where
// the head holds, negatives the rest; head predicates never appear as body
// candidates.
FoclTask task_from_encoding(const EncodedDataset& dataset, LearnConfig& learn) {
  if (dataset.head_forms.empty()) fail(Err::ConfigError, "encoding produced no target head");
  std::string target = dataset.head_forms.begin()->first;
  FoclTask task;
  task.target = target;
  for (int row = 0; row < dataset.rows(); ++row) {
    if (!dataset.defined(target, row)) continue;
    Tuple day = {Value::symbol(dataset.dates[row])};
    (dataset.pred_true(target, row) ? task.pos : task.neg).push_back(day);
  }
  for (const auto& [pred, form] : dataset.head_forms) {
    (void)form;
    learn.exclude_predicates.insert(pred);
  }
  return task;
}

void run_encode(const RunConfig& config) {
  if (!config.input_path.empty()) {
    MarketSeries series = require_series(config);
    EncodedDataset dataset = encode(series, config.encoding);
    write_artifact(config, "facts.tsv", dataset.store.dump());
    if (!config.quiet)
      std::cout << "encoded " << series.size() << " rows into "
                << dataset.store.signatures().size() << " predicates\n";
    return;
  }
  if (!config.knowledge_path.empty()) {
    Knowledge k = load_knowledge(config.knowledge_path);
    write_artifact(config, "facts.tsv", k.store.dump());
    if (!config.quiet) std::cout << "dumped knowledge facts\n";
    return;
  }
  fail(Err::ConfigError, "encode needs --input or --knowledge");
}

void run_mine(const RunConfig& config) {
  if (config.learner == LearnerKind::mmdr) {
    MarketSeries series = require_series(config);
    EncodedDataset dataset = encode(series, config.encoding);
    std::vector<Rule> catalogue = load_catalogue(config.hypotheses_path, dataset.store);
    std::vector<ScoredRule> selected =
        mmdr_mine(dataset, grammar_for(config, dataset), config.alpha, config.bonferroni,
                  config.jobs, catalogue);
    write_artifact(config, "rules.txt", rule_report(selected));
    if (!config.quiet)
      std::cout << "selected " << selected.size() << " law-like rules\n";
    return;
  }
  LearnConfig learn = config.learn;
  FoclTask task;
  Knowledge knowledge;
  EncodedDataset dataset;
  const FactStore* store = nullptr;
  if (!config.knowledge_path.empty()) {
    knowledge = load_knowledge(config.knowledge_path);
    if (!knowledge.task) fail(Err::ConfigError, "knowledge file declares no target examples");
    knowledge.store.freeze();
    task = FoclTask::from_knowledge(knowledge);
    store = &knowledge.store;
  } else if (!config.input_path.empty()) {
    MarketSeries series = require_series(config);
    dataset = encode(series, config.encoding);
    task = task_from_encoding(dataset, learn);
    store = &dataset.store;
  } else {
    fail(Err::ConfigError, "mine with foil/focl needs --knowledge or --input");
  }
  LearnResult result;
  if (config.learner == LearnerKind::foil) {
    task.initial_rules.clear();
    result = foil_learn(task.pos, task.neg, task.target, *store, learn);
  } else {
    result = focl_learn(task, *store, learn);
  }
  write_artifact(config, "rules.txt", to_text(result.rule) + "\n");
  write_artifact(config, "trace.txt", result.trace);
  write_artifact(config, "counters.txt", stats_report(result.stats));
  if (!config.quiet)
    std::cout << "learned " << result.rule.clauses.size() << " clause(s); "
              << result.uncovered_pos.size() << " positive(s) uncovered\n";
}

void run_forecast(const RunConfig& config) {
  if (config.learner != LearnerKind::mmdr)
    fail(Err::ConfigError, "forecast drives the mmdr learner only");
  MarketSeries series = require_series(config);
  EncodedDataset dataset = encode(series, config.encoding);
  std::vector<Rule> catalogue = load_catalogue(config.hypotheses_path, dataset.store);
  std::vector<ScoredRule> selected =
      mmdr_mine(dataset, grammar_for(config, dataset), config.alpha, config.bonferroni,
                config.jobs, catalogue);
  std::string stream;
  for (int row = 0; row < dataset.rows(); ++row) {
    Sign sign = sign_forecast(selected, dataset, row);
    std::string lower = "-inf";
    std::string upper = "inf";
    std::string ids;
    std::string target_date = row + 1 < dataset.rows() ? dataset.dates[row + 1]
                                                       : dataset.dates[row] + "+1";
    try {
      IntervalForecast interval = interval_forecast(selected, dataset, row);
      lower = std::isinf(interval.lower) ? "-inf" : format_number(interval.lower);
      upper = std::isinf(interval.upper) ? "inf" : format_number(interval.upper);
      for (size_t i = 0; i < interval.supporting.size(); ++i)
        ids += (i ? "," : "") + ("R" + std::to_string(interval.supporting[i]));
      target_date = interval.target_date;
    } catch (const Error& e) {
      if (e.code() != Err::EmptyIntersection) throw;
      lower = upper = "nan";
    }
    stream +=
        target_date + "\t" + sign_name(sign) + "\t" + lower + "\t" + upper + "\t" + ids + "\n";
  }
  write_artifact(config, "rules.txt", rule_report(selected));
  write_artifact(config, "forecast.tsv", stream);
  if (!config.quiet)
    std::cout << "forecast stream of " << dataset.rows() << " rows written\n";
}

void run_backtest(const RunConfig& config) {
  if (config.learner != LearnerKind::mmdr)
    fail(Err::ConfigError, "backtest drives the mmdr learner only");
  MarketSeries series = require_series(config);
  RunConfig local = config;  // learner lambda needs stable copies
  Learner learner = [&local](const MarketSeries& train, int fold) {
    (void)fold;
    EncodedDataset dataset = encode(train, local.encoding);
    std::vector<Rule> catalogue = load_catalogue(local.hypotheses_path, dataset.store);
    return mmdr_mine(dataset, grammar_for(local, dataset), local.alpha, local.bonferroni,
                     local.jobs, catalogue);
  };
  WalkForwardResult result =
      walk_forward(series, config.encoding, learner, config.backtest, config.seed);
  write_artifact(config, "backtest.csv", result.csv());
  std::string forecasts;
  std::string rules;
  for (const auto& fold : result.folds) {
    rules += "# fold " + std::to_string(fold.fold) + "\n" + fold.rule_report;
    for (const auto& line : fold.forecast_lines) forecasts += line + "\n";
  }
  write_artifact(config, "forecast.tsv", forecasts);
  write_artifact(config, "rules.txt", rules);
  if (!config.quiet)
    std::cout << "backtest folds: " << result.folds.size()
              << "  mean accuracy: " << result.mean_accuracy_pct << "%\n";
}

void run_inspect(const RunConfig& config) {
  if (!config.knowledge_path.empty()) {
    Knowledge k = load_knowledge(config.knowledge_path);
    std::cout << describe_knowledge(k);
    return;
  }
  if (!config.input_path.empty()) {
    MarketSeries series = require_series(config);
    std::cout << "rows: " << series.size() << "\nattributes:";
    for (const auto& a : series.attributes) std::cout << " " << a;
    std::cout << "\n";
    if (series.size() > 0)
      std::cout << "dates: " << series.rows.front().date << " .. "
                << series.rows.back().date << "\n";
    return;
  }
  fail(Err::ConfigError, "inspect needs --knowledge or --input");
}

}  // namespace

void run(const RunConfig& config) {
  switch (config.command) {
    case Command::encode: run_encode(config); return;
    case Command::mine: run_mine(config); return;
    case Command::forecast: run_forecast(config); return;
    case Command::backtest: run_backtest(config); return;
    case Command::inspect: run_inspect(config); return;
  }
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Err::ConfigError:
      return 2;
    case Err::NoPositives:
    case Err::NoUsefulLiteral:
    case Err::Unlearnable:
    case Err::TimeBudgetExceeded:
    case Err::NotIntensional:
    case Err::NotOperationalizable:
      return 4;
    default:
      return 3;
  }
}

}  // namespace lawmine
