// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria cover paper-example fidelity, oracle equivalence,
// planted-rule recovery, search-cost reduction, noise guarding, backtest
// identities and byte-level determinism.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lawmine/backtest.hpp"
#include "lawmine/driver.hpp"
#include "lawmine/focl.hpp"
#include "lawmine/mmdr.hpp"

#include "../unit/oracles.hpp"
#include "../unit/support.hpp"

using namespace lawmine;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("[%s] %2d %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " - ", detail.c_str());
  if (!pass) ++failures;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// 1. FOIL on the window tables learns a rule extensionally equivalent to the
//    pair rule, within a second.
void criterion_updown() {
  auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    Knowledge k = testkit::updown_fixture();
    LearnResult result =
        foil_learn(k.task->pos, k.task->neg, k.task->target, k.store, LearnConfig{});
    HornClause reference =
        parse_clause("updown(x, y, z) <- up(x, y) & down(y, z)", k.store);
    pass = result.uncovered_pos.empty();
    for (const auto& e : k.task->pos)
      pass = pass && rule_covers(result.rule, e, k.store) &&
             clause_covers(reference, e, k.store);
    for (const auto& e : k.task->neg)
      pass = pass && !rule_covers(result.rule, e, k.store) &&
             !clause_covers(reference, e, k.store);
    double ms = elapsed_ms(start);
    pass = pass && ms < 1000.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "learned '%s' in %.1f ms",
                  to_text(result.rule).c_str(), ms);
    detail = buf;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(1, "window-rule fidelity (coverage match on all 4 examples)", pass, detail);
}

// 2. The two catalogue rules on the four-row table produce the exact
//    interval (54.6, 60) for the next day.
void criterion_interval() {
  auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    MarketSeries series = load_series(testkit::data_path("table2.csv"));
    EncodeOptions opt;
    opt.thresholds["price"] = {{60.0, "60"}};
    opt.thresholds["volume"] = {{900000.0, "900000"}};
    opt.heads = {HeadSpec{HeadKind::sign_up, 0, ""}, HeadSpec{HeadKind::below, 60.0, "60"}};
    EncodedDataset ds = encode(series, opt);
    std::vector<Rule> catalogue;
    {
      std::ifstream in(testkit::data_path("section3_rules.txt"));
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        Rule r;
        r.clauses.push_back(parse_clause(line, ds.store));
        catalogue.push_back(std::move(r));
      }
    }
    auto scored = score_hypotheses(catalogue, ds);
    IntervalForecast f = interval_forecast(scored, ds, ds.row_of_date("1999-01-03"));
    double ms = elapsed_ms(start);
    pass = scored.size() == 2 && f.lower == 54.6 && f.upper == 60.0 &&
           f.target_date == "1999-01-04" && ms < 1000.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "interval (%g, %g) for %s in %.1f ms", f.lower, f.upper,
                  f.target_date.c_str(), ms);
    detail = buf;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(2, "interval fidelity (54.6, 60)", pass, detail);
}

// 3. Gain formula vs arbitrary-precision oracle on 1000+ random states.
void criterion_gain_oracle() {
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(1000003);
  int checked = 0;
  for (int i = 0; i < 1200 && pass; ++i) {
    GainState s;
    s.p0 = 1 + std::int64_t(rng() % 2000);
    s.n0 = std::int64_t(rng() % 2000);
    s.p1 = std::int64_t(rng() % 4000);
    s.n1 = std::int64_t(rng() % 4000);
    s.t_plus_plus = std::int64_t(rng() % (s.p0 + 1));
    double got = information_gain(s);
    if (s.p1 == 0) {
      pass = std::isinf(got) && got < 0;
    } else {
      double want = oracles::gain_oracle(s.p0, s.n0, s.p1, s.n1, s.t_plus_plus);
      double scale = std::max(1e-300, std::fabs(want));
      pass = want == 0.0 ? std::fabs(got) < 1e-12 : std::fabs(got - want) / scale <= 1e-12;
    }
    ++checked;
  }
  pass = pass && std::isinf(information_gain({5, 5, 0, 3, 0}));
  detail = std::to_string(checked) + " randomized states, relative error <= 1e-12";
  report(3, "gain-formula oracle", pass, detail);
}

// 4. clause_covers vs brute-force enumeration on 200 random kbs.
void criterion_coverage_oracle() {
  bool pass = true;
  std::mt19937_64 rng(424242);
  int disagreements = 0;
  int checked = 0;
  for (int round = 0; round < 200; ++round) {
    testkit::RandomKb kb = testkit::make_random_kb(rng);
    kb.store.freeze();
    HornClause clause = testkit::make_random_clause(kb, rng);
    for (int i = 0; i < 4; ++i) {
      Tuple example = testkit::make_random_example(kb, clause.head.pred, rng);
      bool got = clause_covers(clause, example, kb.store);
      bool want = oracles::covers_oracle(clause, example, kb.store);
      if (got != want) ++disagreements;
      ++checked;
    }
  }
  pass = disagreements == 0;
  report(4, "coverage oracle (200 random kbs)", pass,
         std::to_string(checked) + " coverage checks, " + std::to_string(disagreements) +
             " disagreements");
}

// 5. Fisher p-value vs exact hypergeometric enumeration for all tables with
//    total <= 60, plus the two spot values.
void criterion_fisher_oracle() {
  bool pass = true;
  double worst = 0.0;
  long long tables = 0;
  for (int total = 1; total <= 60 && pass; ++total) {
    for (int a = 0; a <= total; ++a) {
      for (int b = 0; a + b <= total; ++b) {
        for (int c = 0; a + b + c <= total; ++c) {
          int d = total - a - b - c;
          double got = fisher_p_value(a, b, c, d);
          double want = oracles::fisher_oracle(a, b, c, d);
          double err = std::fabs(got - want);
          worst = std::max(worst, err);
          if (err >= 1e-12) {
            pass = false;
            break;
          }
          ++tables;
        }
        if (!pass) break;
      }
      if (!pass) break;
    }
  }
  pass = pass && std::fabs(fisher_p_value(5, 0, 0, 5) - 1.0 / 252.0) < 1e-15;
  pass = pass && std::fabs(fisher_p_value(1, 1, 1, 1) - 5.0 / 6.0) < 1e-15;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%lld tables, worst error %.2e", tables, worst);
  report(5, "fisher oracle (all tables with total <= 60)", pass, buf);
}

// 6. Planted-rule recovery with out-of-sample accuracy over 10 seeds.
void criterion_planted_recovery() {
  int good_seeds = 0;
  double worst_ms = 0.0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto start = std::chrono::steady_clock::now();
    try {
      MarketSeries series = testkit::planted_series(600, seed);
      EncodeOptions encoding;
      Learner learner = [&encoding](const MarketSeries& train, int) {
        EncodedDataset ds = encode(train, encoding);
        HypothesisGrammar grammar;
        grammar.body_predicates = {{"price_up_1", false}, {"volume_up_1", false}};
        grammar.head_predicates = {"price_next_up"};
        grammar.max_body_literals = 2;
        return mmdr_mine(ds, grammar, 0.05);
      };
      BacktestConfig config;
      config.train_window = 400;
      config.test_window = 200;
      config.step = 200;
      WalkForwardResult result = walk_forward(series, encoding, learner, config, seed);
      // fit once more on the train slice to inspect the selected bodies
      auto rules = learner(series.slice(0, 400), 0);
      bool planted_found = false;
      for (const auto& r : rules) {
        std::set<std::string> body;
        for (const auto& lit : r.rule.clauses[0].body) body.insert(to_text(lit));
        if (body == std::set<std::string>{"price_up_1(t)", "volume_up_1(t)"})
          planted_found = true;
      }
      double accuracy = result.folds.at(0).accuracy.percent;
      double ms = elapsed_ms(start);
      worst_ms = std::max(worst_ms, ms);
      if (planted_found && accuracy >= 80.0 && ms < 60000.0) ++good_seeds;
    } catch (const std::exception&) {
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/10 seeds recovered, slowest %.0f ms", good_seeds,
                worst_ms);
  report(6, "planted-rule recovery (>= 9 of 10 seeds)", good_seeds >= 9, buf);
}

// 7. Typing strictly reduces evaluated literals on the four-day window task
//    while learning the identical rule.
void criterion_typing_value() {
  bool pass = false;
  std::string detail;
  try {
    Knowledge k = testkit::load_fixture("table11.kb");
    FoclTask task = FoclTask::from_knowledge(k);
    LearnConfig typed;
    LearnConfig untyped = typed;
    untyped.use_typing = false;
    LearnResult with_types = focl_learn(task, k.store, typed);
    LearnResult without_types = focl_learn(task, k.store, untyped);
    pass = to_text(with_types.rule) == to_text(without_types.rule) &&
           with_types.stats.gain_evaluations < without_types.stats.gain_evaluations;
    detail = "evaluations " + std::to_string(with_types.stats.gain_evaluations) +
             " (typed) vs " + std::to_string(without_types.stats.gain_evaluations) +
             " (untyped); rule '" + to_text(with_types.rule) + "'";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(7, "typing reduces literal evaluations, identical rule", pass, detail);
}

// 8. On pure-noise targets, the fraction of grammar hypotheses passing
//    alpha = 0.05 across 10 seeds stays at or below 0.10. The fraction pools
//    the seeds: single-seed fractions are heavy-tailed because correlated
//    hypothesis clusters pass together (the multiple-testing inflation the
//    selection stage deliberately leaves uncorrected).
void criterion_noise_guardrail() {
  long long passed = 0;
  long long scored_total = 0;
  int hypotheses_seen = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MarketSeries series = testkit::noise_series(600, 3, 9000 + seed);
    EncodeOptions opt;
    opt.lags = {1, 2};
    for (int i = 0; i < 3; ++i) opt.quantiles["sig" + std::to_string(i)] = {0.5};
    EncodedDataset ds = encode(series, opt);
    HypothesisGrammar grammar;
    for (const auto& [pred, sig] : ds.store.signatures()) {
      if (ds.head_forms.count(pred)) continue;
      if (sig.arity() == 1 && sig.arg_types[0] == ds.day_type)
        grammar.body_predicates.push_back({pred, false});
    }
    grammar.head_predicates = {"price_next_up"};
    grammar.max_body_literals = 3;
    auto stream = enumerate_hypotheses(grammar, ds);
    hypotheses_seen = static_cast<int>(stream.size());
    auto scored = score_hypotheses(stream, ds, 2);
    scored_total += static_cast<long long>(scored.size());
    for (const auto& s : scored)
      if (s.p_value <= 0.05) ++passed;
  }
  double fraction = scored_total == 0 ? 0.0 : double(passed) / double(scored_total);
  bool pass = fraction <= 0.10 && hypotheses_seen >= 200;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d hypotheses/seed, pass fraction %.4f over 10 seeds",
                hypotheses_seen, fraction);
  report(8, "noise guardrail (pass fraction <= 0.10 across 10 seeds)", pass, buf);
}

// 9. Backtest identities: buy-and-hold reproduction, the 3.05 risk-free
//    figure and perfect-foresight dominance on 100 random series.
void criterion_backtest_identities() {
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(31337);
  auto uniform = [&]() { return double(rng() >> 11) * (1.0 / 9007199254740992.0); };
  // all-up equals buy-and-hold exactly
  for (int round = 0; round < 25 && pass; ++round) {
    std::vector<double> prices = {50.0 + uniform() * 100.0};
    for (int i = 0; i < 80; ++i)
      prices.push_back(prices.back() * (0.98 + 0.04 * uniform()));
    std::vector<Sign> all_up(prices.size() - 1, Sign::up);
    TradeLedger ledger = simulate_trading(all_up, prices, BacktestConfig{});
    if (ledger.annual_gain_pct != buy_and_hold_gain_pct(prices)) pass = false;
  }
  // the risk-free baseline prints 3.05 at two decimals
  char rf[16];
  std::snprintf(rf, sizeof rf, "%.2f", risk_free_gain_pct(0.03, 252));
  if (std::string(rf) != "3.05") pass = false;
  // perfect foresight beats buy-and-hold on 100 random 50-day series
  int violations = 0;
  for (int round = 0; round < 100; ++round) {
    std::vector<double> prices = {100.0};
    for (int i = 0; i < 49; ++i)
      prices.push_back(prices.back() * (0.97 + 0.06 * uniform()));
    std::vector<Sign> foresight;
    for (size_t i = 0; i + 1 < prices.size(); ++i)
      foresight.push_back(prices[i + 1] > prices[i] ? Sign::up : Sign::down);
    if (simulate_trading(foresight, prices, BacktestConfig{}).annual_gain_pct <
        buy_and_hold_gain_pct(prices))
      ++violations;
  }
  pass = pass && violations == 0;
  detail = "risk-free prints " + std::string(rf) + ", foresight violations " +
           std::to_string(violations) + "/100";
  report(9, "backtest identities", pass, detail);
}

// 10. mine and backtest artifacts are byte-identical across reruns and
//     across --jobs 1 vs --jobs 4.
void criterion_determinism() {
  bool pass = false;
  std::string detail;
  try {
    auto dir = std::filesystem::temp_directory_path() / "lawmine_acceptance_determinism";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    MarketSeries series = testkit::planted_series(320, 99);
    std::string csv = "date,price,volume\n";
    for (const auto& row : series.rows)
      csv += row.date + "," + row.values[0].str() + "," + row.values[1].str() + "\n";
    std::ofstream(dir / "series.csv") << csv;

    auto run_once = [&](const std::string& tag, Command command, int jobs) {
      RunConfig config;
      config.command = command;
      config.learner = LearnerKind::mmdr;
      config.input_path = (dir / "series.csv").string();
      config.out_dir = (dir / tag).string();
      config.jobs = jobs;
      config.seed = 7;
      config.quiet = true;
      config.backtest.train_window = 200;
      config.backtest.test_window = 120;
      config.backtest.step = 120;
      run(config);
      return dir / tag;
    };
    auto ma = run_once("mine_a", Command::mine, 1);
    auto mb = run_once("mine_b", Command::mine, 1);
    auto mc = run_once("mine_c", Command::mine, 4);
    bool mine_ok = slurp(ma / "rules.txt") == slurp(mb / "rules.txt") &&
                   slurp(ma / "rules.txt") == slurp(mc / "rules.txt");
    auto ba = run_once("bt_a", Command::backtest, 1);
    auto bb = run_once("bt_b", Command::backtest, 1);
    auto bc = run_once("bt_c", Command::backtest, 4);
    bool backtest_ok = true;
    for (const char* artifact : {"backtest.csv", "forecast.tsv", "rules.txt"}) {
      backtest_ok = backtest_ok && slurp(ba / artifact) == slurp(bb / artifact) &&
                    slurp(ba / artifact) == slurp(bc / artifact);
    }
    pass = mine_ok && backtest_ok;
    detail = std::string("mine ") + (mine_ok ? "stable" : "UNSTABLE") + ", backtest " +
             (backtest_ok ? "stable" : "UNSTABLE");
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(10, "byte-identical artifacts across runs and job counts", pass, detail);
}

}  // namespace

int main() {
  criterion_updown();
  criterion_interval();
  criterion_gain_oracle();
  criterion_coverage_oracle();
  criterion_fisher_oracle();
  criterion_planted_recovery();
  criterion_typing_value();
  criterion_noise_guardrail();
  criterion_backtest_identities();
  criterion_determinism();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
