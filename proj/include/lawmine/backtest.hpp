#pragma once

// Walk-forward evaluation of sign forecasts and simulated trading against
// Buy-and-Hold, Risk-Free and Random-Walk baselines.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lawmine/mmdr.hpp"
#include "lawmine/series.hpp"

namespace lawmine {

inline constexpr int kTradingDaysPerYear = 252;

enum class Strategy { long_cash, long_short };

struct BacktestConfig {
  int train_window = 252;
  int test_window = 63;
  int step = 63;
  Strategy strategy = Strategy::long_cash;
  double risk_free_rate = 0.03;  // annual fraction, daily compounded as rate/252
  double transaction_cost = 0.0;  // fraction per position change
};

struct SignAccuracy {
  double percent = 0.0;  // over decided (non-abstain) days
  int correct = 0;
  int incorrect = 0;
  int abstain = 0;
};

// Abstains leave the denominator and are reported separately; all-abstain
// streams raise NoDecisions.
SignAccuracy sign_accuracy(const std::vector<Sign>& predictions,
                           const std::vector<Sign>& actuals);

struct TradeLedger {
  struct Day {
    std::string date;
    Sign signal = Sign::abstain;
    int position = 0;  // 1 long, 0 cash, -1 short
    double value = 1.0;
  };

  std::vector<Day> days;
  double final_value = 1.0;
  double annual_gain_pct = 0.0;  // (final^(252/steps) - 1) * 100
};

// signals[t] is decided at close t and applies over t -> t+1, so
// prices.size() == signals.size() + 1. Long positions hold shares (exact
// Buy-and-Hold identity); cash accrues rate/252 daily; shorts rebalance
// daily under long_short; abstain sits in cash.
TradeLedger simulate_trading(const std::vector<Sign>& signals,
                             const std::vector<double>& prices, const BacktestConfig& config,
                             const std::vector<std::string>* dates = nullptr);

double annualized_gain_pct(double final_over_initial, int steps);
double buy_and_hold_gain_pct(const std::vector<double>& prices);
double risk_free_gain_pct(double annual_rate, int steps);

// Seeded uniform up/down stream, one signal per price transition.
std::vector<Sign> random_walk_baseline(int transitions, std::uint64_t seed);

struct FoldReport {
  int fold = 0;
  std::string train_start, train_end, test_start, test_end;
  SignAccuracy accuracy;
  double annual_gain_pct = 0.0;
  double buyhold_gain_pct = 0.0;
  double riskfree_gain_pct = 0.0;
  double randomwalk_accuracy_pct = 0.0;
  std::string rule_report;
  std::vector<std::string> forecast_lines;  // date TAB sign TAB lower TAB upper TAB ids
};

struct WalkForwardResult {
  std::vector<FoldReport> folds;
  double mean_accuracy_pct = 0.0;  // unweighted mean over folds
  double mean_gain_pct = 0.0;
  double mean_buyhold_pct = 0.0;
  double mean_riskfree_pct = 0.0;

  // CSV: one row per fold plus an aggregate row.
  std::string csv() const;
};

using Learner =
    std::function<std::vector<ScoredRule>(const MarketSeries& train, int fold)>;

// Fit on train_window rows, forecast the following test_window rows, slide
// by step. Fitting sees only the train slice; test-day firing uses lags of
// rows at or before the forecast day.
WalkForwardResult walk_forward(const MarketSeries& series, const EncodeOptions& encode_options,
                               const Learner& learner, const BacktestConfig& config,
                               std::uint64_t seed);

}  // namespace lawmine
