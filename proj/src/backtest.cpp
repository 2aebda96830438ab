#include "lawmine/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace lawmine {

SignAccuracy sign_accuracy(const std::vector<Sign>& predictions,
                           const std::vector<Sign>& actuals) {
  if (predictions.size() != actuals.size())
    fail(Err::AlignmentError, "prediction and actual streams differ in length");
  SignAccuracy acc;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == Sign::abstain) {
      ++acc.abstain;
      continue;
    }
    if (actuals[i] == Sign::abstain)
      fail(Err::AlignmentError, "actual outcomes must be up or down");
    if (predictions[i] == actuals[i]) ++acc.correct;
    else ++acc.incorrect;
  }
  if (acc.correct + acc.incorrect == 0)
    fail(Err::NoDecisions, "every prediction abstained");
  acc.percent = 100.0 * double(acc.correct) / double(acc.correct + acc.incorrect);
  return acc;
}

double annualized_gain_pct(double final_over_initial, int steps) {
  if (steps <= 0) return 0.0;
  return (std::pow(final_over_initial, double(kTradingDaysPerYear) / double(steps)) - 1.0) *
         100.0;
}

TradeLedger simulate_trading(const std::vector<Sign>& signals,
                             const std::vector<double>& prices, const BacktestConfig& config,
                             const std::vector<std::string>* dates) {
  if (prices.size() != signals.size() + 1)
    fail(Err::AlignmentError, "need one more price than signals");
  for (double p : prices)
    if (!(p > 0.0)) fail(Err::AlignmentError, "prices must be positive");
  if (dates && dates->size() != prices.size())
    fail(Err::AlignmentError, "dates must align with prices");

  double rf_daily = 1.0 + config.risk_free_rate / double(kTradingDaysPerYear);
  TradeLedger ledger;
  double value = 1.0;   // cash, or short equity
  double shares = 0.0;  // held while long
  int position = 0;
  auto date_at = [&](size_t i) { return dates ? (*dates)[i] : std::to_string(i); };
  ledger.days.push_back(TradeLedger::Day{date_at(0), Sign::abstain, 0, 1.0});

  for (size_t t = 0; t < signals.size(); ++t) {
    int target = 0;
    if (signals[t] == Sign::up) target = 1;
    else if (signals[t] == Sign::down && config.strategy == Strategy::long_short) target = -1;
    if (target != position) {
      if (position == 1) value = shares * prices[t];
      if (config.transaction_cost > 0.0)
        value *= std::pow(1.0 - config.transaction_cost, std::abs(target - position));
      if (target == 1) shares = value / prices[t];
      position = target;
    }
    double marked;
    if (position == 1) {
      marked = shares * prices[t + 1];
    } else if (position == 0) {
      value *= rf_daily;
      marked = value;
    } else {
      value *= 2.0 - prices[t + 1] / prices[t];
      marked = value;
      if (!(value > 0.0))
        fail(Err::AlignmentError, "short position wiped out the portfolio");
    }
    ledger.days.push_back(TradeLedger::Day{date_at(t + 1), signals[t], position, marked});
  }
  ledger.final_value = position == 1 ? shares * prices.back() : value;
  ledger.annual_gain_pct =
      annualized_gain_pct(ledger.final_value, static_cast<int>(signals.size()));
  return ledger;
}

double buy_and_hold_gain_pct(const std::vector<double>& prices) {
  if (prices.size() < 2) return 0.0;
  double shares = 1.0 / prices.front();
  return annualized_gain_pct(shares * prices.back(), static_cast<int>(prices.size()) - 1);
}

double risk_free_gain_pct(double annual_rate, int steps) {
  if (steps <= 0) return 0.0;
  double rf_daily = 1.0 + annual_rate / double(kTradingDaysPerYear);
  return annualized_gain_pct(std::pow(rf_daily, steps), steps);
}

std::vector<Sign> random_walk_baseline(int transitions, std::uint64_t seed) {
  std::vector<Sign> out;
  if (transitions <= 0) return out;
  std::mt19937_64 engine(seed);
  out.reserve(transitions);
  for (int i = 0; i < transitions; ++i)
    out.push_back((engine() & 1u) ? Sign::up : Sign::down);
  return out;
}

namespace {

std::string pct(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string bound_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

}  // namespace

std::string WalkForwardResult::csv() const {
  std::string out =
      "fold,train_start,train_end,test_start,test_end,decided,correct,incorrect,abstain,"
      "accuracy_pct,annual_gain_pct,buyhold_gain_pct,riskfree_gain_pct,"
      "randomwalk_accuracy_pct\n";
  for (const auto& f : folds) {
    out += std::to_string(f.fold) + "," + f.train_start + "," + f.train_end + "," +
           f.test_start + "," + f.test_end + "," +
           std::to_string(f.accuracy.correct + f.accuracy.incorrect) + "," +
           std::to_string(f.accuracy.correct) + "," + std::to_string(f.accuracy.incorrect) +
           "," + std::to_string(f.accuracy.abstain) + "," + pct(f.accuracy.percent) + "," +
           pct(f.annual_gain_pct) + "," + pct(f.buyhold_gain_pct) + "," +
           pct(f.riskfree_gain_pct) + "," + pct(f.randomwalk_accuracy_pct) + "\n";
  }
  out += "aggregate,,,,,,,,," + pct(mean_accuracy_pct) + "," + pct(mean_gain_pct) + "," +
         pct(mean_buyhold_pct) + "," + pct(mean_riskfree_pct) + ",\n";
  return out;
}

WalkForwardResult walk_forward(const MarketSeries& series, const EncodeOptions& encode_options,
                               const Learner& learner, const BacktestConfig& config,
                               std::uint64_t seed) {
  if (config.train_window <= 0 || config.test_window <= 0 || config.step <= 0 ||
      config.step > config.test_window)
    fail(Err::ConfigError, "backtest windows must be positive with step <= test_window");
  int n = series.size();
  if (n < config.train_window + config.test_window)
    fail(Err::InsufficientData, "series of " + std::to_string(n) +
                                    " rows is shorter than train+test windows");
  EncodedDataset full = encode(series, encode_options);

  WalkForwardResult result;
  int fold_index = 0;
  for (int start = 0; start + config.train_window + config.test_window <= n;
       start += config.step) {
    int train_begin = start;
    int train_end = start + config.train_window;  // exclusive
    int test_end = std::min(n, train_end + config.test_window);

    MarketSeries train = series.slice(train_begin, config.train_window);
    std::vector<ScoredRule> rules = learner(train, fold_index);

    FoldReport fold;
    fold.fold = fold_index;
    fold.train_start = series.rows[train_begin].date;
    fold.train_end = series.rows[train_end - 1].date;
    fold.test_start = series.rows[train_end].date;
    fold.test_end = series.rows[test_end - 1].date;
    fold.rule_report = rule_report(rules);

    std::vector<Sign> predictions;
    std::vector<Sign> actuals;
    std::vector<double> prices;
    std::vector<std::string> dates;
    prices.push_back(series.number(train_end - 1, full.target_attr));
    dates.push_back(series.rows[train_end - 1].date);
    for (int r = train_end; r < test_end; ++r) {
      int t = r - 1;  // decision day
      Sign sign = sign_forecast(rules, full, t);
      predictions.push_back(sign);
      actuals.push_back(series.number(r, full.target_attr) >
                                series.number(t, full.target_attr)
                            ? Sign::up
                            : Sign::down);
      prices.push_back(series.number(r, full.target_attr));
      dates.push_back(series.rows[r].date);
      std::string lower = "-inf";
      std::string upper = "inf";
      std::string ids;
      try {
        IntervalForecast interval = interval_forecast(rules, full, t);
        lower = bound_text(interval.lower);
        upper = bound_text(interval.upper);
        for (size_t i = 0; i < interval.supporting.size(); ++i)
          ids += (i ? "," : "") + ("R" + std::to_string(interval.supporting[i]));
      } catch (const Error& e) {
        if (e.code() != Err::EmptyIntersection) throw;
        lower = upper = "nan";
      }
      fold.forecast_lines.push_back(series.rows[r].date + "\t" + sign_name(sign) + "\t" +
                                    lower + "\t" + upper + "\t" + ids);
    }

    try {
      fold.accuracy = sign_accuracy(predictions, actuals);
    } catch (const Error& e) {
      if (e.code() != Err::NoDecisions) throw;
      fold.accuracy = SignAccuracy{std::nan(""), 0, 0, static_cast<int>(predictions.size())};
    }
    TradeLedger ledger = simulate_trading(predictions, prices, config, &dates);
    fold.annual_gain_pct = ledger.annual_gain_pct;
    fold.buyhold_gain_pct = buy_and_hold_gain_pct(prices);
    fold.riskfree_gain_pct =
        risk_free_gain_pct(config.risk_free_rate, static_cast<int>(predictions.size()));
    std::vector<Sign> random_signals =
        random_walk_baseline(static_cast<int>(predictions.size()),
                             seed + static_cast<std::uint64_t>(fold_index));
    SignAccuracy random_acc = sign_accuracy(random_signals, actuals);
    fold.randomwalk_accuracy_pct = random_acc.percent;

    result.folds.push_back(std::move(fold));
    ++fold_index;
  }

  int counted = 0;
  for (const auto& f : result.folds) {
    if (!std::isnan(f.accuracy.percent)) {
      result.mean_accuracy_pct += f.accuracy.percent;
      ++counted;
    }
    result.mean_gain_pct += f.annual_gain_pct;
    result.mean_buyhold_pct += f.buyhold_gain_pct;
    result.mean_riskfree_pct += f.riskfree_gain_pct;
  }
  size_t folds = result.folds.size();
  result.mean_accuracy_pct =
      counted > 0 ? result.mean_accuracy_pct / counted : std::nan("");
  if (folds > 0) {
    result.mean_gain_pct /= double(folds);
    result.mean_buyhold_pct /= double(folds);
    result.mean_riskfree_pct /= double(folds);
  }
  return result;
}

}  // namespace lawmine
