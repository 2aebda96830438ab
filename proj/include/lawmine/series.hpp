#pragma once

// Attribute-value time series ingestion and relational encoding: lagged
// comparison predicates, threshold predicates and forecast-target heads
// materialized into a fact store over day constants.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lawmine/kb.hpp"
#include "lawmine/logic.hpp"

namespace lawmine {

inline const std::vector<std::string> kTradingWeekdays = {"mon", "tue", "wed", "thu", "fri"};

struct MarketSeries {
  struct Row {
    std::string date;  // ISO 8601
    int weekday = -1;  // 0=mon..4=fri, -1 when the date is not a trading weekday
    std::vector<Value> values;  // aligned with `attributes`
  };

  std::vector<std::string> attributes;  // column order from the input
  std::vector<Row> rows;

  int size() const { return static_cast<int>(rows.size()); }
  int attribute_index(const std::string& name) const;
  const Value& value(int row, const std::string& attr) const;
  double number(int row, const std::string& attr) const;
  MarketSeries slice(int first, int count) const;
};

// CSV with a header; required `date` column (YYYY-MM-DD), numeric columns,
// optional nominal `event` column. Dates must be strictly increasing.
MarketSeries ingest_series(std::istream& csv);
MarketSeries ingest_series_text(const std::string& csv);
MarketSeries load_series(const std::string& path);

enum class HeadKind { sign_up, sign_down, above, below };

struct HeadSpec {
  HeadKind kind = HeadKind::sign_up;
  double threshold = 0.0;  // above/below only
  std::string label;       // raw threshold text used in predicate names
};

struct HeadForm {
  HeadKind kind = HeadKind::sign_up;
  std::string attr;
  double threshold = 0.0;
};

struct EncodeOptions {
  std::string target_attr = "price";
  std::vector<int> lags = {1};
  // attribute -> cut points, with the raw text kept for predicate naming
  std::map<std::string, std::vector<std::pair<double, std::string>>> thresholds;
  std::map<std::string, std::vector<double>> quantiles;
  bool binary_greater = false;      // greater_<attr>(value, value) facts
  bool weekday_predicates = false;  // monday(t) .. friday(t)
  std::vector<HeadSpec> heads = {HeadSpec{}};
};

// Relational encoding of a series: day constants, derived predicates and
// target heads. Tracks the row range on which each predicate is defined so
// lag-edge rows are excluded from contingencies rather than counted false.
struct EncodedDataset {
  FactStore store;
  std::vector<std::string> dates;
  std::map<std::string, std::vector<double>> numeric_values;         // attr -> per-row
  std::map<std::string, std::pair<int, int>> defined_range;          // pred -> [first,last]
  std::map<std::string, HeadForm> head_forms;
  std::string target_attr;
  std::string day_type = "date";

  int rows() const { return static_cast<int>(dates.size()); }
  bool defined(const std::string& pred, int row) const;
  bool pred_true(const std::string& pred, int row) const;
  double attr_value(const std::string& attr, int row) const;
  int row_of_date(const std::string& date) const;  // -1 when absent
};

// Adds attr_up_<lag>(t) facts (value(t-lag) < value(t)) and, when asked,
// localized greater_<attr>(u, v) facts over observed values.
void derive_comparison_predicates(const MarketSeries& series, const std::string& attr,
                                  const std::vector<int>& lags, bool binary_greater,
                                  EncodedDataset& out);

// Adds attr_above_<c>(t) / attr_below_<c>(t) facts with strict comparison;
// quantile cut points use the lower nearest-rank method.
void derive_threshold_predicates(const MarketSeries& series, const std::string& attr,
                                 const std::vector<std::pair<double, std::string>>& cuts,
                                 const std::vector<double>& quantiles, EncodedDataset& out);

EncodedDataset encode(const MarketSeries& series, const EncodeOptions& options);

// Functional-expression term naming one row by all of its attribute values.
Term term_representation(const MarketSeries& series, int row);
// Selector for one attribute of such a term ("date" and "weekday" included).
Term projection(const MarketSeries& series, const Term& row_term, const std::string& attr);

double quantile_lower_nearest_rank(std::vector<double> values, double q);

// Head-form helper names, e.g. price_next_up / price_next_above_60.
std::string head_predicate_name(const std::string& attr, const HeadSpec& head);

}  // namespace lawmine
