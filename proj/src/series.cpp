#include "lawmine/series.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lawmine {

namespace {

struct CivilDate {
  int y, m, d;
};

CivilDate parse_iso_date(const std::string& s) {
  auto bad = [&]() { fail(Err::ParseError, "bad ISO date '" + s + "'"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') bad();
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad();
  CivilDate c{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
  std::chrono::year_month_day ymd{std::chrono::year{c.y}, std::chrono::month{unsigned(c.m)},
                                  std::chrono::day{unsigned(c.d)}};
  if (!ymd.ok()) bad();
  return c;
}

// 0=mon..4=fri, -1 for weekends.
int trading_weekday(const CivilDate& c) {
  std::chrono::year_month_day ymd{std::chrono::year{c.y}, std::chrono::month{unsigned(c.m)},
                                  std::chrono::day{unsigned(c.d)}};
  unsigned iso = std::chrono::weekday{std::chrono::sys_days{ymd}}.iso_encoding();  // 1=mon
  return iso <= 5 ? static_cast<int>(iso) - 1 : -1;
}

bool date_less(const std::string& a, const std::string& b) { return a < b; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    size_t b = field.find_first_not_of(" \t\r");
    size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool identifier_like(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string sanitize_label(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (c == '.') out += 'p';
    else if (c == '-') out += 'm';
    else if (c == '+') continue;
    else out += c;
  }
  return out;
}

Value day_constant(const std::string& date) { return Value::symbol(date); }

void ensure_day_predicate(EncodedDataset& out, const std::string& pred) {
  if (!out.store.signature(pred))
    out.store.add_signature(TypedSignature{pred, {out.day_type}, true});
}

void add_day_fact(EncodedDataset& out, const std::string& pred, int row) {
  out.store.add_fact(pred, {day_constant(out.dates[row])});
}

}  // namespace

int MarketSeries::attribute_index(const std::string& name) const {
  for (size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i] == name) return static_cast<int>(i);
  return -1;
}

const Value& MarketSeries::value(int row, const std::string& attr) const {
  int idx = attribute_index(attr);
  if (idx < 0) fail(Err::MissingAttribute, "no attribute '" + attr + "'");
  return rows.at(row).values.at(idx);
}

double MarketSeries::number(int row, const std::string& attr) const {
  return value(row, attr).number();
}

MarketSeries MarketSeries::slice(int first, int count) const {
  MarketSeries out;
  out.attributes = attributes;
  for (int i = first; i < first + count && i < size(); ++i)
    if (i >= 0) out.rows.push_back(rows[i]);
  return out;
}

MarketSeries ingest_series(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) return {};
  auto header = split_csv_line(line);
  int date_col = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == "date") date_col = static_cast<int>(i);
  if (date_col < 0) fail(Err::SchemaMismatch, "CSV needs a 'date' column");
  MarketSeries series;
  for (size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) == date_col) continue;
    if (header[i].empty() || !identifier_like(header[i]))
      fail(Err::SchemaMismatch, "bad column name '" + header[i] + "'");
    if (header[i] == "weekday")
      fail(Err::SchemaMismatch, "'weekday' is derived, not an input column");
    series.attributes.push_back(header[i]);
  }
  int line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(Err::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
    MarketSeries::Row row;
    row.date = fields[date_col];
    CivilDate c = parse_iso_date(row.date);
    row.weekday = trading_weekday(c);
    for (size_t i = 0; i < fields.size(); ++i) {
      if (static_cast<int>(i) == date_col) continue;
      const std::string& name = header[i];
      if (name == "event") {
        std::string v = fields[i];
        // free-text events collapse onto the catch-all element
        row.values.push_back(Value::symbol(identifier_like(v) ? v : "other"));
      } else {
        Value v = Value::parse(fields[i]);
        if (!v.is_number())
          fail(Err::ParseError, "line " + std::to_string(line_no) + ": column '" + name +
                                    "' expects a number, got '" + fields[i] + "'");
        row.values.push_back(v);
      }
    }
    if (!series.rows.empty() && !date_less(series.rows.back().date, row.date))
      fail(Err::NonMonotoneDates, "date '" + row.date + "' does not increase after '" +
                                      series.rows.back().date + "'");
    series.rows.push_back(std::move(row));
  }
  return series;
}

MarketSeries ingest_series_text(const std::string& csv) {
  std::istringstream in(csv);
  return ingest_series(in);
}

MarketSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ConfigError, "cannot open input file '" + path + "'");
  return ingest_series(in);
}

bool EncodedDataset::defined(const std::string& pred, int row) const {
  auto it = defined_range.find(pred);
  if (it == defined_range.end()) return store.signature(pred) != nullptr;
  return row >= it->second.first && row <= it->second.second;
}

bool EncodedDataset::pred_true(const std::string& pred, int row) const {
  return store.tuples(pred).count({day_constant(dates[row])}) > 0;
}

double EncodedDataset::attr_value(const std::string& attr, int row) const {
  auto it = numeric_values.find(attr);
  if (it == numeric_values.end()) fail(Err::MissingAttribute, "no attribute '" + attr + "'");
  return it->second.at(row);
}

int EncodedDataset::row_of_date(const std::string& date) const {
  auto it = std::lower_bound(dates.begin(), dates.end(), date);
  if (it == dates.end() || *it != date) return -1;
  return static_cast<int>(it - dates.begin());
}

void derive_comparison_predicates(const MarketSeries& series, const std::string& attr,
                                  const std::vector<int>& lags, bool binary_greater,
                                  EncodedDataset& out) {
  int n = series.size();
  for (int lag : lags) {
    if (lag <= 0) fail(Err::ParseError, "lags must be positive");
    if (lag >= n) fail(Err::LagTooLarge, "lag " + std::to_string(lag) + " on a series of " +
                                             std::to_string(n) + " rows");
    std::string pred = attr + "_up_" + std::to_string(lag);
    ensure_day_predicate(out, pred);
    out.defined_range[pred] = {lag, n - 1};
    for (int t = lag; t < n; ++t)
      if (series.number(t - lag, attr) < series.number(t, attr)) add_day_fact(out, pred, t);
  }
  if (binary_greater) {
    std::string pred = "greater_" + attr;
    if (!out.store.signature(pred))
      out.store.add_signature(TypedSignature{pred, {attr, attr}, true});
    std::set<double> observed;
    for (int t = 0; t < n; ++t) observed.insert(series.number(t, attr));
    for (double u : observed)
      for (double v : observed)
        if (u > v) out.store.add_fact(pred, {Value::number(u), Value::number(v)});
  }
}

void derive_threshold_predicates(const MarketSeries& series, const std::string& attr,
                                 const std::vector<std::pair<double, std::string>>& cuts,
                                 const std::vector<double>& quantiles, EncodedDataset& out) {
  int n = series.size();
  if (n == 0) fail(Err::EmptySeries, "threshold predicates need a non-empty series");
  std::vector<std::pair<double, std::string>> all = cuts;
  if (!quantiles.empty()) {
    std::vector<double> values;
    values.reserve(n);
    for (int t = 0; t < n; ++t) values.push_back(series.number(t, attr));
    for (double q : quantiles) {
      double cut = quantile_lower_nearest_rank(values, q);
      all.emplace_back(cut, format_number(cut));
    }
  }
  for (const auto& [cut, raw_label] : all) {
    std::string label = sanitize_label(raw_label.empty() ? format_number(cut) : raw_label);
    std::string above = attr + "_above_" + label;
    std::string below = attr + "_below_" + label;
    ensure_day_predicate(out, above);
    ensure_day_predicate(out, below);
    out.defined_range[above] = {0, n - 1};
    out.defined_range[below] = {0, n - 1};
    for (int t = 0; t < n; ++t) {
      double v = series.number(t, attr);
      if (v > cut) add_day_fact(out, above, t);
      if (v < cut) add_day_fact(out, below, t);
    }
  }
}

double quantile_lower_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) fail(Err::EmptySeries, "quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) fail(Err::ParseError, "quantile must lie in (0,1)");
  std::sort(values.begin(), values.end());
  size_t rank = static_cast<size_t>(std::ceil(q * values.size()));  // 1-based
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

std::string head_predicate_name(const std::string& attr, const HeadSpec& head) {
  switch (head.kind) {
    case HeadKind::sign_up: return attr + "_next_up";
    case HeadKind::sign_down: return attr + "_next_down";
    case HeadKind::above:
      return attr + "_next_above_" +
             sanitize_label(head.label.empty() ? format_number(head.threshold) : head.label);
    case HeadKind::below:
      return attr + "_next_below_" +
             sanitize_label(head.label.empty() ? format_number(head.threshold) : head.label);
  }
  return attr;
}

namespace {

void derive_head_predicates(const MarketSeries& series, const EncodeOptions& opt,
                            EncodedDataset& out) {
  int n = series.size();
  const std::string& attr = opt.target_attr;
  for (const HeadSpec& head : opt.heads) {
    std::string pred = head_predicate_name(attr, head);
    ensure_day_predicate(out, pred);
    out.defined_range[pred] = {0, n - 2};
    out.head_forms[pred] = HeadForm{head.kind, attr, head.threshold};
    for (int t = 0; t + 1 < n; ++t) {
      double now = series.number(t, attr);
      double next = series.number(t + 1, attr);
      bool truth = false;
      switch (head.kind) {
        case HeadKind::sign_up: truth = next > now; break;
        case HeadKind::sign_down: truth = next < now; break;
        case HeadKind::above: truth = next > head.threshold; break;
        case HeadKind::below: truth = next < head.threshold; break;
      }
      if (truth) add_day_fact(out, pred, t);
    }
  }
}

}  // namespace

EncodedDataset encode(const MarketSeries& series, const EncodeOptions& opt) {
  if (series.size() == 0) fail(Err::EmptySeries, "cannot encode an empty series");
  if (series.attribute_index(opt.target_attr) < 0)
    fail(Err::MissingAttribute, "target attribute '" + opt.target_attr + "' not in series");
  EncodedDataset out;
  out.target_attr = opt.target_attr;
  out.store.add_type(DataType::open_symbolic(out.day_type, ScaleKind::ordinal));
  for (const auto& attr : series.attributes) {
    if (attr == "event") {
      out.store.add_type(DataType::open_symbolic("event", ScaleKind::nominal));
      continue;
    }
    out.store.add_type(DataType::numeric(attr, ScaleKind::ratio));
    auto& column = out.numeric_values[attr];
    for (int t = 0; t < series.size(); ++t) column.push_back(series.number(t, attr));
  }
  for (const auto& row : series.rows) {
    out.dates.push_back(row.date);
    out.store.add_constant(out.day_type, day_constant(row.date));
  }
  for (const auto& attr : series.attributes) {
    if (attr == "event") continue;
    derive_comparison_predicates(series, attr, opt.lags, opt.binary_greater, out);
    auto cuts = opt.thresholds.find(attr);
    auto quants = opt.quantiles.find(attr);
    if (cuts != opt.thresholds.end() || quants != opt.quantiles.end())
      derive_threshold_predicates(
          series, attr, cuts == opt.thresholds.end() ? std::vector<std::pair<double, std::string>>{} : cuts->second,
          quants == opt.quantiles.end() ? std::vector<double>{} : quants->second, out);
  }
  if (opt.weekday_predicates) {
    static const std::vector<std::string> names = {"monday", "tuesday", "wednesday",
                                                   "thursday", "friday"};
    out.store.add_type(DataType::cyclic("weekday", kTradingWeekdays));
    for (const auto& name : names) ensure_day_predicate(out, name);
    for (int t = 0; t < series.size(); ++t)
      if (series.rows[t].weekday >= 0) add_day_fact(out, names[series.rows[t].weekday], t);
  }
  derive_head_predicates(series, opt, out);
  out.store.freeze();
  return out;
}

Term term_representation(const MarketSeries& series, int row) {
  if (row < 0 || row >= series.size()) fail(Err::MissingAttribute, "row out of range");
  const auto& r = series.rows[row];
  FuncTerm term;
  term.fn = "stock";
  term.type = "stock";
  for (size_t i = 0; i < series.attributes.size(); ++i) {
    if (series.attributes[i] == "event") continue;
    term.args.push_back(Constant{r.values[i], series.attributes[i]});
  }
  term.args.push_back(Constant{Value::symbol(r.date), "date"});
  term.args.push_back(
      Constant{Value::symbol(r.weekday >= 0 ? kTradingWeekdays[r.weekday] : "na"), "weekday"});
  int event_idx = series.attribute_index("event");
  if (event_idx >= 0) term.args.push_back(Constant{r.values[event_idx], "event"});
  return term;
}

Term projection(const MarketSeries& series, const Term& row_term, const std::string& attr) {
  const auto* f = std::get_if<FuncTerm>(&row_term);
  if (!f || f->fn != "stock")
    fail(Err::MissingAttribute, "projection expects a row term");
  std::vector<std::string> layout;
  for (const auto& a : series.attributes)
    if (a != "event") layout.push_back(a);
  layout.push_back("date");
  layout.push_back("weekday");
  if (series.attribute_index("event") >= 0) layout.push_back("event");
  for (size_t i = 0; i < layout.size(); ++i)
    if (layout[i] == attr) return f->args.at(i);
  fail(Err::MissingAttribute, "no attribute '" + attr + "' in row term");
}

}  // namespace lawmine
