#pragma once

// Shared fixtures and generators for the unit and acceptance suites.

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lawmine/focl.hpp"
#include "lawmine/kb.hpp"
#include "lawmine/series.hpp"

#ifndef LAWMINE_DATA_DIR
#define LAWMINE_DATA_DIR "data"
#endif

namespace testkit {

inline std::string data_path(const std::string& name) {
  return std::string(LAWMINE_DATA_DIR) + "/" + name;
}

inline lawmine::Knowledge load_fixture(const std::string& name) {
  lawmine::Knowledge k = lawmine::load_knowledge(data_path(name));
  k.store.freeze();
  return k;
}

// Table 8 derived pair store: up(a,b) iff b >= a, down(a,b) iff a >= b over
// the six prices of the window table.
inline lawmine::Knowledge updown_fixture() { return load_fixture("updown.kb"); }

struct RandomKb {
  lawmine::FactStore store;
  std::vector<std::string> predicates;
  std::vector<std::string> types;
};

// Extensional kb with <= 50 constants and <= 3 predicates of arity 1..3.
inline RandomKb make_random_kb(std::mt19937_64& rng) {
  RandomKb kb;
  int type_count = 1 + int(rng() % 2);
  for (int t = 0; t < type_count; ++t) {
    std::string name = "t" + std::to_string(t);
    kb.store.add_type(lawmine::DataType::numeric(name));
    kb.types.push_back(name);
    int constants = 3 + int(rng() % 8);
    for (int c = 0; c < constants; ++c)
      kb.store.add_constant(name, lawmine::Value::number(double(rng() % 25)));
  }
  int pred_count = 1 + int(rng() % 3);
  for (int p = 0; p < pred_count; ++p) {
    std::string name = "p" + std::to_string(p);
    int arity = 1 + int(rng() % 3);
    std::vector<std::string> arg_types;
    for (int i = 0; i < arity; ++i) arg_types.push_back(kb.types[rng() % kb.types.size()]);
    kb.store.add_signature(lawmine::TypedSignature{name, arg_types, true});
    kb.predicates.push_back(name);
    int tuples = int(rng() % 12);
    for (int f = 0; f < tuples; ++f) {
      lawmine::Tuple tuple;
      for (const auto& at : arg_types) {
        const auto& pool = kb.store.constants(at);
        size_t pick = rng() % pool.size();
        auto it = pool.begin();
        std::advance(it, pick);
        tuple.push_back(*it);
      }
      kb.store.add_fact(name, tuple);
    }
  }
  return kb;
}

// Random clause over the kb: typed head variables plus a few existential
// variables, with occasional negation.
inline lawmine::HornClause make_random_clause(const RandomKb& kb, std::mt19937_64& rng,
                                              bool allow_negation = true) {
  using namespace lawmine;
  const std::string& head_pred = kb.predicates[rng() % kb.predicates.size()];
  const TypedSignature& head_sig = *kb.store.signature(head_pred);
  HornClause clause;
  clause.head.pred = head_pred;
  std::vector<Variable> vars;
  for (int i = 0; i < head_sig.arity(); ++i) {
    Variable v{"x" + std::to_string(i), head_sig.arg_types[i]};
    clause.head.args.push_back(v);
    vars.push_back(v);
  }
  int body_len = 1 + int(rng() % 3);
  int fresh = 0;
  for (int b = 0; b < body_len; ++b) {
    const std::string& pred = kb.predicates[rng() % kb.predicates.size()];
    const TypedSignature& sig = *kb.store.signature(pred);
    Literal lit;
    lit.pred = pred;
    lit.negated = allow_negation && (rng() % 4 == 0);
    for (int i = 0; i < sig.arity(); ++i) {
      std::vector<Variable> compatible;
      for (const auto& v : vars)
        if (v.type == sig.arg_types[i]) compatible.push_back(v);
      bool reuse = !compatible.empty() && (rng() % 3 != 0);
      if (reuse) {
        lit.args.push_back(compatible[rng() % compatible.size()]);
      } else {
        Variable v{"e" + std::to_string(fresh++), sig.arg_types[i]};
        lit.args.push_back(v);
        if (!lit.negated) vars.push_back(v);
      }
    }
    clause.body.push_back(lit);
  }
  return clause;
}

inline lawmine::Tuple make_random_example(const RandomKb& kb, const std::string& pred,
                                          std::mt19937_64& rng) {
  const lawmine::TypedSignature& sig = *kb.store.signature(pred);
  lawmine::Tuple tuple;
  for (const auto& at : sig.arg_types) {
    const auto& pool = kb.store.constants(at);
    size_t pick = rng() % pool.size();
    auto it = pool.begin();
    std::advance(it, pick);
    tuple.push_back(*it);
  }
  return tuple;
}

// Synthetic market series where price direction depends on the previous
// day's price and volume directions: both up -> up with probability 0.9,
// both down -> 0.98, exactly one -> 0.1. Either condition alone is slightly
// anti-associated with the target (0.50 vs 0.54 up rate) while the
// conjunction is strongly predictive, and the overall up rate stays near
// one half.
inline lawmine::MarketSeries planted_series(int days, std::uint64_t seed) {
  using namespace lawmine;
  std::mt19937_64 rng(seed);
  auto uniform = [&]() { return double(rng() >> 11) * (1.0 / 9007199254740992.0); };
  MarketSeries series;
  series.attributes = {"price", "volume"};
  double price = 100.0;
  double prev_price = 100.0;
  double volume = 1000.0;
  double prev_volume = 1000.0;
  int year = 2000, month = 1, day = 1;
  auto next_date = [&]() {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    if (++day > lengths[month - 1]) {
      day = 1;
      if (++month > 12) {
        month = 1;
        ++year;
      }
    }
    return std::string(buf);
  };
  for (int t = 0; t < days; ++t) {
    MarketSeries::Row row;
    row.date = next_date();
    row.values = {Value::number(price), Value::number(volume)};
    series.rows.push_back(row);
    bool price_up = price > prev_price;
    bool volume_up = volume > prev_volume;
    double p_up = price_up && volume_up ? 0.9 : (!price_up && !volume_up ? 0.98 : 0.1);
    bool up = uniform() < p_up;
    double move = 0.2 + uniform() * 0.8;
    prev_price = price;
    price = up ? price + move : price - move;
    if (price < 1.0) price = 1.0 + uniform();
    prev_volume = volume;
    volume = 500.0 + uniform() * 1000.0;
  }
  return series;
}

// Series whose next-day direction is an independent coin flip: every body
// hypothesis is null.
inline lawmine::MarketSeries noise_series(int days, int extra_attrs, std::uint64_t seed) {
  using namespace lawmine;
  std::mt19937_64 rng(seed);
  auto uniform = [&]() { return double(rng() >> 11) * (1.0 / 9007199254740992.0); };
  MarketSeries series;
  series.attributes = {"price"};
  for (int i = 0; i < extra_attrs; ++i)
    series.attributes.push_back("sig" + std::to_string(i));
  double price = 100.0;
  int year = 2000, month = 1, day = 1;
  auto next_date = [&]() {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    if (++day > lengths[month - 1]) {
      day = 1;
      if (++month > 12) {
        month = 1;
        ++year;
      }
    }
    return std::string(buf);
  };
  for (int t = 0; t < days; ++t) {
    MarketSeries::Row row;
    row.date = next_date();
    row.values.push_back(Value::number(price));
    for (int i = 0; i < extra_attrs; ++i) row.values.push_back(Value::number(uniform()));
    series.rows.push_back(row);
    price += uniform() < 0.5 ? (0.2 + uniform()) : -(0.2 + uniform());
    if (price < 1.0) price = 1.0 + uniform();
  }
  return series;
}

}  // namespace testkit
