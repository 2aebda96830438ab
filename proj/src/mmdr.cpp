#include "lawmine/mmdr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <thread>

#include <boost/math/distributions/hypergeometric.hpp>

#include "lawmine/eval.hpp"

namespace lawmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::string head_var_name = "t";

}  // namespace

void HypothesisGrammar::validate(const FactStore& kb) const {
  for (const auto& bp : body_predicates) {
    const TypedSignature& sig = kb.required_signature(bp.pred);
    (void)sig;
  }
  for (const auto& head : head_predicates) kb.required_signature(head);
  if (max_body_literals < 1) fail(Err::ConfigError, "grammar needs max_body_literals >= 1");
  if (max_existential_vars < 0) fail(Err::ConfigError, "negative existential budget");
}

int rule_complexity(const Rule& rule) {
  std::set<std::string> vars;
  int literals = 0;
  for (const auto& clause : rule.clauses) {
    literals += static_cast<int>(clause.body.size());
    for (const auto& v : clause.head.variables()) vars.insert(v.name);
    for (const auto& lit : clause.body)
      for (const auto& v : lit.variables()) vars.insert(v.name);
  }
  return literals + static_cast<int>(vars.size());
}

namespace {

struct PoolLiteral {
  Literal literal;
  std::string key;
  std::set<std::string> vars;
};

// Day-variable names: t, e1, e2, ...
std::vector<Variable> grammar_variables(const EncodedDataset& dataset, int existentials) {
  std::vector<Variable> vars;
  vars.push_back(Variable{head_var_name, dataset.day_type});
  for (int i = 1; i <= existentials; ++i)
    vars.push_back(Variable{"e" + std::to_string(i), dataset.day_type});
  return vars;
}

void enumerate_pool_slots(const TypedSignature& sig, const std::vector<Variable>& vars,
                          std::vector<Term>& slots, std::vector<std::vector<Term>>& out) {
  if (slots.size() == sig.arg_types.size()) {
    out.push_back(slots);
    return;
  }
  for (const auto& v : vars) {
    if (v.type != sig.arg_types[slots.size()]) continue;
    slots.push_back(v);
    enumerate_pool_slots(sig, vars, slots, out);
    slots.pop_back();
  }
}

std::vector<PoolLiteral> literal_pool(const HypothesisGrammar& grammar,
                                      const EncodedDataset& dataset) {
  std::vector<Variable> vars = grammar_variables(dataset, grammar.max_existential_vars);
  std::vector<HypothesisGrammar::BodyPred> preds = grammar.body_predicates;
  std::sort(preds.begin(), preds.end(),
            [](const auto& a, const auto& b) { return a.pred < b.pred; });
  std::vector<PoolLiteral> pool;
  for (const auto& bp : preds) {
    const TypedSignature& sig = dataset.store.required_signature(bp.pred);
    std::vector<std::vector<Term>> assignments;
    std::vector<Term> slots;
    enumerate_pool_slots(sig, vars, slots, assignments);
    for (const auto& a : assignments) {
      Literal lit{bp.pred, a, false};
      PoolLiteral entry;
      entry.literal = lit;
      entry.key = to_text(lit);
      for (const auto& v : lit.variables()) entry.vars.insert(v.name);
      pool.push_back(entry);
      if (bp.allow_negated) {
        entry.literal.negated = true;
        entry.key = to_text(entry.literal);
        pool.push_back(entry);
      }
    }
  }
  std::sort(pool.begin(), pool.end(),
            [](const PoolLiteral& a, const PoolLiteral& b) { return a.key < b.key; });
  return pool;
}

// Every existential variable must connect to the head variable through
// shared literals.
bool linked_body(const std::vector<const PoolLiteral*>& body) {
  std::set<std::string> reached = {head_var_name};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto* lit : body) {
      bool touches = false;
      for (const auto& v : lit->vars)
        if (reached.count(v)) touches = true;
      if (!touches) continue;
      for (const auto& v : lit->vars)
        if (reached.insert(v).second) grew = true;
    }
  }
  for (const auto* lit : body)
    for (const auto& v : lit->vars)
      if (!reached.count(v)) return false;
  return true;
}

bool mentions_head_var(const std::vector<const PoolLiteral*>& body) {
  for (const auto* lit : body)
    if (lit->vars.count(head_var_name)) return true;
  return false;
}

void enumerate_bodies(const std::vector<PoolLiteral>& pool, int max_literals, size_t from,
                      std::vector<const PoolLiteral*>& body,
                      std::vector<std::vector<const PoolLiteral*>>& out) {
  if (!body.empty()) out.push_back(body);
  if (static_cast<int>(body.size()) == max_literals) return;
  for (size_t i = from; i < pool.size(); ++i) {
    body.push_back(&pool[i]);
    enumerate_bodies(pool, max_literals, i + 1, body, out);
    body.pop_back();
  }
}

}  // namespace

std::vector<Rule> enumerate_hypotheses(const HypothesisGrammar& grammar,
                                       const EncodedDataset& dataset) {
  grammar.validate(dataset.store);
  std::vector<PoolLiteral> pool = literal_pool(grammar, dataset);
  std::vector<std::vector<const PoolLiteral*>> bodies;
  std::vector<const PoolLiteral*> scratch;
  enumerate_bodies(pool, grammar.max_body_literals, 0, scratch, bodies);

  struct Candidate {
    int complexity;
    std::string key;
    Rule rule;
  };
  std::vector<Candidate> candidates;
  for (const auto& body : bodies) {
    if (!mentions_head_var(body) || !linked_body(body)) continue;
    for (size_t h = 0; h < grammar.head_predicates.size(); ++h) {
      HornClause clause;
      clause.head = Literal{grammar.head_predicates[h],
                            {Variable{head_var_name, dataset.day_type}}, false};
      for (const auto* lit : body) clause.body.push_back(lit->literal);
      Rule rule;
      rule.clauses.push_back(std::move(clause));
      std::string key;
      for (const auto* lit : body) key += lit->key + "&";
      key += "\x7f" + std::to_string(h);
      candidates.push_back(Candidate{rule_complexity(rule), key, std::move(rule)});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    return a.key < b.key;
  });
  std::vector<Rule> out;
  out.reserve(candidates.size());
  for (auto& c : candidates) out.push_back(std::move(c.rule));
  return out;
}

double fisher_p_value(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (a < 0 || b < 0 || c < 0 || d < 0)
    fail(Err::ConfigError, "contingency counts must be non-negative");
  std::int64_t total = a + b + c + d;
  if (total <= 0) fail(Err::ConfigError, "contingency table is empty");
  std::int64_t r = a + c;  // head-true margin
  std::int64_t n = a + b;  // body-true margin
  std::int64_t k_max = std::min(r, n);
  std::int64_t k_min = std::max<std::int64_t>(0, r + n - total);
  if (k_min >= k_max) return 1.0;  // a degenerate margin fixes the table
  if (a <= k_min) return 1.0;      // observed table is the least extreme
  boost::math::hypergeometric_distribution<> dist(static_cast<unsigned>(r),
                                                  static_cast<unsigned>(n),
                                                  static_cast<unsigned>(total));
  double p = 0.0;
  for (std::int64_t q = a; q <= k_max; ++q)
    p += boost::math::pdf(dist, static_cast<unsigned>(q));
  return std::min(1.0, std::max(0.0, p));
}

namespace {

// Rows where every predicate applied to the head variable is defined.
bool evaluable_at(const Rule& rule, const EncodedDataset& dataset, int row) {
  for (const auto& clause : rule.clauses) {
    if (!dataset.defined(clause.head.pred, row)) return false;
    for (const auto& lit : clause.body) {
      bool on_head_var = false;
      for (const auto& v : lit.variables())
        if (v.name == head_var_name) on_head_var = true;
      if (on_head_var && dataset.store.signature(lit.pred) &&
          !dataset.defined(lit.pred, row))
        return false;
    }
  }
  return true;
}

bool body_holds_at(const Rule& rule, const EncodedDataset& dataset, int row) {
  Binding binding;
  binding.map.emplace(head_var_name, Value::symbol(dataset.dates[row]));
  for (const auto& clause : rule.clauses)
    if (body_satisfiable(clause.body, binding, dataset.store)) return true;
  return false;
}

bool body_evaluable_at(const Rule& rule, const EncodedDataset& dataset, int row) {
  for (const auto& clause : rule.clauses)
    for (const auto& lit : clause.body) {
      bool on_head_var = false;
      for (const auto& v : lit.variables())
        if (v.name == head_var_name) on_head_var = true;
      if (on_head_var && dataset.store.signature(lit.pred) &&
          !dataset.defined(lit.pred, row))
        return false;
    }
  return true;
}

}  // namespace

ScoredRule score_rule(const Rule& rule, const EncodedDataset& dataset) {
  rule.validate();
  if (dataset.rows() == 0) fail(Err::EmptySeries, "cannot score on an empty dataset");
  ScoredRule scored;
  scored.rule = rule;
  scored.complexity = rule_complexity(rule);
  scored.train_window = {dataset.dates.front(), dataset.dates.back()};
  const std::string& head_pred = rule.head_pred();
  for (int row = 0; row < dataset.rows(); ++row) {
    if (!evaluable_at(rule, dataset, row)) continue;
    bool body = body_holds_at(rule, dataset, row);
    bool head = dataset.pred_true(head_pred, row);
    if (body && head) ++scored.a;
    else if (body) ++scored.b;
    else if (head) ++scored.c;
    else ++scored.d;
  }
  if (scored.a + scored.b == 0)
    fail(Err::BodyNeverSatisfied, "body never satisfied: " + to_text(rule));
  scored.cond_probability = double(scored.a) / double(scored.a + scored.b);
  scored.p_value = fisher_p_value(scored.a, scored.b, scored.c, scored.d);
  return scored;
}

std::vector<ScoredRule> score_hypotheses(const std::vector<Rule>& rules,
                                         const EncodedDataset& dataset, int jobs) {
  std::vector<std::optional<ScoredRule>> slots(rules.size());
  std::vector<std::exception_ptr> errors;
  auto worker = [&](size_t begin, size_t end, std::exception_ptr* error) {
    try {
      for (size_t i = begin; i < end; ++i) {
        try {
          slots[i] = score_rule(rules[i], dataset);
          slots[i]->id = static_cast<int>(i);
        } catch (const Error& e) {
          if (e.code() != Err::BodyNeverSatisfied) throw;
        }
      }
    } catch (...) {
      *error = std::current_exception();
    }
  };
  if (jobs <= 1 || rules.size() < 2) {
    errors.resize(1);
    worker(0, rules.size(), &errors[0]);
  } else {
    size_t n = rules.size();
    size_t workers = std::min<size_t>(jobs, n);
    errors.resize(workers);
    std::vector<std::thread> threads;
    size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
      size_t begin = w * chunk;
      size_t end = std::min(n, begin + chunk);
      if (begin < end) threads.emplace_back(worker, begin, end, &errors[w]);
    }
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ScoredRule> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

std::vector<ScoredRule> select_lawlike(std::vector<ScoredRule> scored, double alpha,
                                       bool bonferroni, std::int64_t total_tests) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Err::ConfigError, "alpha must lie in (0,1)");
  double alpha_eff = alpha;
  if (bonferroni) {
    std::int64_t n = total_tests > 0 ? total_tests : static_cast<std::int64_t>(scored.size());
    if (n > 0) alpha_eff = alpha / double(n);
  }
  std::sort(scored.begin(), scored.end(),
            [](const ScoredRule& a, const ScoredRule& b) { return a.id < b.id; });
  std::vector<ScoredRule> kept;
  std::vector<std::set<std::string>> kept_bodies;
  for (auto& candidate : scored) {
    if (candidate.p_value > alpha_eff) continue;
    std::set<std::string> body;
    for (const auto& clause : candidate.rule.clauses)
      for (const auto& lit : clause.body) body.insert(to_text(lit));
    bool dominated = false;
    for (size_t i = 0; i < kept.size() && !dominated; ++i) {
      const ScoredRule& k = kept[i];
      if (k.complexity >= candidate.complexity) continue;
      if (k.p_value > candidate.p_value) continue;
      if (k.rule.head_pred() != candidate.rule.head_pred()) continue;
      dominated = std::includes(body.begin(), body.end(), kept_bodies[i].begin(),
                                kept_bodies[i].end());
    }
    if (dominated) continue;
    kept_bodies.push_back(std::move(body));
    kept.push_back(std::move(candidate));
  }
  std::vector<size_t> order(kept.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (kept[a].p_value != kept[b].p_value) return kept[a].p_value < kept[b].p_value;
    if (kept[a].complexity != kept[b].complexity)
      return kept[a].complexity < kept[b].complexity;
    return to_text(kept[a].rule) < to_text(kept[b].rule);
  });
  for (size_t rank = 0; rank < order.size(); ++rank)
    kept[order[rank]].report_rank = static_cast<int>(rank) + 1;
  return kept;
}

std::vector<ScoredRule> mmdr_mine(const EncodedDataset& dataset,
                                  const HypothesisGrammar& grammar, double alpha,
                                  bool bonferroni, int jobs,
                                  const std::vector<Rule>& catalogue) {
  std::vector<Rule> stream = catalogue;
  for (const auto& h : dataset.store.hypotheses()) stream.push_back(h);
  std::vector<Rule> enumerated = enumerate_hypotheses(grammar, dataset);
  stream.insert(stream.end(), enumerated.begin(), enumerated.end());
  std::vector<ScoredRule> scored = score_hypotheses(stream, dataset, jobs);
  return select_lawlike(std::move(scored), alpha, bonferroni,
                        static_cast<std::int64_t>(stream.size()));
}

const char* sign_name(Sign s) {
  switch (s) {
    case Sign::up: return "up";
    case Sign::down: return "down";
    case Sign::abstain: return "abstain";
  }
  return "?";
}

std::vector<int> fired_rules(const std::vector<ScoredRule>& rules,
                             const EncodedDataset& dataset, int row) {
  std::vector<int> fired;
  for (size_t i = 0; i < rules.size(); ++i) {
    if (!body_evaluable_at(rules[i].rule, dataset, row)) continue;
    if (body_holds_at(rules[i].rule, dataset, row)) fired.push_back(static_cast<int>(i));
  }
  return fired;
}

IntervalForecast interval_forecast(const std::vector<ScoredRule>& rules,
                                   const EncodedDataset& dataset, int row) {
  IntervalForecast forecast;
  forecast.lower = -kInf;
  forecast.upper = kInf;
  forecast.target_date =
      row + 1 < dataset.rows() ? dataset.dates[row + 1] : dataset.dates[row] + "+1";
  int lower_src = -1;
  int upper_src = -1;
  for (int idx : fired_rules(rules, dataset, row)) {
    const ScoredRule& r = rules[idx];
    auto it = dataset.head_forms.find(r.rule.head_pred());
    if (it == dataset.head_forms.end())
      fail(Err::ConfigError, "rule head '" + r.rule.head_pred() + "' is not a forecast head");
    const HeadForm& form = it->second;
    double bound = 0.0;
    bool is_lower = false;
    switch (form.kind) {
      case HeadKind::sign_up:
        bound = dataset.attr_value(form.attr, row);
        is_lower = true;
        break;
      case HeadKind::sign_down:
        bound = dataset.attr_value(form.attr, row);
        break;
      case HeadKind::above:
        bound = form.threshold;
        is_lower = true;
        break;
      case HeadKind::below:
        bound = form.threshold;
        break;
    }
    if (is_lower && bound > forecast.lower) {
      forecast.lower = bound;
      lower_src = idx;
    } else if (!is_lower && bound < forecast.upper) {
      forecast.upper = bound;
      upper_src = idx;
    }
    forecast.supporting.push_back(r.report_rank > 0 ? r.report_rank : idx + 1);
  }
  std::sort(forecast.supporting.begin(), forecast.supporting.end());
  if (forecast.lower >= forecast.upper) {
    const ScoredRule& lo = rules[lower_src];
    const ScoredRule& hi = rules[upper_src];
    fail(Err::EmptyIntersection,
         "contradictory bounds from rules R" + std::to_string(lo.report_rank) + " (" +
             to_text(lo.rule) + ") and R" + std::to_string(hi.report_rank) + " (" +
             to_text(hi.rule) + ")");
  }
  return forecast;
}

Sign sign_forecast(const std::vector<ScoredRule>& rules, const EncodedDataset& dataset,
                   int row) {
  bool up = false;
  bool down = false;
  for (int idx : fired_rules(rules, dataset, row)) {
    auto it = dataset.head_forms.find(rules[idx].rule.head_pred());
    if (it == dataset.head_forms.end()) continue;
    if (it->second.kind == HeadKind::sign_up) up = true;
    if (it->second.kind == HeadKind::sign_down) down = true;
  }
  if (up == down) return Sign::abstain;
  return up ? Sign::up : Sign::down;
}

std::string rule_report(const std::vector<ScoredRule>& rules) {
  std::vector<const ScoredRule*> order;
  for (const auto& r : rules) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const ScoredRule* a, const ScoredRule* b) {
    if (a->p_value != b->p_value) return a->p_value < b->p_value;
    if (a->complexity != b->complexity) return a->complexity < b->complexity;
    return to_text(a->rule) < to_text(b->rule);
  });
  std::string out;
  for (const auto* r : order) {
    std::string text = to_text(r->rule);
    for (auto pos = text.find('\n'); pos != std::string::npos; pos = text.find('\n'))
      text.replace(pos, 1, " ; ");
    char cond[32];
    std::snprintf(cond, sizeof cond, "%.4f", r->cond_probability);
    char pval[40];
    std::snprintf(pval, sizeof pval, "%.6g", r->p_value);
    out += text + "\t" + std::to_string(r->a) + "\t" + std::to_string(r->b) + "\t" +
           std::to_string(r->c) + "\t" + std::to_string(r->d) + "\t" + cond + "\t" + pval +
           "\t" + std::to_string(r->complexity) + "\n";
  }
  return out;
}

}  // namespace lawmine
