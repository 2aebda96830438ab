#pragma once

// Probabilistic law-like rule discovery: complexity-ordered hypothesis
// enumeration from a rule grammar, contingency scoring, one-sided Fisher
// exact significance, Occam selection and interval/sign forecasting.

#include <cstdint>
#include <string>
#include <vector>

#include "lawmine/kb.hpp"
#include "lawmine/series.hpp"

namespace lawmine {

struct HypothesisGrammar {
  struct BodyPred {
    std::string pred;
    bool allow_negated = false;
  };

  std::vector<BodyPred> body_predicates;
  std::vector<std::string> head_predicates;  // materialized target heads
  int max_body_literals = 3;
  int max_existential_vars = 0;

  void validate(const FactStore& kb) const;
};

struct ScoredRule {
  Rule rule;
  // body&head / body&!head / !body&head / !body&!head over evaluable rows
  std::int64_t a = 0, b = 0, c = 0, d = 0;
  double cond_probability = 0.0;  // a / (a+b)
  double p_value = 1.0;
  int complexity = 0;  // body literal count + distinct variable count
  std::pair<std::string, std::string> train_window;
  int id = 0;           // canonical enumeration position
  int report_rank = 0;  // 1-based rank in the rule report after selection
};

// Candidate rules in non-decreasing complexity, canonical order within equal
// complexity. Grammar predicates must be day predicates.
std::vector<Rule> enumerate_hypotheses(const HypothesisGrammar& grammar,
                                       const EncodedDataset& dataset);

// One-sided Fisher exact p-value for positive association of body with head.
double fisher_p_value(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

int rule_complexity(const Rule& rule);

// Contingency over evaluable examples (rows where every predicate of the
// rule is defined). Throws BodyNeverSatisfied when a+b = 0.
ScoredRule score_rule(const Rule& rule, const EncodedDataset& dataset);

// Scores a stream of hypotheses, dropping never-satisfied bodies. Scoring is
// parallel over `jobs` workers; output order is independent of scheduling.
std::vector<ScoredRule> score_hypotheses(const std::vector<Rule>& rules,
                                         const EncodedDataset& dataset, int jobs = 1);

// Keeps rules with p <= alpha, then discards any rule that a kept simpler
// rule dominates (lower complexity, p no worse, body literals a subset, same
// head). Assigns report ranks ordered by (p, complexity, canonical text).
std::vector<ScoredRule> select_lawlike(std::vector<ScoredRule> scored, double alpha,
                                       bool bonferroni = false,
                                       std::int64_t total_tests = 0);

// Catalogue hypotheses (supplied here or declared in the knowledge base)
// score ahead of the grammar stream.
std::vector<ScoredRule> mmdr_mine(const EncodedDataset& dataset,
                                  const HypothesisGrammar& grammar, double alpha,
                                  bool bonferroni = false, int jobs = 1,
                                  const std::vector<Rule>& catalogue = {});

enum class Sign { up, down, abstain };
const char* sign_name(Sign s);

// Selected rules whose bodies hold at `row` (indexes into `rules`).
std::vector<int> fired_rules(const std::vector<ScoredRule>& rules,
                             const EncodedDataset& dataset, int row);

struct IntervalForecast {
  double lower = 0.0;  // -inf allowed
  double upper = 0.0;  // +inf allowed
  std::vector<int> supporting;  // report ranks of fired rules
  std::string target_date;
};

// Intersects the bounds implied by every fired rule: sign heads bound by the
// current target value, threshold heads by their constants. Contradictory
// bounds raise EmptyIntersection naming the conflicting rule pair.
IntervalForecast interval_forecast(const std::vector<ScoredRule>& rules,
                                   const EncodedDataset& dataset, int row);

// up when only up-head rules fire, down when only down-head rules fire,
// abstain on none or conflict.
Sign sign_forecast(const std::vector<ScoredRule>& rules, const EncodedDataset& dataset,
                   int row);

// One rule per line: clause text, a, b, c, d, conditional probability
// (4 decimals), p-value (6 significant digits), complexity; sorted by
// (p_value, complexity, canonical text).
std::string rule_report(const std::vector<ScoredRule>& rules);

}  // namespace lawmine
