#pragma once

// Separate-and-conquer rule construction with information-gain literal
// selection, variablization enumeration, branch-and-bound pruning and a
// noise-tolerant clause acceptance criterion.

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lawmine/eval.hpp"
#include "lawmine/kb.hpp"

namespace lawmine {

struct GainState {
  std::int64_t p0 = 0;  // positive tuples before the literal
  std::int64_t n0 = 0;  // negative tuples before
  std::int64_t p1 = 0;  // positive tuples after (extensions may multiply)
  std::int64_t n1 = 0;  // negative tuples after
  std::int64_t t_plus_plus = 0;  // positives before with >=1 positive extension
};

// T++ * (log2(P1/(P1+N1)) - log2(P0/(P0+N0))); -inf when P1 = 0.
double information_gain(const GainState& state);

struct SlotChoice {
  bool is_new = false;
  int index = 0;  // old-variable position, or fresh ordinal when is_new
};

// A predicate with an old/new variable choice per slot. Requires at least
// one old variable. Canonical order: (predicate, slot tokens with new
// variables sorting first, positive before negated).
struct Variablization {
  std::string pred;
  std::vector<SlotChoice> slots;
  bool negated = false;

  int new_var_count() const;
  bool operator<(const Variablization& other) const;
};

struct TypedVar {
  std::string name;
  std::string type;
};

struct LearnConfig {
  int max_new_vars = 2;
  int min_clause_pos = 1;
  int max_clause_len = 6;
  double neg_tolerance = 0.0;
  bool allow_negated = true;
  std::optional<std::chrono::milliseconds> time_budget;
  bool use_typing = true;
  bool use_constraints = true;
  bool prune = true;
  int max_clauses = 32;
  int depth_limit = kDefaultDepthLimit;
  std::set<std::string> exclude_predicates;  // besides the target itself
};

struct LearnStats {
  std::int64_t candidates_generated = 0;
  std::int64_t gain_evaluations = 0;
  std::int64_t tuples_touched = 0;
  std::int64_t widening_steps = 0;
};

// Tab-separated `name<TAB>value` lines.
std::string stats_report(const LearnStats& stats);

// Every variablization of every declared kb predicate with >=1 old variable
// and at most `new_var_budget` fresh variables, in canonical order. Typing
// and inter-argument constraints apply per config, and predicates in
// config.exclude_predicates are skipped (learned rules are non-recursive, so
// the learner adds the target there).
std::vector<Variablization> generate_candidate_literals(const FactStore& kb,
                                                        const std::vector<TypedVar>& old_vars,
                                                        int new_var_budget,
                                                        const LearnConfig& config);

// The literal named by a variablization; fresh variables are v<id> starting
// at `first_fresh_id` and reported through `new_vars_out`.
Literal instantiate_candidate(const Variablization& v, const FactStore& kb,
                              const std::vector<TypedVar>& old_vars, int first_fresh_id,
                              std::vector<TypedVar>* new_vars_out);

// Learner tuple: a binding of the clause variables plus the index of the
// originating training example.
struct LearnTuple {
  Tuple values;
  int origin = 0;
};

// Gain counts for one candidate literal over the current tuple sets.
GainState evaluate_candidate(const Literal& lit, const std::vector<TypedVar>& clause_vars,
                             const std::vector<TypedVar>& lit_new_vars,
                             const std::vector<LearnTuple>& pos,
                             const std::vector<LearnTuple>& neg, const FactStore& kb,
                             const LearnConfig& config, LearnStats* stats);

struct ChooseResult {
  int index = -1;
  GainState state;
  double gain = 0.0;
};

// Maximum-gain candidate; ties break to the canonically earlier candidate.
// With pruning on, a specialization is skipped when an evaluated
// generalization bounds its best possible gain strictly below the incumbent.
ChooseResult choose_literal(const std::vector<Variablization>& candidates,
                            const std::vector<TypedVar>& old_vars,
                            const std::vector<LearnTuple>& pos,
                            const std::vector<LearnTuple>& neg, const FactStore& kb,
                            const LearnConfig& config, LearnStats* stats);

// A pre-built conjunction offered at clause start (initial-rule refinement).
struct SeedBody {
  std::vector<Literal> literals;
  std::vector<TypedVar> introduced;  // non-head variables, already fresh-named
};

struct LearnResult {
  Rule rule;
  std::vector<Tuple> uncovered_pos;
  std::string trace;  // literal<TAB>P0<TAB>N0<TAB>P1<TAB>N1<TAB>T++<TAB>gain
  LearnStats stats;
};

// FOIL with a fixed fresh-variable budget; seeds compete as whole-body
// candidates when a clause starts. Building block for focl_learn.
LearnResult foil_learn_budgeted(const std::vector<Tuple>& pos, const std::vector<Tuple>& neg,
                                const std::string& target, const FactStore& kb,
                                const LearnConfig& config, int new_var_budget,
                                const std::vector<SeedBody>& seeds);

LearnResult foil_learn(const std::vector<Tuple>& pos, const std::vector<Tuple>& neg,
                       const std::string& target, const FactStore& kb,
                       const LearnConfig& config);

}  // namespace lawmine
