#pragma once

// FOIL extensions: typing and inter-argument constraint filtering,
// intensional-literal operationalization, initial-rule refinement and
// iterative widening of the fresh-variable budget.

#include <optional>
#include <string>
#include <vector>

#include "lawmine/foil.hpp"
#include "lawmine/kb.hpp"

namespace lawmine {

// How competing knowledge sources (several initial rules) are balanced:
// offer them all, or only the most accurate one on the training set.
enum class KnowledgeBalance { use_all, use_more_accurate };

struct FoclTask {
  std::string target;
  std::vector<Tuple> pos;
  std::vector<Tuple> neg;
  std::vector<InitialRule> initial_rules;
  KnowledgeBalance balance = KnowledgeBalance::use_all;
  bool keep_intensional = false;  // MMDR delegation: skip operationalization

  bool has_initial_rule() const { return !initial_rules.empty(); }
  static FoclTask from_knowledge(const Knowledge& k);
};

// Drops type-incompatible and inter-argument-violating variablizations;
// order is preserved.
std::vector<Variablization> filter_candidates(std::vector<Variablization> candidates,
                                              const FactStore& kb,
                                              const std::vector<TypedVar>& old_vars,
                                              bool typing = true, bool constraints = true);

// Expands a positive intensional literal into extensional (and builtin)
// literals by applying the head substitution of its single defining clause,
// recursively. Clause-local variables are renamed with `fresh_prefix`.
std::vector<Literal> operationalize(const Literal& lit, const FactStore& kb,
                                    int depth_limit = kDefaultDepthLimit,
                                    int max_literals = 32,
                                    const std::string& fresh_prefix = "o");

// Initial-rule refinement: each initial clause competes as a whole-body
// candidate at clause start, then ordinary FOIL literal addition rules out
// remaining negatives.
LearnResult refine_initial_rule(const FoclTask& task, const FactStore& kb,
                                const LearnConfig& config);

// FOIL plus constraint filtering and iterative widening: the fresh-variable
// budget starts at 0 and grows by 1 whenever the inner search fails, so the
// result uses the smallest workable budget.
LearnResult focl_learn(const FoclTask& task, const FactStore& kb, const LearnConfig& config);

}  // namespace lawmine
