#include "lawmine/focl.hpp"

#include <algorithm>
#include <set>

namespace lawmine {

namespace {

bool slot_type_ok(const Variablization& v, const TypedSignature& sig,
                  const std::vector<TypedVar>& old_vars) {
  for (size_t i = 0; i < v.slots.size(); ++i) {
    const SlotChoice& s = v.slots[i];
    if (!s.is_new && old_vars[s.index].type != sig.arg_types[i]) return false;
  }
  return true;
}

bool constraint_ok(const Variablization& v, const FactStore& kb) {
  for (const auto& c : kb.constraints(v.pred))
    for (auto [i, j] : c.patterns) {
      const SlotChoice& a = v.slots[i];
      const SlotChoice& b = v.slots[j];
      if (!a.is_new && !b.is_new && a.index == b.index) return false;
    }
  return true;
}

}  // namespace

std::vector<Variablization> filter_candidates(std::vector<Variablization> candidates,
                                              const FactStore& kb,
                                              const std::vector<TypedVar>& old_vars,
                                              bool typing, bool constraints) {
  std::vector<Variablization> out;
  out.reserve(candidates.size());
  for (auto& v : candidates) {
    const TypedSignature* sig = kb.signature(v.pred);
    if (!sig || sig->arity() != static_cast<int>(v.slots.size())) continue;
    if (typing && !slot_type_ok(v, *sig, old_vars)) continue;
    if (constraints && !constraint_ok(v, kb)) continue;
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (auto* v = std::get_if<Variable>(&t)) {
    auto it = sub.find(v->name);
    if (it == sub.end()) fail(Err::UnboundVariable, "unmapped variable '" + v->name + "'");
    return it->second;
  }
  if (std::holds_alternative<Constant>(t)) return t;
  FuncTerm f = std::get<FuncTerm>(t);
  for (auto& a : f.args) a = substitute(a, sub);
  return f;
}

void expand_literal(const Literal& lit, const FactStore& kb, int depth_limit,
                    int max_literals, const std::string& fresh_prefix, int& fresh_counter,
                    std::vector<Literal>& out) {
  const Rule* def = kb.definition(lit.pred);
  bool intensional = def != nullptr;
  if (!intensional) {
    out.push_back(lit);
  } else {
    if (lit.negated)
      fail(Err::NotOperationalizable,
           "negated intensional literal has no conjunctive expansion: " + to_text(lit));
    if (depth_limit <= 0)
      fail(Err::DepthExceeded, "operationalization depth limit at '" + lit.pred + "'");
    if (def->clauses.size() != 1)
      fail(Err::NotOperationalizable,
           "multi-clause definition of '" + lit.pred + "' has no conjunctive expansion");
    const HornClause& clause = def->clauses.front();
    std::map<std::string, Term> sub;
    for (int i = 0; i < clause.head.arity(); ++i)
      sub.emplace(std::get<Variable>(clause.head.args[i]).name, lit.args[i]);
    for (const auto& body_lit : clause.body)
      for (const auto& v : body_lit.variables())
        if (!sub.count(v.name))
          sub.emplace(v.name, Variable{fresh_prefix + std::to_string(fresh_counter++), v.type});
    for (const auto& body_lit : clause.body) {
      Literal mapped = body_lit;
      for (auto& a : mapped.args) a = substitute(a, sub);
      expand_literal(mapped, kb, depth_limit - 1, max_literals, fresh_prefix, fresh_counter,
                     out);
    }
  }
  if (static_cast<int>(out.size()) > max_literals)
    fail(Err::NotOperationalizable, "operationalization of '" + lit.pred + "' exceeds " +
                                        std::to_string(max_literals) + " literals");
}

}  // namespace

std::vector<Literal> operationalize(const Literal& lit, const FactStore& kb, int depth_limit,
                                    int max_literals, const std::string& fresh_prefix) {
  if (lit.negated)
    fail(Err::NotOperationalizable, "cannot operationalize a negated literal");
  if (!kb.is_intensional(lit.pred))
    fail(Err::NotIntensional, "predicate '" + lit.pred + "' has no intensional definition");
  std::vector<Literal> out;
  int fresh_counter = 0;
  expand_literal(lit, kb, depth_limit, max_literals, fresh_prefix, fresh_counter, out);
  return out;
}

FoclTask FoclTask::from_knowledge(const Knowledge& k) {
  if (!k.task) fail(Err::ConfigError, "knowledge declares no target examples");
  FoclTask task;
  task.target = k.task->target;
  task.pos = k.task->pos;
  task.neg = k.task->neg;
  task.initial_rules = k.store.initial_rules();
  return task;
}

namespace {

// Rewrites one initial clause onto the learner's head variables x0..x{k-1},
// renaming body-local variables to the v<id> space the learner continues.
SeedBody build_seed(const HornClause& clause, const TypedSignature& target_sig,
                    const FactStore& kb, const LearnConfig& config, bool keep_intensional) {
  if (clause.head.arity() != target_sig.arity())
    fail(Err::SignatureMismatch, "initial rule arity does not match the target");
  std::map<std::string, Term> sub;
  for (int i = 0; i < clause.head.arity(); ++i) {
    const auto& v = std::get<Variable>(clause.head.args[i]);
    sub.emplace(v.name, Variable{"x" + std::to_string(i), target_sig.arg_types[i]});
  }
  SeedBody seed;
  int fresh = 0;
  for (const auto& lit : clause.body)
    for (const auto& v : lit.variables())
      if (!sub.count(v.name)) {
        TypedVar tv{"v" + std::to_string(fresh++), v.type};
        seed.introduced.push_back(tv);
        sub.emplace(v.name, Variable{tv.name, tv.type});
      }
  std::vector<Literal> mapped;
  for (const auto& lit : clause.body) {
    Literal m = lit;
    for (auto& a : m.args) a = substitute(a, sub);
    mapped.push_back(std::move(m));
  }
  if (keep_intensional) {
    seed.literals = std::move(mapped);
    return seed;
  }
  for (const auto& m : mapped) {
    if (kb.is_intensional(m.pred)) {
      auto expanded = operationalize(m, kb, config.depth_limit, 32, "o");
      seed.literals.insert(seed.literals.end(), expanded.begin(), expanded.end());
    } else {
      seed.literals.push_back(m);
    }
  }
  return seed;
}

// Training-set classification accuracy of an initial rule, used to pick the
// most accurate knowledge source under KnowledgeBalance::use_more_accurate.
double initial_rule_accuracy(const Rule& rule, const FoclTask& task, const FactStore& kb,
                             const LearnConfig& config) {
  std::int64_t right = 0;
  for (const auto& e : task.pos)
    if (rule_covers(rule, e, kb, config.depth_limit)) ++right;
  for (const auto& e : task.neg)
    if (!rule_covers(rule, e, kb, config.depth_limit)) ++right;
  std::size_t total = task.pos.size() + task.neg.size();
  return total == 0 ? 0.0 : double(right) / double(total);
}

std::vector<SeedBody> seeds_for_task(const FoclTask& task, const FactStore& kb,
                                     const LearnConfig& config) {
  std::vector<SeedBody> seeds;
  if (task.initial_rules.empty()) return seeds;
  const TypedSignature& sig = kb.required_signature(task.target);
  std::vector<const InitialRule*> sources;
  for (const auto& initial : task.initial_rules) {
    if (initial.rule.head_pred() != task.target)
      fail(Err::SignatureMismatch, "initial rule head '" + initial.rule.head_pred() +
                                       "' is not the target '" + task.target + "'");
    sources.push_back(&initial);
  }
  if (task.balance == KnowledgeBalance::use_more_accurate && sources.size() > 1) {
    const InitialRule* best = sources.front();
    double best_accuracy = -1.0;
    for (const auto* source : sources) {
      double accuracy = initial_rule_accuracy(source->rule, task, kb, config);
      if (accuracy > best_accuracy) {
        best = source;
        best_accuracy = accuracy;
      }
    }
    sources = {best};
  }
  for (const auto* source : sources) {
    for (const auto& clause : source->rule.clauses) {
      try {
        seeds.push_back(build_seed(clause, sig, kb, config, task.keep_intensional));
      } catch (const Error& e) {
        // over-long expansions are rejected candidates, not fatal
        if (e.code() != Err::NotOperationalizable) throw;
      }
    }
  }
  return seeds;
}

void validate_task(const FoclTask& task) {
  std::set<Tuple> pos(task.pos.begin(), task.pos.end());
  for (const auto& e : task.neg)
    if (pos.count(e))
      fail(Err::ParseError, "example " + tuple_text(e) + " is listed as positive and negative");
}

}  // namespace

LearnResult refine_initial_rule(const FoclTask& task, const FactStore& kb,
                                const LearnConfig& config) {
  if (task.initial_rules.empty()) fail(Err::ConfigError, "task has no initial rule");
  validate_task(task);
  auto seeds = seeds_for_task(task, kb, config);
  return foil_learn_budgeted(task.pos, task.neg, task.target, kb, config,
                             config.max_new_vars, seeds);
}

LearnResult focl_learn(const FoclTask& task, const FactStore& kb, const LearnConfig& config) {
  validate_task(task);
  auto seeds = seeds_for_task(task, kb, config);
  LearnStats accumulated;
  std::optional<LearnResult> best_partial;
  for (int budget = 0; budget <= config.max_new_vars; ++budget) {
    if (budget > 0) ++accumulated.widening_steps;
    try {
      LearnResult result =
          foil_learn_budgeted(task.pos, task.neg, task.target, kb, config, budget, seeds);
      accumulated.candidates_generated += result.stats.candidates_generated;
      accumulated.gain_evaluations += result.stats.gain_evaluations;
      accumulated.tuples_touched += result.stats.tuples_touched;
      result.stats = accumulated;
      if (result.uncovered_pos.empty()) return result;
      if (!best_partial || result.uncovered_pos.size() < best_partial->uncovered_pos.size())
        best_partial = std::move(result);
    } catch (const Error& e) {
      if (e.code() != Err::Unlearnable && e.code() != Err::NoUsefulLiteral) throw;
    }
  }
  if (best_partial) {
    best_partial->stats.candidates_generated = accumulated.candidates_generated;
    best_partial->stats.gain_evaluations = accumulated.gain_evaluations;
    best_partial->stats.tuples_touched = accumulated.tuples_touched;
    best_partial->stats.widening_steps = accumulated.widening_steps;
    return *best_partial;
  }
  fail(Err::Unlearnable, "no budget up to " + std::to_string(config.max_new_vars) +
                             " fresh variables yields a rule for '" + task.target + "'");
}

}  // namespace lawmine
