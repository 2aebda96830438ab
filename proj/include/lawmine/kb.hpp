#pragma once

// Background knowledge B: extensional tuples under closed-world semantics,
// intensional clause definitions, predicate signatures, inter-argument
// constraints and registered initial rules.

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lawmine/logic.hpp"

namespace lawmine {

struct TypedSignature {
  std::string pred;
  std::vector<std::string> arg_types;
  bool localized = true;

  int arity() const { return static_cast<int>(arg_types.size()); }
};

struct InterArgConstraint {
  enum class Kind { all_args_distinct, forbidden_pattern };

  std::string pred;
  Kind kind = Kind::all_args_distinct;
  // Slot index pairs that must not hold the same variable.
  std::vector<std::pair<int, int>> patterns;
};

enum class InitialRuleForm { extensional_hint, intensional };

struct InitialRule {
  Rule rule;
  InitialRuleForm form = InitialRuleForm::intensional;
};

// Extensional facts plus intensional definitions. Single writer until
// freeze(); immutable and safe for concurrent readers afterwards.
class FactStore {
 public:
  void add_type(DataType type);
  void add_signature(TypedSignature sig);
  void add_constraint(InterArgConstraint constraint);
  void add_fact(const std::string& pred, Tuple tuple);
  void add_clause(HornClause clause);
  void add_constant(const std::string& type, const Value& v);
  void add_hypothesis(Rule rule);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool has_type(const std::string& name) const { return types_.count(name) > 0; }
  const DataType& type(const std::string& name) const;
  bool has_predicate(const std::string& pred) const;
  const TypedSignature* signature(const std::string& pred) const;
  const TypedSignature& required_signature(const std::string& pred) const;
  bool is_extensional(const std::string& pred) const { return extensional_.count(pred) > 0; }
  bool is_intensional(const std::string& pred) const { return intensional_.count(pred) > 0; }
  const std::set<Tuple>& tuples(const std::string& pred) const;
  const Rule* definition(const std::string& pred) const;
  const std::vector<InterArgConstraint>& constraints(const std::string& pred) const;
  const std::set<Value>& constants(const std::string& type) const;
  const std::map<std::string, TypedSignature>& signatures() const { return signatures_; }
  const std::map<std::string, DataType>& types() const { return types_; }
  const std::vector<InitialRule>& initial_rules() const { return initial_rules_; }
  const std::vector<Rule>& hypotheses() const { return hypotheses_; }

  // Tab-separated `predicate<TAB>arg...` lines in deterministic order.
  std::string dump() const;

 private:
  void check_mutable() const;
  void check_tuple(const std::string& pred, const Tuple& tuple) const;
  void validate_clause_types(const HornClause& clause) const;

  std::map<std::string, DataType> types_;
  std::map<std::string, TypedSignature> signatures_;
  std::map<std::string, std::vector<InterArgConstraint>> constraints_;
  std::map<std::string, std::set<Tuple>> extensional_;
  std::map<std::string, Rule> intensional_;
  std::vector<InitialRule> initial_rules_;
  std::vector<Rule> hypotheses_;
  std::map<std::string, std::set<Value>> constants_;
  bool frozen_ = false;

  friend void register_initial_rule(FactStore& kb, Rule rule, InitialRuleForm form);
};

// Stores a validated rule as a refinement seed (FOCL) or hypothesis
// catalogue entry (MMDR).
void register_initial_rule(FactStore& kb, Rule rule, InitialRuleForm form);

// Target concept examples attached to a knowledge file.
struct TaskExamples {
  std::string target;
  std::vector<Tuple> pos;
  std::vector<Tuple> neg;
};

struct Knowledge {
  FactStore store;
  std::optional<TaskExamples> task;
};

// Clause/rule text: `head(x, y) <- p(x, y) & !q(y, v0)`. Variable vs
// constant resolution uses the store's signatures and type enumerations.
Literal parse_literal(const std::string& text, const FactStore& kb,
                      std::map<std::string, std::string>* var_types = nullptr);
HornClause parse_clause(const std::string& line, const FactStore& kb);
Rule parse_rule(const std::string& text, const FactStore& kb);

// Line-oriented knowledge declaration files; see README for the grammar.
Knowledge parse_knowledge(std::istream& in);
Knowledge parse_knowledge_text(const std::string& text);
Knowledge load_knowledge(const std::string& path);

// Human-oriented summary used by the `inspect` command.
std::string describe_knowledge(const Knowledge& k);

}  // namespace lawmine
