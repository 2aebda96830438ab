#pragma once

// First-order vocabulary: data types with measurement scales, terms,
// literals, Horn clauses and rules. Evaluation lives in eval.hpp.

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lawmine/errors.hpp"

namespace lawmine {

// A ground constant: either a number or a symbolic element. Total order
// puts numbers before symbols so containers iterate deterministically.
class Value {
 public:
  Value() = default;
  static Value number(double v);
  static Value symbol(std::string s);

  // Numeric if the whole token parses as a double, symbolic otherwise.
  static Value parse(const std::string& token);

  bool is_number() const { return is_number_; }
  double number() const;
  const std::string& symbol() const;

  // Shortest round-trip text; integral doubles print without exponent.
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b);

 private:
  double num_ = 0.0;
  std::string sym_;
  bool is_number_ = true;
};

using Tuple = std::vector<Value>;

std::string format_number(double v);
std::string tuple_text(const Tuple& t);

enum class ScaleKind { nominal, ordinal, interval, ratio, cyclic, absolute };
enum class Domain { numeric, symbolic_enum, symbolic_open };

ScaleKind scale_kind_from_name(const std::string& name);
const char* scale_kind_name(ScaleKind kind);

// A data type is a triple of elements, permitted relations and permitted
// operations. Numeric domains leave `elements` empty; cyclic scales carry a
// finite enumeration of exactly `period` elements.
struct DataType {
  std::string name;
  ScaleKind scale = ScaleKind::nominal;
  Domain domain = Domain::numeric;
  std::vector<std::string> elements;
  int period = 0;  // cyclic only
  std::set<std::string> relations;
  std::set<std::string> operations;

  static DataType numeric(std::string name, ScaleKind scale = ScaleKind::ratio);
  static DataType enumeration(std::string name, std::vector<std::string> elements,
                              ScaleKind scale = ScaleKind::nominal);
  static DataType cyclic(std::string name, std::vector<std::string> elements);
  static DataType open_symbolic(std::string name, ScaleKind scale = ScaleKind::ordinal);

  void validate() const;
  bool is_numeric() const { return domain == Domain::numeric; }
  // Index of an element in the enumeration, -1 when absent.
  int element_index(const std::string& element) const;
  bool admits(const Value& v) const;
};

// Directed cyclic distance: steps from a forward to b, in [0, period).
int cyclic_distance(const std::string& a, const std::string& b, const DataType& dtype);

struct Constant {
  Value value;
  std::string type;
};

struct Variable {
  std::string name;
  std::string type;
};

struct FuncTerm;
using Term = std::variant<Constant, Variable, FuncTerm>;

// A functional expression: builtin function applied to argument terms.
struct FuncTerm {
  std::string fn;
  std::vector<Term> args;
  std::string type;  // result type
};

const std::string& term_type(const Term& t);
bool is_variable(const Term& t);
void collect_variables(const Term& t, std::vector<Variable>& out);

struct Literal {
  std::string pred;
  std::vector<Term> args;
  bool negated = false;

  int arity() const { return static_cast<int>(args.size()); }
  std::vector<Variable> variables() const;
};

// head <- body conjunction. The head is always a positive literal whose
// arguments are variables.
struct HornClause {
  Literal head;
  std::vector<Literal> body;

  void validate() const;
  std::vector<Variable> head_variables() const;
};

// Horn clauses sharing one head predicate; satisfied when any clause is.
struct Rule {
  std::vector<HornClause> clauses;

  void validate() const;
  const std::string& head_pred() const;
  int head_arity() const;
};

struct Binding {
  std::map<std::string, Value> map;

  bool bound(const std::string& var) const { return map.count(var) > 0; }
  const Value& at(const std::string& var) const;
};

// Textual form: `head(args) <- lit1(args) & !lit2(args)`; an empty body
// prints as the reserved token `true`. Parsing needs a symbol table and
// lives in kb.hpp.
std::string to_text(const Term& t);
std::string to_text(const Literal& lit);
std::string to_text(const HornClause& clause);
std::string to_text(const Rule& rule);

// Builtin comparison predicates and arithmetic functions usable inside
// clause bodies and encodings. Builtins have no stored signature and are
// never enumerated as learner candidates.
bool is_builtin_predicate(const std::string& name);
bool is_builtin_function(const std::string& name);
bool eval_builtin_predicate(const std::string& name, const std::vector<Value>& args);
Value apply_builtin_function(const std::string& name, const std::vector<Value>& args);

}  // namespace lawmine
