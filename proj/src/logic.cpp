#include "lawmine/logic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace lawmine {

const char* err_name(Err code) {
  switch (code) {
    case Err::UnknownPredicate: return "UnknownPredicate";
    case Err::TypeMismatch: return "TypeMismatch";
    case Err::DepthExceeded: return "DepthExceeded";
    case Err::NotCyclic: return "NotCyclic";
    case Err::UnknownElement: return "UnknownElement";
    case Err::UnboundVariable: return "UnboundVariable";
    case Err::ParseError: return "ParseError";
    case Err::NonMonotoneDates: return "NonMonotoneDates";
    case Err::SchemaMismatch: return "SchemaMismatch";
    case Err::LagTooLarge: return "LagTooLarge";
    case Err::EmptySeries: return "EmptySeries";
    case Err::MissingAttribute: return "MissingAttribute";
    case Err::SignatureMismatch: return "SignatureMismatch";
    case Err::NoPositives: return "NoPositives";
    case Err::NoUsefulLiteral: return "NoUsefulLiteral";
    case Err::Unlearnable: return "Unlearnable";
    case Err::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case Err::NotIntensional: return "NotIntensional";
    case Err::NotOperationalizable: return "NotOperationalizable";
    case Err::BodyNeverSatisfied: return "BodyNeverSatisfied";
    case Err::EmptyIntersection: return "EmptyIntersection";
    case Err::NoDecisions: return "NoDecisions";
    case Err::AlignmentError: return "AlignmentError";
    case Err::InsufficientData: return "InsufficientData";
    case Err::ConfigError: return "ConfigError";
  }
  return "Error";
}

Value Value::number(double v) {
  Value out;
  out.is_number_ = true;
  out.num_ = v == 0.0 ? 0.0 : v;  // normalize -0
  return out;
}

Value Value::symbol(std::string s) {
  Value out;
  out.is_number_ = false;
  out.sym_ = std::move(s);
  return out;
}

Value Value::parse(const std::string& token) {
  if (!token.empty()) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec == std::errc() && ptr == token.data() + token.size()) return number(v);
  }
  return symbol(token);
}

double Value::number() const {
  if (!is_number_) fail(Err::TypeMismatch, "value '" + sym_ + "' is not numeric");
  return num_;
}

const std::string& Value::symbol() const {
  if (is_number_) fail(Err::TypeMismatch, "value " + format_number(num_) + " is not symbolic");
  return sym_;
}

std::string Value::str() const { return is_number_ ? format_number(num_) : sym_; }

bool operator==(const Value& a, const Value& b) {
  if (a.is_number_ != b.is_number_) return false;
  return a.is_number_ ? a.num_ == b.num_ : a.sym_ == b.sym_;
}

bool operator<(const Value& a, const Value& b) {
  if (a.is_number_ != b.is_number_) return a.is_number_;
  return a.is_number_ ? a.num_ < b.num_ : a.sym_ < b.sym_;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  if (v == std::nearbyint(v) && std::fabs(v) < 1e15) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
    return std::string(buf, r.ptr);
  }
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string tuple_text(const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].str();
  }
  return out + ")";
}

ScaleKind scale_kind_from_name(const std::string& name) {
  if (name == "nominal") return ScaleKind::nominal;
  if (name == "ordinal") return ScaleKind::ordinal;
  if (name == "interval") return ScaleKind::interval;
  if (name == "ratio") return ScaleKind::ratio;
  if (name == "cyclic") return ScaleKind::cyclic;
  if (name == "absolute") return ScaleKind::absolute;
  fail(Err::ParseError, "unknown scale kind '" + name + "'");
}

const char* scale_kind_name(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::nominal: return "nominal";
    case ScaleKind::ordinal: return "ordinal";
    case ScaleKind::interval: return "interval";
    case ScaleKind::ratio: return "ratio";
    case ScaleKind::cyclic: return "cyclic";
    case ScaleKind::absolute: return "absolute";
  }
  return "?";
}

namespace {

bool ordered_scale(ScaleKind s) { return s != ScaleKind::nominal; }

void default_vocabulary(DataType& t) {
  if (t.relations.empty()) {
    t.relations = {"="};
    if (ordered_scale(t.scale)) t.relations.insert({"<", ">"});
  }
  if (t.operations.empty()) {
    if (t.scale == ScaleKind::interval) t.operations = {"add", "sub"};
    if (t.scale == ScaleKind::ratio || t.scale == ScaleKind::absolute)
      t.operations = {"add", "sub", "mul"};
    if (t.scale == ScaleKind::cyclic) t.operations = {"advance"};
  }
}

bool identifier_like(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

DataType DataType::numeric(std::string name, ScaleKind scale) {
  DataType t;
  t.name = std::move(name);
  t.scale = scale;
  t.domain = Domain::numeric;
  default_vocabulary(t);
  t.validate();
  return t;
}

DataType DataType::enumeration(std::string name, std::vector<std::string> elements,
                               ScaleKind scale) {
  DataType t;
  t.name = std::move(name);
  t.scale = scale;
  t.domain = Domain::symbolic_enum;
  t.elements = std::move(elements);
  default_vocabulary(t);
  t.validate();
  return t;
}

DataType DataType::cyclic(std::string name, std::vector<std::string> elements) {
  DataType t;
  t.name = std::move(name);
  t.scale = ScaleKind::cyclic;
  t.domain = Domain::symbolic_enum;
  t.period = static_cast<int>(elements.size());
  t.elements = std::move(elements);
  default_vocabulary(t);
  t.validate();
  return t;
}

DataType DataType::open_symbolic(std::string name, ScaleKind scale) {
  DataType t;
  t.name = std::move(name);
  t.scale = scale;
  t.domain = Domain::symbolic_open;
  default_vocabulary(t);
  t.validate();
  return t;
}

void DataType::validate() const {
  if (name.empty()) fail(Err::ParseError, "data type needs a name");
  if (scale == ScaleKind::cyclic) {
    if (period < 2) fail(Err::ParseError, "cyclic type '" + name + "' needs period >= 2");
    if (static_cast<int>(elements.size()) != period)
      fail(Err::ParseError, "cyclic type '" + name + "' needs exactly period elements");
  }
  if (domain == Domain::symbolic_enum && elements.empty())
    fail(Err::ParseError, "enumerated type '" + name + "' has no elements");
  for (const auto& e : elements)
    if (!identifier_like(e))
      fail(Err::ParseError, "element '" + e + "' of type '" + name + "' is not identifier-like");
  if (ordered_scale(scale) && relations.empty())
    fail(Err::ParseError, "ordered type '" + name + "' needs permitted relations");
}

int DataType::element_index(const std::string& element) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == element) return static_cast<int>(i);
  return -1;
}

bool DataType::admits(const Value& v) const {
  switch (domain) {
    case Domain::numeric: return v.is_number();
    case Domain::symbolic_enum: return !v.is_number() && element_index(v.symbol()) >= 0;
    case Domain::symbolic_open: return !v.is_number();
  }
  return false;
}

int cyclic_distance(const std::string& a, const std::string& b, const DataType& dtype) {
  if (dtype.scale != ScaleKind::cyclic)
    fail(Err::NotCyclic, "type '" + dtype.name + "' is not cyclic");
  int ia = dtype.element_index(a);
  int ib = dtype.element_index(b);
  if (ia < 0) fail(Err::UnknownElement, "'" + a + "' not in type '" + dtype.name + "'");
  if (ib < 0) fail(Err::UnknownElement, "'" + b + "' not in type '" + dtype.name + "'");
  int d = (ib - ia) % dtype.period;
  return d < 0 ? d + dtype.period : d;
}

const std::string& term_type(const Term& t) {
  if (auto* c = std::get_if<Constant>(&t)) return c->type;
  if (auto* v = std::get_if<Variable>(&t)) return v->type;
  return std::get<FuncTerm>(t).type;
}

bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }

void collect_variables(const Term& t, std::vector<Variable>& out) {
  if (auto* v = std::get_if<Variable>(&t)) {
    for (const auto& seen : out)
      if (seen.name == v->name) return;
    out.push_back(*v);
  } else if (auto* f = std::get_if<FuncTerm>(&t)) {
    for (const auto& a : f->args) collect_variables(a, out);
  }
}

std::vector<Variable> Literal::variables() const {
  std::vector<Variable> out;
  for (const auto& a : args) collect_variables(a, out);
  return out;
}

std::vector<Variable> HornClause::head_variables() const { return head.variables(); }

void HornClause::validate() const {
  if (head.negated) fail(Err::ParseError, "clause head must be positive: " + to_text(head));
  for (const auto& a : head.args)
    if (!is_variable(a))
      fail(Err::ParseError, "clause head arguments must be variables: " + to_text(head));
}

void Rule::validate() const {
  if (clauses.empty()) fail(Err::ParseError, "rule needs at least one clause");
  for (const auto& c : clauses) {
    c.validate();
    if (c.head.pred != clauses.front().head.pred ||
        c.head.arity() != clauses.front().head.arity())
      fail(Err::ParseError, "rule clauses must share one head predicate");
  }
}

const std::string& Rule::head_pred() const { return clauses.front().head.pred; }

int Rule::head_arity() const { return clauses.front().head.arity(); }

const Value& Binding::at(const std::string& var) const {
  auto it = map.find(var);
  if (it == map.end()) fail(Err::UnboundVariable, "variable '" + var + "' is unbound");
  return it->second;
}

std::string to_text(const Term& t) {
  if (auto* c = std::get_if<Constant>(&t)) return c->value.str();
  if (auto* v = std::get_if<Variable>(&t)) return v->name;
  const auto& f = std::get<FuncTerm>(t);
  std::string out = f.fn + "(";
  for (size_t i = 0; i < f.args.size(); ++i) {
    if (i) out += ", ";
    out += to_text(f.args[i]);
  }
  return out + ")";
}

std::string to_text(const Literal& lit) {
  std::string out = lit.negated ? "!" : "";
  out += lit.pred + "(";
  for (size_t i = 0; i < lit.args.size(); ++i) {
    if (i) out += ", ";
    out += to_text(lit.args[i]);
  }
  return out + ")";
}

std::string to_text(const HornClause& clause) {
  std::string out = to_text(clause.head) + " <- ";
  if (clause.body.empty()) return out + "true";
  for (size_t i = 0; i < clause.body.size(); ++i) {
    if (i) out += " & ";
    out += to_text(clause.body[i]);
  }
  return out;
}

std::string to_text(const Rule& rule) {
  std::string out;
  for (const auto& c : rule.clauses) {
    if (!out.empty()) out += "\n";
    out += to_text(c);
  }
  return out;
}

namespace {

int builtin_pred_arity(const std::string& name) {
  if (name == "greater" || name == "greater_eq" || name == "less" || name == "less_eq" ||
      name == "equal" || name == "not_equal")
    return 2;
  return -1;
}

}  // namespace

bool is_builtin_predicate(const std::string& name) { return builtin_pred_arity(name) == 2; }

bool is_builtin_function(const std::string& name) {
  return name == "add" || name == "sub" || name == "mul";
}

bool eval_builtin_predicate(const std::string& name, const std::vector<Value>& args) {
  if (builtin_pred_arity(name) != static_cast<int>(args.size()))
    fail(Err::UnknownPredicate, "bad builtin call " + name + "/" + std::to_string(args.size()));
  const Value& a = args[0];
  const Value& b = args[1];
  if (name == "equal") return a == b;
  if (name == "not_equal") return a != b;
  double x = a.number();
  double y = b.number();
  if (name == "greater") return x > y;
  if (name == "greater_eq") return x >= y;
  if (name == "less") return x < y;
  return x <= y;
}

Value apply_builtin_function(const std::string& name, const std::vector<Value>& args) {
  if (args.size() != 2 || !is_builtin_function(name))
    fail(Err::UnknownPredicate, "unknown function '" + name + "'");
  double x = args[0].number();
  double y = args[1].number();
  if (name == "add") return Value::number(x + y);
  if (name == "sub") return Value::number(x - y);
  return Value::number(x * y);
}

}  // namespace lawmine
