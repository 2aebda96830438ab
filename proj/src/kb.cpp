#include "lawmine/kb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lawmine {

namespace {

const std::vector<InterArgConstraint> kNoConstraints;

std::string pred_label(const std::string& pred, int arity) {
  return pred + "/" + std::to_string(arity);
}

}  // namespace

void FactStore::check_mutable() const {
  if (frozen_) fail(Err::ParseError, "fact store is frozen");
}

void FactStore::add_type(DataType type) {
  check_mutable();
  type.validate();
  if (types_.count(type.name)) fail(Err::ParseError, "duplicate type '" + type.name + "'");
  types_.emplace(type.name, std::move(type));
}

const DataType& FactStore::type(const std::string& name) const {
  auto it = types_.find(name);
  if (it == types_.end()) fail(Err::TypeMismatch, "unknown data type '" + name + "'");
  return it->second;
}

void FactStore::add_signature(TypedSignature sig) {
  check_mutable();
  if (sig.pred.empty() || sig.arg_types.empty())
    fail(Err::ParseError, "signature needs a predicate name and argument types");
  if (is_builtin_predicate(sig.pred) || is_builtin_function(sig.pred))
    fail(Err::ParseError, "'" + sig.pred + "' is a reserved builtin name");
  for (const auto& t : sig.arg_types) type(t);  // must exist
  if (signatures_.count(sig.pred))
    fail(Err::ParseError, "duplicate signature for '" + sig.pred + "'");
  signatures_.emplace(sig.pred, std::move(sig));
}

void FactStore::add_constraint(InterArgConstraint constraint) {
  check_mutable();
  const TypedSignature& sig = required_signature(constraint.pred);
  if (constraint.kind == InterArgConstraint::Kind::all_args_distinct) {
    constraint.patterns.clear();
    for (int i = 0; i < sig.arity(); ++i)
      for (int j = i + 1; j < sig.arity(); ++j) constraint.patterns.emplace_back(i, j);
  }
  for (auto [i, j] : constraint.patterns)
    if (i < 0 || j < 0 || i >= sig.arity() || j >= sig.arity() || i == j)
      fail(Err::ParseError, "constraint pattern out of range for '" + constraint.pred + "'");
  constraints_[constraint.pred].push_back(std::move(constraint));
}

void FactStore::check_tuple(const std::string& pred, const Tuple& tuple) const {
  const TypedSignature& sig = required_signature(pred);
  if (static_cast<int>(tuple.size()) != sig.arity())
    fail(Err::SignatureMismatch,
         pred_label(pred, tuple.size()) + " does not match signature arity " +
             std::to_string(sig.arity()));
  for (size_t i = 0; i < tuple.size(); ++i) {
    const DataType& t = type(sig.arg_types[i]);
    if (!t.admits(tuple[i]))
      fail(Err::TypeMismatch, "value " + tuple[i].str() + " is not of type '" + t.name +
                                  "' (slot " + std::to_string(i) + " of " + pred + ")");
  }
}

void FactStore::add_fact(const std::string& pred, Tuple tuple) {
  check_mutable();
  check_tuple(pred, tuple);
  const TypedSignature& sig = *signature(pred);
  for (size_t i = 0; i < tuple.size(); ++i) constants_[sig.arg_types[i]].insert(tuple[i]);
  extensional_[pred].insert(std::move(tuple));
}

void FactStore::add_constant(const std::string& type_name, const Value& v) {
  check_mutable();
  const DataType& t = type(type_name);
  if (!t.admits(v))
    fail(Err::TypeMismatch, "value " + v.str() + " is not of type '" + type_name + "'");
  constants_[type_name].insert(v);
}

void FactStore::validate_clause_types(const HornClause& clause) const {
  std::map<std::string, std::string> var_types;
  auto visit_literal = [&](const Literal& lit) {
    const TypedSignature* sig = signature(lit.pred);
    if (sig == nullptr && !is_builtin_predicate(lit.pred))
      fail(Err::SignatureMismatch, "predicate '" + lit.pred + "' has no signature");
    if (sig && sig->arity() != lit.arity())
      fail(Err::SignatureMismatch, "arity mismatch for '" + lit.pred + "'");
    for (int i = 0; i < lit.arity(); ++i) {
      const Term& arg = lit.args[i];
      if (sig) {
        if (term_type(arg) != sig->arg_types[i])
          fail(Err::TypeMismatch, "slot " + std::to_string(i) + " of '" + lit.pred +
                                      "' expects type '" + sig->arg_types[i] + "', got '" +
                                      term_type(arg) + "'");
      }
      std::vector<Variable> vars;
      collect_variables(arg, vars);
      for (const auto& v : vars) {
        auto [it, inserted] = var_types.emplace(v.name, v.type);
        if (!inserted && it->second != v.type)
          fail(Err::TypeMismatch, "variable '" + v.name + "' used with types '" + it->second +
                                      "' and '" + v.type + "'");
      }
    }
  };
  visit_literal(clause.head);
  for (const auto& lit : clause.body) visit_literal(lit);
}

void FactStore::add_clause(HornClause clause) {
  check_mutable();
  clause.validate();
  if (is_builtin_predicate(clause.head.pred))
    fail(Err::ParseError, "cannot define builtin predicate '" + clause.head.pred + "'");
  validate_clause_types(clause);
  auto it = intensional_.find(clause.head.pred);
  if (it == intensional_.end()) {
    Rule r;
    r.clauses.push_back(std::move(clause));
    intensional_.emplace(r.head_pred(), std::move(r));
  } else {
    if (it->second.head_arity() != clause.head.arity())
      fail(Err::SignatureMismatch, "arity mismatch for '" + clause.head.pred + "'");
    it->second.clauses.push_back(std::move(clause));
  }
}

void FactStore::add_hypothesis(Rule rule) {
  check_mutable();
  rule.validate();
  for (const auto& c : rule.clauses) validate_clause_types(c);
  hypotheses_.push_back(std::move(rule));
}

void register_initial_rule(FactStore& kb, Rule rule, InitialRuleForm form) {
  kb.check_mutable();
  rule.validate();
  for (const auto& c : rule.clauses) {
    if (kb.signature(c.head.pred) == nullptr)
      fail(Err::SignatureMismatch, "initial rule head '" + c.head.pred + "' has no signature");
    for (const auto& lit : c.body)
      if (kb.signature(lit.pred) == nullptr && !is_builtin_predicate(lit.pred))
        fail(Err::SignatureMismatch,
             "initial rule references untyped predicate '" + lit.pred + "'");
    kb.validate_clause_types(c);
  }
  kb.initial_rules_.push_back(InitialRule{std::move(rule), form});
}

bool FactStore::has_predicate(const std::string& pred) const {
  return signatures_.count(pred) > 0 || is_builtin_predicate(pred);
}

const TypedSignature* FactStore::signature(const std::string& pred) const {
  auto it = signatures_.find(pred);
  return it == signatures_.end() ? nullptr : &it->second;
}

const TypedSignature& FactStore::required_signature(const std::string& pred) const {
  const TypedSignature* sig = signature(pred);
  if (!sig) fail(Err::UnknownPredicate, "predicate '" + pred + "' is not declared");
  return *sig;
}

const std::set<Tuple>& FactStore::tuples(const std::string& pred) const {
  static const std::set<Tuple> empty;
  auto it = extensional_.find(pred);
  return it == extensional_.end() ? empty : it->second;
}

const Rule* FactStore::definition(const std::string& pred) const {
  auto it = intensional_.find(pred);
  return it == intensional_.end() ? nullptr : &it->second;
}

const std::vector<InterArgConstraint>& FactStore::constraints(const std::string& pred) const {
  auto it = constraints_.find(pred);
  return it == constraints_.end() ? kNoConstraints : it->second;
}

const std::set<Value>& FactStore::constants(const std::string& type_name) const {
  static const std::set<Value> empty;
  auto it = constants_.find(type_name);
  return it == constants_.end() ? empty : it->second;
}

std::string FactStore::dump() const {
  std::string out;
  for (const auto& [pred, tuples] : extensional_) {
    for (const auto& t : tuples) {
      out += pred;
      for (const auto& v : t) {
        out += '\t';
        out += v.str();
      }
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clause text parsing.

namespace {

struct Lexer {
  std::string text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool accept(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) == 0) {
      pos += s.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(Err::ParseError, std::string("expected '") + c + "' at offset " +
                                std::to_string(pos) + " in: " + text);
  }

  // identifier, or a number token (digits, '.', leading '-').
  std::string token() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || std::isdigit(static_cast<unsigned char>(text[pos])))) {
      ++pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == 'e' || text[pos] == 'E' ||
              ((text[pos] == '-' || text[pos] == '+') &&
               (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
        ++pos;
    } else {
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                   text[pos] == '_'))
        ++pos;
    }
    if (start == pos)
      fail(Err::ParseError,
           "expected token at offset " + std::to_string(pos) + " in: " + text);
    return text.substr(start, pos - start);
  }
};

class LiteralParser {
 public:
  LiteralParser(const FactStore& kb, std::map<std::string, std::string>& var_types)
      : kb_(kb), var_types_(var_types) {}

  Literal parse(Lexer& lex) {
    Literal lit;
    lit.negated = lex.accept('!');
    lit.pred = lex.token();
    lex.expect('(');
    const TypedSignature* sig = kb_.signature(lit.pred);
    if (!sig && !is_builtin_predicate(lit.pred))
      fail(Err::SignatureMismatch, "predicate '" + lit.pred + "' is not declared");
    int slot = 0;
    if (!lex.accept(')')) {
      do {
        std::string expected = sig && slot < sig->arity() ? sig->arg_types[slot] : "";
        lit.args.push_back(parse_term(lex, expected));
        ++slot;
      } while (lex.accept(','));
      lex.expect(')');
    }
    if (sig && sig->arity() != lit.arity())
      fail(Err::SignatureMismatch, "arity mismatch for '" + lit.pred + "'");
    return lit;
  }

 private:
  Term parse_term(Lexer& lex, const std::string& expected_type) {
    std::string tok = lex.token();
    if (lex.peek() == '(') {
      if (!is_builtin_function(tok))
        fail(Err::ParseError, "unknown function '" + tok + "'");
      lex.expect('(');
      FuncTerm f;
      f.fn = tok;
      do {
        f.args.push_back(parse_term(lex, expected_type));
      } while (lex.accept(','));
      lex.expect(')');
      f.type = f.args.empty() ? expected_type : term_type(f.args.front());
      return f;
    }
    Value v = Value::parse(tok);
    if (v.is_number()) {
      std::string type = expected_type;
      if (type.empty()) type = infer_numeric_type();
      return Constant{v, type};
    }
    // Symbol: an enumeration element of the expected type is a constant,
    // anything else is a variable.
    if (!expected_type.empty() && kb_.has_type(expected_type)) {
      const DataType& t = kb_.type(expected_type);
      if (t.domain == Domain::symbolic_enum && t.element_index(tok) >= 0)
        return Constant{v, expected_type};
    }
    std::string vtype = expected_type;
    auto it = var_types_.find(tok);
    if (it != var_types_.end()) {
      if (!vtype.empty() && it->second != vtype)
        fail(Err::TypeMismatch, "variable '" + tok + "' used with types '" + it->second +
                                    "' and '" + vtype + "'");
      vtype = it->second;
    } else {
      if (vtype.empty())
        fail(Err::ParseError, "cannot infer a type for variable '" + tok + "'");
      var_types_.emplace(tok, vtype);
    }
    return Variable{tok, vtype};
  }

  std::string infer_numeric_type() const {
    // Builtin slots accept any numeric type; pick the first declared one.
    for (const auto& [name, t] : kb_.types())
      if (t.is_numeric()) return name;
    fail(Err::ParseError, "no numeric type declared");
  }

  const FactStore& kb_;
  std::map<std::string, std::string>& var_types_;
};

}  // namespace

Literal parse_literal(const std::string& text, const FactStore& kb,
                      std::map<std::string, std::string>* var_types) {
  std::map<std::string, std::string> local;
  Lexer lex{text};
  Literal lit = LiteralParser(kb, var_types ? *var_types : local).parse(lex);
  if (!lex.eof()) fail(Err::ParseError, "trailing input in literal: " + text);
  return lit;
}

HornClause parse_clause(const std::string& line, const FactStore& kb) {
  Lexer lex{line};
  std::map<std::string, std::string> var_types;
  LiteralParser parser(kb, var_types);
  HornClause clause;
  clause.head = parser.parse(lex);
  if (!lex.accept("<-"))
    fail(Err::ParseError, "expected '<-' in clause: " + line);
  if (!lex.accept("true")) {
    do {
      clause.body.push_back(parser.parse(lex));
    } while (lex.accept('&'));
  }
  if (!lex.eof()) fail(Err::ParseError, "trailing input in clause: " + line);
  clause.validate();
  return clause;
}

Rule parse_rule(const std::string& text, const FactStore& kb) {
  Rule rule;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rule.clauses.push_back(parse_clause(line, kb));
  }
  rule.validate();
  return rule;
}

// ---------------------------------------------------------------------------
// Knowledge declaration files.

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// `pred name(type, type, ...) [localized]`
void parse_pred_line(const std::string& rest, FactStore& store) {
  Lexer lex{rest};
  TypedSignature sig;
  sig.pred = lex.token();
  lex.expect('(');
  do {
    sig.arg_types.push_back(lex.token());
  } while (lex.accept(','));
  lex.expect(')');
  lex.accept("localized");  // one concrete type per slot either way
  sig.localized = true;
  if (!lex.eof()) fail(Err::ParseError, "trailing input in pred line: " + rest);
  store.add_signature(std::move(sig));
}

void parse_type_line(const std::vector<std::string>& words, FactStore& store) {
  // type <name> numeric [scale] | nominal|ordinal elements e1 e2 ... |
  // cyclic period=<n> elements e1 ... | ordinal open
  if (words.size() < 3) fail(Err::ParseError, "incomplete type line");
  const std::string& name = words[1];
  const std::string& kind = words[2];
  if (kind == "numeric") {
    ScaleKind scale = words.size() > 3 ? scale_kind_from_name(words[3]) : ScaleKind::ratio;
    store.add_type(DataType::numeric(name, scale));
    return;
  }
  if (kind == "cyclic") {
    size_t i = 3;
    int period = -1;
    if (i < words.size() && words[i].rfind("period=", 0) == 0) {
      period = std::stoi(words[i].substr(7));
      ++i;
    }
    if (i >= words.size() || words[i] != "elements")
      fail(Err::ParseError, "cyclic type '" + name + "' needs elements");
    std::vector<std::string> elements(words.begin() + i + 1, words.end());
    if (period >= 0 && period != static_cast<int>(elements.size()))
      fail(Err::ParseError, "cyclic type '" + name + "' period/elements mismatch");
    store.add_type(DataType::cyclic(name, std::move(elements)));
    return;
  }
  ScaleKind scale = scale_kind_from_name(kind);
  if (words.size() > 3 && words[3] == "open") {
    store.add_type(DataType::open_symbolic(name, scale));
    return;
  }
  if (words.size() > 3 && words[3] == "elements") {
    std::vector<std::string> elements(words.begin() + 4, words.end());
    store.add_type(DataType::enumeration(name, std::move(elements), scale));
    return;
  }
  fail(Err::ParseError, "type '" + name + "' needs 'open' or 'elements ...'");
}

void parse_constraint_line(const std::vector<std::string>& words, FactStore& store) {
  // constraint <pred> all_args_distinct | constraint <pred> forbid 0=1 2=3
  if (words.size() < 3) fail(Err::ParseError, "incomplete constraint line");
  InterArgConstraint c;
  c.pred = words[1];
  if (words[2] == "all_args_distinct") {
    c.kind = InterArgConstraint::Kind::all_args_distinct;
  } else if (words[2] == "forbid") {
    c.kind = InterArgConstraint::Kind::forbidden_pattern;
    for (size_t i = 3; i < words.size(); ++i) {
      size_t eq = words[i].find('=');
      if (eq == std::string::npos)
        fail(Err::ParseError, "bad forbid pattern '" + words[i] + "'");
      c.patterns.emplace_back(std::stoi(words[i].substr(0, eq)),
                              std::stoi(words[i].substr(eq + 1)));
    }
  } else {
    fail(Err::ParseError, "unknown constraint kind '" + words[2] + "'");
  }
  store.add_constraint(std::move(c));
}

Tuple parse_ground_tuple(const std::vector<std::string>& words, size_t from) {
  Tuple t;
  for (size_t i = from; i < words.size(); ++i) t.push_back(Value::parse(words[i]));
  return t;
}

}  // namespace

Knowledge parse_knowledge(std::istream& in) {
  Knowledge k;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      auto words = split_ws(line);
      const std::string& keyword = words[0];
      std::string rest = line.substr(line.find(keyword) + keyword.size());
      if (keyword == "type") {
        parse_type_line(words, k.store);
      } else if (keyword == "pred") {
        parse_pred_line(rest, k.store);
      } else if (keyword == "constraint") {
        parse_constraint_line(words, k.store);
      } else if (keyword == "fact") {
        if (words.size() < 2) fail(Err::ParseError, "incomplete fact line");
        k.store.add_fact(words[1], parse_ground_tuple(words, 2));
      } else if (keyword == "const") {
        if (words.size() < 3) fail(Err::ParseError, "incomplete const line");
        for (size_t i = 2; i < words.size(); ++i)
          k.store.add_constant(words[1], Value::parse(words[i]));
      } else if (keyword == "clause") {
        k.store.add_clause(parse_clause(rest, k.store));
      } else if (keyword == "initial") {
        InitialRuleForm form = InitialRuleForm::intensional;
        if (words.size() > 1 && words[1] == "extensional") {
          form = InitialRuleForm::extensional_hint;
          rest = rest.substr(rest.find("extensional") + 11);
        }
        Rule r;
        r.clauses.push_back(parse_clause(rest, k.store));
        register_initial_rule(k.store, std::move(r), form);
      } else if (keyword == "hypothesis") {
        Rule r;
        r.clauses.push_back(parse_clause(rest, k.store));
        k.store.add_hypothesis(std::move(r));
      } else if (keyword == "target") {
        if (words.size() != 2) fail(Err::ParseError, "target line needs a predicate name");
        k.store.required_signature(words[1]);
        k.task = TaskExamples{words[1], {}, {}};
      } else if (keyword == "pos" || keyword == "neg") {
        if (!k.task) fail(Err::ParseError, "pos/neg before target declaration");
        if (words.size() < 2 || words[1] != k.task->target)
          fail(Err::ParseError, "pos/neg must name the declared target");
        Tuple t = parse_ground_tuple(words, 2);
        const TypedSignature& sig = k.store.required_signature(k.task->target);
        if (static_cast<int>(t.size()) != sig.arity())
          fail(Err::SignatureMismatch, "example arity mismatch for '" + k.task->target + "'");
        for (size_t i = 0; i < t.size(); ++i) k.store.add_constant(sig.arg_types[i], t[i]);
        (keyword == "pos" ? k.task->pos : k.task->neg).push_back(std::move(t));
      } else {
        fail(Err::ParseError, "unknown keyword '" + keyword + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Err::ParseError)
        throw Error(Err::ParseError,
                    "line " + std::to_string(line_no) + ": " + e.what());
      throw;
    }
  }
  return k;
}

Knowledge parse_knowledge_text(const std::string& text) {
  std::istringstream in(text);
  return parse_knowledge(in);
}

Knowledge load_knowledge(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ConfigError, "cannot open knowledge file '" + path + "'");
  return parse_knowledge(in);
}

std::string describe_knowledge(const Knowledge& k) {
  std::ostringstream out;
  out << "types:\n";
  for (const auto& [name, t] : k.store.types()) {
    out << "  " << name << " (" << scale_kind_name(t.scale) << ")";
    if (!t.elements.empty()) {
      out << " {";
      for (size_t i = 0; i < t.elements.size(); ++i)
        out << (i ? " " : "") << t.elements[i];
      out << "}";
    }
    out << "\n";
  }
  out << "predicates:\n";
  for (const auto& [name, sig] : k.store.signatures()) {
    out << "  " << name << "(";
    for (size_t i = 0; i < sig.arg_types.size(); ++i)
      out << (i ? ", " : "") << sig.arg_types[i];
    out << ")";
    if (k.store.is_extensional(name))
      out << "  [" << k.store.tuples(name).size() << " tuples]";
    if (k.store.is_intensional(name)) out << "  [intensional]";
    if (!k.store.constraints(name).empty()) out << "  [constrained]";
    out << "\n";
  }
  for (const auto& [name, sig] : k.store.signatures()) {
    (void)sig;
    if (const Rule* def = k.store.definition(name))
      out << "definition " << name << ":\n  " << to_text(*def) << "\n";
  }
  for (const auto& init : k.store.initial_rules())
    out << "initial rule ("
        << (init.form == InitialRuleForm::intensional ? "intensional" : "extensional hint")
        << "):\n  " << to_text(init.rule) << "\n";
  for (const auto& h : k.store.hypotheses())
    out << "hypothesis:\n  " << to_text(h) << "\n";
  if (k.task) {
    out << "target: " << k.task->target << " (" << k.task->pos.size() << " pos, "
        << k.task->neg.size() << " neg)\n";
  }
  return out.str();
}

}  // namespace lawmine
