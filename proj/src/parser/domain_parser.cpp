#include "parser/domain_parser.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "parser/sexpr.hpp"

namespace bcr::parser {

namespace {

const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.is_list) throw ParseError(e.pos, what);
  return e;
}

const std::string& expect_symbol(const SExpr& e, const std::string& what) {
  if (e.is_list || e.symbol.empty()) throw ParseError(e.pos, what);
  return e.symbol;
}

void expect_keyword(const SExpr& e, std::string_view keyword) {
  if (!e.is_symbol(keyword)) throw ParseError(e.pos, "'" + std::string(keyword) + "'");
}

[[noreturn]] void invalid(const std::string& symbol, const std::string& why) {
  throw Error(ErrorCode::kValidation, symbol + ": " + why);
}

// (define (<kind> NAME) ...) -> NAME
std::string read_header(const SExpr& top, std::string_view kind) {
  expect_list(top, "'('");
  if (top.items.empty()) throw ParseError(top.pos, "'define'");
  expect_keyword(top.items[0], "define");
  if (top.items.size() < 2) throw ParseError(top.pos, "(" + std::string(kind) + " NAME)");
  const SExpr& head = expect_list(top.items[1], "(" + std::string(kind) + " NAME)");
  if (head.items.size() != 2) throw ParseError(head.pos, "(" + std::string(kind) + " NAME)");
  expect_keyword(head.items[0], kind);
  return expect_symbol(head.items[1], "name");
}

CategorySet read_category_spec(const SExpr& e) {
  if (!e.is_list) return {expect_symbol(e, "category")};
  if (e.items.size() < 2) throw ParseError(e.pos, "(either CATEGORY...)");
  expect_keyword(e.items[0], "either");
  CategorySet out;
  for (size_t i = 1; i < e.items.size(); ++i)
    out.push_back(expect_symbol(e.items[i], "category"));
  return out;
}

// "a b - cat c - (either x y)" starting at items[begin].
std::vector<std::pair<std::string, CategorySet>> read_typed_list(
    const SExpr& list, size_t begin) {
  std::vector<std::pair<std::string, CategorySet>> out;
  std::vector<std::string> pending;
  for (size_t i = begin; i < list.items.size(); ++i) {
    const SExpr& e = list.items[i];
    if (e.is_symbol("-")) {
      if (pending.empty() || i + 1 >= list.items.size())
        throw ParseError(e.pos, "NAME - CATEGORY");
      CategorySet cats = read_category_spec(list.items[++i]);
      for (auto& n : pending) out.emplace_back(std::move(n), cats);
      pending.clear();
      continue;
    }
    pending.push_back(expect_symbol(e, "name or '-'"));
  }
  if (!pending.empty()) throw ParseError(list.pos, "'- CATEGORY' after " + pending.back());
  return out;
}

Literal read_literal(const SExpr& e) {
  expect_list(e, "((PREDICATE TERM...) VALUE)");
  if (e.items.size() != 2) throw ParseError(e.pos, "((PREDICATE TERM...) VALUE)");
  const SExpr& atom = expect_list(e.items[0], "(PREDICATE TERM...)");
  if (atom.items.empty()) throw ParseError(atom.pos, "predicate name");
  Literal l;
  l.atom.predicate = expect_symbol(atom.items[0], "predicate name");
  for (size_t i = 1; i < atom.items.size(); ++i)
    l.atom.args.push_back(expect_symbol(atom.items[i], "term"));
  const std::string& v = expect_symbol(e.items[1], "truth value");
  auto value = parse_truth_value(v);
  if (!value || *value == TruthValue::kUnknown)
    throw ParseError(e.items[1].pos, "true, false, possibly_true or possibly_false");
  l.value = *value;
  return l;
}

std::vector<Literal> read_literals(const SExpr& e) {
  expect_list(e, "list of literals");
  std::vector<Literal> out;
  for (const auto& item : e.items) out.push_back(read_literal(item));
  return out;
}

BlockingCondition read_condition(const SExpr& e) {
  expect_list(e, "(:condition NAME :trigger (...) :resolution (...))");
  if (e.items.size() != 6)
    throw ParseError(e.pos, "(:condition NAME :trigger (...) :resolution (...))");
  expect_keyword(e.items[0], ":condition");
  BlockingCondition c;
  c.name = expect_symbol(e.items[1], "condition name");
  expect_keyword(e.items[2], ":trigger");
  c.trigger = read_literals(e.items[3]);
  expect_keyword(e.items[4], ":resolution");
  c.resolution = read_literals(e.items[5]);
  return c;
}

ActionSchema read_action(const SExpr& e) {
  ActionSchema a;
  if (e.items.size() < 2) throw ParseError(e.pos, "action name");
  a.name = expect_symbol(e.items[1], "action name");
  size_t i = 2;
  bool saw_effects = false;
  bool saw_params = false;
  while (i < e.items.size()) {
    const SExpr& key = e.items[i];
    if (key.is_symbol(":parameters")) {
      if (saw_params || i + 1 >= e.items.size()) throw ParseError(key.pos, "parameter list");
      const SExpr& params = expect_list(e.items[i + 1], "parameter list");
      for (auto& [var, cats] : read_typed_list(params, 0))
        a.parameters.push_back({var, cats});
      saw_params = true;
      i += 2;
    } else if (key.is_symbol(":repeatable")) {
      a.repeatable = true;
      ++i;
    } else if (key.is_symbol(":effects")) {
      if (saw_effects || i + 1 >= e.items.size()) throw ParseError(key.pos, "effect list");
      a.effects = read_literals(e.items[i + 1]);
      saw_effects = true;
      i += 2;
    } else if (key.is_symbol(":blocked-when")) {
      ++i;
      size_t before = a.blocking_conditions.size();
      while (i < e.items.size() && e.items[i].is_list) {
        a.blocking_conditions.push_back(read_condition(e.items[i]));
        ++i;
      }
      if (a.blocking_conditions.size() == before)
        throw ParseError(key.pos, "(:condition ...) after :blocked-when");
    } else {
      throw ParseError(key.pos, ":parameters, :repeatable, :effects or :blocked-when");
    }
  }
  if (!saw_params) throw ParseError(e.pos, ":parameters");
  if (!saw_effects) throw ParseError(e.pos, ":effects");
  return a;
}

void check_categories(const Domain& d, const CategorySet& cats,
                      const std::string& where) {
  for (const auto& c : cats)
    if (!d.has_category(c)) invalid(where, "unknown category " + c);
}

const Instance* find_constant(const Domain& d, const std::string& id) {
  for (const auto& c : d.constants)
    if (c.id == id) return &c;
  return nullptr;
}

// Argument i of `l` must be a parameter, a free variable (effects only) or a
// constant whose category fits the predicate slot.
void check_literal(const Domain& d, const ActionSchema& a, const Literal& l,
                   bool allow_free_variables, const std::string& where) {
  const Predicate* p = d.predicate(l.atom.predicate);
  if (!p) invalid(where, "unknown predicate " + l.atom.predicate);
  if (p->arity() != l.atom.args.size())
    invalid(where, "arity mismatch for " + l.atom.predicate);
  for (size_t i = 0; i < l.atom.args.size(); ++i) {
    const std::string& t = l.atom.args[i];
    if (is_variable(t)) {
      if (!a.parameter(t) && !allow_free_variables)
        invalid(where, "variable " + t + " is not a parameter");
      continue;
    }
    const Instance* c = find_constant(d, t);
    if (!c) invalid(where, "unknown constant " + t);
    if (!accepts(p->parameter_categories[i], c->category))
      invalid(where, t + " does not fit " + l.atom.predicate);
  }
}

void validate(const Domain& d) {
  std::set<std::string> seen;
  for (const auto& c : d.categories)
    if (!seen.insert(c).second) invalid(c, "duplicate category");
  seen.clear();
  for (const auto& c : d.constants) {
    if (!seen.insert(c.id).second) invalid(c.id, "duplicate constant");
    if (!d.has_category(c.category)) invalid(c.id, "unknown category " + c.category);
  }
  seen.clear();
  for (const auto& p : d.predicates) {
    if (!seen.insert(p.name).second) invalid(p.name, "duplicate predicate");
    if (p.arity() == 0) invalid(p.name, "arity must be at least 1");
    for (const auto& cats : p.parameter_categories) check_categories(d, cats, p.name);
  }
  if (d.schemas.empty()) invalid(d.name, "domain declares no actions");
  seen.clear();
  for (const auto& a : d.schemas) {
    if (!seen.insert(a.name).second) invalid(a.name, "duplicate action");
    std::set<std::string> vars;
    for (const auto& p : a.parameters) {
      if (!is_variable(p.variable)) invalid(a.name, "parameter " + p.variable + " must start with '?'");
      if (!vars.insert(p.variable).second) invalid(a.name, "duplicate parameter " + p.variable);
      check_categories(d, p.categories, a.name);
    }
    if (a.effects.empty()) invalid(a.name, "no effects");
    for (const auto& e : a.effects) check_literal(d, a, e, true, a.name);
    std::set<std::string> cond_names;
    for (const auto& c : a.blocking_conditions) {
      const std::string where = a.name + "/" + c.name;
      if (!cond_names.insert(c.name).second) invalid(where, "duplicate condition");
      if (c.resolution.empty()) invalid(where, "no resolution literals");
      for (const auto* side : {&c.trigger, &c.resolution}) {
        for (const auto& l : *side) {
          if (!is_certain(l.value)) invalid(where, "condition literals must be true or false");
          check_literal(d, a, l, false, where);
        }
      }
    }
  }
}

std::string render_categories(const CategorySet& cats) {
  if (cats.size() == 1) return cats.front();
  std::string out = "(either";
  for (const auto& c : cats) out += " " + c;
  return out + ")";
}

std::string render_literal(const Literal& l) {
  return "((" + l.atom.key() + ") " + std::string(to_string(l.value)) + ")";
}

std::string render_literals(const std::vector<Literal>& ls) {
  std::string out = "(";
  for (size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ' ';
    out += render_literal(ls[i]);
  }
  return out + ")";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Domain parse_domain(std::string_view text) {
  const SExpr top = read_sexpr(text);
  Domain d;
  d.name = read_header(top, "domain");
  size_t i = 2;
  auto section = [&](std::string_view keyword) -> const SExpr* {
    if (i >= top.items.size()) return nullptr;
    const SExpr& s = top.items[i];
    if (!s.is_list || s.items.empty() || !s.items[0].is_symbol(keyword)) return nullptr;
    ++i;
    return &s;
  };
  const SExpr* cats = section(":categories");
  if (!cats) {
    if (i < top.items.size()) throw ParseError(top.items[i].pos, "(:categories ...)");
  } else {
    for (size_t k = 1; k < cats->items.size(); ++k)
      d.categories.push_back(expect_symbol(cats->items[k], "category"));
  }
  if (const SExpr* consts = section(":constants")) {
    for (auto& [id, c] : read_typed_list(*consts, 1)) {
      if (c.size() != 1) throw ParseError(consts->pos, "single category for constant " + id);
      d.constants.push_back({id, c.front()});
    }
  }
  if (const SExpr* preds = section(":predicates")) {
    for (size_t k = 1; k < preds->items.size(); ++k) {
      const SExpr& p = expect_list(preds->items[k], "(NAME ?VAR - CATEGORY ...)");
      if (p.items.empty()) throw ParseError(p.pos, "predicate name");
      Predicate pred;
      pred.name = expect_symbol(p.items[0], "predicate name");
      for (auto& [var, c] : read_typed_list(p, 1)) {
        if (!is_variable(var)) throw ParseError(p.pos, "?variable");
        pred.parameter_categories.push_back(c);
      }
      d.predicates.push_back(std::move(pred));
    }
  }
  for (; i < top.items.size(); ++i) {
    const SExpr& s = top.items[i];
    if (!s.is_list || s.items.empty() || !s.items[0].is_symbol(":action"))
      throw ParseError(s.pos, "(:action ...)");
    d.schemas.push_back(read_action(s));
  }
  validate(d);
  return d;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  const SExpr top = read_sexpr(text);
  Problem p;
  p.name = read_header(top, "problem");
  if (top.items.size() != 6)
    throw ParseError(top.pos, "(:domain) (:objects) (:known) (:goal) sections");
  const SExpr& dom = expect_list(top.items[2], "(:domain NAME)");
  if (dom.items.size() != 2) throw ParseError(dom.pos, "(:domain NAME)");
  expect_keyword(dom.items[0], ":domain");
  p.domain_name = expect_symbol(dom.items[1], "domain name");
  if (p.domain_name != domain.name)
    invalid(p.name, "problem targets domain " + p.domain_name + ", not " + domain.name);

  const SExpr& objs = expect_list(top.items[3], "(:objects ...)");
  if (objs.items.empty()) throw ParseError(objs.pos, ":objects");
  expect_keyword(objs.items[0], ":objects");
  for (auto& [id, c] : read_typed_list(objs, 1)) {
    if (c.size() != 1) throw ParseError(objs.pos, "single category for " + id);
    p.instances.push_back({id, c.front()});
  }

  auto literal_section = [&](const SExpr& e, std::string_view keyword) {
    expect_list(e, "(" + std::string(keyword) + " ...)");
    if (e.items.empty()) throw ParseError(e.pos, std::string(keyword));
    expect_keyword(e.items[0], keyword);
    std::vector<Literal> out;
    for (size_t k = 1; k < e.items.size(); ++k) out.push_back(read_literal(e.items[k]));
    return out;
  };
  p.initial_known = literal_section(top.items[4], ":known");
  p.goal = literal_section(top.items[5], ":goal");

  std::set<std::string> ids;
  for (const auto& inst : p.instances) {
    if (!ids.insert(inst.id).second) invalid(inst.id, "duplicate object");
    if (!domain.has_category(inst.category)) invalid(inst.id, "unknown category " + inst.category);
  }
  const InstanceTable table = declared_instances(domain, p);
  for (const auto* side : {&p.initial_known, &p.goal}) {
    for (const auto& l : *side) {
      const Predicate* pred = domain.predicate(l.atom.predicate);
      if (!pred)
        throw Error(ErrorCode::kUnknownPredicate, l.atom.predicate);
      if (pred->arity() != l.atom.args.size())
        throw Error(ErrorCode::kArityMismatch, l.to_string());
      for (size_t k = 0; k < l.atom.args.size(); ++k) {
        auto it = table.find(l.atom.args[k]);
        if (it == table.end())
          throw Error(ErrorCode::kUnknownInstance, l.atom.args[k]);
        if (!accepts(pred->parameter_categories[k], it->second))
          throw Error(ErrorCode::kCategoryMismatch, l.to_string());
      }
      if (!is_certain(l.value)) invalid(p.name, l.to_string() + " must be true or false");
    }
  }
  if (p.goal.empty()) invalid(p.name, "empty goal");
  return p;
}

std::string render_domain(const Domain& d) {
  std::string out = "(define (domain " + d.name + ")\n  (:categories";
  for (const auto& c : d.categories) out += " " + c;
  out += ")\n";
  if (!d.constants.empty()) {
    out += "  (:constants";
    for (const auto& c : d.constants) out += " " + c.id + " - " + c.category;
    out += ")\n";
  }
  out += "  (:predicates\n";
  for (const auto& p : d.predicates) {
    out += "    (" + p.name;
    for (size_t i = 0; i < p.arity(); ++i)
      out += " ?a" + std::to_string(i) + " - " + render_categories(p.parameter_categories[i]);
    out += ")\n";
  }
  out += "  )\n";
  for (const auto& a : d.schemas) {
    out += "  (:action " + a.name + "\n    :parameters (";
    for (size_t i = 0; i < a.parameters.size(); ++i) {
      if (i) out += ' ';
      out += a.parameters[i].variable + " - " + render_categories(a.parameters[i].categories);
    }
    out += ")\n";
    if (a.repeatable) out += "    :repeatable\n";
    out += "    :effects " + render_literals(a.effects) + "\n";
    if (!a.blocking_conditions.empty()) {
      out += "    :blocked-when";
      for (const auto& c : a.blocking_conditions)
        out += "\n      (:condition " + c.name + " :trigger " + render_literals(c.trigger) +
               " :resolution " + render_literals(c.resolution) + ")";
      out += "\n";
    }
    out += "  )\n";
  }
  return out + ")\n";
}

std::string render_problem(const Problem& p) {
  std::string out = "(define (problem " + p.name + ")\n  (:domain " + p.domain_name +
                    ")\n  (:objects";
  for (const auto& i : p.instances) out += " " + i.id + " - " + i.category;
  out += ")\n  (:known";
  for (const auto& l : p.initial_known) out += "\n    " + render_literal(l);
  out += ")\n  (:goal";
  for (const auto& l : p.goal) out += "\n    " + render_literal(l);
  return out + "))\n";
}

std::string render_action(const GroundedAction& action) { return action.text(); }

GroundedAction parse_action(std::string_view text, const Domain& domain,
                            const InstanceTable& known) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.empty()) throw Error(ErrorCode::kUnknownSchema, "empty action string");
  const ActionSchema* schema = domain.schema(tokens[0]);
  if (!schema) throw Error(ErrorCode::kUnknownSchema, tokens[0]);
  if (tokens.size() - 1 != schema->parameters.size())
    throw Error(ErrorCode::kArityMismatch,
                tokens[0] + " takes " + std::to_string(schema->parameters.size()) +
                    " arguments");
  Bindings b;
  for (size_t i = 0; i < schema->parameters.size(); ++i)
    b[schema->parameters[i].variable] = tokens[i + 1];
  return ground(*schema, b, known);
}

Domain load_domain(const std::string& path) { return parse_domain(read_file(path)); }

Problem load_problem(const std::string& path, const Domain& domain) {
  return parse_problem(read_file(path), domain);
}

}  // namespace bcr::parser
