#include "solmine/dsl/ast.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace solmine::dsl {

namespace {

using T = Type;

const std::vector<OpInfo>& table() {
  static const std::vector<OpInfo> ops = {
      {Op::And, "and", T::boolean, {T::boolean, T::boolean}},
      {Op::Or, "or", T::boolean, {T::boolean, T::boolean}},
      {Op::Implies, "implies", T::boolean, {T::boolean, T::boolean}},
      {Op::Not, "not", T::boolean, {T::boolean}},
      {Op::Subseteq, "subseteq", T::boolean, {T::set, T::set}},
      {Op::EqSet, "eq", T::boolean, {T::set, T::set}},
      {Op::In, "in", T::boolean, {T::element, T::set}},
      {Op::IsSubgroup, "issubgroup", T::boolean, {T::set}},
      {Op::IsSoluble, "issoluble", T::boolean, {T::set}},
      {Op::IsNilpotent, "isnilpotent", T::boolean, {T::set}},
      {Op::IsAbelian, "isabelian", T::boolean, {T::set}},
      {Op::Divides, "divides", T::boolean, {T::integer, T::integer}},
      {Op::Lt, "lt", T::boolean, {T::integer, T::integer}},
      {Op::Le, "le", T::boolean, {T::integer, T::integer}},
      {Op::Gt, "gt", T::boolean, {T::integer, T::integer}},
      {Op::Ge, "ge", T::boolean, {T::integer, T::integer}},
      {Op::EqI, "eqi", T::boolean, {T::integer, T::integer}},
      {Op::NeI, "nei", T::boolean, {T::integer, T::integer}},
      {Op::EqEl, "eqel", T::boolean, {T::element, T::element}},
      {Op::Group, "G", T::set, {}},
      {Op::SetVar, "", T::set, {}},
      {Op::Sol, "sol", T::set, {T::element}},
      {Op::Centralizer, "centralizer", T::set, {T::element}},
      {Op::Normalizer, "normalizer", T::set, {T::set}},
      {Op::Center, "center", T::set, {}},
      {Op::Radical, "radical", T::set, {}},
      {Op::Fitting, "fitting", T::set, {}},
      {Op::Frattini, "frattini", T::set, {T::set}},
      {Op::Hypercenter, "hypercenter", T::set, {}},
      {Op::Derived, "derived", T::set, {T::set}},
      {Op::Intersect, "intersect", T::set, {T::set, T::set}},
      {Op::Closure, "closure", T::set, {T::set}},
      {Op::ElemVar, "", T::element, {}},
      {Op::Identity, "identity", T::element, {}},
      {Op::Inv, "inv", T::element, {T::element}},
      {Op::Mul, "mul", T::element, {T::element, T::element}},
      {Op::Conj, "conj", T::element, {T::element, T::element}},
      {Op::Comm, "comm", T::element, {T::element, T::element}},
      {Op::IntLit, "", T::integer, {}},
      {Op::Card, "card", T::integer, {T::set}},
      {Op::Order, "order", T::integer, {T::element}},
      {Op::NPrimes, "nprimes", T::integer, {T::integer}},
  };
  return ops;
}

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view type_name(Type t) {
  switch (t) {
    case Type::boolean: return "proposition";
    case Type::set: return "set";
    case Type::element: return "element";
    case Type::integer: return "integer";
  }
  return "?";
}

std::span<const OpInfo> op_table() { return table(); }

const OpInfo& info(Op op) {
  const auto& t = table();
  auto i = static_cast<std::size_t>(op);
  if (i < t.size() && t[i].op == op) return t[i];
  throw std::logic_error("operator table out of order");
}

const OpInfo* find_op(std::string_view keyword) {
  // `G` is the one case-sensitive symbol: lowercase g is an ordinary variable.
  if (keyword == "G") return &info(Op::Group);
  for (const auto& o : table())
    if (!o.keyword.empty() && o.op != Op::Group && iequal(o.keyword, keyword)) return &o;
  return nullptr;
}

bool is_reserved(std::string_view word) {
  static const char* extra[] = {"forall", "exists", "catalog", "nonsolvable", "maxorder", "subgroups"};
  if (find_op(word)) return true;
  for (const char* e : extra)
    if (iequal(e, word)) return true;
  return false;
}

NodePtr make(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

NodePtr make_var(Type t, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = t == Type::set ? Op::SetVar : Op::ElemVar;
  n->name = std::move(name);
  return n;
}

NodePtr make_int(std::int64_t v) {
  auto n = std::make_shared<Node>();
  n->op = Op::IntLit;
  n->value = v;
  return n;
}

bool same(const Node& a, const Node& b) {
  if (a.op != b.op || a.name != b.name || a.value != b.value || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(*a.args[i], *b.args[i])) return false;
  return true;
}

bool same(const Conjecture& a, const Conjecture& b) {
  if (a.domain != b.domain || a.max_order != b.max_order || a.prefix.size() != b.prefix.size())
    return false;
  for (std::size_t i = 0; i < a.prefix.size(); ++i) {
    const auto &p = a.prefix[i], &q = b.prefix[i];
    if (p.quant != q.quant || p.var != q.var || p.kind != q.kind || !same(*p.range, *q.range))
      return false;
  }
  return same(*a.body, *b.body);
}

std::string render(const Node& n) {
  switch (n.op) {
    case Op::SetVar:
    case Op::ElemVar: return n.name;
    case Op::IntLit: return std::to_string(n.value);
    default: break;
  }
  const auto& i = info(n.op);
  std::string out(i.keyword);
  if (i.args.empty()) return out;
  out += '(';
  for (std::size_t k = 0; k < n.args.size(); ++k) {
    if (k) out += ", ";
    out += render(*n.args[k]);
  }
  out += ')';
  return out;
}

std::string render(const Conjecture& c) {
  std::string out = "forall G in ";
  if (c.domain == Domain::catalog)
    out += "catalog";
  else
    out += "nonsolvable(maxorder=" + std::to_string(c.max_order) + ")";
  out += ": ";
  for (const auto& q : c.prefix) {
    out += q.quant == Quant::forall ? "forall " : "exists ";
    out += q.var + " in ";
    if (q.kind == RangeKind::subgroups)
      out += "subgroups(" + render(*q.range) + ")";
    else
      out += render(*q.range);
    out += ": ";
  }
  out += render(*c.body);
  return out;
}

void walk(const NodePtr& n, const std::function<void(const NodePtr&)>& f) {
  f(n);
  for (const auto& a : n->args) walk(a, f);
}

}  // namespace solmine::dsl
