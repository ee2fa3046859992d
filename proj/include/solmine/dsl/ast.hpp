#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solmine::dsl {

enum class Type { boolean, set, element, integer };

std::string_view type_name(Type t);

enum class Op {
  // propositions
  And, Or, Implies, Not,
  Subseteq, EqSet, In, IsSubgroup, IsSoluble, IsNilpotent, IsAbelian,
  Divides, Lt, Le, Gt, Ge, EqI, NeI, EqEl,
  // set terms
  Group, SetVar, Sol, Centralizer, Normalizer, Center, Radical, Fitting, Frattini,
  Hypercenter, Derived, Intersect, Closure,
  // element terms
  ElemVar, Identity, Inv, Mul, Conj, Comm,
  // integer terms
  IntLit, Card, Order, NPrimes,
};

struct OpInfo {
  Op op;
  std::string_view keyword;  // empty for variables and literals
  Type result;
  std::vector<Type> args;
};

std::span<const OpInfo> op_table();
const OpInfo& info(Op op);
// Operator spelled `keyword` (case-insensitive), if any.
const OpInfo* find_op(std::string_view keyword);
bool is_reserved(std::string_view word);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::vector<NodePtr> args;
  std::string name;       // variables
  std::int64_t value = 0; // integer literals
  std::size_t pos = 0;    // byte offset in the source, 0 when synthesized

  Type type() const { return info(op).result; }
};

NodePtr make(Op op, std::vector<NodePtr> args = {});
NodePtr make_var(Type t, std::string name);
NodePtr make_int(std::int64_t v);

// Structural equality; source positions are ignored.
bool same(const Node& a, const Node& b);

enum class Quant { forall, exists };

// `forall x in S` binds an element of S; `forall H in subgroups(S)` binds a
// subgroup of G contained in S.
enum class RangeKind { elements, subgroups };

struct Quantifier {
  Quant quant;
  std::string var;
  RangeKind kind = RangeKind::elements;
  NodePtr range;
};

enum class Domain { catalog, nonsolvable };

struct Conjecture {
  Domain domain = Domain::catalog;
  std::uint64_t max_order = 0;  // only for Domain::nonsolvable
  std::vector<Quantifier> prefix;
  NodePtr body;
};

bool same(const Conjecture& a, const Conjecture& b);

// Canonical text: prefix call forms, lowercase keywords, single spaces.
std::string render(const Node& n);
std::string render(const Conjecture& c);

// Every node of the tree, parents before children.
void walk(const NodePtr& n, const std::function<void(const NodePtr&)>& f);

}  // namespace solmine::dsl
