#include "solmine/dsl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "solmine/dsl/lexer.hpp"

namespace solmine::dsl {

namespace {

constexpr std::size_t kMaxDepth = 256;

bool ieq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

std::string quoted(std::string_view s) { return "`" + std::string(s) + "`"; }

// Untyped syntax tree; typing happens in a second pass so that type errors
// can name the offending subterm.
struct Term {
  std::size_t pos = 0;
  bool is_int = false;
  std::int64_t value = 0;
  std::string head;
  bool call = false;  // written with parentheses
  std::vector<Term> args;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(lex(src)) {}

  Conjecture conjecture() {
    Conjecture c;
    keyword("forall");
    const Token& g = peek();
    if (g.kind != Tok::Ident || g.text != "G") fail_expected({"`G`"});
    next();
    keyword("in");
    domain(c);
    expect(Tok::Colon, "`:`");

    while (is_kw(peek(), "forall") || is_kw(peek(), "exists")) c.prefix.push_back(quantifier());

    if (peek().kind == Tok::End) fail_expected({"a proposition", "`forall`", "`exists`"});
    Term body = expr(0);
    if (peek().kind != Tok::End) {
      if (is_kw(peek(), "forall") || is_kw(peek(), "exists"))
        syntax(peek().pos, "quantifiers must all precede the proposition", {});
      fail_expected({"`and`", "`or`", "`implies`", "end of input"});
    }
    c.body = typed(body, Type::boolean);
    return c;
  }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::map<std::string, Type> scope_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(at_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(at_++, toks_.size() - 1)]; }

  static bool is_kw(const Token& t, std::string_view kw) {
    return t.kind == Tok::Ident && ieq(t.text, kw);
  }

  [[noreturn]] void syntax(std::size_t pos, std::string msg, std::vector<std::string> expected) {
    throw DslError(at(ErrorCode::E_SYNTAX, src_, pos, std::move(msg), std::move(expected)));
  }
  [[noreturn]] void type_error(std::size_t pos, std::string msg) {
    throw DslError(at(ErrorCode::E_TYPE, src_, pos, std::move(msg)));
  }
  [[noreturn]] void fail_expected(std::vector<std::string> expected) {
    syntax(peek().pos, "unexpected " + describe(peek()), std::move(expected));
  }

  void keyword(std::string_view kw) {
    if (!is_kw(peek(), kw)) fail_expected({quoted(kw)});
    next();
  }
  const Token& expect(Tok kind, std::string what) {
    if (peek().kind != kind) fail_expected({std::move(what)});
    return next();
  }

  void domain(Conjecture& c) {
    if (is_kw(peek(), "catalog")) {
      next();
      c.domain = Domain::catalog;
      return;
    }
    if (!is_kw(peek(), "nonsolvable")) fail_expected({"`catalog`", "`nonsolvable`"});
    next();
    c.domain = Domain::nonsolvable;
    expect(Tok::LParen, "`(`");
    keyword("maxorder");
    expect(Tok::Equals, "`=`");
    const Token& n = expect(Tok::Int, "an integer");
    if (n.value <= 0) syntax(n.pos, "maxorder must be positive", {});
    c.max_order = static_cast<std::uint64_t>(n.value);
    expect(Tok::RParen, "`)`");
  }

  Quantifier quantifier() {
    Quantifier q;
    q.quant = is_kw(next(), "forall") ? Quant::forall : Quant::exists;
    const Token& v = peek();
    if (v.kind != Tok::Ident) fail_expected({"a variable name"});
    if (v.text == "G" || is_reserved(v.text))
      syntax(v.pos, quoted(v.text) + " is reserved and cannot name a variable", {"a variable name"});
    if (scope_.count(v.text)) type_error(v.pos, "variable " + quoted(v.text) + " is already bound");
    q.var = v.text;
    next();
    keyword("in");
    if (is_kw(peek(), "subgroups") && peek(1).kind == Tok::LParen) {
      next();
      next();
      q.kind = RangeKind::subgroups;
      q.range = typed(expr(0), Type::set);
      expect(Tok::RParen, "`)`");
    } else {
      q.kind = RangeKind::elements;
      q.range = typed(expr(0), Type::set);
    }
    expect(Tok::Colon, "`:`");
    scope_[q.var] = q.kind == RangeKind::subgroups ? Type::set : Type::element;
    return q;
  }

  // ---- untyped terms with infix propositional connectives ----

  Term infix(std::string op, std::size_t pos, Term a, Term b) {
    Term t;
    t.pos = pos;
    t.head = std::move(op);
    t.call = true;
    t.args.push_back(std::move(a));
    t.args.push_back(std::move(b));
    return t;
  }

  Term expr(std::size_t depth) {
    if (depth > kMaxDepth) syntax(peek().pos, "expression nested too deeply", {});
    Term lhs = disjunction(depth);
    if (is_kw(peek(), "implies")) {
      std::size_t pos = next().pos;
      Term rhs = expr(depth + 1);
      return infix("implies", pos, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Term disjunction(std::size_t depth) {
    Term lhs = conjunction(depth);
    while (is_kw(peek(), "or")) {
      std::size_t pos = next().pos;
      lhs = infix("or", pos, std::move(lhs), conjunction(depth));
    }
    return lhs;
  }

  Term conjunction(std::size_t depth) {
    Term lhs = unary(depth);
    while (is_kw(peek(), "and")) {
      std::size_t pos = next().pos;
      lhs = infix("and", pos, std::move(lhs), unary(depth));
    }
    return lhs;
  }

  Term unary(std::size_t depth) {
    if (depth > kMaxDepth) syntax(peek().pos, "expression nested too deeply", {});
    if (is_kw(peek(), "not") && peek(1).kind != Tok::LParen) {
      Term t;
      t.pos = next().pos;
      t.head = "not";
      t.call = true;
      t.args.push_back(unary(depth + 1));
      return t;
    }
    return primary(depth);
  }

  Term primary(std::size_t depth) {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Term inner = expr(depth + 1);
      expect(Tok::RParen, "`)`");
      return inner;
    }
    if (t.kind == Tok::Int) {
      Term lit;
      lit.pos = t.pos;
      lit.is_int = true;
      lit.value = t.value;
      next();
      return lit;
    }
    if (t.kind != Tok::Ident) fail_expected({"a term"});
    if (is_kw(t, "forall") || is_kw(t, "exists"))
      syntax(t.pos, "quantifiers must all precede the proposition", {});

    Term out;
    out.pos = t.pos;
    out.head = t.text;
    next();
    if (peek().kind == Tok::LParen) {
      next();
      out.call = true;
      if (peek().kind != Tok::RParen) {
        out.args.push_back(expr(depth + 1));
        while (peek().kind == Tok::Comma) {
          next();
          out.args.push_back(expr(depth + 1));
        }
      }
      if (peek().kind != Tok::RParen) fail_expected({"`)`", "`,`"});
      next();
    }
    return out;
  }

  // ---- typing ----

  std::string shown(const Term& t) const {
    // Source text of the subterm, clipped, for messages.
    std::size_t end = t.pos;
    int depth = 0;
    while (end < src_.size()) {
      char c = src_[end];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        if (--depth == 0) {
          ++end;
          break;
        }
      }
      if (depth == 0 && (c == ',' || c == ':')) break;
      ++end;
    }
    std::string s(src_.substr(t.pos, end - t.pos));
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() > 40) s = s.substr(0, 37) + "...";
    return quoted(s);
  }

  NodePtr located(NodePtr n, std::size_t pos) {
    auto m = std::make_shared<Node>(*n);
    m->pos = pos;
    return m;
  }

  NodePtr typed(const Term& t, Type want) {
    NodePtr n = build(t);
    if (n->type() != want) {
      type_error(t.pos, "expected a " + std::string(type_name(want)) + " but " + shown(t) + " is a " +
                            std::string(type_name(n->type())));
    }
    return n;
  }

  NodePtr build(const Term& t) {
    if (t.is_int) return located(make_int(t.value), t.pos);

    if (!t.call) {
      if (auto it = scope_.find(t.head); it != scope_.end())
        return located(make_var(it->second, t.head), t.pos);
    }
    const OpInfo* op = find_op(t.head);
    if (!op) {
      if (t.call) syntax(t.pos, "unknown operator " + quoted(t.head), {});
      if (is_reserved(t.head)) syntax(t.pos, "unexpected keyword " + quoted(t.head), {"a term"});
      type_error(t.pos, "unbound variable " + quoted(t.head));
    }
    if (!op->args.empty() && !t.call)
      type_error(t.pos, quoted(op->keyword) + " takes " + std::to_string(op->args.size()) +
                            " argument" + (op->args.size() == 1 ? "" : "s"));
    if (t.args.size() != op->args.size())
      type_error(t.pos, quoted(op->keyword) + " takes " + std::to_string(op->args.size()) +
                            " argument" + (op->args.size() == 1 ? "" : "s") + ", got " +
                            std::to_string(t.args.size()));
    std::vector<NodePtr> args;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      NodePtr a = build(t.args[i]);
      if (a->type() != op->args[i]) {
        type_error(t.args[i].pos, "argument " + std::to_string(i + 1) + " of " +
                                      quoted(op->keyword) + " must be a " +
                                      std::string(type_name(op->args[i])) + ", but " +
                                      shown(t.args[i]) + " is a " +
                                      std::string(type_name(a->type())));
      }
      args.push_back(std::move(a));
    }
    return located(make(op->op, std::move(args)), t.pos);
  }
};

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult r;
  try {
    Parser p(text);
    r.ast = p.conjecture();
  } catch (const DslError& e) {
    r.error = e.diagnostic();
  }
  return r;
}

Conjecture parse_or_throw(std::string_view text) {
  auto r = parse(text);
  if (!r) throw DslError(*r.error);
  return std::move(*r.ast);
}

}  // namespace solmine::dsl
