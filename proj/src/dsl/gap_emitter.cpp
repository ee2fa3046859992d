#include "solmine/dsl/gap_emitter.hpp"

#include <iterator>

#include "solmine/dsl/diagnostic.hpp"

namespace solmine::dsl {

namespace {

const char* kSolubilizer = R"(solubilizer := function(G, max, x)
    local rad, M, maxes, solx, m, MM;
    rad := RadicalGroup(G);
    if x in rad then
        return G;
    else
        M := List(max);
        M := Set(Filtered(M, m -> x in m));
        maxes := [];
        solx := [];
        while Size(M) > 0 do
            m := M[1];
            if IsSolvable(m) then
                solx := Union(solx, List(m));
                maxes := Union(maxes, [m]);
                Remove(M, 1);
            else
                MM := MaximalSubgroups(m);
                MM := Set(Filtered(MM, mm -> x in mm));
                Append(M, MM);
                Remove(M, 1);
                M := Set(M);
            fi;
        od;
        return solx;
    fi;
end;
)";

const char* kHypercenter = R"(# Upper central series, one element-wise step at a time.
SolHypercenter := function(G)
    local Z, N;
    Z := TrivialSubgroup(G);
    repeat
        N := Z;
        Z := Subgroup(G, Filtered(AsList(G),
                 g -> ForAll(GeneratorsOfGroup(G), s -> Comm(g, s) in N)));
    until Size(Z) = Size(N);
    return Z;
end;
)";

struct Helper {
  const char* name;
  const char* text;
};

// Included only when the check (or another included helper) mentions them.
const Helper kHelpers[] = {
    {"SolDivides", R"(SolDivides := function(a, b)
    if a = 0 then return b = 0; fi;
    return b mod a = 0;
end;
)"},
    {"SolNPrimes", R"(SolNPrimes := function(n)
    if n = 0 then return 0; fi;
    return Length(PrimeDivisors(AbsInt(n)));
end;
)"},
    {"SolIsSubgroup", R"(SolIsSubgroup := function(S)
    return Length(S) > 0 and ForAll(S, a -> ForAll(S, b -> a * b^-1 in S));
end;
)"},
    {"SolCommutes", R"(SolCommutes := function(S)
    return ForAll(S, a -> ForAll(S, b -> a * b = b * a));
end;
)"},
    {"SolSpan", R"(SolSpan := function(G, S)
    if Length(S) = 0 then return TrivialSubgroup(G); fi;
    return Subgroup(G, S);
end;
)"},
    {"SolDerived", R"(SolDerived := function(G, S)
    return AsSet(SolSpan(G, ListX(S, S, Comm)));
end;
)"},
    {"SolAllSubgroups", R"(SolAllSubgroups := function(G)
    return Set(Concatenation(List(ConjugacyClassesSubgroups(G), AsList)), AsSet);
end;
)"},
};

struct Emitter {
  bool uses_sol = false, uses_hyper = false;

  std::string set(const Node& n) {
    const auto& a = n.args;
    switch (n.op) {
      case Op::Group: return "elts";
      case Op::SetVar: return "v_" + n.name;
      case Op::Sol: uses_sol = true; return "AsSet(solubilizer(G, maxes, " + el(*a[0]) + "))";
      case Op::Centralizer: return "AsSet(Centralizer(G, " + el(*a[0]) + "))";
      case Op::Normalizer: {
        std::string s = set(*a[0]);
        return "Filtered(elts, nc -> ForAll(" + s + ", ns -> ns^nc in " + s + "))";
      }
      case Op::Center: return "AsSet(Centre(G))";
      case Op::Radical: return "AsSet(RadicalGroup(G))";
      case Op::Fitting: return "AsSet(FittingSubgroup(G))";
      case Op::Frattini: return "AsSet(FrattiniSubgroup(SolSpan(G, " + set(*a[0]) + ")))";
      case Op::Hypercenter: uses_hyper = true; return "AsSet(SolHypercenter(G))";
      case Op::Derived: return "SolDerived(G, " + set(*a[0]) + ")";
      case Op::Intersect: return "Intersection(" + set(*a[0]) + ", " + set(*a[1]) + ")";
      case Op::Closure: return "AsSet(SolSpan(G, " + set(*a[0]) + "))";
      default: return "fail";
    }
  }

  std::string el(const Node& n) {
    const auto& a = n.args;
    switch (n.op) {
      case Op::ElemVar: return "v_" + n.name;
      case Op::Identity: return "One(G)";
      case Op::Inv: return "(" + el(*a[0]) + ")^-1";
      case Op::Mul: return "(" + el(*a[0]) + " * " + el(*a[1]) + ")";
      case Op::Conj: return "(" + el(*a[0]) + ")^(" + el(*a[1]) + ")";
      case Op::Comm: return "Comm(" + el(*a[0]) + ", " + el(*a[1]) + ")";
      default: return "fail";
    }
  }

  std::string num(const Node& n) {
    const auto& a = n.args;
    switch (n.op) {
      case Op::IntLit: return std::to_string(n.value);
      case Op::Card: return "Length(" + set(*a[0]) + ")";
      case Op::Order: return "Order(" + el(*a[0]) + ")";
      case Op::NPrimes: return "SolNPrimes(" + num(*a[0]) + ")";
      default: return "fail";
    }
  }

  std::string prop(const Node& n) {
    const auto& a = n.args;
    auto bin = [&](const char* op) { return "(" + num(*a[0]) + " " + op + " " + num(*a[1]) + ")"; };
    switch (n.op) {
      case Op::And: return "(" + prop(*a[0]) + " and " + prop(*a[1]) + ")";
      case Op::Or: return "(" + prop(*a[0]) + " or " + prop(*a[1]) + ")";
      case Op::Implies: return "(not " + prop(*a[0]) + " or " + prop(*a[1]) + ")";
      case Op::Not: return "(not " + prop(*a[0]) + ")";
      case Op::Subseteq: return "IsSubset(" + set(*a[1]) + ", " + set(*a[0]) + ")";
      case Op::EqSet: return "(" + set(*a[0]) + " = " + set(*a[1]) + ")";
      case Op::In: return "(" + el(*a[0]) + " in " + set(*a[1]) + ")";
      case Op::IsSubgroup: return "SolIsSubgroup(" + set(*a[0]) + ")";
      case Op::IsSoluble: return "IsSolvableGroup(SolSpan(G, " + set(*a[0]) + "))";
      case Op::IsNilpotent: return "IsNilpotentGroup(SolSpan(G, " + set(*a[0]) + "))";
      case Op::IsAbelian: return "SolCommutes(" + set(*a[0]) + ")";
      case Op::Divides: return "SolDivides(" + num(*a[0]) + ", " + num(*a[1]) + ")";
      case Op::Lt: return bin("<");
      case Op::Le: return bin("<=");
      case Op::Gt: return bin(">");
      case Op::Ge: return bin(">=");
      case Op::EqI: return bin("=");
      case Op::NeI: return bin("<>");
      case Op::EqEl: return "(" + el(*a[0]) + " = " + el(*a[1]) + ")";
      default: return "fail";
    }
  }

  std::string formula(const Conjecture& c, std::size_t level) {
    if (level == c.prefix.size()) return prop(*c.body);
    const auto& q = c.prefix[level];
    std::string range = set(*q.range);
    if (q.kind == RangeKind::subgroups) {
      range = "Filtered(SolAllSubgroups(G), nH -> IsSubset(" + range + ", nH))";
    }
    std::string fn = q.quant == Quant::forall ? "ForAll" : "ForAny";
    return fn + "(" + range + ", v_" + q.var + " -> " + formula(c, level + 1) + ")";
  }
};

}  // namespace

std::string emit_gap_script(const Conjecture& c, std::span<const CatalogEntry> catalog) {
  if (c.domain == Domain::nonsolvable && c.max_order > kGapSmallGroupsLimit) {
    throw DslError(at(ErrorCode::E_UNSUPPORTED_EMIT, "", 0,
                      "nonsolvable(maxorder=" + std::to_string(c.max_order) +
                          ") exceeds the GAP small-groups library (orders up to " +
                          std::to_string(kGapSmallGroupsLimit) + ")"));
  }

  Emitter em;
  const std::string check = em.formula(c, 0);

  std::string out;
  out += "# Conjecture: " + render(c) + "\n";
  out += "# Emitted for cross-checking in GAP; prints the first failing group.\n\n";
  if (em.uses_sol) out += std::string(kSolubilizer) + "\n";
  if (em.uses_hyper) out += std::string(kHypercenter) + "\n";
  std::string needed = check;
  for (auto it = std::rbegin(kHelpers); it != std::rend(kHelpers); ++it)
    if (needed.find(it->name) != std::string::npos) needed += it->text;
  for (const auto& h : kHelpers)
    if (needed.find(std::string(h.name) + "(") != std::string::npos) out += std::string(h.text) + "\n";

  out += "CheckConjecture := function()\n";
  out += "    local G, groups, elts, maxes, n;\n\n";
  std::string indent = "    ";
  if (c.domain == Domain::catalog) {
    out += "    groups := [\n";
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto& e = catalog[i];
      out += "        Group([ ";
      for (std::size_t k = 0; k < e.generators.size(); ++k)
        out += (k ? ", " : "") + e.generators[k];
      out += " ])";
      out += i + 1 < catalog.size() ? ",\n" : "\n";
    }
    out += "    ];\n";
    out += "    for G in groups do\n";
  } else {
    out += "    for n in [1 .. " + std::to_string(c.max_order) + "] do\n";
    out += "    if n = 1024 then continue; fi;\n";
    out += "    for G in AllSmallGroups(n) do\n";
    out += "        if IsSolvableGroup(G) then continue; fi;\n";
  }
  out += indent + "    elts := AsSet(G);\n";
  if (em.uses_sol) out += indent + "    maxes := MaximalSubgroups(G);\n";
  out += indent + "    if not " + check + " then\n";
  out += indent + "        Print(\"Conjecture failed for group: \", StructureDescription(G), \"\\n\");\n";
  out += indent + "        return;\n";
  out += indent + "    fi;\n";
  out += "    od;\n";
  if (c.domain == Domain::nonsolvable) out += "    od;\n";
  out += "    Print(\"No Counter-examples!\\n\");\nend;\nCheckConjecture();\n";
  return out;
}

}  // namespace solmine::dsl
