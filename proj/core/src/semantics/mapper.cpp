#include "cnlwiki/semantics/mapper.hpp"

#include "cnlwiki/ace/ace.hpp"

namespace cnlwiki::semantics {

namespace {

using grammar::AbstractTree;

const AbstractTree& arg(const AbstractTree& t, std::size_t i) { return t.children().at(i); }

std::string lexical(const AbstractTree& t) {
  if (t.arity() != 0) throw Unsupported("expected a lexical constant, found " + t.str());
  return ace::entityName(t.fun());
}

ClassExpr vpClass(const AbstractTree& vp);

ClassExpr cnClass(const AbstractTree& cn) {
  if (cn.fun() == "useN") return ClassExpr::named(lexical(arg(cn, 0)));
  if (cn.fun() == "relCN") {
    const auto& rel = arg(cn, 1);
    if (rel.fun() != "thatVP_Rel") throw Unsupported("unknown relative clause " + rel.fun());
    return ClassExpr::intersection(cnClass(arg(cn, 0)), vpClass(arg(rel, 0)));
  }
  throw Unsupported("unknown noun construction " + cn.fun());
}

// Restriction on the subject imposed by `role` towards an object NP.
ClassExpr objectClass(const RoleExpr& role, const AbstractTree& np) {
  if (np.fun() == "pnNP") return ClassExpr::hasValue(role, lexical(arg(np, 0)));
  if (np.fun() == "aNP") return ClassExpr::exists(role, cnClass(arg(np, 0)));
  if (np.fun() == "termNP") throw Unsupported("variable outside an if-then rule");
  throw Unsupported("quantified noun phrase '" + np.fun() + "' in object position");
}

ClassExpr vpClass(const AbstractTree& vp) {
  if (vp.fun() == "isaVP") return cnClass(arg(vp, 0));
  if (vp.fun() == "v2VP") return objectClass({lexical(arg(vp, 0)), false}, arg(vp, 1));
  if (vp.fun() == "v2_byVP") return objectClass({lexical(arg(vp, 0)), true}, arg(vp, 1));
  throw Unsupported("unknown verb phrase " + vp.fun());
}

// A clause relating two variables: role(from, to).
struct VarAtom {
  bool negated;
  std::string role;
  std::string from;
  std::string to;
};

std::optional<std::string> variable(const AbstractTree& np) {
  if (np.fun() != "termNP") return std::nullopt;
  return arg(np, 0).fun();
}

std::optional<VarAtom> varAtom(const AbstractTree& s) {
  if (s.fun() != "vpS" && s.fun() != "neg_vpS") return std::nullopt;
  auto subj = variable(arg(s, 0));
  const auto& vp = arg(s, 1);
  if (!subj || (vp.fun() != "v2VP" && vp.fun() != "v2_byVP")) return std::nullopt;
  auto obj = variable(arg(vp, 1));
  if (!obj) return std::nullopt;
  VarAtom a{s.fun() == "neg_vpS", lexical(arg(vp, 0)), *subj, *obj};
  if (vp.fun() == "v2_byVP") std::swap(a.from, a.to);
  return a;
}

Axiom ifThen(const AbstractTree& s) {
  auto cond = varAtom(arg(s, 0));
  auto cons = varAtom(arg(s, 1));
  if (!cond || !cons || cond->negated || cond->from == cond->to || cond->role != cons->role ||
      cons->from != cond->to || cons->to != cond->from) {
    throw Unsupported("if-then sentence outside the symmetry/asymmetry patterns");
  }
  return cons->negated ? Axiom::asymmetric(cond->role) : Axiom::symmetric(cond->role);
}

}  // namespace

Axiom treeToAxiom(const AbstractTree& s) {
  if (s.fun() == "if_thenS") return ifThen(s);
  if (s.fun() != "vpS" && s.fun() != "neg_vpS") throw Unsupported("not a declarative sentence: " + s.fun());
  bool negated = s.fun() == "neg_vpS";
  const auto& np = arg(s, 0);
  const auto& vp = arg(s, 1);
  if (np.fun() == "everyNP") {
    ClassExpr f = vpClass(vp);
    return Axiom::subClassOf(cnClass(arg(np, 0)), negated ? ClassExpr::complement(f) : f);
  }
  if (np.fun() == "noNP") {
    if (negated) throw Unsupported("negated sentence with a 'no' subject");
    return Axiom::subClassOf(cnClass(arg(np, 0)), ClassExpr::complement(vpClass(vp)));
  }
  if (np.fun() == "pnNP") {
    std::string p = lexical(arg(np, 0));
    if (vp.fun() == "v2VP" && arg(vp, 1).fun() == "pnNP") {
      std::string r = lexical(arg(vp, 0));
      std::string q = lexical(arg(arg(vp, 1), 0));
      return negated ? Axiom::negRoleAssertion(r, p, q) : Axiom::roleAssertion(r, p, q);
    }
    ClassExpr f = vpClass(vp);
    return Axiom::classAssertion(negated ? ClassExpr::complement(f) : f, p);
  }
  if (np.fun() == "termNP") throw Unsupported("variable outside an if-then rule");
  throw Unsupported("indefinite subject '" + np.fun() + "'");
}

ClassExpr treeToQuery(const AbstractTree& q) {
  if (q.fun() == "whoQ") return vpClass(arg(q, 0));
  if (q.fun() == "whichQ") return ClassExpr::intersection(cnClass(arg(q, 0)), vpClass(arg(q, 1)));
  throw Unsupported("not a question: " + q.fun());
}

EntrySemantics entrySemantics(const std::vector<AbstractTree>& trees) {
  std::optional<Axiom> first;
  bool differ = false;
  for (const auto& t : trees) {
    Axiom a = Axiom::asymmetric("");
    try {
      a = treeToAxiom(t);
    } catch (const Unsupported& e) {
      return {EntrySemantics::Kind::Unsupported, std::nullopt, e.what()};
    }
    if (!first) first = a;
    else if (!(*first == a)) differ = true;
  }
  if (!first) return {EntrySemantics::Kind::Unsupported, std::nullopt, "no trees"};
  if (differ) return {EntrySemantics::Kind::Excluded, std::nullopt, "readings map to different axioms"};
  return {EntrySemantics::Kind::Included, first, {}};
}

std::string lexicalFunction(const std::string& entity, const std::string& wordClass) {
  return entity + "_" + wordClass;
}

namespace {

AbstractTree leaf(const std::string& entity, const std::string& wordClass) {
  return AbstractTree(lexicalFunction(entity, wordClass));
}

AbstractTree vpTree(const ClassExpr& c);

AbstractTree cnTree(const ClassExpr& c) {
  if (c.kind() == ClassExpr::Kind::Named) return AbstractTree("useN", {leaf(c.name(), "N")});
  if (c.kind() == ClassExpr::Kind::Intersection) {
    return AbstractTree("relCN", {cnTree(c.operand(0)), AbstractTree("thatVP_Rel", {vpTree(c.operand(1))})});
  }
  throw NotVerbalizable("no noun phrase for " + c.str());
}

AbstractTree verb(const RoleExpr& r, AbstractTree object) {
  return AbstractTree(r.inverse ? "v2_byVP" : "v2VP", {leaf(r.name, "V2"), std::move(object)});
}

AbstractTree vpTree(const ClassExpr& c) {
  switch (c.kind()) {
    case ClassExpr::Kind::Named:
    case ClassExpr::Kind::Intersection:
      return AbstractTree("isaVP", {cnTree(c)});
    case ClassExpr::Kind::Exists:
      return verb(c.role(), AbstractTree("aNP", {cnTree(c.operand())}));
    case ClassExpr::Kind::HasValue:
      return verb(c.role(), AbstractTree("pnNP", {leaf(c.name(), "PN")}));
    case ClassExpr::Kind::Complement:
      break;
  }
  throw NotVerbalizable("no verb phrase for " + c.str());
}

AbstractTree clause(const char* fun, AbstractTree subj, AbstractTree vp) {
  return AbstractTree(fun, {std::move(subj), std::move(vp)});
}

AbstractTree var(const char* v) { return AbstractTree("termNP", {AbstractTree(v)}); }

}  // namespace

AbstractTree axiomToTree(const Axiom& a) {
  auto pn = [](const std::string& i) { return AbstractTree("pnNP", {leaf(i, "PN")}); };
  switch (a.kind) {
    case Axiom::Kind::SubClassOf: {
      AbstractTree subj("everyNP", {cnTree(a.classes[0])});
      const ClassExpr& sup = a.classes[1];
      if (sup.kind() == ClassExpr::Kind::Complement) return clause("neg_vpS", subj, vpTree(sup.operand()));
      return clause("vpS", subj, vpTree(sup));
    }
    case Axiom::Kind::ClassAssertion: {
      const ClassExpr& c = a.classes[0];
      bool neg = c.kind() == ClassExpr::Kind::Complement;
      const ClassExpr& body = neg ? c.operand() : c;
      if (body.kind() == ClassExpr::Kind::HasValue && !body.role().inverse) {
        throw NotVerbalizable(a.str() + " reads back as a role assertion");
      }
      return clause(neg ? "neg_vpS" : "vpS", pn(a.individuals[0]), vpTree(body));
    }
    case Axiom::Kind::RoleAssertion:
    case Axiom::Kind::NegRoleAssertion:
      return clause(a.kind == Axiom::Kind::RoleAssertion ? "vpS" : "neg_vpS", pn(a.individuals[0]),
                    verb({a.role, false}, pn(a.individuals[1])));
    case Axiom::Kind::Asymmetric:
    case Axiom::Kind::Symmetric: {
      AbstractTree cond = clause("vpS", var("X_Var"), verb({a.role, false}, var("Y_Var")));
      AbstractTree cons = clause(a.kind == Axiom::Kind::Asymmetric ? "neg_vpS" : "vpS", var("Y_Var"),
                                 verb({a.role, false}, var("X_Var")));
      return AbstractTree("if_thenS", {cond, cons});
    }
  }
  throw NotVerbalizable(a.str());
}

}  // namespace cnlwiki::semantics
