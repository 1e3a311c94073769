#include "chainlie/json_io.hpp"

#include "chainlie/errors.hpp"

namespace chainlie {

Json to_json(const Degree& d) { return Json(d.components); }

Degree degree_from_json(const Json& j) { return Degree(j.get<std::vector<int>>()); }

Json to_json(const Param& p) {
  return Json{{"word", p.word},
              {"kind", p.kind == ParamKind::holonomy ? "holonomy" : "generic"},
              {"component", p.component}};
}

Param param_from_json(const Json& j) {
  Param p;
  p.word = j.at("word").get<std::vector<std::string>>();
  p.kind = j.at("kind").get<std::string>() == "holonomy" ? ParamKind::holonomy : ParamKind::generic;
  p.component = j.at("component").get<int>();
  return p;
}

namespace {

Json params_json(const std::vector<Param>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(to_json(p));
  return a;
}

std::vector<Param> params_from(const Json& j) {
  std::vector<Param> out;
  for (const auto& p : j) out.push_back(param_from_json(p));
  return out;
}

Json side_json(const std::vector<RelTerm>& side) {
  Json a = Json::array();
  for (const auto& t : side) a.push_back(to_json(t));
  return a;
}

std::vector<RelTerm> side_from(const Json& j) {
  std::vector<RelTerm> out;
  for (const auto& t : j) out.push_back(relterm_from_json(t));
  return out;
}

}  // namespace

Json to_json(const GenSymbol& s) {
  return Json{{"name", s.name},
              {"degree", to_json(s.degree)},
              {"params", params_json(s.params)},
              {"pullbacks", params_json(s.pullbacks)},
              {"exterior_d", s.exterior_d}};
}

GenSymbol symbol_from_json(const Json& j) {
  return GenSymbol{j.at("name").get<std::string>(), degree_from_json(j.at("degree")), params_from(j.at("params")),
                   params_from(j.at("pullbacks")), j.at("exterior_d").get<bool>()};
}

Json to_json(const Factor& f) { return Json{{"symbol", to_json(f.base)}, {"delta", f.delta_applied}}; }

Factor factor_from_json(const Json& j) {
  return Factor{symbol_from_json(j.at("symbol")), j.at("delta").get<bool>()};
}

Json to_json(const LengthExpr& e) {
  Json c = Json::object();
  for (const auto& [k, v] : e.coeffs()) c[k] = v;
  return Json{{"constant", e.constant()}, {"coeffs", c}};
}

LengthExpr length_from_json(const Json& j) {
  LengthExpr e(j.at("constant").get<int>());
  for (const auto& [k, v] : j.at("coeffs").items()) e = e + LengthExpr::symbol(k, v.get<int>());
  return e;
}

Rational rational_from_string(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ValidationError("bad rational '" + s + "'");
  }
}

Json to_json(const RelTerm& t) {
  Json fs = Json::array();
  for (const auto& f : t.factors) fs.push_back(to_json(f));
  return Json{{"coeff", to_string(t.coeff)}, {"sign", to_json(t.sign)}, {"factors", fs}};
}

RelTerm relterm_from_json(const Json& j) {
  RelTerm t;
  t.coeff = rational_from_string(j.at("coeff").get<std::string>());
  t.sign = length_from_json(j.at("sign"));
  for (const auto& f : j.at("factors")) t.factors.push_back(factor_from_json(f));
  return t;
}

Json to_json(const RelationTree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    Json jn{{"path", n.path},
            {"role", to_string(n.role)},
            {"status", to_string(n.status)},
            {"relation", render(n.relation)},
            {"lhs", side_json(n.relation.lhs)},
            {"rhs", side_json(n.relation.rhs)}};
    if (!n.relation.empty() && n.status != NodeStatus::pruned) {
      Expr l = side_expr(n.relation.lhs), r = side_expr(n.relation.rhs);
      if (!l.is_zero()) jn["degree"] = to_json(degree_of(l, tree.spec));
      else if (!r.is_zero()) jn["degree"] = to_json(degree_of(r, tree.spec));
    }
    if (n.introduced) jn["introduced"] = to_json(*n.introduced);
    if (n.compat) {
      jn["compat"] = Json{{"kind", to_string(n.compat->kind)},
                          {"outer", to_json(n.compat->outer)},
                          {"inner", to_json(n.compat->inner)},
                          {"alpha", to_json(n.compat->alpha)},
                          {"overlap", to_json(n.compat->overlap.counts)}};
    }
    Json ws = Json::array();
    for (const auto& w : n.witnesses) ws.push_back(Json{{"alpha", to_json(w.alpha)}, {"overlap", to_json(w.overlap.counts)}});
    jn["witnesses"] = ws;
    if (!n.violated.empty()) jn["violated"] = n.violated;
    if (n.ortho_left) jn["ortho_left"] = to_json(*n.ortho_left);
    if (n.ortho_right) jn["ortho_right"] = to_json(*n.ortho_right);
    nodes.push_back(jn);
  }
  Json degs = Json::object();
  for (const auto& [name, d] : tree.symbolic_degrees) {
    Json a = Json::array();
    for (const auto& x : d) a.push_back(to_json(x));
    degs[name] = a;
  }
  Json marks = Json::array();
  for (const auto& m : tree.marks)
    marks.push_back(Json{{"dependent", m.dependent}, {"partner", m.partner}, {"identity", m.identity}});
  return Json{{"kind", "relation-tree"},
              {"spec", serialize_spec(tree.spec)},
              {"chi", to_json(tree.chi)},
              {"phi", to_json(tree.phi)},
              {"depth_cap", tree.depth_cap},
              {"nodes", nodes},
              {"symbolic_degrees", degs},
              {"bindings", Json(tree.bindings)},
              {"dependence_marked", tree.dependence_marked},
              {"marks", marks}};
}

RelationTree tree_from_json(const Json& j) {
  if (j.value("kind", "") != "relation-tree") throw ValidationError("not a relation-tree document");
  RelationTree t;
  t.spec = parse_spec(j.at("spec").get<std::string>());
  t.chi = symbol_from_json(j.at("chi"));
  t.phi = symbol_from_json(j.at("phi"));
  t.depth_cap = j.at("depth_cap").get<int>();
  for (const auto& jn : j.at("nodes")) {
    RelationNode n;
    n.path = jn.at("path").get<std::string>();
    n.role = node_role_from_string(jn.at("role").get<std::string>());
    n.status = node_status_from_string(jn.at("status").get<std::string>());
    n.relation.lhs = side_from(jn.at("lhs"));
    n.relation.rhs = side_from(jn.at("rhs"));
    if (jn.contains("introduced")) n.introduced = symbol_from_json(jn.at("introduced"));
    if (jn.contains("compat")) {
      const auto& c = jn.at("compat");
      n.compat = CompatRecord{compat_kind_from_string(c.at("kind").get<std::string>()), degree_from_json(c.at("outer")),
                              degree_from_json(c.at("inner")), degree_from_json(c.at("alpha")),
                              OverlapRecord{degree_from_json(c.at("overlap"))}};
    }
    for (const auto& w : jn.at("witnesses"))
      n.witnesses.push_back(Witness{degree_from_json(w.at("alpha")), OverlapRecord{degree_from_json(w.at("overlap"))}});
    n.violated = jn.value("violated", "");
    if (jn.contains("ortho_left")) n.ortho_left = factor_from_json(jn.at("ortho_left"));
    if (jn.contains("ortho_right")) n.ortho_right = symbol_from_json(jn.at("ortho_right"));
    t.nodes.push_back(std::move(n));
  }
  for (const auto& [name, arr] : j.at("symbolic_degrees").items()) {
    std::vector<LengthExpr> d;
    for (const auto& x : arr) d.push_back(length_from_json(x));
    t.symbolic_degrees[name] = d;
  }
  t.bindings = j.at("bindings").get<Bindings>();
  t.dependence_marked = j.at("dependence_marked").get<bool>();
  for (const auto& m : j.at("marks"))
    t.marks.push_back({m.at("dependent").get<std::string>(), m.at("partner").get<std::string>(),
                       m.at("identity").get<std::string>()});
  return t;
}


Json to_json(const LiePresentation& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators) gens.push_back(Json{{"name", g.name}, {"grade", g.grade}, {"arity", to_json(g.arity)}});
  Json brackets = Json::array();
  for (const auto& e : p.brackets)
    brackets.push_back(Json{{"a", e.a},
                            {"b", e.b},
                            {"kernel", e.kernel},
                            {"output", e.output},
                            {"sign", to_json(e.sign)},
                            {"magnitude", to_string(e.magnitude)}});
  Json mixed = Json::array();
  for (const auto& m : p.mixed) {
    Json terms = Json::array();
    for (const auto& t : m.terms)
      terms.push_back(Json{{"a", t.a},
                           {"b", t.b},
                           {"kernel", t.kernel},
                           {"sign", to_json(t.sign)},
                           {"magnitude", to_string(t.magnitude)}});
    mixed.push_back(terms);
  }
  Json kernels = Json::array();
  for (const auto& k : p.kernels) {
    Json jk{{"name", k.name}, {"kind", to_string(k.kind)}, {"left", k.left}, {"right", k.right}};
    if (k.kind == KernelKind::tuple_merge) {
      jk["shared"] = to_json(k.shared);
      jk["offset"] = k.offset;
    }
    if (k.kind == KernelKind::numeric) {
      jk["dimension"] = k.dimension;
      jk["tensor"] = k.tensor;
    }
    kernels.push_back(jk);
  }
  return Json{{"kind", "lie-presentation"},
              {"generators", gens},
              {"brackets", brackets},
              {"mixed", mixed},
              {"kernels", kernels},
              {"bindings", Json(p.bindings)},
              {"grading_rule", p.grading_rule},
              {"annotations", p.annotations}};
}

LiePresentation presentation_from_json(const Json& j) {
  if (j.value("kind", "") != "lie-presentation") throw ValidationError("not a lie-presentation document");
  LiePresentation p;
  for (const auto& g : j.at("generators"))
    p.generators.push_back({g.at("name").get<std::string>(), g.at("grade").get<int>(), length_from_json(g.at("arity"))});
  for (const auto& e : j.at("brackets"))
    p.brackets.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.at("kernel").get<std::string>(),
                          e.at("output").get<std::string>(), length_from_json(e.at("sign")),
                          rational_from_string(e.at("magnitude").get<std::string>())});
  for (const auto& m : j.at("mixed")) {
    MixedConstraint mc;
    for (const auto& t : m)
      mc.terms.push_back({t.at("a").get<std::string>(), t.at("b").get<std::string>(), t.at("kernel").get<std::string>(),
                          length_from_json(t.at("sign")), rational_from_string(t.at("magnitude").get<std::string>())});
    p.mixed.push_back(mc);
  }
  for (const auto& jk : j.at("kernels")) {
    Kernel k;
    k.name = jk.at("name").get<std::string>();
    std::string kind = jk.at("kind").get<std::string>();
    if (kind == "zero") k.kind = KernelKind::zero;
    else if (kind == "tuple-merge") k.kind = KernelKind::tuple_merge;
    else if (kind == "numeric") k.kind = KernelKind::numeric;
    else throw ValidationError("unknown kernel kind " + kind);
    k.left = jk.at("left").get<std::string>();
    k.right = jk.at("right").get<std::string>();
    if (jk.contains("shared")) k.shared = length_from_json(jk.at("shared"));
    k.offset = jk.value("offset", 0);
    k.dimension = jk.value("dimension", 0);
    if (jk.contains("tensor")) k.tensor = jk.at("tensor").get<std::vector<double>>();
    p.kernels.push_back(k);
  }
  p.bindings = j.at("bindings").get<Bindings>();
  p.grading_rule = j.at("grading_rule").get<bool>();
  p.annotations = j.at("annotations").get<std::vector<std::string>>();
  return p;
}

Json to_json(const SymbolicJacobiReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    Json triple = Json::array();
    for (const auto& a : s.triple) triple.push_back(render(a));
    Json js{{"triple", triple}, {"admissible", s.admissible}};
    if (!s.reason.empty()) js["reason"] = s.reason;
    Json res = Json::object();
    for (const auto& [atom, c] : s.residual) res[atom] = to_string(c);
    js["residual"] = res;
    samples.push_back(js);
  }
  return Json{{"kind", "symbolic-jacobi"},
              {"admissible", r.admissible},
              {"nonzero", r.nonzero},
              {"pass", r.pass()},
              {"samples", samples}};
}

Json to_json(const GradingReport& r) {
  return Json{{"kind", "grading"}, {"pass", r.pass()}, {"violations", r.violations}};
}

Json to_json(const NumericJacobiReport& r) {
  return Json{{"kind", "numeric-jacobi"}, {"samples", r.samples},          {"seed", r.seed},
              {"tol", r.tol},             {"jac1_first", r.jac1_first},    {"jac1_second", r.jac1_second},
              {"cyclic", r.cyclic},       {"max_residual", r.max_residual}, {"pass", r.pass}};
}

Json to_json(const LawReport& r) {
  Json laws = Json::array();
  for (const auto& l : r.results) {
    Json jl{{"law", l.law}, {"cases", l.cases}, {"failures", l.failures}};
    if (l.failures) jl["first_failure"] = l.first_failure;
    laws.push_back(jl);
  }
  return Json{{"kind", "law-suite"}, {"suite", r.suite}, {"pass", r.pass()}, {"laws", laws}};
}

Json to_json(const DeltaSquaredReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"p", row.p},
                        {"first_terms", row.first_terms},
                        {"expanded_terms", row.expanded_terms},
                        {"residual_terms", row.residual_terms},
                        {"zero", row.zero}});
  return Json{{"kind", "delta-squared"}, {"q", r.q}, {"pass", r.pass()}, {"rows", rows}};
}

}  // namespace chainlie
