#pragma once

#include <json.hpp>

#include "chainlie/complex_spec.hpp"
#include "chainlie/continual_lie.hpp"
#include "chainlie/foliation.hpp"
#include "chainlie/laws.hpp"
#include "chainlie/expr.hpp"
#include "chainlie/length_expr.hpp"
#include "chainlie/relation_tree.hpp"

namespace chainlie {

using Json = nlohmann::ordered_json;

Json to_json(const Degree& d);
Json to_json(const Param& p);
Json to_json(const GenSymbol& s);
Json to_json(const Factor& f);
Json to_json(const LengthExpr& e);
Json to_json(const RelTerm& t);
Json to_json(const RelationTree& tree);
Json to_json(const LiePresentation& p);
Json to_json(const SymbolicJacobiReport& r);
Json to_json(const GradingReport& r);
Json to_json(const NumericJacobiReport& r);
Json to_json(const LawReport& r);
Json to_json(const DeltaSquaredReport& r);

Degree degree_from_json(const Json& j);
Param param_from_json(const Json& j);
GenSymbol symbol_from_json(const Json& j);
Factor factor_from_json(const Json& j);
LengthExpr length_from_json(const Json& j);
RelTerm relterm_from_json(const Json& j);
RelationTree tree_from_json(const Json& j);
LiePresentation presentation_from_json(const Json& j);

Rational rational_from_string(const std::string& s);

}  // namespace chainlie
