#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "tbethe/census.hpp"
#include "tbethe/model.hpp"
#include "tbethe/model_core.hpp"
#include "tbethe/root_solver.hpp"
#include "tbethe/twist_flow.hpp"

namespace tbethe::io {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "tbethe/1";

/// Complex numbers travel as ["re","im"] decimal strings so multiprecision
/// results survive serialization.
json complex_to_json(const cdouble& z, int digits = 17);
json complex_to_json(const ComplexDec& z);
cdouble complex_from_json(const json& j);
ComplexDec complexdec_from_json(const json& j);

/// Root list syntax: comma-separated tokens "a", "bi", "a+bi", "a-bi", plus
/// exact shorthands "i/2", "-i/2", "i", "-i".
cdouble parse_complex(const std::string& token);
std::vector<cdouble> parse_roots(const std::string& list);

json to_json(const ModelSpec& spec);
ModelSpec modelspec_from_json(const json& j);

json to_json(const RootSet& roots, int digits = 17);
RootSet rootset_from_json(const json& j);

json to_json(const ClassificationResult& r);
ClassificationResult classification_from_json(const json& j);

json to_json(const SolutionSet& s);
json to_json(const TwistSeries& s);
TwistSeries twistseries_from_json(const json& j);
json to_json(const FirstOrderShift& s);
json to_json(const CensusReport& r);
CensusReport census_from_json(const json& j);
json to_json(const ed::SpectrumReport& r);

/// Aligned text renderings for --format table.
std::string table(const RootSet& roots);
std::string table(const ClassificationResult& r);
std::string table(const SolutionSet& s);
std::string table(const TwistSeries& s);
std::string table(const CensusReport& r);
std::string table(const ed::SpectrumReport& r);

/// Write to the path, or stdout when the path is empty.
void emit(const json& payload, const std::string& out_path);
void emit_text(const std::string& text, const std::string& out_path);

} // namespace tbethe::io
