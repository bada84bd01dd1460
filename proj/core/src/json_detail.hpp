#pragma once

// Internal JSON conversions shared by the schema, scenario and report code.

#include <json.hpp>

#include "coevent/histories.hpp"

namespace coevent::detail {

using Json = nlohmann::json;

Json parse_json(const std::string& text);

Json to_json(Complex z);
Json to_json(const Ket& k);
Json to_json(const ComplexMatrix& m);
Json schema_to_json(const HistorySchema& schema);
Json raw_df_to_json(const DecoherenceFunctional& df);

Complex complex_from_json(const Json& j);
Ket ket_from_json(const Json& j);
ComplexMatrix matrix_from_json(const Json& j);
HistorySchema schema_from_json(const Json& j);
DecoherenceFunctional raw_df_from_json(const Json& j);

const Json& require(const Json& j, const char* key);

/// Sorted keys, two-space indent, doubles with 12 significant digits.
std::string dump_stable(const Json& j);

}  // namespace coevent::detail
