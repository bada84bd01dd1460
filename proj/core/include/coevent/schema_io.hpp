#pragma once

#include <string>

#include "coevent/histories.hpp"

namespace coevent {

// JSON documents. Complex numbers are [re, im] pairs; kets are arrays of
// complex numbers; matrices are arrays of rows.
//
// Schema:
//   {"dim": 2,
//    "initial": [[1,0],[0,0]]            (or "rho": matrix),
//    "slices": [{"unitary": matrix?,     (identity when absent)
//                "basis": [ket, ...]     (or "projectors": [matrix, ...]),
//                "labels": ["0", "1"]}],
//    "history_labels": [...]?}
//
// Raw decoherence functional:
//   {"entries": matrix, "labels": [...]?}
//
// Parse errors and missing fields throw kMalformedInput; invariant failures
// propagate from the schema and decomposition constructors.

HistorySchema parse_schema(const std::string& json_text);
/// Round-trips doubles exactly.
std::string serialize_schema(const HistorySchema& schema);

DecoherenceFunctional parse_raw_df(const std::string& json_text);
std::string serialize_raw_df(const DecoherenceFunctional& df);

std::string read_text_file(const std::string& path);

}  // namespace coevent
