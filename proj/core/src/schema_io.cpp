#include "coevent/schema_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coevent/error.hpp"
#include "json_detail.hpp"

namespace coevent {

namespace detail {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("invalid JSON: ") + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::kMalformedInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Ket& k) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < k.size(); ++i) out.push_back(to_json(k(i)));
  return out;
}

Json to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::kMalformedInput, "complex numbers must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Ket ket_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::kMalformedInput, "ket must be a non-empty array");
  Ket k(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) k(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return k;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorCode::kMalformedInput, "matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw Error(ErrorCode::kMalformedInput, "matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

namespace {

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kMalformedInput, std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const Json& s : j) {
    if (!s.is_string()) throw Error(ErrorCode::kMalformedInput, std::string(what) + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

Json schema_to_json(const HistorySchema& schema) {
  Json j;
  j["dim"] = schema.dim();
  if (schema.is_pure()) j["initial"] = to_json(*schema.initial_ket());
  else j["rho"] = to_json(schema.rho());
  Json slices = Json::array();
  for (const TimeSlice& s : schema.slices()) {
    Json slice;
    const auto n = static_cast<Eigen::Index>(schema.dim());
    if (s.evolution != ComplexMatrix::Identity(n, n)) slice["unitary"] = to_json(s.evolution);
    if (s.decomposition.all_rank_one()) {
      Json basis = Json::array();
      for (std::size_t i = 0; i < s.decomposition.size(); ++i) basis.push_back(to_json(s.decomposition.basis_vector(i)));
      slice["basis"] = std::move(basis);
    } else {
      Json projectors = Json::array();
      for (const ComplexMatrix& p : s.decomposition.projectors()) projectors.push_back(to_json(p));
      slice["projectors"] = std::move(projectors);
    }
    slice["labels"] = s.decomposition.labels();
    slices.push_back(std::move(slice));
  }
  j["slices"] = std::move(slices);
  if (!schema.history_labels().empty()) j["history_labels"] = schema.history_labels();
  return j;
}

HistorySchema schema_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedInput, "schema must be a JSON object");
  const Json& dim_field = require(j, "dim");
  if (!dim_field.is_number_unsigned() || dim_field.get<std::size_t>() == 0)
    throw Error(ErrorCode::kMalformedInput, "dim must be a positive integer");
  const auto dim = dim_field.get<std::size_t>();
  const auto n = static_cast<Eigen::Index>(dim);

  std::vector<TimeSlice> slices;
  const Json& slices_field = require(j, "slices");
  if (!slices_field.is_array()) throw Error(ErrorCode::kMalformedInput, "slices must be an array");
  for (const Json& s : slices_field) {
    std::vector<std::string> labels = string_list(require(s, "labels"), "labels");
    ComplexMatrix evolution = s.contains("unitary") ? matrix_from_json(s.at("unitary")) : ComplexMatrix::Identity(n, n);
    if (evolution.rows() != n || evolution.cols() != n)
      throw Error(ErrorCode::kMalformedInput, "unitary has the wrong dimension");
    if (s.contains("basis") == s.contains("projectors"))
      throw Error(ErrorCode::kMalformedInput, "each slice needs exactly one of 'basis' or 'projectors'");
    if (s.contains("basis")) {
      std::vector<Ket> basis;
      for (const Json& k : s.at("basis")) {
        basis.push_back(ket_from_json(k));
        if (basis.back().size() != n) throw Error(ErrorCode::kMalformedInput, "basis vector has the wrong dimension");
      }
      slices.push_back(TimeSlice{std::move(evolution), ProjectiveDecomposition::from_basis(basis, std::move(labels))});
    } else {
      std::vector<ComplexMatrix> projectors;
      for (const Json& p : s.at("projectors")) projectors.push_back(matrix_from_json(p));
      slices.push_back(TimeSlice{std::move(evolution), ProjectiveDecomposition(std::move(projectors), std::move(labels))});
    }
  }

  std::vector<std::string> history_labels;
  if (j.contains("history_labels")) history_labels = string_list(j.at("history_labels"), "history_labels");

  if (j.contains("initial") == j.contains("rho"))
    throw Error(ErrorCode::kMalformedInput, "schema needs exactly one of 'initial' or 'rho'");
  if (j.contains("initial")) {
    Ket k = ket_from_json(j.at("initial"));
    if (k.size() != n) throw Error(ErrorCode::kMalformedInput, "initial ket has the wrong dimension");
    return HistorySchema::pure(std::move(k), std::move(slices), std::move(history_labels));
  }
  ComplexMatrix rho = matrix_from_json(j.at("rho"));
  if (rho.rows() != n || rho.cols() != n) throw Error(ErrorCode::kMalformedInput, "rho has the wrong dimension");
  return HistorySchema::mixed(std::move(rho), std::move(slices), std::move(history_labels));
}

Json raw_df_to_json(const DecoherenceFunctional& df) {
  Json j;
  j["entries"] = to_json(df.entries());
  j["labels"] = df.labels();
  return j;
}

DecoherenceFunctional raw_df_from_json(const Json& j) {
  ComplexMatrix entries = matrix_from_json(require(j, "entries"));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = string_list(j.at("labels"), "labels");
  return DecoherenceFunctional::from_matrix(std::move(entries), std::move(labels));
}

namespace {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  // Values within rounding of zero print as 0 so reports stay byte-stable.
  if (std::abs(v) < 1e-15) return "0";
  return s;
}

void dump_into(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        bool first = true;
        for (const Json& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_into(e, out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_into(e, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_stable(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace detail

HistorySchema parse_schema(const std::string& json_text) {
  return detail::schema_from_json(detail::parse_json(json_text));
}

std::string serialize_schema(const HistorySchema& schema) { return detail::schema_to_json(schema).dump(2) + "\n"; }

DecoherenceFunctional parse_raw_df(const std::string& json_text) {
  return detail::raw_df_from_json(detail::parse_json(json_text));
}

std::string serialize_raw_df(const DecoherenceFunctional& df) { return detail::raw_df_to_json(df).dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMalformedInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coevent
