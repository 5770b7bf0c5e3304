#include "monadforge/serialization.hpp"

#include <cmath>

namespace monadforge {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::Schema, std::string(name) + ": entries must be [re, im] number pairs");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw Error(ErrorKind::Schema, std::string(name) + ": entries must be finite");
  }
  return {re, im};
}

int dimension_from_json(const json& doc, const char* key, int minimum) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw Error(ErrorKind::Schema, std::string("missing integer field '") + key + "'");
  }
  const auto value = doc[key].get<long long>();
  if (value < minimum || value > 4096) {
    throw Error(ErrorKind::Schema, std::string("field '") + key + "' out of range");
  }
  return static_cast<int>(value);
}

json complex_pair(const std::array<Complex, 2>& pair) {
  return json::array({complex_to_json(pair[0]), complex_to_json(pair[1])});
}

}  // namespace

json real_to_json(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return value;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                               const char* name) {
  const std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(ErrorKind::Schema, std::string(name) + " must have shape " + shape);
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::Schema, std::string(name) + " must have shape " + shape);
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)], name);
    }
  }
  return m;
}

json to_json(const Configuration& config) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["k"] = config.k();
  doc["n"] = config.n();
  doc["a1"] = matrix_to_json(config.a1());
  doc["a2"] = matrix_to_json(config.a2());
  doc["x"] = matrix_to_json(config.x());
  doc["b"] = matrix_to_json(config.b());
  doc["c"] = matrix_to_json(config.c());
  return doc;
}

Configuration configuration_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "document must be a JSON object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_string() ||
      doc["schema_version"].get<std::string>() != kSchemaVersion) {
    throw Error(ErrorKind::Schema,
                "schema_version must be \"" + std::string(kSchemaVersion) + "\"");
  }
  const int k = dimension_from_json(doc, "k", 0);
  const int n = dimension_from_json(doc, "n", 1);
  for (const char* key : {"a1", "a2", "x", "b", "c"}) {
    if (!doc.contains(key)) throw Error(ErrorKind::Schema, std::string("missing field '") + key + "'");
  }
  return Configuration(k, n, matrix_from_json(doc["a1"], k, k, "a1"),
                       matrix_from_json(doc["a2"], k, k, "a2"),
                       matrix_from_json(doc["x"], k, k, "x"), matrix_from_json(doc["b"], k, n, "b"),
                       matrix_from_json(doc["c"], n, k, "c"));
}

std::string serialize(const Configuration& config) { return to_json(config).dump(2) + "\n"; }

Configuration parse_configuration(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("not valid JSON: ") + e.what());
  }
  return configuration_from_json(doc);
}

json to_json(const DegeneracyWitness& witness) {
  json j;
  j["side"] = to_string(witness.side);
  j["lambda"] = complex_pair(witness.lambda);
  j["mu"] = complex_pair(witness.mu);
  json vec = json::array();
  for (Eigen::Index i = 0; i < witness.vec.size(); ++i) vec.push_back(complex_to_json(witness.vec(i)));
  j["vector"] = std::move(vec);
  j["residuals"] = witness.residuals;
  return j;
}

json to_json(const ValidationReport& report) {
  json j;
  j["integrability_residual_norm"] = report.integrability_residual_norm;
  j["integrable"] = report.integrable;
  j["nondegenerate"] = report.nondegenerate;
  j["valid"] = report.valid();
  j["margin"] = real_to_json(report.margin);
  j["witness"] = report.witness ? to_json(*report.witness) : json(nullptr);
  j["tolerances"] = {{"base_tol", report.tolerances.base_tol},
                     {"relative", report.tolerances.relative}};
  return j;
}

json to_json(const HomotopyCertificate& cert) {
  json j;
  j["passed"] = cert.passed;
  j["identity_gap_bound"] = cert.identity_gap_bound;
  j["start_equals_embedding"] = cert.start_equals_embedding;
  j["end_is_constant"] = cert.end_is_constant;
  json samples = json::array();
  for (const auto& s : cert.samples) {
    samples.push_back({{"t", s.t},
                       {"residual_norm", s.residual_norm},
                       {"residual_threshold", s.residual_threshold},
                       {"integrable", s.integrable},
                       {"identity_gap", s.identity_gap},
                       {"nondegenerate", s.nondegenerate},
                       {"margin", real_to_json(s.margin)}});
  }
  j["samples"] = std::move(samples);
  return j;
}

json to_json(const DimensionReport& report) {
  return {{"moduli_dimension", report.moduli_dimension},
          {"jacobian_rank", report.jacobian_rank},
          {"kernel_dimension", report.kernel_dimension},
          {"stabilizer_dimension", report.stabilizer_dimension},
          {"surjective", report.surjective},
          {"jacobian_gap", real_to_json(report.jacobian_gap)},
          {"stabilizer_gap", real_to_json(report.stabilizer_gap)}};
}

}  // namespace monadforge
