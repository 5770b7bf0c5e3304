#pragma once

// ConfigDocument interchange format:
//
//   {
//     "schema_version": "monad-forge/1",
//     "k": 1, "n": 2,
//     "a1": [[[re, im], ...], ...],   // k rows of k entries
//     "a2": ..., "x": ...,            // k x k
//     "b": ...,                       // k rows of n entries
//     "c": ...                        // n rows of k entries
//   }
//
// Doubles are written as shortest round-trip decimals, so parsing a
// serialized configuration reproduces it bit for bit.

#include <string>
#include <string_view>

#include <json.hpp>

#include "monadforge/configuration.hpp"
#include "monadforge/invariants.hpp"
#include "monadforge/stabilization.hpp"

namespace monadforge {

inline constexpr std::string_view kSchemaVersion = "monad-forge/1";

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws Schema on anything but `rows` arrays of `cols` [re, im] pairs.
ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                               const char* name);

nlohmann::json to_json(const Configuration& config);
/// Throws Schema for a wrong version, missing fields, bad shapes or
/// non-numeric / non-finite entries.
Configuration configuration_from_json(const nlohmann::json& doc);

std::string serialize(const Configuration& config);
/// Throws Schema, including for text that is not JSON.
Configuration parse_configuration(std::string_view text);

nlohmann::json to_json(const DegeneracyWitness& witness);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const HomotopyCertificate& cert);
nlohmann::json to_json(const DimensionReport& report);

/// +inf and NaN are not JSON numbers; infinities are written as the string "inf".
nlohmann::json real_to_json(double value);

}  // namespace monadforge
