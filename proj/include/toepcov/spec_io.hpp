#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "toepcov/toeplitz.hpp"

namespace toepcov {

/// Schema violation in a matrix-spec document; what() names the line or field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"kind":"toeplitz","d":N,"a":[...]} or {"kind":"frequency","d":N,"freqs":[...],"weights":[...]}.
struct MatrixSpec {
  int d = 0;
  std::optional<ToeplitzVector> toeplitz;
  std::optional<FrequencyModel> model;

  /// The Toeplitz vector of the described covariance.
  ToeplitzVector truth() const;
  nlohmann::json to_json() const;

  static MatrixSpec from_toeplitz(ToeplitzVector t);
  static MatrixSpec from_model(FrequencyModel fm);
};

MatrixSpec parse_matrix_spec(const std::string& text);
inline MatrixSpec parse_matrix_spec(const char* text) { return parse_matrix_spec(std::string(text)); }
MatrixSpec parse_matrix_spec(const nlohmann::json& doc);
MatrixSpec load_matrix_spec(const std::filesystem::path& path);

}  // namespace toepcov
