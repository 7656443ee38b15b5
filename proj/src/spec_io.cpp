#include "toepcov/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace toepcov {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& field, const std::string& what) {
  throw SpecError("matrix spec: field '" + field + "': " + what);
}

std::vector<double> number_array(const json& doc, const std::string& field, std::size_t expected) {
  if (!doc.contains(field)) fail_field(field, "missing");
  const json& arr = doc.at(field);
  if (!arr.is_array()) fail_field(field, "expected an array of numbers");
  if (expected != 0 && arr.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " entries, found " << arr.size();
    fail_field(field, msg.str());
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail_field(field + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

// 1-based line of a byte offset reported by the parser.
std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

ToeplitzVector MatrixSpec::truth() const {
  if (toeplitz) return *toeplitz;
  if (model) return synthesize(*model);
  throw SpecError("matrix spec: empty");
}

json MatrixSpec::to_json() const {
  if (toeplitz) return json{{"kind", "toeplitz"}, {"d", d}, {"a", toeplitz->to_std()}};
  if (model) return json{{"kind", "frequency"}, {"d", d}, {"freqs", model->freqs}, {"weights", model->weights}};
  throw SpecError("matrix spec: empty");
}

MatrixSpec MatrixSpec::from_toeplitz(ToeplitzVector t) {
  MatrixSpec spec;
  spec.d = t.dim();
  spec.toeplitz = std::move(t);
  return spec;
}

MatrixSpec MatrixSpec::from_model(FrequencyModel fm) {
  fm.validate();
  MatrixSpec spec;
  spec.d = fm.d;
  spec.model = std::move(fm);
  return spec;
}

MatrixSpec parse_matrix_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("matrix spec: top level must be an object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) fail_field("kind", "missing or not a string");
  if (!doc.contains("d") || !doc.at("d").is_number_integer() || doc.at("d").get<long>() < 1) {
    fail_field("d", "expected a positive integer");
  }
  const int d = doc.at("d").get<int>();
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "toeplitz") {
    return MatrixSpec::from_toeplitz(ToeplitzVector(number_array(doc, "a", static_cast<std::size_t>(d))));
  }
  if (kind == "frequency") {
    FrequencyModel fm;
    fm.d = d;
    fm.freqs = number_array(doc, "freqs", 0);
    fm.weights = number_array(doc, "weights", fm.freqs.size());
    try {
      return MatrixSpec::from_model(std::move(fm));
    } catch (const std::invalid_argument& e) {
      fail_field("freqs", e.what());
    }
  }
  fail_field("kind", "expected \"toeplitz\" or \"frequency\", found \"" + kind + "\"");
}

MatrixSpec parse_matrix_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "matrix spec: line " << line_of(text, e.byte) << ": " << e.what();
    throw SpecError(msg.str());
  }
  return parse_matrix_spec(doc);
}

MatrixSpec load_matrix_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("matrix spec: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_spec(buf.str());
}

}  // namespace toepcov
