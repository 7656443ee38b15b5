#include <doctest.h>

#include "toepcov/spec_io.hpp"

using namespace toepcov;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_matrix_spec(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("matrix spec: both kinds parse") {
  const MatrixSpec t = parse_matrix_spec(R"({"kind":"toeplitz","d":3,"a":[2,1,0]})");
  CHECK(t.d == 3);
  CHECK(t.truth().to_std() == std::vector<double>{2, 1, 0});
  const MatrixSpec f = parse_matrix_spec(R"({"kind":"frequency","d":3,"freqs":[0.25,0.75],"weights":[0.5,0.5]})");
  CHECK(f.truth()[2] == doctest::Approx(-1.0));
  CHECK(parse_matrix_spec(f.to_json()).truth() == f.truth());
  CHECK(parse_matrix_spec(t.to_json()).truth() == t.truth());
}

TEST_CASE("matrix spec: diagnostics name the line or the field") {
  CHECK(error_of("{\n\"kind\": \"toeplitz\",\n\"d\": 2,\n\"a\": [1, ]\n}").find("line 4") != std::string::npos);
  CHECK(error_of(R"({"kind":"toeplitz","d":3,"a":[1,2]})").find("'a'") != std::string::npos);
  CHECK(error_of(R"({"kind":"toeplitz","d":2,"a":[1,"x"]})").find("'a[1]'") != std::string::npos);
  CHECK(error_of(R"({"kind":"toeplitz","d":0,"a":[]})").find("'d'") != std::string::npos);
  CHECK(error_of(R"({"kind":"circulant","d":2})").find("'kind'") != std::string::npos);
  CHECK(error_of(R"({"d":2})").find("'kind'") != std::string::npos);
  CHECK(error_of(R"({"kind":"frequency","d":4,"freqs":[0.1],"weights":[1]})").find("'freqs'") != std::string::npos);
  CHECK(error_of(R"({"kind":"frequency","d":4,"freqs":[0.1,0.9],"weights":[1]})").find("'weights'") != std::string::npos);
  CHECK(error_of("[1,2]").find("object") != std::string::npos);
}
