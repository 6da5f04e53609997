#include "anumrad/harness/matrix_io.hpp"

#include <cmath>
#include <fstream>

#include "anumrad/error.hpp"

namespace anumrad::harness {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::parse, "matrix file: " + what);
}

std::size_t positive_count(const Json& j, const char* key) {
  if (!j.contains(key)) parse_error(std::string("missing \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    parse_error(std::string("\"") + key + "\" must be a positive integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const cplx& z : m.entries()) data.push_back(Json::array({z.real(), z.imag()}));
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) parse_error("top level must be an object");
  const std::size_t rows = positive_count(j, "rows");
  const std::size_t cols = positive_count(j, "cols");
  if (!j.contains("data") || !j.at("data").is_array()) parse_error("\"data\" must be an array");
  const Json& data = j.at("data");
  if (data.size() != rows * cols) parse_error("\"data\" length must equal rows*cols");
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (const Json& e : data) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      parse_error("each entry must be a [re, im] pair of numbers");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) parse_error("non-finite entry");
    entries.emplace_back(re, im);
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  try {
    return matrix_from_json(read_json_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw Error(ErrorCode::parse, path.string() + ": " + e.what());
    throw;
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_json_file(path, matrix_to_json(m));
}

}  // namespace anumrad::harness
