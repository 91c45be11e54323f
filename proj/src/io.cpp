#include "modent/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace modent {

namespace {

using nlohmann::json;

// Rectangular n x n array of finite numbers, or a parse_error saying which.
void read_real_array(const json& arr, const char* name, int n, RMat& out) {
  if (!arr.is_array() || int(arr.size()) != n)
    throw parse_error(std::string("field '") + name + "' must be an array of " +
                      std::to_string(n) + " rows");
  out.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = arr[i];
    if (!row.is_array() || int(row.size()) != n)
      throw parse_error(std::string("row ") + std::to_string(i) + " of '" +
                        name + "' must hold " + std::to_string(n) + " numbers");
    for (int j = 0; j < n; ++j) {
      if (!row[j].is_number())
        throw parse_error(std::string("entry (") + std::to_string(i) + "," +
                          std::to_string(j) + ") of '" + name +
                          "' is not a number");
      double x = row[j].get<double>();
      if (!std::isfinite(x))
        throw parse_error(std::string("entry (") + std::to_string(i) + "," +
                          std::to_string(j) + ") of '" + name +
                          "' is not finite");
      out(i, j) = x;
    }
  }
}

CMat matrix_from_object(const json& j) {
  if (!j.is_object()) throw parse_error("matrix value must be a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != 1)
    throw parse_error("matrix object needs \"schema\": 1");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw parse_error("matrix object needs an integer field \"n\"");
  int n = j["n"].get<int>();
  if (n < 1) throw parse_error("matrix dimension must be positive");
  if (!j.contains("re")) throw parse_error("matrix object needs field \"re\"");

  RMat re, im;
  read_real_array(j["re"], "re", n, re);
  if (j.contains("im"))
    read_real_array(j["im"], "im", n, im);
  else
    im = RMat::Zero(n, n);

  return re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
}

json parse_or_rethrow(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    // parse errors keep their byte position; overflow literals land here too
    throw parse_error(e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CMat parse_matrix_json(const std::string& text) {
  return matrix_from_object(parse_or_rethrow(text));
}

CMat read_matrix_json(const std::string& path) {
  return parse_matrix_json(slurp(path));
}

std::string matrix_to_json(const CMat& m) {
  int n = int(m.rows());
  std::string out = "{\"schema\":1,\"n\":" + std::to_string(n) + ",";
  auto emit = [&](const char* name, bool imag) {
    out += std::string("\"") + name + "\":[";
    for (int i = 0; i < n; ++i) {
      out += i ? ",[" : "[";
      for (int j = 0; j < n; ++j) {
        if (j) out += ",";
        out += format_double(imag ? m(i, j).imag() : m(i, j).real());
      }
      out += "]";
    }
    out += "]";
  };
  emit("re", false);
  out += ",";
  emit("im", true);
  out += "}";
  return out;
}

void write_matrix_json(const std::string& path, const CMat& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  out << matrix_to_json(m) << "\n";
}

std::vector<CMat> parse_generators_json(const std::string& text) {
  json j = parse_or_rethrow(text);
  if (!j.is_object() || !j.contains("schema") ||
      !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw parse_error("generator file needs \"schema\": 1");
  if (!j.contains("generators") || !j["generators"].is_array() ||
      j["generators"].empty())
    throw parse_error("generator file needs a non-empty \"generators\" array");

  std::vector<CMat> out;
  Eigen::Index n = -1;
  for (const json& g : j["generators"]) {
    json item = g;
    if (item.is_object() && !item.contains("schema")) item["schema"] = 1;
    out.push_back(matrix_from_object(item));
    if (n >= 0 && out.back().rows() != n)
      throw parse_error("generators have mismatched dimensions");
    n = out.back().rows();
  }
  return out;
}

std::vector<CMat> read_generators_json(const std::string& path) {
  return parse_generators_json(slurp(path));
}

}  // namespace modent
