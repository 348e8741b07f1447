#include "ffst/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ffst {

namespace {

using nlohmann::json;

json oracle_to_json_obj(const FunctionOracle& oracle) {
  json j;
  j["n"] = oracle.n();
  if (const auto* t = oracle.dense_table()) {
    j["repr"] = "dense";
    j["values"] = t->values;
  } else {
    j["repr"] = "sparse";
    json coeffs = json::array();
    for (const auto& e : oracle.sparse_spectrum()->coeffs) {
      coeffs.push_back(json{{"alpha", e.alpha}, {"value", e.value}});
    }
    j["coeffs"] = std::move(coeffs);
  }
  return j;
}

FunctionOracle oracle_from_json_obj(const json& j) {
  if (!j.contains("n") || !j.contains("repr")) {
    throw std::invalid_argument("function file: missing \"n\" or \"repr\"");
  }
  const int n = j.at("n").get<int>();
  const std::string repr = j.at("repr").get<std::string>();
  if (repr == "dense") {
    SpectralTable table;
    table.n = n;
    table.values = j.at("values").get<std::vector<double>>();
    return FunctionOracle::dense(std::move(table));
  }
  if (repr == "sparse") {
    SparseSpectrum spec;
    spec.n = n;
    for (const auto& e : j.at("coeffs")) {
      spec.coeffs.push_back(SparseEntry{e.at("alpha").get<std::uint64_t>(),
                                        e.at("value").get<double>()});
    }
    return FunctionOracle::sparse(std::move(spec));
  }
  throw std::invalid_argument("function file: repr must be \"dense\" or \"sparse\"");
}

}  // namespace

std::string function_to_json(const FunctionOracle& oracle) {
  return oracle_to_json_obj(oracle).dump();
}

FunctionOracle function_from_json(const std::string& text) {
  return oracle_from_json_obj(json::parse(text));
}

FunctionOracle load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file: " + path);
  json j;
  in >> j;
  return oracle_from_json_obj(j);
}

void save_function(const FunctionOracle& oracle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write function file: " + path);
  out << oracle_to_json_obj(oracle).dump() << '\n';
}

void save_instance_meta(const InstanceMeta& meta, const std::string& path) {
  json j;
  j["kind"] = meta.kind;
  j["n"] = meta.n;
  j["s"] = meta.s;
  j["rho"] = meta.rho;
  j["seed"] = meta.seed;
  if (std::isnan(meta.exact_distance)) {
    j["exact_distance"] = nullptr;
  } else {
    j["exact_distance"] = meta.exact_distance;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metadata file: " + path);
  out << j.dump() << '\n';
}

std::string meta_path_for(const std::string& function_path) {
  constexpr const char* kExt = ".json";
  if (function_path.size() > 5 &&
      function_path.compare(function_path.size() - 5, 5, kExt) == 0) {
    return function_path.substr(0, function_path.size() - 5) + ".meta.json";
  }
  return function_path + ".meta.json";
}

}  // namespace ffst
