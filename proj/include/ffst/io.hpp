#pragma once

#include <string>

#include "ffst/instances.hpp"
#include "ffst/oracle.hpp"

namespace ffst {

// Function file format:
//   {"n": int, "repr": "dense",  "values": [2^n numbers]}
//   {"n": int, "repr": "sparse", "coeffs": [{"alpha": int, "value": x}, ...]}
// Frequencies use the natural bit encoding (coordinate i = bit i).
FunctionOracle load_function(const std::string& path);
void save_function(const FunctionOracle& oracle, const std::string& path);

std::string function_to_json(const FunctionOracle& oracle);
FunctionOracle function_from_json(const std::string& text);

// Sidecar metadata written next to generated instances.
struct InstanceMeta {
  std::string kind;
  int n = 0;
  long s = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  double exact_distance = 0.0;  // NaN when not computed
};

void save_instance_meta(const InstanceMeta& meta, const std::string& path);

// foo.json -> foo.meta.json; anything else just appends .meta.json.
std::string meta_path_for(const std::string& function_path);

}  // namespace ffst
