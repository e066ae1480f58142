#pragma once

#include <string>
#include <vector>

#include "harnesslab/params.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// Built-in parameter sets, one per family of interest. The same values
/// ship as JSON files under presets/.
inline ParamSet<Rational> preset_params(const std::string& name) {
  auto r = [](long n, long d = 1) { return make_rational(n, d); };
  if (name == "brownian") return {r(1), r(0), r(0), r(0), r(0)};
  if (name == "qmeixner") return {r(1, 2), r(0), r(1, 3), r(0), r(1, 5)};
  if (name == "bipoisson") return {r(0), r(1, 4), r(1, 2), r(0), r(0)};
  if (name == "free") return {r(-1, 8), r(1, 3), r(1, 5), r(1, 2), r(1, 4)};
  if (name == "classical") return {r(1, 2), r(1, 3), r(1, 2), r(1, 4), r(1, 4)};
  throw std::invalid_argument("unknown preset \"" + name + "\"");
}

inline std::vector<std::string> preset_names() {
  return {"brownian", "qmeixner", "bipoisson", "free", "classical"};
}

}  // namespace harnesslab
