#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "harnesslab/params.hpp"
#include "harnesslab/regression.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

using json = nlohmann::ordered_json;

inline json scalar_to_json(const Rational& v) { return to_string(v); }
inline json scalar_to_json(double v) { return v; }

/// Accepts integers, floats and strings ("p/q" or decimal text).
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_number_float()) return Rational(j.get<double>());
  throw std::invalid_argument("expected a number or a \"p/q\" string");
}

inline double double_from_json(const json& j) {
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  return j.get<double>();
}

template <class T>
T scalar_from_json(const json& j) {
  if constexpr (is_exact_v<T>) {
    return rational_from_json(j);
  } else {
    return double_from_json(j);
  }
}

template <class T>
json params_to_json(const ParamSet<T>& p) {
  json j;
  j["q"] = scalar_to_json(p.q);
  j["eta"] = scalar_to_json(p.eta);
  j["theta"] = scalar_to_json(p.theta);
  j["sigma"] = scalar_to_json(p.sigma);
  j["tau"] = scalar_to_json(p.tau);
  return j;
}

template <class T>
ParamSet<T> params_from_json(const json& j) {
  ParamSet<T> p;
  p.q = scalar_from_json<T>(j.at("q"));
  p.eta = scalar_from_json<T>(j.at("eta"));
  p.theta = scalar_from_json<T>(j.at("theta"));
  p.sigma = scalar_from_json<T>(j.at("sigma"));
  p.tau = scalar_from_json<T>(j.at("tau"));
  return p;
}

template <class T>
ParamSet<T> load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return params_from_json<T>(j);
}

inline ParamSet<double> to_double_params(const ParamSet<Rational>& p) {
  return {to_double(p.q), to_double(p.eta), to_double(p.theta), to_double(p.sigma),
          to_double(p.tau)};
}

}  // namespace harnesslab
