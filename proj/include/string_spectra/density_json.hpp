#pragma once

// JSON schema for densities:
//   {"kind":"constant","value":v}
//   {"kind":"linear","slope":s,"intercept":b}
//   {"kind":"quadratic","a":a,"b":b,"c":c}           a x^2 + b x + c
//   {"kind":"piecewise_linear","knots":[...],"values":[...]}
//   {"kind":"product","factors":[<density>, ...], "scale": c}   scale optional
//   {"kind":"blend","start":<density>,"end":<density>,"weight":w}

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "density.hpp"

namespace string_spectra {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("density: missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("density: field '") + key + "' is not a number");
  return v.get<double>();
}

inline std::vector<double> array_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ParseError(std::string("density: field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ParseError(std::string("density: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

inline Density density_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("density: expected a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError("density: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  using detail::array_field;
  using detail::number_field;
  if (kind == "constant") return make_constant(number_field(j, "value"));
  if (kind == "linear") return make_linear(number_field(j, "slope"), number_field(j, "intercept"));
  if (kind == "quadratic")
    return make_quadratic(number_field(j, "a"), number_field(j, "b"), number_field(j, "c"));
  if (kind == "piecewise_linear")
    return make_piecewise_linear(array_field(j, "knots"), array_field(j, "values"));
  if (kind == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array())
      throw ParseError("density: product needs a 'factors' array");
    std::vector<Density> factors;
    for (const auto& f : j.at("factors")) factors.push_back(density_from_json(f));
    double scale = j.contains("scale") ? number_field(j, "scale") : 1.0;
    return make_product(std::move(factors), scale);
  }
  if (kind == "blend") {
    if (!j.contains("start") || !j.contains("end")) throw ParseError("density: blend needs start and end");
    auto family = HomotopyFamily::affine(density_from_json(j.at("start")), density_from_json(j.at("end")));
    return blend(family, number_field(j, "weight"));
  }
  throw ParseError("density: unknown kind '" + kind + "'");
}

inline nlohmann::json density_to_json(const Density& d) {
  using nlohmann::json;
  return std::visit(
      detail::overloaded{
          [](const forms::Constant& f) { return json{{"kind", "constant"}, {"value", f.value}}; },
          [](const forms::Linear& f) {
            return json{{"kind", "linear"}, {"slope", f.slope}, {"intercept", f.intercept}};
          },
          [](const forms::Quadratic& f) {
            return json{{"kind", "quadratic"}, {"a", f.a}, {"b", f.b}, {"c", f.c}};
          },
          [](const forms::PiecewiseLinear& f) {
            return json{{"kind", "piecewise_linear"}, {"knots", f.knots}, {"values", f.values}};
          },
          [](const forms::Product& f) {
            json factors = json::array();
            for (const auto& g : f.factors) factors.push_back(density_to_json(g));
            json out{{"kind", "product"}, {"factors", factors}};
            if (f.scale != 1.0) out["scale"] = f.scale;
            if (f.map) out["map"] = f.map->name();
            return out;
          },
          [](const forms::Blend& f) {
            return json{{"kind", "blend"},
                        {"start", density_to_json(f.endpoints[0])},
                        {"end", density_to_json(f.endpoints[1])},
                        {"weight", f.weight}};
          }},
      d.form());
}

inline Density parse_density(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("density: malformed JSON: ") + e.what());
  }
  return density_from_json(j);
}

inline Density load_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open density file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_density(ss.str());
}

/// 64-bit FNV-1a of the canonical JSON form, as 16 hex digits.
inline std::string density_digest(const Density& d) {
  const std::string text = density_to_json(d).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace string_spectra
