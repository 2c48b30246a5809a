#pragma once

// Serialized form of state_spec: a JSON document with fields
// kind/params/children. Literal matrices are flat row-major arrays of
// [re, im] pairs.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "entgeo/generators.hpp"

namespace entgeo {

class spec_parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const char* kind_name(state_spec::kind k) {
  switch (k) {
    case state_spec::kind::bell: return "bell";
    case state_spec::kind::ghz: return "ghz";
    case state_spec::kind::w: return "w";
    case state_spec::kind::product_basis: return "product-basis";
    case state_spec::kind::random_mixed: return "random-mixed";
    case state_spec::kind::random_pure: return "random-pure";
    case state_spec::kind::compose: return "compose";
    case state_spec::kind::literal: return "literal";
  }
  return "?";
}

inline state_spec::kind kind_from_name(const std::string& name) {
  using kind = state_spec::kind;
  if (name == "bell") return kind::bell;
  if (name == "ghz") return kind::ghz;
  if (name == "w") return kind::w;
  if (name == "product-basis") return kind::product_basis;
  if (name == "random-mixed") return kind::random_mixed;
  if (name == "random-pure") return kind::random_pure;
  if (name == "compose") return kind::compose;
  if (name == "literal") return kind::literal;
  throw spec_parse_error("state spec: unknown kind '" + name + "'");
}

template <typename T>
T require_field(const nlohmann::json& j, const char* field, const char* kind) {
  if (!j.contains(field)) {
    throw spec_parse_error(std::string("state spec: kind '") + kind +
                           "' requires field '" + field + "'");
  }
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw spec_parse_error(std::string("state spec: field '") + field +
                           "' has the wrong type");
  }
}

inline state_spec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw spec_parse_error("state spec: expected a JSON object");
  }
  state_spec spec;
  const auto kind_str = require_field<std::string>(j, "kind", "?");
  spec.k = kind_from_name(kind_str);
  const char* kn = kind_name(spec.k);
  using kind = state_spec::kind;
  switch (spec.k) {
    case kind::bell:
      break;
    case kind::ghz:
    case kind::w:
      spec.parties = require_field<int>(j, "parties", kn);
      break;
    case kind::product_basis:
      spec.dims = require_field<std::vector<int>>(j, "dims", kn);
      if (j.contains("levels")) {
        spec.levels = require_field<std::vector<int>>(j, "levels", kn);
      }
      break;
    case kind::random_mixed:
      spec.dims = require_field<std::vector<int>>(j, "dims", kn);
      spec.seed = require_field<std::uint64_t>(j, "seed", kn);
      if (j.contains("rank")) {
        spec.rank = require_field<int>(j, "rank", kn);
      }
      break;
    case kind::random_pure:
      spec.dims = require_field<std::vector<int>>(j, "dims", kn);
      spec.seed = require_field<std::uint64_t>(j, "seed", kn);
      break;
    case kind::compose: {
      if (!j.contains("children") || !j.at("children").is_array()) {
        throw spec_parse_error(
            "state spec: kind 'compose' requires array field 'children'");
      }
      for (const auto& child : j.at("children")) {
        spec.children.push_back(spec_from_json(child));
      }
      break;
    }
    case kind::literal: {
      spec.dims = require_field<std::vector<int>>(j, "dims", kn);
      if (!j.contains("matrix") || !j.at("matrix").is_array()) {
        throw spec_parse_error(
            "state spec: kind 'literal' requires array field 'matrix'");
      }
      Eigen::Index side = 1;
      for (int d : spec.dims) side *= d;
      const auto& entries = j.at("matrix");
      if (static_cast<Eigen::Index>(entries.size()) != side * side) {
        throw spec_parse_error("state spec: field 'matrix' has " +
                               std::to_string(entries.size()) +
                               " entries, expected " +
                               std::to_string(side * side));
      }
      spec.literal.resize(side, side);
      for (Eigen::Index at = 0; at < side * side; ++at) {
        const auto& pair = entries.at(static_cast<std::size_t>(at));
        if (!pair.is_array() || pair.size() != 2) {
          throw spec_parse_error(
              "state spec: field 'matrix' entries must be [re, im] pairs");
        }
        spec.literal(at / side, at % side) =
            cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
      break;
    }
  }
  return spec;
}

inline nlohmann::json spec_to_json_value(const state_spec& spec) {
  nlohmann::json j;
  j["kind"] = kind_name(spec.k);
  using kind = state_spec::kind;
  switch (spec.k) {
    case kind::bell:
      break;
    case kind::ghz:
    case kind::w:
      j["parties"] = spec.parties;
      break;
    case kind::product_basis:
      j["dims"] = spec.dims;
      if (!spec.levels.empty()) j["levels"] = spec.levels;
      break;
    case kind::random_mixed:
      j["dims"] = spec.dims;
      if (spec.rank > 0) j["rank"] = spec.rank;
      j["seed"] = spec.seed.value_or(0);
      break;
    case kind::random_pure:
      j["dims"] = spec.dims;
      j["seed"] = spec.seed.value_or(0);
      break;
    case kind::compose: {
      auto children = nlohmann::json::array();
      for (const auto& child : spec.children) {
        children.push_back(spec_to_json_value(child));
      }
      j["children"] = std::move(children);
      break;
    }
    case kind::literal: {
      j["dims"] = spec.dims;
      auto entries = nlohmann::json::array();
      for (Eigen::Index r = 0; r < spec.literal.rows(); ++r) {
        for (Eigen::Index c = 0; c < spec.literal.cols(); ++c) {
          entries.push_back({spec.literal(r, c).real(), spec.literal(r, c).imag()});
        }
      }
      j["matrix"] = std::move(entries);
      break;
    }
  }
  return j;
}

}  // namespace detail

inline state_spec parse_spec_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw spec_parse_error("state spec: JSON parse error at byte " +
                           std::to_string(e.byte) + ": " + e.what());
  }
  return detail::spec_from_json(j);
}

inline state_spec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open spec file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_json(buffer.str());
}

inline std::string spec_to_json(const state_spec& spec) {
  return detail::spec_to_json_value(spec).dump(2);
}

// Wraps a concrete state back into a self-contained literal spec.
inline state_spec make_literal_spec(const multipartite_state& state) {
  state_spec spec;
  spec.k = state_spec::kind::literal;
  spec.dims = state.dims();
  spec.literal = state.matrix();
  return spec;
}

}  // namespace entgeo
