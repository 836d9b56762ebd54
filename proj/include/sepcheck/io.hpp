#pragma once

// Text formats shared with the command-line tool.
//
// State file:      {"dims": [dA, dB], "matrix": [[re, im], ...]}   row-major, (dA dB)^2 entries
//              or  {"dims": [dA, dB], "vector": [[re, im], ...]}   dA dB amplitudes
// Candidate file:  {"weights": [...], "bloch_a": [[x,y,z],...], "bloch_b": [[x,y,z],...]}

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "sepcheck/decomposition.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck {

struct LoadedState {
  DensityMatrix rho;
  std::optional<PureState> pure;  // set when the file carried a vector
};

namespace detail {

using nlohmann::json;

/// Offset of `"key"` in the raw text, used to point diagnostics at a field.
inline std::size_t key_offset(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const std::size_t pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : pos;
}

inline json parse_document(std::string_view text) {
  try {
    json doc = json::parse(text.begin(), text.end());  // rejects trailing data
    if (!doc.is_object()) throw ParseError(0, "top-level value must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, e.what());
  } catch (const json::exception& e) {
    // Numeric overflow such as 1e999 lands here.
    throw ParseError(0, e.what());
  }
}

inline void reject_unknown_keys(const json& doc, std::string_view text,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(key_offset(text, key), "unknown field \"" + key + "\"");
  }
}

inline double finite_number(const json& v, std::size_t offset, const std::string& where) {
  if (!v.is_number()) throw ParseError(offset, where + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(offset, where + " is not finite");
  return d;
}

inline std::vector<Complex> complex_list(const json& doc, std::string_view text, const std::string& key) {
  const std::size_t at = key_offset(text, key);
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(at, "\"" + key + "\" must be an array");
  std::vector<Complex> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& pair = arr[i];
    const std::string where = key + "[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) throw ParseError(at, where + " must be a [re, im] pair");
    out.emplace_back(finite_number(pair[0], at, where + ".re"), finite_number(pair[1], at, where + ".im"));
  }
  return out;
}

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

}  // namespace detail

inline LoadedState parse_state(std::string_view text, double tol = kTol) {
  using detail::json;
  const json doc = detail::parse_document(text);
  detail::reject_unknown_keys(doc, text, {"dims", "matrix", "vector"});
  if (!doc.contains("dims")) throw ParseError(0, "missing \"dims\"");
  const std::size_t dims_at = detail::key_offset(text, "dims");
  const json& jd = doc.at("dims");
  if (!jd.is_array() || jd.size() != 2 || !jd[0].is_number_integer() || !jd[1].is_number_integer()) {
    throw ParseError(dims_at, "\"dims\" must be [dA, dB] integers");
  }
  const BipartiteDims dims{jd[0].get<int>(), jd[1].get<int>()};
  if (dims.dA < 2 || dims.dB < 2 || dims.dA > 8 || dims.dB > 8) {
    throw ParseError(dims_at, "\"dims\" entries must lie in [2, 8]");
  }
  const bool has_matrix = doc.contains("matrix"), has_vector = doc.contains("vector");
  if (has_matrix == has_vector) throw ParseError(0, "exactly one of \"matrix\" or \"vector\" is required");

  const int n = dims.total();
  if (has_vector) {
    const auto values = detail::complex_list(doc, text, "vector");
    if (static_cast<int>(values.size()) != n) {
      throw ParseError(detail::key_offset(text, "vector"), "\"vector\" needs " + std::to_string(n) + " entries, got " +
                                                               std::to_string(values.size()));
    }
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = values[i];
    PureState psi = make_pure_state(v, dims, tol);
    // A loose caller tolerance can admit a norm the density check would reject.
    if (std::abs(v.norm() - 1.0) > kTol) psi = normalized_pure_state(v, dims);
    return {pure_to_density(psi), psi};
  }
  const auto values = detail::complex_list(doc, text, "matrix");
  if (static_cast<int>(values.size()) != n * n) {
    throw ParseError(detail::key_offset(text, "matrix"), "\"matrix\" needs " + std::to_string(n * n) +
                                                             " entries, got " + std::to_string(values.size()));
  }
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = values[static_cast<std::size_t>(i * n + j)];
  return {validate_density(m, dims, tol), std::nullopt};
}

inline std::string serialize_state(const DensityMatrix& rho) {
  using detail::json;
  json arr = json::array();
  const CMat& m = rho.mat();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(detail::complex_json(m(i, j)));
  json doc{{"dims", {rho.dims().dA, rho.dims().dB}}, {"matrix", arr}};
  return doc.dump() + "\n";
}

inline std::string serialize_state(const PureState& psi) {
  using detail::json;
  json arr = json::array();
  for (Eigen::Index i = 0; i < psi.vec().size(); ++i) arr.push_back(detail::complex_json(psi.vec()(i)));
  json doc{{"dims", {psi.dims().dA, psi.dims().dB}}, {"vector", arr}};
  return doc.dump() + "\n";
}

inline std::string serialize_candidate(const LiQiaoCandidate& cand) {
  using detail::json;
  json a = json::array(), b = json::array();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    a.push_back({cand.bloch_a[i](0), cand.bloch_a[i](1), cand.bloch_a[i](2)});
    b.push_back({cand.bloch_b[i](0), cand.bloch_b[i](1), cand.bloch_b[i](2)});
  }
  json doc{{"weights", cand.weights}, {"bloch_a", a}, {"bloch_b", b}};
  return doc.dump(2) + "\n";
}

inline LiQiaoCandidate parse_candidate(std::string_view text) {
  using detail::json;
  const json doc = detail::parse_document(text);
  detail::reject_unknown_keys(doc, text, {"weights", "bloch_a", "bloch_b"});
  for (const char* key : {"weights", "bloch_a", "bloch_b"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
      throw ParseError(detail::key_offset(text, key), std::string("\"") + key + "\" must be an array");
    }
  }
  LiQiaoCandidate cand;
  const std::size_t w_at = detail::key_offset(text, "weights");
  for (std::size_t i = 0; i < doc.at("weights").size(); ++i) {
    cand.weights.push_back(detail::finite_number(doc.at("weights")[i], w_at, "weights[" + std::to_string(i) + "]"));
  }
  const auto vectors = [&](const char* key, std::vector<Eigen::Vector3d>& out) {
    const std::size_t at = detail::key_offset(text, key);
    const json& arr = doc.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 3) throw ParseError(at, where + " must have 3 components");
      out.emplace_back(detail::finite_number(arr[i][0], at, where), detail::finite_number(arr[i][1], at, where),
                       detail::finite_number(arr[i][2], at, where));
    }
  };
  vectors("bloch_a", cand.bloch_a);
  vectors("bloch_b", cand.bloch_b);
  return cand;
}

}  // namespace sepcheck
