// Copyright 2026 The qmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qmono/channels.hpp"
#include "qmono/states.hpp"

namespace qmono {

using Json = nlohmann::ordered_json;

/// A state file holds either a pure or a mixed state.
using AnyState = std::variant<PureState, DensityOperator>;

namespace io {

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error("json: complex entries must be [re, im] pairs");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error("json: matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw Error("json: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
  }
  return m;
}

inline Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error("json: vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j.at(i));
  return v;
}

inline Json state_to_json(const PureState& psi) {
  return Json{{"dims", psi.dims().sizes()}, {"kind", "pure"}, {"vector", vector_to_json(psi.amplitudes())}};
}

inline Json state_to_json(const DensityOperator& rho) {
  return Json{{"dims", rho.dims().sizes()}, {"kind", "mixed"}, {"matrix", matrix_to_json(rho.matrix())}};
}

inline Json state_to_json(const AnyState& s) {
  return std::visit([](const auto& v) { return state_to_json(v); }, s);
}

/// Parses and validates a state object; failures name the violated invariant.
inline AnyState state_from_json(const Json& j) {
  if (!j.is_object()) throw Error("state file: expected a JSON object");
  if (!j.contains("dims") || !j.contains("kind")) throw Error("state file: missing \"dims\" or \"kind\"");
  Dims dims(j.at("dims").get<std::vector<int>>());
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "pure") {
    if (!j.contains("vector")) throw Error("state file: pure state needs \"vector\"");
    return PureState(vector_from_json(j.at("vector")), dims);
  }
  if (kind == "mixed") {
    if (!j.contains("matrix")) throw Error("state file: mixed state needs \"matrix\"");
    return DensityOperator(matrix_from_json(j.at("matrix")), dims);
  }
  throw Error("state file: kind must be \"pure\" or \"mixed\"");
}

inline DensityOperator as_density(const AnyState& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return p->density();
  return std::get<DensityOperator>(s);
}

inline Json channel_to_json(const QubitChannel& ch) {
  if (ch.kraus()) {
    Json ks = Json::array();
    for (const auto& k : *ch.kraus()) ks.push_back(matrix_to_json(k));
    return Json{{"kraus", std::move(ks)}};
  }
  Json linear = Json::array();
  for (int r = 0; r < 3; ++r) linear.push_back({ch.linear()(r, 0), ch.linear()(r, 1), ch.linear()(r, 2)});
  return Json{{"bloch", {{"L", std::move(linear)}, {"l", {ch.offset()(0), ch.offset()(1), ch.offset()(2)}}}}};
}

inline QubitChannel channel_from_json(const Json& j) {
  if (!j.is_object()) throw Error("channel file: expected a JSON object");
  if (j.contains("kraus")) {
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
    return from_kraus(std::move(kraus));
  }
  if (j.contains("bloch")) {
    const auto& b = j.at("bloch");
    Matrix3 linear;
    Vector3 offset;
    const auto& lj = b.at("L");
    if (lj.size() != 3) throw Error("channel file: L must be 3x3");
    for (int r = 0; r < 3; ++r) {
      if (lj.at(r).size() != 3) throw Error("channel file: L must be 3x3");
      for (int c = 0; c < 3; ++c) linear(r, c) = complex_from_json(lj.at(r).at(c)).real();
    }
    if (b.at("l").size() != 3) throw Error("channel file: l must have 3 entries");
    for (int r = 0; r < 3; ++r) offset(r) = complex_from_json(b.at("l").at(r)).real();
    return {linear, offset};
  }
  throw Error("channel file: expected \"kraus\" or \"bloch\"");
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

inline AnyState read_state_file(const std::filesystem::path& path) {
  try {
    return state_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("state file " + path.string() + ": " + e.what());
  }
}

inline QubitChannel read_channel_file(const std::filesystem::path& path) {
  try {
    return channel_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("channel file " + path.string() + ": " + e.what());
  }
}

}  // namespace io
}  // namespace qmono
