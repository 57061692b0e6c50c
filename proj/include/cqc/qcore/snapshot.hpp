#pragma once

// JSON snapshots of operators and states for debugging and for comparing
// against other implementations.
//
//   operator: {"kind": "sparse_hermitian", "dim": D,
//              "triplets": [[row, col, re, im], ...]}   rows/cols 0-based, CSR order
//   state:    {"kind": "state_vector", "dim": D,
//              "amplitudes": [[re, im], ...]}

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "cqc/qcore/sparse_hermitian.hpp"
#include "cqc/qcore/state_vector.hpp"

namespace cqc {

inline nlohmann::json to_json(const SparseHermitian& h) {
  nlohmann::json trip = nlohmann::json::array();
  for (const auto& t : h.triplets()) trip.push_back({t.row, t.col, t.value.real(), t.value.imag()});
  return {{"kind", "sparse_hermitian"}, {"dim", h.dim()}, {"triplets", std::move(trip)}};
}

inline nlohmann::json to_json(const StateVector& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : psi.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"kind", "state_vector"}, {"dim", psi.dim()}, {"amplitudes", std::move(amps)}};
}

inline SparseHermitian sparse_hermitian_from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string{}) != "sparse_hermitian") throw std::invalid_argument("snapshot is not a sparse_hermitian");
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<Triplet> t;
  for (const auto& e : j.at("triplets")) {
    if (!e.is_array() || e.size() != 4) throw std::invalid_argument("triplet must be [row, col, re, im]");
    t.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), complex{e[2].get<double>(), e[3].get<double>()}});
  }
  return SparseHermitian::from_triplets(dim, std::move(t));
}

inline StateVector state_vector_from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string{}) != "state_vector") throw std::invalid_argument("snapshot is not a state_vector");
  const auto dim = j.at("dim").get<std::size_t>();
  const auto& arr = j.at("amplitudes");
  if (arr.size() != dim) throw DimensionMismatch(dim, arr.size());
  Amplitudes a;
  a.reserve(dim);
  for (const auto& e : arr) a.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return StateVector::from_amplitudes(std::move(a));
}

}  // namespace cqc
