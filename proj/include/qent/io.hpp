#pragma once

// JSON and CSV serialisation of matrices, states, records and run outputs.
//
//   matrix: {"dim": n, "entries": [[re, im], ...]}   row-major, n*n pairs
//   state:  {"d1": n1, "d2": n2, "matrix": <matrix>}
//   record: {"inequality", "q", "lhs", "rhs", "slack", "pass", "context": {...}}

#include <json.hpp>

#include <chrono>
#include <string>

#include "qent/bipartite.hpp"
#include "qent/inequalities.hpp"
#include "qent/search.hpp"

namespace qent::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

json to_json(const Hermitian& m);
Hermitian matrix_from_json(const json& j);

json to_json(const BipartiteState& s);
/// Throws FormatError for structural problems and DomainError when the matrix
/// violates a density-matrix invariant (Hermitian, PSD, unit trace).
BipartiteState state_from_json(const json& j);

BipartiteState load_state(const std::string& path);
void save_state(const BipartiteState& s, const std::string& path);

json to_json(const VerificationRecord& r);

json to_json(const CampaignConfig& cfg);
json to_json(const CampaignSummary& s);

json to_json(const Counterexample& c);
Counterexample counterexample_from_json(const json& j);

/// {X, Y, Z, W, shift, traces, norms, min eigenvalues, holds} for a witness chain.
json to_json(const WitnessChain& c);

/// Provenance block attached to every run output.
struct RunManifest {
  std::string command;
  json config = json::object();
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::chrono::system_clock::time_point start{};
  std::chrono::system_clock::time_point end{};
  bool pass = false;
};

json to_json(const RunManifest& m);

/// %.17g formatting for CSV cells.
std::string format_number(double v);

}  // namespace qent::io
