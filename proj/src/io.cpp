#include "qent/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace qent::io {
namespace {

template <typename T>
T required(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("malformed ") + what + " JSON: missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("malformed ") + what + " JSON: key '" + key +
                      "' has the wrong type");
  }
}

std::string iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json measure_json(const SamplingMeasure& m) { return to_string(m); }

}  // namespace

json to_json(const Hermitian& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i)
    for (Eigen::Index j = 0; j < m.dim(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.dim()}, {"entries", std::move(entries)}};
}

Hermitian matrix_from_json(const json& j) {
  const auto dim = required<long long>(j, "dim", "matrix");
  if (dim < 1) throw FormatError("malformed matrix JSON: dim must be >= 1");
  if (static_cast<std::size_t>(dim) > tol::kMaxDimension) {
    throw FormatError("matrix JSON: dim exceeds the limit of " +
                      std::to_string(tol::kMaxDimension));
  }
  if (!j.contains("entries")) throw FormatError("malformed matrix JSON: missing key 'entries'");
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw FormatError("malformed matrix JSON: 'entries' must hold dim*dim = " +
                      std::to_string(dim * dim) + " [re, im] pairs");
  }
  CMatrixD m(dim, dim);
  for (long long k = 0; k < dim * dim; ++k) {
    const json& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw FormatError("malformed matrix JSON: entry " + std::to_string(k) +
                        " is not a [re, im] pair");
    }
    m(k / dim, k % dim) = {e[0].get<double>(), e[1].get<double>()};
  }
  return Hermitian(std::move(m));
}

json to_json(const BipartiteState& s) {
  return {{"d1", s.d1()}, {"d2", s.d2()}, {"matrix", to_json(s.rho().matrix())}};
}

BipartiteState state_from_json(const json& j) {
  const auto d1 = required<long long>(j, "d1", "state");
  const auto d2 = required<long long>(j, "d2", "state");
  if (!j.contains("matrix")) throw FormatError("malformed state JSON: missing key 'matrix'");
  if (d1 < 1 || d2 < 1) throw FormatError("malformed state JSON: d1 and d2 must be >= 1");
  Hermitian m = matrix_from_json(j.at("matrix"));
  return BipartiteState(DensityMatrix(std::move(m)), d1, d2);
}

BipartiteState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError("state file '" + path + "' is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

void save_state(const BipartiteState& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write state file '" + path + "'");
  out << to_json(s).dump(2) << '\n';
}

json to_json(const VerificationRecord& r) {
  json context = json::object();
  for (const auto& [k, v] : r.context) context[k] = v;
  for (const auto& [k, v] : r.metrics) context[k] = v;
  return {{"inequality", std::string(to_string(r.inequality))},
          {"q", r.q},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"slack", r.slack},
          {"pass", r.pass},
          {"context", std::move(context)}};
}

json to_json(const CampaignConfig& cfg) {
  json ids = json::array();
  for (auto id : cfg.inequalities) ids.push_back(std::string(to_string(id)));
  return {{"d1", cfg.d1},
          {"d2", cfg.d2},
          {"q", cfg.q_values},
          {"measure", measure_json(cfg.measure)},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"inequalities", std::move(ids)},
          {"theorem1_mode",
           cfg.theorem1_mode == Theorem1Mode::kDirect ? "direct" : "constructive"},
          {"tolerance", cfg.check.tol_pass}};
}

json to_json(const CampaignSummary& s) {
  json cells = json::array();
  for (const auto& st : s.stats) {
    cells.push_back({{"inequality", std::string(to_string(st.inequality))},
                     {"q", st.q},
                     {"min_slack", st.min_slack},
                     {"max_slack", st.max_slack},
                     {"mean_slack", st.mean_slack},
                     {"count", st.count},
                     {"violation_count", st.violation_count},
                     {"argmin", {{"trial", st.argmin_trial}, {"seed", st.argmin_seed}}}});
  }
  return {{"config", to_json(s.config)},
          {"stats", std::move(cells)},
          {"total_violations", s.total_violations()}};
}

json to_json(const Counterexample& c) {
  return {{"q", c.q},
          {"direction", std::string(to_string(c.direction))},
          {"slack", c.slack},
          {"trial", c.trial},
          {"refinement_steps", c.refinement_steps},
          {"state", to_json(c.state)}};
}

Counterexample counterexample_from_json(const json& j) {
  if (!j.contains("state")) throw FormatError("malformed counterexample JSON: missing 'state'");
  return Counterexample{state_from_json(j.at("state")),
                        required<double>(j, "q", "counterexample"),
                        parse_direction(required<std::string>(j, "direction", "counterexample")),
                        required<double>(j, "slack", "counterexample"),
                        j.value("trial", std::uint64_t{0}),
                        j.value("refinement_steps", std::uint64_t{0})};
}

json to_json(const WitnessChain& c) {
  return {{"order", c.order},
          {"witness_order", c.witness_order},
          {"X", to_json(c.x)},
          {"Y", to_json(c.y)},
          {"Z", to_json(c.z.z)},
          {"W", to_json(c.z.w)},
          {"shift", c.z.shift},
          {"traces",
           {{"trace_z_rho", c.trace_z_rho},
            {"trace_x_rho2", c.trace_x_rho2},
            {"trace_y_rho1", c.trace_y_rho1}}},
          {"norms",
           {{"rho", c.norm_rho},
            {"rho1", c.norm_rho1},
            {"rho2", c.norm_rho2},
            {"X", c.norm_x},
            {"Y", c.norm_y},
            {"Z", c.norm_z}}},
          {"min_eigenvalues", {{"Z", c.min_eig_z}, {"Z_minus_W", c.min_eig_z_minus_w}}},
          {"holds", c.holds()}};
}

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"version", m.version},
          {"seed", m.seed},
          {"start", iso8601(m.start)},
          {"end", iso8601(m.end)},
          {"pass", m.pass}};
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qent::io
