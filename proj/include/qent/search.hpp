#pragma once

// Monte Carlo verification campaigns over random bipartite states, and
// counterexample search for q-entropy (sub/super)additivity when q < 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qent/bipartite.hpp"
#include "qent/inequalities.hpp"

namespace qent {

struct CampaignConfig {
  Eigen::Index d1 = 2;
  Eigen::Index d2 = 2;
  std::vector<double> q_values{2.0};
  SamplingMeasure measure = HilbertSchmidt{};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<InequalityId> inequalities{InequalityId::kTheorem1, InequalityId::kTheorem2};
  Theorem1Mode theorem1_mode = Theorem1Mode::kDirect;
  CheckOptions check{};
  // Worker threads; 0 selects std::thread::hardware_concurrency(). Results do
  // not depend on this value.
  unsigned threads = 1;
};

/// Throws ConfigError for empty q lists, q <= 1, zero trials or bad dimensions.
void validate(const CampaignConfig& cfg);

/// Slack statistics of one (inequality, q) cell of a campaign.
struct SlackStats {
  InequalityId inequality = InequalityId::kTheorem1;
  double q = 0.0;
  double min_slack = 0.0;
  double max_slack = 0.0;
  double mean_slack = 0.0;
  std::uint64_t count = 0;
  std::uint64_t violation_count = 0;
  // The state attaining min_slack is sample_state(d1, d2, measure, argmin_seed),
  // with argmin_seed = derive_seed(campaign seed, argmin_trial).
  std::uint64_t argmin_trial = 0;
  std::uint64_t argmin_seed = 0;

  friend bool operator==(const SlackStats&, const SlackStats&) = default;
};

struct CampaignSummary {
  CampaignConfig config;
  std::vector<SlackStats> stats;  // ordered by inequality, then q

  std::uint64_t total_violations() const;
  bool all_pass() const { return total_violations() == 0; }
};

/// Receives each trial's records in trial-index order.
using TrialSink = std::function<void(std::uint64_t trial, const std::vector<VerificationRecord>&)>;

CampaignSummary run_campaign(const CampaignConfig& cfg, const TrialSink& sink = {});

/// The state evaluated in trial `index` of the campaign.
BipartiteState replay_trial(const CampaignConfig& cfg, std::uint64_t index);

/// Records for one state under every (inequality, q) of the config. Lemma and
/// corollary instances are built from the q-normalised reductions.
std::vector<VerificationRecord> evaluate_state(const AnalyzedState& s, const CampaignConfig& cfg);

// q < 1 searches --------------------------------------------------------------

enum class Direction { kSubadditivityViolated, kSuperadditivityViolated };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view name);

/// Signed slack of the inequality that `direction` names as violated:
/// subadditivity S_q(rho1) + S_q(rho2) - S_q(rho), or superadditivity
/// S_q(rho) - S_q(rho1) - S_q(rho2). Negative means violated.
double direction_slack(const AnalyzedState& s, const QExp& q, Direction direction);

struct Counterexample {
  BipartiteState state;
  double q = 0.0;
  Direction direction = Direction::kSubadditivityViolated;
  double slack = 0.0;
  std::uint64_t trial = 0;          // index of the sampled seed state
  std::uint64_t refinement_steps = 0;
};

struct SearchResult {
  std::optional<Counterexample> counterexample;
  // Most negative direction slack seen (the best candidate when not found).
  double best_slack = 0.0;
  std::uint64_t evaluated = 0;
};

/// Samples up to `budget` states (cycling through the Hilbert-Schmidt,
/// Haar-pure, rank-2 and Dirichlet-spectrum measures) until one violates the
/// requested direction by more than 1e-9, then hill-climbs on the violation
/// magnitude with convex mixtures rho <- (1 - eps) rho + eps sigma.
/// Requires 0 < q < 1. An exhausted budget is a normal result, not an error.
SearchResult find_violation(const QExp& q, Direction direction, Eigen::Index d1,
                            Eigen::Index d2, std::uint64_t budget, std::uint64_t seed);

struct EqualityCandidate {
  BipartiteState state;
  double slack = 0.0;
  std::string origin;  // "constructed" or "sampled:<trial>"
};

/// States with |theorem1 slack| <= 1e-6. Always contains the constructed
/// pure (x) maximally-mixed and maximally-mixed (x) pure product states.
std::vector<EqualityCandidate> equality_probe(const QExp& q, Eigen::Index d1, Eigen::Index d2,
                                              std::uint64_t budget, std::uint64_t seed);

}  // namespace qent
