#include "qent/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace qent {
namespace {

constexpr std::uint64_t kBlockSize = 1024;
constexpr double kNearEquality = 1e-6;

// Hill-climbing schedule for find_violation.
constexpr double kInitialMixing = 0.05;
constexpr int kRejectionsPerHalving = 10;
constexpr double kMinMixing = 1e-4;
constexpr std::uint64_t kMaxRefinementSteps = 100000;

// Seed stream for hill-climbing perturbations, disjoint from the trial stream.
constexpr std::uint64_t kPerturbationStream = 0x5bd1e9955bd1e995ULL;

bool needs_order_above_one(InequalityId id) {
  return id != InequalityId::kWeakMajorization;
}

template <typename Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t n = end - begin;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));
  if (threads <= 1) {
    for (std::uint64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{begin};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < end; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = end;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void validate(const CampaignConfig& cfg) {
  if (cfg.d1 < 1 || cfg.d2 < 1) throw ConfigError("dimensions d1, d2 must be >= 1");
  if (static_cast<std::size_t>(cfg.d1 * cfg.d2) > tol::kMaxDimension) {
    throw ConfigError("d1*d2 exceeds the dimension limit of " +
                      std::to_string(tol::kMaxDimension));
  }
  if (cfg.q_values.empty()) throw ConfigError("campaign needs at least one q value");
  if (cfg.trials < 1) throw ConfigError("campaign needs trials >= 1");
  if (cfg.inequalities.empty()) throw ConfigError("campaign needs at least one inequality");
  if (!(cfg.check.tol_pass >= 0.0)) throw ConfigError("tolerance must be non-negative");
  for (double q : cfg.q_values) {
    if (!std::isfinite(q) || !(q > 0.0)) throw ConfigError("q values must be positive and finite");
    for (auto id : cfg.inequalities) {
      if (needs_order_above_one(id) && !(q > 1.0)) {
        throw ConfigError(std::string(to_string(id)) +
                          " requires the q > 1 precondition; got q = " + std::to_string(q));
      }
    }
  }
  // Surfaces invalid measure parameters before any sampling happens.
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Induced>) {
          if (m.ancilla < 1) throw ConfigError("induced measure requires ancilla dimension >= 1");
        } else if constexpr (std::is_same_v<M, RankConstrained>) {
          if (m.rank < 1) throw ConfigError("rank-constrained measure requires rank >= 1");
        }
      },
      cfg.measure);
}

std::uint64_t CampaignSummary::total_violations() const {
  std::uint64_t n = 0;
  for (const auto& s : stats) {
    if (s.inequality != InequalityId::kWeakMajorization || s.q > 1.0) n += s.violation_count;
  }
  return n;
}

BipartiteState replay_trial(const CampaignConfig& cfg, std::uint64_t index) {
  return sample_state(cfg.d1, cfg.d2, cfg.measure, derive_seed(cfg.seed, index));
}

std::vector<VerificationRecord> evaluate_state(const AnalyzedState& s, const CampaignConfig& cfg) {
  std::vector<VerificationRecord> out;
  out.reserve(cfg.inequalities.size() * cfg.q_values.size());
  for (auto id : cfg.inequalities) {
    for (double qv : cfg.q_values) {
      const QExp q(qv);
      switch (id) {
        case InequalityId::kLemma: {
          const VectorD x = lq_normalise(s.rho1().spectrum().values(), q);
          const VectorD y = lq_normalise(s.rho2().spectrum().values(), q);
          out.push_back(make_record(id, qv, 1.0, lemma_sum(x, y, q), cfg.check));
          break;
        }
        case InequalityId::kCorollary: {
          const Hermitian x = s.rho1().matrix() / schatten_norm(s.rho1(), q);
          const Hermitian y = s.rho2().matrix() / schatten_norm(s.rho2(), q);
          out.push_back(corollary_check(x, y, q, cfg.check));
          break;
        }
        case InequalityId::kTheorem1:
          out.push_back(theorem1_check(s, q, cfg.theorem1_mode, cfg.check));
          break;
        case InequalityId::kTheorem2:
          out.push_back(theorem2_check(s, q, cfg.check));
          break;
        case InequalityId::kKyFanPower:
          out.push_back(kyfan_power_check(s, q, cfg.check));
          break;
        case InequalityId::kWeakMajorization:
          out.push_back(weak_majorization_check(majorization_pair(s, q), qv, cfg.check));
          break;
      }
    }
  }
  return out;
}

CampaignSummary run_campaign(const CampaignConfig& cfg, const TrialSink& sink) {
  validate(cfg);
  CampaignSummary summary{cfg, {}};
  for (auto id : cfg.inequalities) {
    for (double q : cfg.q_values) {
      SlackStats st;
      st.inequality = id;
      st.q = q;
      st.min_slack = std::numeric_limits<double>::infinity();
      st.max_slack = -std::numeric_limits<double>::infinity();
      summary.stats.push_back(st);
    }
  }
  std::vector<double> sums(summary.stats.size(), 0.0);

  std::vector<std::vector<VerificationRecord>> block;
  for (std::uint64_t start = 0; start < cfg.trials; start += kBlockSize) {
    const std::uint64_t stop = std::min(cfg.trials, start + kBlockSize);
    block.assign(stop - start, {});
    parallel_for(start, stop, cfg.threads, [&](std::uint64_t i) {
      const AnalyzedState s(replay_trial(cfg, i));
      block[i - start] = evaluate_state(s, cfg);
    });

    // Sequential reduction in trial order keeps the summary independent of threading.
    for (std::uint64_t i = start; i < stop; ++i) {
      auto& records = block[i - start];
      for (std::size_t k = 0; k < records.size(); ++k) {
        SlackStats& st = summary.stats[k];
        const double slack = records[k].slack;
        if (slack < st.min_slack) {
          st.min_slack = slack;
          st.argmin_trial = i;
          st.argmin_seed = derive_seed(cfg.seed, i);
        }
        st.max_slack = std::max(st.max_slack, slack);
        sums[k] += slack;
        ++st.count;
        if (slack < -cfg.check.tol_pass) ++st.violation_count;
      }
      if (sink) {
        for (auto& r : records) {
          r.context["trial"] = std::to_string(i);
          r.context["seed"] = std::to_string(derive_seed(cfg.seed, i));
        }
        sink(i, records);
      }
    }
  }
  for (std::size_t k = 0; k < summary.stats.size(); ++k) {
    summary.stats[k].mean_slack = sums[k] / static_cast<double>(summary.stats[k].count);
  }
  return summary;
}

// q < 1 searches ----------------------------------------------------------------

std::string_view to_string(Direction d) {
  return d == Direction::kSubadditivityViolated ? "subadditivity-violated"
                                                : "superadditivity-violated";
}

Direction parse_direction(std::string_view name) {
  if (name == "subadditivity-violated" || name == "sub") return Direction::kSubadditivityViolated;
  if (name == "superadditivity-violated" || name == "super") {
    return Direction::kSuperadditivityViolated;
  }
  throw ConfigError("unknown direction '" + std::string(name) +
                    "' (expected subadditivity-violated or superadditivity-violated)");
}

double direction_slack(const AnalyzedState& s, const QExp& q, Direction direction) {
  const double sub = q_entropy(s.rho1(), q) + q_entropy(s.rho2(), q) - q_entropy(s.rho(), q);
  return direction == Direction::kSubadditivityViolated ? sub : -sub;
}

SearchResult find_violation(const QExp& q, Direction direction, Eigen::Index d1,
                            Eigen::Index d2, std::uint64_t budget, std::uint64_t seed) {
  if (!(q.value() > 0.0 && q.value() < 1.0)) {
    throw DomainError("find_violation requires 0 < q < 1");
  }
  if (d1 < 1 || d2 < 1) throw ConfigError("dimensions d1, d2 must be >= 1");
  static const std::array<SamplingMeasure, 4> measures{HilbertSchmidt{}, HaarPure{},
                                                       RankConstrained{2}, SpectrumDirichlet{}};

  SearchResult result;
  result.best_slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    AnalyzedState s(sample_state(d1, d2, measures[trial % measures.size()],
                                 derive_seed(seed, trial)));
    double slack = direction_slack(s, q, direction);
    ++result.evaluated;
    result.best_slack = std::min(result.best_slack, slack);
    if (!(slack < -tol::kPass)) continue;

    // Refine: convex mixtures stay on the state manifold.
    Rng rng(derive_seed(seed ^ kPerturbationStream, trial));
    double eps = kInitialMixing;
    int rejections = 0;
    std::uint64_t steps = 0;
    while (eps >= kMinMixing && steps < kMaxRefinementSteps) {
      ++steps;
      const DensityMatrix sigma = sample_density(d1 * d2, HilbertSchmidt{}, rng);
      const Hermitian mixed = (1.0 - eps) * s.rho().matrix() + eps * sigma.matrix();
      AnalyzedState candidate(BipartiteState(DensityMatrix::repaired(mixed), d1, d2));
      const double cand_slack = direction_slack(candidate, q, direction);
      ++result.evaluated;
      if (cand_slack < slack) {
        s = std::move(candidate);
        slack = cand_slack;
        rejections = 0;
      } else if (++rejections >= kRejectionsPerHalving) {
        eps *= 0.5;
        rejections = 0;
      }
    }
    result.best_slack = std::min(result.best_slack, slack);
    result.counterexample = Counterexample{s.state(), q.value(), direction, slack, trial, steps};
    return result;
  }
  return result;
}

std::vector<EqualityCandidate> equality_probe(const QExp& q, Eigen::Index d1, Eigen::Index d2,
                                              std::uint64_t budget, std::uint64_t seed) {
  if (!(q.value() > 1.0)) throw DomainError("equality_probe requires the q > 1 precondition");
  if (d1 < 1 || d2 < 1) throw ConfigError("dimensions d1, d2 must be >= 1");

  std::vector<EqualityCandidate> out;
  auto consider = [&](BipartiteState st, std::string origin, bool always) {
    const double slack = theorem1_check(st, q, Theorem1Mode::kDirect).slack;
    if (always || std::abs(slack) <= kNearEquality) {
      out.push_back({std::move(st), slack, std::move(origin)});
    }
  };

  auto basis_state = [](Eigen::Index d) {
    CVectorD e = CVectorD::Zero(d);
    e[0] = 1.0;
    return DensityMatrix::pure(e);
  };
  consider(product_state(basis_state(d1), DensityMatrix::maximally_mixed(d2)), "constructed",
           true);
  consider(product_state(DensityMatrix::maximally_mixed(d1), basis_state(d2)), "constructed",
           true);

  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    Rng rng(derive_seed(seed, trial));
    BipartiteState st = [&] {
      switch (trial % 3) {
        case 0:
          return BipartiteState(sample_density(d1 * d2, HilbertSchmidt{}, rng), d1, d2);
        case 1: {
          const auto a = sample_density(d1, HaarPure{}, rng);
          return product_state(a, sample_density(d2, HilbertSchmidt{}, rng));
        }
        default: {
          const auto a = sample_density(d1, HilbertSchmidt{}, rng);
          return product_state(a, sample_density(d2, HaarPure{}, rng));
        }
      }
    }();
    consider(std::move(st), "sampled:" + std::to_string(trial), false);
  }
  return out;
}

}  // namespace qent
