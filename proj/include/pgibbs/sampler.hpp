#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pgibbs/block.hpp"
#include "pgibbs/graph.hpp"
#include "pgibbs/random.hpp"
#include "pgibbs/spin_system.hpp"
#include "pgibbs/vertex_set.hpp"

namespace pgibbs {

enum class FilterMode { MuMin, MuLow };

struct SamplerConfig {
  unsigned ell = 1;
  FilterMode filter = FilterMode::MuMin;
  // Abort a run after this many steps (Interrupted result).
  std::optional<std::uint64_t> max_iterations;
  std::uint64_t seed = 0;
  // Free boundary spin used by MuLow.
  Spin reference_spin = 0;
  bool record_trace = false;
  // Cache mu_min values by canonical local environment.
  bool memoize = true;
  std::size_t memo_limit = std::size_t{1} << 20;
  EnumerationCap cap;
};

struct RunStats {
  std::uint64_t iterations = 0;
  std::uint64_t filter_successes = 0;
  std::uint64_t filter_failures = 0;
  // Total |boundary(B) \ R| added on failures.
  std::uint64_t boundary_added = 0;
  // Float filter probabilities above 1 + 1e-12 (clamped to 1).
  std::uint64_t filter_overflows = 0;
  // Resampled blocks that left a zero-weight factor behind.
  std::uint64_t feasibility_violations = 0;
  double wall_ms = 0.0;
  // |R| after each step, when SamplerConfig::record_trace is set.
  std::vector<std::uint32_t> r_trace;
};

struct RepairState {
  Configuration x;
  VertexSet r;
  RunStats stats;
};

template <class S>
struct StepRecord {
  Vertex u = 0;
  S mu_min = 0;    // filter numerator (mu_min or mu_low)
  S marginal = 0;  // mu_u^{X_boundary}(X_u)
  S probability = 0;
  bool accepted = false;
  std::size_t added = 0;
};

struct Completed {
  Configuration sample;
  RunStats stats;
};

// The run hit max_iterations. Carries no configuration: the intermediate X
// is not a sample.
struct Interrupted {
  RunStats stats;
};

using RunResult = std::variant<Completed, Interrupted>;

/// Block Gibbs sampler with a Bayes filter. One instance holds scratch
/// space and the mu_min cache; it is not thread-safe, but many instances
/// may share one SpinSystemT.
template <class S>
class PerfectSampler {
 public:
  // Throws HardConstraintRejected for ell = 0 on a system with zero weights.
  PerfectSampler(const SpinSystemT<S>& sys, SamplerConfig cfg);
  PerfectSampler(SpinSystemT<S>&&, SamplerConfig) = delete;

  const SpinSystemT<S>& system() const noexcept { return *sys_; }
  const SamplerConfig& config() const noexcept { return cfg_; }

  // X = greedy_feasible, R = V.
  RepairState init() const;
  // Arbitrary starting point (used by dynamic repair and tests).
  RepairState make_state(Configuration x, std::span<const Vertex> r) const;

  StepRecord<S> step(RepairState& state, Rng& rng);

  // Steps until R is empty or max_iterations steps were taken.
  RunResult resume(RepairState& state, Rng& rng);
  RunResult run(Rng& rng);
  RunResult run();

  // Block and boundary of the most recent step.
  std::span<const Vertex> last_block() const noexcept { return engine_.block(); }
  std::span<const Vertex> last_boundary() const noexcept { return engine_.boundary(); }

  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
  };

  S filter_numerator(const RepairState& state, Vertex u);
  bool locally_feasible(std::span<const Spin> x) const;

  const SpinSystemT<S>* sys_;
  SamplerConfig cfg_;
  Neighborhood nb_;
  BlockEngine<S> engine_;
  std::vector<Spin> boundary_spins_;
  std::vector<Spin> relabeled_;
  std::vector<Spin> block_spins_;
  std::vector<Vertex> sphere_;
  std::vector<std::uint32_t> key_;
  std::unordered_map<std::vector<std::uint32_t>, S, KeyHash> memo_;
};

// Single-site sampler for soft systems (block radius 0).
// Throws HardConstraintRejected if any weight is zero.
template <class S>
RunResult run_single_site(const SpinSystemT<S>& sys, std::uint64_t seed);

}  // namespace pgibbs
