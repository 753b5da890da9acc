#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#include <omp.h>

#include "pgibbs/sampler.hpp"

namespace pgibbs {

struct BatchResult {
  std::vector<Configuration> samples;
  // Stats of the completed run of each trial.
  std::vector<RunStats> stats;
  // Runs started per trial (more than 1 when max_iterations interrupted it).
  std::vector<std::uint32_t> attempts;
};

// Calls body(i, worker) for every i in [0, n). Each thread builds one worker
// with make_worker(); trials are independent, so the outcome does not
// depend on the thread count. jobs <= 0 uses the OpenMP default.
template <class MakeWorker, class Body>
void parallel_trials(std::size_t n, int jobs, MakeWorker make_worker, Body body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    try {
      auto worker = make_worker();
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        bool skip;
        {
          std::lock_guard lock(failure_mutex);
          skip = failure != nullptr;
        }
        if (skip) continue;
        try {
          body(static_cast<std::size_t>(i), worker);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <class MakeWorker, class Body>
void serial_trials(std::size_t n, MakeWorker make_worker, Body body) {
  auto worker = make_worker();
  for (std::size_t i = 0; i < n; ++i) body(i, worker);
}

// Trial i runs with Rng(derive_seed(cfg.seed, i)) and is restarted on the
// same generator until a run completes.
template <class S>
BatchResult sample_batch(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials, int jobs = 0);

// Single-threaded version of sample_batch; identical output.
template <class S>
BatchResult sample_batch_serial(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials);

}  // namespace pgibbs
