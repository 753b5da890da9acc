#include "pgibbs/batch.hpp"

namespace pgibbs {

namespace {

template <class S>
void run_trial(PerfectSampler<S>& sampler, std::size_t i, BatchResult& out) {
  Rng rng(derive_seed(sampler.config().seed, i));
  std::uint32_t attempts = 0;
  for (;;) {
    ++attempts;
    RunResult result = sampler.run(rng);
    if (auto* done = std::get_if<Completed>(&result)) {
      out.samples[i] = std::move(done->sample);
      out.stats[i] = std::move(done->stats);
      out.attempts[i] = attempts;
      return;
    }
  }
}

BatchResult sized(std::size_t trials) {
  BatchResult out;
  out.samples.resize(trials);
  out.stats.resize(trials);
  out.attempts.resize(trials);
  return out;
}

}  // namespace

template <class S>
BatchResult sample_batch(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials, int jobs) {
  BatchResult out = sized(trials);
  parallel_trials(
      trials, jobs, [&] { return PerfectSampler<S>(sys, cfg); },
      [&](std::size_t i, PerfectSampler<S>& sampler) { run_trial(sampler, i, out); });
  return out;
}

template <class S>
BatchResult sample_batch_serial(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials) {
  BatchResult out = sized(trials);
  serial_trials(
      trials, [&] { return PerfectSampler<S>(sys, cfg); },
      [&](std::size_t i, PerfectSampler<S>& sampler) { run_trial(sampler, i, out); });
  return out;
}

template BatchResult sample_batch(const SpinSystemT<double>&, const SamplerConfig&, std::size_t, int);
template BatchResult sample_batch(const SpinSystemT<Rational>&, const SamplerConfig&, std::size_t, int);
template BatchResult sample_batch_serial(const SpinSystemT<double>&, const SamplerConfig&, std::size_t);
template BatchResult sample_batch_serial(const SpinSystemT<Rational>&, const SamplerConfig&, std::size_t);

}  // namespace pgibbs
