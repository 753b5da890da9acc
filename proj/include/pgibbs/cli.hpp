#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgibbs/sampler.hpp"
#include "pgibbs/spin_system.hpp"

namespace pgibbs::cli {

enum ExitCode : int { kOk = 0, kStatisticalFail = 1, kResource = 2, kUsage = 3 };

// Draws `trials` samples of `sys` (f64 mode). Replaces sample_batch in
// `verify`, so a broken sampler can be checked against the harness.
using BatchSampler =
    std::function<std::vector<Configuration>(const SpinSystem& sys, const SamplerConfig& cfg, std::size_t trials, int jobs)>;

struct Hooks {
  BatchSampler sampler;
};

// Runs one command line (without the program name). Primary output goes to
// `out`; diagnostics go to `err` as single lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace pgibbs::cli
