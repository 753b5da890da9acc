#include "pgibbs/errors.hpp"

#include <cstdlib>
#include <string>

namespace pgibbs {

EnumerationCap EnumerationCap::from_env() {
  EnumerationCap cap;
  if (const char* env = std::getenv("PERFECT_GIBBS_CAP")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || value == 0) {
      throw InvalidInput(std::string("PERFECT_GIBBS_CAP is not a positive integer: ") + env);
    }
    cap.states = value;
  }
  return cap;
}

std::uint64_t checked_state_count(std::uint64_t base, std::size_t exponent,
                                  const EnumerationCap& cap, const char* context) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && count > cap.states / base) {
      throw EnumerationCapExceeded(std::string(context) + ": " + std::to_string(base) + "^" +
                                       std::to_string(exponent) +
                                       " states exceed the enumeration cap of " +
                                       std::to_string(cap.states),
                                   cap.states);
    }
    count *= base;
  }
  if (count > cap.states) {
    throw EnumerationCapExceeded(std::string(context) + ": state count exceeds the enumeration cap",
                                 cap.states);
  }
  return count;
}

}  // namespace pgibbs
