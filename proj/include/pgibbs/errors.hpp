#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgibbs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graphs, instances, updates and command-line input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnknownVertex : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DuplicateEdge : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class SelfLoop : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class EmptyEdgeSet : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DegenerateTorus : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class HardConstraintRejected : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class OutcomeMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class TooFewSamples : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class EnumerationCapExceeded : public Error {
 public:
  EnumerationCapExceeded(std::string what, std::uint64_t cap)
      : Error(std::move(what)), cap_(cap) {}
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

class ZeroPartition : public Error {
 public:
  using Error::Error;
};

// Conditioning produced Z^sigma = 0: the instance is not permissive.
class ZeroConditionalPartition : public ZeroPartition {
 public:
  using ZeroPartition::ZeroPartition;
};

class InfeasibleGreedyStep : public Error {
 public:
  InfeasibleGreedyStep(std::uint32_t vertex)
      : Error("no admissible spin for vertex " + std::to_string(vertex) +
              " during greedy construction (instance not permissive)"),
        vertex_(vertex) {}
  std::uint32_t vertex() const noexcept { return vertex_; }

 private:
  std::uint32_t vertex_;
};

// Upper bound on the number of states any exhaustive enumeration may visit.
struct EnumerationCap {
  std::uint64_t states = std::uint64_t{1} << 24;

  // Default cap, overridden by the PERFECT_GIBBS_CAP environment variable.
  static EnumerationCap from_env();
};

// base^exponent, or EnumerationCapExceeded when it exceeds the cap.
std::uint64_t checked_state_count(std::uint64_t base, std::size_t exponent,
                                  const EnumerationCap& cap,
                                  const char* context);

}  // namespace pgibbs
