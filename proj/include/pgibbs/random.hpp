#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include <boost/multiprecision/gmp.hpp>

#include "pgibbs/scalar.hpp"

namespace pgibbs {

/// Seeded 64-bit generator. Every random decision in the library draws from
/// an Rng passed in by the caller, so a run is reproducible from its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bit() {
    if (bits_left_ == 0) {
      bit_buffer_ = engine_();
      bits_left_ = 64;
    }
    const bool b = (bit_buffer_ >> 63) != 0;
    bit_buffer_ <<= 1;
    --bits_left_;
    return b;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for trial `index` of a batch seeded with `seed`: splitmix64(seed ^ index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ index);
}

/// A single uniform variate U that can be consumed by a sequence of nested
/// choices: each choose() selects the cell of the current window containing
/// U and narrows the window to that cell. Selecting level by level over a
/// lexicographic tree is therefore the same as inverting the cumulative
/// distribution of the leaves with one uniform.
template <class S>
class UniformDraw;

template <>
class UniformDraw<double> {
 public:
  explicit UniformDraw(Rng& rng) : u_(rng.uniform01()) {}
  // Weights need not be normalized; their sum must be positive.
  std::size_t choose(std::span<const double> weights);

 private:
  double u_;
};

/// Exact version: U is generated lazily, one bit at a time, until the dyadic
/// interval known to contain U lies inside a single cell.
template <>
class UniformDraw<Rational> {
 public:
  explicit UniformDraw(Rng& rng) : rng_(&rng) {}
  std::size_t choose(std::span<const Rational> weights);

 private:
  Rng* rng_;
  boost::multiprecision::mpz_int numerator_ = 0;  // U in [m/2^k, (m+1)/2^k)
  boost::multiprecision::mpz_int scale_ = 1;      // 2^k
  Rational lo_ = 0;
  Rational hi_ = 1;
};

// Bernoulli(p) for p in [0, 1]. The double version always consumes one
// uniform; the exact version consumes bits only until the outcome is decided.
bool bernoulli(double p, Rng& rng);
bool bernoulli(const Rational& p, Rng& rng);

// Uniform index in [0, n): floor(U * n).
template <class S>
std::size_t uniform_index(std::size_t n, Rng& rng);

}  // namespace pgibbs
