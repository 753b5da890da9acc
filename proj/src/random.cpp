#include "pgibbs/random.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

#include "pgibbs/errors.hpp"

namespace pgibbs {

using boost::multiprecision::mpz_int;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t UniformDraw<double>::choose(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw ZeroPartition("cannot choose from an all-zero weight vector");
  const double target = u_ * total;
  double cumulative = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (target < cumulative + weights[i]) {
      u_ = std::clamp((target - cumulative) / weights[i], 0.0, std::nextafter(1.0, 0.0));
      return i;
    }
    cumulative += weights[i];
  }
  // Rounding pushed the target past the last cell.
  u_ = std::nextafter(1.0, 0.0);
  return last_positive;
}

std::size_t UniformDraw<Rational>::choose(std::span<const Rational> weights) {
  Rational total = 0;
  for (const Rational& w : weights) total += w;
  if (total <= 0) throw ZeroPartition("cannot choose from an all-zero weight vector");

  // Cell boundaries inside the current window [lo_, hi_).
  const Rational width = hi_ - lo_;
  std::vector<Rational> bounds;
  bounds.reserve(weights.size() + 1);
  bounds.push_back(lo_);
  Rational cumulative = 0;
  for (const Rational& w : weights) {
    cumulative += w;
    bounds.push_back(lo_ + width * cumulative / total);
  }

  for (;;) {
    const Rational left(numerator_, scale_);
    const Rational right(mpz_int(numerator_ + 1), scale_);
    // Cell j with bounds[j] <= left < bounds[j+1]; empty cells are skipped by
    // upper_bound on the non-decreasing boundary list.
    const auto it = std::upper_bound(bounds.begin(), bounds.end(), left);
    assert(it != bounds.begin() && it != bounds.end());
    const std::size_t j = static_cast<std::size_t>(it - bounds.begin()) - 1;
    if (right <= bounds[j + 1]) {
      lo_ = bounds[j];
      hi_ = bounds[j + 1];
      return j;
    }
    numerator_ = numerator_ * 2 + (rng_->bit() ? 1 : 0);
    scale_ *= 2;
  }
}

bool bernoulli(double p, Rng& rng) { return rng.uniform01() < p; }

bool bernoulli(const Rational& p, Rng& rng) {
  if (p >= 1) return true;
  if (p <= 0) return false;
  const Rational weights[2] = {p, Rational(1 - p)};
  UniformDraw<Rational> draw(rng);
  return draw.choose(weights) == 0;
}

template <>
std::size_t uniform_index<double>(std::size_t n, Rng& rng) {
  const auto i = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
  return std::min(i, n - 1);
}

template <>
std::size_t uniform_index<Rational>(std::size_t n, Rng& rng) {
  if (n <= 1) return 0;
  const mpz_int count(n);
  mpz_int m = 0;
  mpz_int scale = 1;
  for (;;) {
    // Index j = floor(m * n / 2^k) is decided once (m+1) * n <= (j+1) * 2^k.
    const mpz_int j = (m * count) / scale;
    if ((m + 1) * count <= (j + 1) * scale) return j.convert_to<std::size_t>();
    m = m * 2 + (rng.bit() ? 1 : 0);
    scale *= 2;
  }
}

}  // namespace pgibbs
