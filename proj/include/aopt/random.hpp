#pragma once

#include <cstdint>
#include <vector>

namespace aopt {

// Counter-based generator: every draw is a pure function of (key, counter),
// so streams are reproducible across platforms and can be consumed in any
// order. The mixing function is SplitMix64.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Derive an independent key from this one and a tag.
  CounterRng derive(std::uint64_t tag) const;

  std::uint64_t bits(std::uint64_t counter) const;

  // Uniform double in the open interval (0, 1), 53 bits of resolution.
  double uniform(std::uint64_t counter) const;

  // Standard normal; consecutive pairs (2j, 2j+1) share one Box-Muller draw.
  double normal(std::uint64_t counter) const;

  // Uniform integer in [0, bound) by rejection; advances `counter` past all
  // consumed draws.
  std::uint64_t below(std::uint64_t bound, std::uint64_t& counter) const;

  // Fisher-Yates shuffle of 0..n-1 drawn from the sub-stream `tag`.
  std::vector<std::size_t> permutation(std::size_t n, std::uint64_t tag) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace aopt
