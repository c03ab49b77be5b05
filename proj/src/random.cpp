#include "aopt/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace aopt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng CounterRng::derive(std::uint64_t tag) const {
  return CounterRng(splitmix64(key_ ^ splitmix64(tag + 0x632be59bd9b4e019ULL)));
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  // Two rounds so that nearby (key, counter) pairs decorrelate.
  return splitmix64(splitmix64(key_ + counter * 0xd1b54a32d192ed03ULL) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  // (k + 0.5) / 2^53 lies strictly inside (0, 1).
  const std::uint64_t k = bits(counter) >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  const std::uint64_t pair = counter / 2;
  const double u1 = uniform(2 * pair);
  const double u2 = uniform(2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (counter % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

std::uint64_t CounterRng::below(std::uint64_t bound, std::uint64_t& counter) const {
  if (bound <= 1) return 0;
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    const std::uint64_t x = bits(counter++);
    if (x <= limit) return x % bound;
  }
}

std::vector<std::size_t> CounterRng::permutation(std::size_t n, std::uint64_t tag) const {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const CounterRng stream = derive(tag);
  std::uint64_t counter = 0;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i, counter));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace aopt
