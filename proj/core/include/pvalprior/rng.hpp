#pragma once

#include <cstdint>

namespace pvalprior {

/// Counter-based random source.
///
/// Every draw is a pure function of (master seed, stream, gene, group,
/// replicate): the coordinates are hashed with a chain of SplitMix64
/// finalizers. No state is advanced, so draws can be made in any order and
/// from any number of threads with identical results.
class SeededGenerator {
 public:
  /// Separates independent uses of the same coordinates.
  enum class Stream : std::uint64_t {
    Cell = 1,
    SourceOffset = 2,
    Moments = 3,
    EffectPattern = 4,
    Derived = 5,
  };

  explicit SeededGenerator(std::uint64_t master_seed) noexcept : seed_(master_seed) {}

  std::uint64_t master_seed() const noexcept { return seed_; }

  std::uint64_t bits(Stream stream, std::uint64_t gene, std::uint64_t group,
                     std::uint64_t replicate) const noexcept;

  /// Uniform on the open interval (0, 1), 52-bit resolution.
  double uniform(Stream stream, std::uint64_t gene, std::uint64_t group,
                 std::uint64_t replicate) const noexcept;

  /// Standard normal via the inverse CDF of uniform(): one draw per cell.
  double normal(Stream stream, std::uint64_t gene, std::uint64_t group,
                std::uint64_t replicate) const;

  /// Independent child generator, e.g. for the i-th Monte Carlo replicate.
  SeededGenerator derive(std::uint64_t index) const noexcept;

  bool operator==(const SeededGenerator&) const = default;

 private:
  std::uint64_t seed_;
};

}  // namespace pvalprior
