#include "pvalprior/rng.hpp"

#include "pvalprior/special.hpp"

namespace pvalprior {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SeededGenerator::bits(Stream stream, std::uint64_t gene, std::uint64_t group,
                                    std::uint64_t replicate) const noexcept {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ gene);
  h = splitmix64(h ^ group);
  return splitmix64(h ^ replicate);
}

double SeededGenerator::uniform(Stream stream, std::uint64_t gene, std::uint64_t group,
                                std::uint64_t replicate) const noexcept {
  // 52 bits plus a half keeps the value exactly representable and strictly
  // inside (0, 1).
  const std::uint64_t top52 = bits(stream, gene, group, replicate) >> 12;
  return (static_cast<double>(top52) + 0.5) * 0x1.0p-52;
}

double SeededGenerator::normal(Stream stream, std::uint64_t gene, std::uint64_t group,
                               std::uint64_t replicate) const {
  return special::normal_quantile(uniform(stream, gene, group, replicate));
}

SeededGenerator SeededGenerator::derive(std::uint64_t index) const noexcept {
  return SeededGenerator(bits(Stream::Derived, index, 0, 0));
}

}  // namespace pvalprior
