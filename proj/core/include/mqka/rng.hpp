#ifndef MQKA_RNG_HPP
#define MQKA_RNG_HPP

#include <cstdint>

namespace mqka {

// Deterministic 64-bit generator (splitmix64). Every sampling decision in the
// library goes through one of these so a run is replayable from its seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed), state_(seed) {}

  std::uint64_t seed() const { return base_; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0,bound). Multiply-shift; bias is immaterial for the small
  // bounds used here (bound << 2^64).
  std::uint32_t below(std::uint32_t bound) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Independent child stream, e.g. one per Monte Carlo trial. Children depend
  // only on the parent's seed and the salt, not on how much the parent has
  // been consumed, so trial i is the same whether trials run serially or not.
  Rng derive(std::uint64_t salt) const {
    Rng mixer(base_ ^ (0xa0761d6478bd642full + salt * 0xe7037ed1a0b428dbull));
    mixer.next_u64();
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t base_;
  std::uint64_t state_;
};

}  // namespace mqka

#endif
