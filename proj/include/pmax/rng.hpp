#pragma once

#include <cstdint>
#include <random>

namespace pmax {

// Seedable, splittable random stream.
//
// Each (seed, stream_id) pair owns a private std::mt19937_64 whose state is
// initialized through std::seed_seq from the four 32-bit halves of the pair.
// Both the engine and seed_seq are fully specified by the standard, so
// sequences are reproducible across platforms. Variates are produced by the
// methods below rather than <random> distributions, whose algorithms are
// implementation-defined.
//
// A stream is single-owner: do not share one instance between threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1): the top 53 bits k map to (k + 1/2) 2^-53,
  // so neither endpoint is reachable and log transforms stay finite.
  double uniform();

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  // Unit-rate exponential.
  double exponential();

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace pmax
