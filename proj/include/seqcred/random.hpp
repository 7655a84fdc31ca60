#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace seqcred {

/// Seeded random stream with splittable substreams.
///
/// A stream is identified by (seed, stream_id).  Substreams are derived by
/// hashing the identity with a tag, never from consumed state, so a tree of
/// streams rooted at one master seed is reproducible regardless of the order
/// in which siblings are consumed (or which thread consumes them).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; normal deviates use the Marsaglia polar transform, so a given
/// (seed, stream_id) yields the same draw sequence on any conforming
/// platform.  Streams are value types: copy freely, never share.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Derived stream for (this stream, tag); independent of consumption state.
  RandomStream substream(std::uint64_t tag) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw strictly inside (0, 1).
  double uniform();

  /// Standard normal draw (Marsaglia polar method).
  double normal();

  void fill_normal(std::span<double> out);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace seqcred
