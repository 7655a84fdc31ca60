#include "seqcred/random.hpp"

#include <cmath>

namespace seqcred {

namespace {

// SplitMix64 finalizer; used both to decorrelate raw seeds and to derive
// substream identities.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ull));
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  // A single well-mixed 64-bit key; mt19937_64's standard LCG state expansion
  // does the rest.  Cheap enough to derive one engine per Monte Carlo draw.
  return std::mt19937_64(combine(mix64(seed), stream_id));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t tag) const {
  return RandomStream(seed_, combine(stream_id_, tag));
}

double RandomStream::uniform() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

void RandomStream::fill_normal(std::span<double> out) {
  for (double& x : out) x = normal();
}

}  // namespace seqcred
