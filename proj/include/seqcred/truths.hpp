#pragma once

#include <cstdint>
#include <variant>

#include "seqcred/sequence_model.hpp"

namespace seqcred {

/// theta_i = c i^{-(1/2+alpha)}: the Sobolev-alpha boundary profile
/// (Hoelder-(alpha-d) for every d > 0).
struct PolyDecay {
  double alpha = 1.0;
  double c = 1.0;
};

/// Same decay with alternating signs, to exercise cancellation in function
/// space.
struct AlternatingDecay {
  double alpha = 1.0;
  double c = 1.0;
};

/// Random member of the ball B(alpha, R): draws a decaying random sequence
/// and rescales so that holder_norm(theta, alpha) == R up to rounding.
struct RandomHolder {
  double alpha = 1.0;
  double radius = 1.0;
  std::uint64_t seed = 0;
};

/// Smooth compactly supported bump
///   f(x) = height * exp(-width^2 / (width^2 - (x-center)^2))  on |x-center| < width,
/// zero outside, projected onto the basis by grid quadrature.
struct LocalBump {
  double center = 0.5;
  double width = 0.1;
  double height = 1.0;
};

struct TruthSpec {
  std::variant<PolyDecay, AlternatingDecay, RandomHolder, LocalBump> family = PolyDecay{};
  std::size_t n_trunc = 2048;
};

/// Deterministic function of the spec (including any seed it carries).
CoefficientSequence generate_truth(const TruthSpec& spec);

/// Membership in B(alpha, R) = { sum_i i^alpha |theta_i| <= R }.
bool classify_truth(const CoefficientSequence& theta, double alpha, double radius);

}  // namespace seqcred
