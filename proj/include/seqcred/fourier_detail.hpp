#pragma once

#include <cstddef>
#include <limits>

// Shared between the synthesizer and the credible-set samplers, which fold
// coefficient vectors into FFTW halfcomplex arrays in their hot loops.
namespace seqcred::detail {

inline constexpr std::size_t kDroppedSlot = std::numeric_limits<std::size_t>::max();

/// Halfcomplex slot and weight of basis coefficient i on a size-G grid.
/// A coefficient theta_i contributes scale * theta_i to halfcomplex[slot];
/// slot == kDroppedSlot means the basis function vanishes at every grid
/// point (aliased sine).
void fold_coefficient(std::size_t i, std::size_t grid_size, std::size_t* slot, double* scale);

/// Unnormalized FFTW halfcomplex-to-real transform of length grid_size.
/// Thread safe; buffers are caller owned and may be unaligned.
void halfcomplex_to_grid(std::size_t grid_size, const double* halfcomplex, double* values);

/// Forward real-to-halfcomplex transform (unnormalized).
void grid_to_halfcomplex(std::size_t grid_size, const double* values, double* halfcomplex);

/// Creates the transform plans for this size up front.  FFTW's planner must
/// not run concurrently with anything else; callers that fan out across
/// threads warm the plans first so workers only ever execute.
void warm_plans(std::size_t grid_size);

}  // namespace seqcred::detail
