#pragma once

#include <array>
#include <cstdint>

namespace prospect::rng {

/// Philox4x32-10 counter-based generator. Stateless: each (key, counter)
/// pair yields an independent 128-bit block, so any (path, step) coordinate
/// can be addressed directly and reproducibly.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter);

/// Uniform in the open interval (0,1) from 64 random bits.
double uniform_from_bits(std::uint32_t hi, std::uint32_t lo);

/// Inverse standard normal CDF (Wichura's PPND16), accurate to double
/// precision over (0,1).
double inverse_normal_cdf(double u);

/// One normal and one auxiliary uniform per (path, step), both derived from
/// a single Philox block keyed by the 64-bit seed.
struct StepDraw {
    double normal;
    double uniform;
};

StepDraw step_draw(std::uint64_t seed, std::uint64_t path, std::uint32_t step);

}  // namespace prospect::rng
