#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gibbsar {

/// Random stream used by every sampler. Passed explicitly, never global.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a master seed and a tuple of
/// integer keys. Changing any key changes the seed; the order of keys matters.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) noexcept;

}  // namespace gibbsar
