#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace chaoslab {

using Engine = std::mt19937_64;

/// Number of draws generated from one substream. Results are bitwise
/// reproducible for a fixed chunk size regardless of the worker count.
inline constexpr std::size_t kChunkSize = 4096;

/// Engine for substream (seed, stream, chunk). `stream` separates independent
/// consumers sharing a user seed (e.g. variables of a chaos polynomial).
Engine make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

/// Derives a child seed; used to hand a fresh seed to a nested consumer.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

void set_worker_count(unsigned workers);
unsigned worker_count();

/// Calls body(chunk_index, begin, end) for every chunk of [0, n). Chunks are
/// distributed over worker_count() threads; body must only touch its range.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace chaoslab
