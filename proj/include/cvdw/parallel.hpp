#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace cvdw {

/// Worker count used by parallel_for. Defaults to CVDW_THREADS when set,
/// otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, count) on up to thread_count() threads. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Independent generator for one trial of a seeded suite.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

}  // namespace cvdw
