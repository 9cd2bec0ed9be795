#pragma once

#include <cstdint>
#include <random>

#include "timeseries.hpp"

namespace dtwx {

/// Seeded two-class benchmark data: Gaussian random walks, where every
/// second instance carries an injected half-sine bump. Generation is
/// single-threaded and fully determined by the seed.
LabeledDataset synthetic_dataset(size_t size, size_t length, uint64_t seed);

/// A bump-class walk to use as the unobserved query.
TimeSeries synthetic_query(size_t length, uint64_t seed);

struct AnnotatedBump {
  TimeSeries series;
  size_t bump_start = 0;  // 1-based inclusive, always a legal deletion
  size_t bump_end = 0;
};

/// Flat noisy baseline plus one half-sine bump at a random legal position,
/// for the segment-detection round trip. amplitude should dominate
/// noise_sigma by a wide margin.
AnnotatedBump baseline_bump_series(size_t length, double noise_sigma, double amplitude,
                                   std::mt19937_64& rng, const std::string& id);

}  // namespace dtwx
