#include "synthetic.hpp"

#include <cmath>

namespace dtwx {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBumpAmplitude = 12.0;

std::vector<double> random_walk(size_t length, std::mt19937_64& rng) {
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<double> v(length);
  double x = 0.0;
  for (size_t i = 0; i < length; ++i) {
    x += step(rng);
    v[i] = x;
  }
  return v;
}

void inject_bump(std::vector<double>& v, size_t start0, size_t width, double amplitude) {
  for (size_t i = 0; i < width; ++i) {
    v[start0 + i] += amplitude * std::sin(kPi * static_cast<double>(i + 1) /
                                          static_cast<double>(width + 1));
  }
}

std::vector<double> bump_walk(size_t length, std::mt19937_64& rng) {
  auto v = random_walk(length, rng);
  const size_t width = std::max<size_t>(4, length / 6);
  std::uniform_int_distribution<size_t> pos(length / 4, length - width - length / 4);
  inject_bump(v, pos(rng), width, kBumpAmplitude);
  return v;
}

}  // namespace

LabeledDataset synthetic_dataset(size_t size, size_t length, uint64_t seed) {
  if (size < 2 || length < 8) {
    throw ArgumentError("synthetic dataset needs size >= 2 and length >= 8");
  }
  std::mt19937_64 rng(seed);
  std::vector<TimeSeries> instances;
  instances.reserve(size);
  for (size_t i = 0; i < size; ++i) {
    const bool bumpy = (i % 2) == 1;
    auto values = bumpy ? bump_walk(length, rng) : random_walk(length, rng);
    instances.emplace_back(std::move(values), std::to_string(i + 1),
                           bumpy ? "bump" : "walk");
  }
  return LabeledDataset(std::move(instances), "synthetic");
}

TimeSeries synthetic_query(size_t length, uint64_t seed) {
  if (length < 8) throw ArgumentError("synthetic query needs length >= 8");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  return TimeSeries(bump_walk(length, rng), "query", "");
}

AnnotatedBump baseline_bump_series(size_t length, double noise_sigma, double amplitude,
                                   std::mt19937_64& rng, const std::string& id) {
  if (length < 12) throw ArgumentError("bump series needs length >= 12");
  std::normal_distribution<double> noise(0.0, noise_sigma);
  std::vector<double> v(length);
  for (size_t i = 0; i < length; ++i) v[i] = noise(rng);

  const size_t width = std::max<size_t>(5, length / 5);
  // keep the bump a legal deletion: inside [2, length-1] in 1-based terms
  std::uniform_int_distribution<size_t> pos(1, length - width - 1);
  const size_t start0 = pos(rng);
  inject_bump(v, start0, width, amplitude);

  AnnotatedBump out{TimeSeries(std::move(v), id, ""), start0 + 1, start0 + width};
  return out;
}

}  // namespace dtwx
