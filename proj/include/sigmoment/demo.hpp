#pragma once

// Reference fixtures and the self-checking demo runs built on them. Each
// demo reproduces one acceptance check using the library's own verifier.

#include <cstdint>
#include <string>
#include <vector>

#include "sigmoment/analysis.hpp"
#include "sigmoment/construct.hpp"

namespace sigmoment::fixtures {

// x_k = k^2, k = 1..count
std::vector<Rational> square_nodes(std::size_t count);
// {1..n} x {1..n}
SupportSpec integer_grid(std::size_t n, std::size_t dimension = 2);
// [0, 1] x R
SupportSpec unit_strip();
// (k, 0) and (0, k) for k = 1..per_axis, interleaved.
std::vector<Point<Rational>> cross_samples(std::size_t per_axis);
// {k^2 : k >= 1}
SupportSpec square_sequence();
// 40 points in general position with no escape information.
SupportSpec sampled_without_escapes();

struct ClassifierCase {
  std::string name;
  SupportSpec support;
  AnalysisReport::Verdict expected;
};
std::vector<ClassifierCase> classifier_table();

// Zariski dense supports from the catalog used for round-trip checks.
std::vector<SupportSpec> round_trip_supports();

// Random signed measure with 1..max_atoms atoms placed on sample points of
// K and nonzero integer weights in [-5, 5].
template <typename Rng>
SignedAtomicMeasure<Rational> random_measure(const SupportSpec& k, std::size_t max_atoms, Rng& rng);

}  // namespace sigmoment::fixtures

namespace sigmoment::demo {

struct Outcome {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// polya, grid, strip, density, growth, classify, tv, roundtrip
const std::vector<std::string>& names();
bool known(const std::string& name);
Outcome run(const std::string& name, std::uint64_t seed = kDefaultSeed);

}  // namespace sigmoment::demo
