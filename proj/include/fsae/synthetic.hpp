#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsae/field.hpp"

namespace fsae::synth {

// Band-limited random fields on the sphere with a red spectrum. Coefficient
// draws depend only on (seed, variable), so the same configuration always
// yields the same field; the annual cycle enters through the timestamp.
struct SynthConfig {
  int z = 5;
  int l_max = 12;
  double slope = 2.0;       // C_l ~ (l+1)^-slope
  double amplitude = 1.0;
  double annual_frac = 0.3; // fraction of amplitude modulated over the year
  double offset = 0.0;      // constant added to every pixel
  std::uint64_t seed = 0;
};

Field generate(const SynthConfig& cfg, const std::string& variable,
               std::int64_t timestamp);

// Consecutive daily fields starting at `timestamp0`.
std::vector<Field> generate_series(const SynthConfig& cfg, const std::string& variable,
                                   std::int64_t timestamp0, int n_days);

}  // namespace fsae::synth
