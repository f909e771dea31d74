#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eemimo/types.hpp"

namespace eemimo {

/// 128.1 + 37.6 log10(d) [dB], d in kilometers.
double pathloss_db(double distance_km);

// Deterministic complex-Gaussian stream: mt19937_64 raw output mapped to
// uniforms as (x >> 11) * 2^-53, paired through Box-Muller. The engine's
// output sequence is fixed by the C++ standard, so identical seeds give
// identical channels on any platform.
class ComplexGaussianSource {
 public:
  explicit ComplexGaussianSource(std::uint64_t seed) : eng_(seed) {}

  /// One CN(0, variance) sample.
  Complex sample(double variance);

 private:
  std::mt19937_64 eng_;
};

/// Rayleigh-fading channels with distance-dependent pathloss applied as a
/// per-entry variance scale; all users share the same distance.
UserChannels generate_channels(std::uint64_t seed, int m, int n, int k,
                               double distance_km, double bandwidth_hz,
                               double noise_dbm);

/// Keep exactly the columns listed in t (1-based), in t's order.
UserChannels restrict(const UserChannels& ch, const AntennaSet& t);

/// Permutation pi of {1,..,M} with stacked column norms descending, ties
/// broken by ascending original index.
std::vector<int> column_norm_order(const UserChannels& ch);

/// Stacked-column Euclidean norms, one per transmit antenna.
std::vector<double> column_norms(const UserChannels& ch);

/// JSON text with fields M, N, K, sigma2, W and the K channel matrices;
/// complex entries serialize as [re, im]. Round-trips bit-exactly.
std::string dump_channels(const UserChannels& ch);
UserChannels load_channels(const std::string& json_text);

void save_channels_file(const UserChannels& ch, const std::string& path);
UserChannels load_channels_file(const std::string& path);

}  // namespace eemimo
