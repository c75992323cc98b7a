#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

// Deterministic randomness for the simulator. Every entity gets its own
// stream derived from (seed, label) so adding or removing one entity never
// shifts the draws of another, and serial/parallel runs see identical
// sequences.

namespace trustmesh {

/// FNV-1a, stable across platforms.
std::uint64_t hash_label(std::string_view label);

class Rng {
  public:
    Rng(std::uint64_t seed, std::string_view label);

    /// Uniform in [0,1) with 53 bits of precision.
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace trustmesh
