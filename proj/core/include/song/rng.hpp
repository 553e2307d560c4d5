/**
 * @file rng.hpp
 * @brief Seedable random generator with a stable serialization format.
 *
 * All stochastic parts of the model (initial placement, per-epoch sample
 * permutations, negative sampling) draw from one of these so that a run is
 * fully determined by the seed and the state survives save/load round trips.
 * The engine is std::mt19937_64, which the standard specifies exactly;
 * variates are mapped from raw 64-bit draws rather than std::distributions,
 * whose output is implementation-defined.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace song {

class Rng {
public:
    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Next raw 64-bit value.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n), free of modulo bias. n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal variate (Box-Muller, no cached spare).
    double normal();

    /// Uniformly random unit vector of the given dimension.
    Eigen::VectorXd unit_vector(int dim);

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<Eigen::Index> permutation(Eigen::Index n);

    /// Serialize/restore the full engine state as text.
    std::string serialize() const;
    static Rng deserialize(const std::string& state);

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace song
