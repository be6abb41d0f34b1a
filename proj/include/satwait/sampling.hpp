#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace satwait {

/// Low-discrepancy points (Halton, prime bases) with a seeded random shift
/// modulo one, so different seeds give independent but reproducible sets.
class HaltonSequence {
public:
    HaltonSequence(int dimension, std::uint64_t seed = 42);

    int dimension() const noexcept { return static_cast<int>(shift_.size()); }

    /// Next point of the shifted sequence in [0,1)^dimension.
    void next(std::span<double> out);

private:
    std::uint64_t index_ = 1;
    std::vector<double> shift_;
};

/// n points uniformly covering the ball B(center, radius) (rejection from the cube).
std::vector<std::vector<double>> sample_ball(std::span<const double> center, double radius,
                                             std::size_t n, std::uint64_t seed = 42);

double euclidean_norm(std::span<const double> x);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace satwait
