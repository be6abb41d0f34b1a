#include "satwait/sampling.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace satwait {

namespace {

constexpr std::array<int, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

}  // namespace

HaltonSequence::HaltonSequence(int dimension, std::uint64_t seed) {
    if (dimension < 1 || dimension > static_cast<int>(kPrimes.size())) {
        throw std::invalid_argument("HaltonSequence: unsupported dimension");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    shift_.resize(static_cast<std::size_t>(dimension));
    for (auto& s : shift_) s = unit(rng);
}

void HaltonSequence::next(std::span<double> out) {
    for (std::size_t d = 0; d < shift_.size(); ++d) {
        double v = radical_inverse(index_, kPrimes[d]) + shift_[d];
        out[d] = v - std::floor(v);
    }
    ++index_;
}

std::vector<std::vector<double>> sample_ball(std::span<const double> center, double radius,
                                             std::size_t n, std::uint64_t seed) {
    const int dim = static_cast<int>(center.size());
    HaltonSequence seq(dim, seed);
    std::vector<std::vector<double>> points;
    points.reserve(n);
    std::vector<double> u(static_cast<std::size_t>(dim));
    while (points.size() < n) {
        seq.next(u);
        double r2 = 0.0;
        for (auto& c : u) {
            c = 2.0 * c - 1.0;
            r2 += c * c;
        }
        if (r2 >= 1.0) continue;
        std::vector<double> p(center.begin(), center.end());
        for (int d = 0; d < dim; ++d) p[static_cast<std::size_t>(d)] += radius * u[static_cast<std::size_t>(d)];
        points.push_back(std::move(p));
    }
    return points;
}

double euclidean_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace satwait
