#include "wordmap/rng.hpp"

#include <cmath>

namespace wordmap {

double Rng::next_gaussian() {
    if (gauss_valid_) {
        gauss_valid_ = false;
        return gauss_cache_;
    }
    // Box-Muller on (0,1] uniforms.
    double u1 = 0.0;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    gauss_cache_ = r * std::sin(theta);
    gauss_valid_ = true;
    return r * std::cos(theta);
}

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    // Partial Fisher-Yates: first k entries are the sample.
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + next_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace wordmap
