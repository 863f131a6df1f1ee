#include "zsm/rng.hpp"

#include <cmath>

namespace zsm {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double CounterRng::uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t key = mix64(seed ^ mix64(stream ^ 0xa0761d6478bd642fULL));
    std::uint64_t v = mix64(key ^ mix64(counter ^ 0xe7037ed1a0b428dbULL));
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

double CounterRng::uniform() {
    return uniform_at(seed_, stream_, counter_++);
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // avoid log(0)
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

} // namespace zsm
