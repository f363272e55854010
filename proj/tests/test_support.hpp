#pragma once

// Shared generators and independent brute-force oracles for the test suites.
// The oracles only use the definitions (suprema over subsequences), never the
// library's DP or sweep code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pathvar/paths.hpp"

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    bool coin() { return (next() & 1u) != 0; }

private:
    std::uint64_t state_;
};

inline std::vector<double> random_values(Rng& rng, std::size_t n, double lo = -2.0,
                                         double hi = 2.0) {
    std::vector<double> vals(n);
    for (auto& v : vals) v = rng.uniform(lo, hi);
    return vals;
}

inline pathvar::SampledPath random_path(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0,
                                        pathvar::Interp interp = pathvar::Interp::linear) {
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i)
        times[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return pathvar::SampledPath(std::move(times), random_values(rng, n, lo, hi), interp);
}

/// Random walk with uniform increments in [-step, step]; slope stays O(n * step)
/// instead of the O(n) of i.i.d. values, which matters for mesh-based bounds.
inline pathvar::SampledPath random_walk_path(Rng& rng, std::size_t n, double step) {
    std::vector<double> times(n), vals(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        times[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) vals[i] = vals[i - 1] + rng.uniform(-step, step);
    return pathvar::SampledPath(std::move(times), std::move(vals), pathvar::Interp::linear);
}

/// Definitional truncated variation: max over all value subsequences of
/// sum max(|dv| - delta, 0). Exponential; n <= 20.
inline double ttv_brute(const std::vector<double>& v, double delta) {
    const std::size_t n = v.size();
    double best = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double sum = 0.0;
        bool have_prev = false;
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            if (have_prev) sum += std::max(std::abs(v[i] - prev) - delta, 0.0);
            prev = v[i];
            have_prev = true;
        }
        best = std::max(best, sum);
    }
    return best;
}

/// Definitional p-variation over value subsequences (independent of the
/// library's pvar_exhaustive, which goes through restricted_values).
inline double pvar_brute(const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    double best = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double sum = 0.0;
        bool have_prev = false;
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            if (have_prev) sum += std::pow(std::abs(v[i] - prev), p);
            prev = v[i];
            have_prev = true;
        }
        best = std::max(best, sum);
    }
    return best;
}

inline pathvar::SampledPath add_paths(const pathvar::SampledPath& a,
                                      const pathvar::SampledPath& b) {
    std::vector<double> vals(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) vals[i] = a.value(i) + b.value(i);
    return pathvar::SampledPath(a.times(), vals, a.interp());
}

inline double rel_diff(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

}  // namespace testsupport
