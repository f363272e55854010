#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/pvariation.hpp"

namespace pathvar {

namespace detail {

/// splitmix64: tiny, well-known, fully specified generator; keeps generated
/// paths bit-identical across platforms for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0, 1]
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

    /// standard normal via Box-Muller
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace detail

enum class SignalFamily { weierstrass, midpoint_walk, jump_step, ramp };

inline std::string to_string(SignalFamily family) {
    switch (family) {
        case SignalFamily::weierstrass: return "weierstrass";
        case SignalFamily::midpoint_walk: return "midpoint-walk";
        case SignalFamily::jump_step: return "jump-step";
        case SignalFamily::ramp: return "ramp";
    }
    return "ramp";
}

inline SignalFamily signal_family_from_string(const std::string& s) {
    if (s == "weierstrass") return SignalFamily::weierstrass;
    if (s == "midpoint-walk" || s == "midpoint_walk") return SignalFamily::midpoint_walk;
    if (s == "jump-step" || s == "jump_step") return SignalFamily::jump_step;
    if (s == "ramp") return SignalFamily::ramp;
    throw domain_error("unknown signal family: " + s);
}

/// Deterministic description of a synthetic test signal.
///   weierstrass:  params {a, b, m}   sum_{k<m} a^k cos(b^k pi t), 0<a<1, ab>1
///   midpoint-walk: params {H, sigma} recursive midpoint displacement,
///                  anchored to 0 at both endpoints, H in (0,1)
///   jump-step:    params {scale}     seeded +-scale random-walk step path
///   ramp:         params {v0, v1}    affine control case
struct SignalRecipe {
    SignalFamily family = SignalFamily::ramp;
    std::vector<double> params;
    std::size_t n = 2;
    std::uint64_t seed = 0;
};

namespace detail {

inline double recipe_param(const SignalRecipe& recipe, std::size_t i, double fallback) {
    return i < recipe.params.size() ? recipe.params[i] : fallback;
}

inline void midpoint_displace(std::vector<double>& v, const std::vector<double>& t,
                              std::size_t lo, std::size_t hi, double hurst, double sigma,
                              SplitMix64& rng) {
    if (hi - lo <= 1) return;
    std::size_t mid = lo + (hi - lo) / 2;
    double span = t[hi] - t[lo];
    v[mid] = 0.5 * (v[lo] + v[hi]) + sigma * std::pow(span, hurst) * rng.gaussian();
    midpoint_displace(v, t, lo, mid, hurst, sigma, rng);
    midpoint_displace(v, t, mid, hi, hurst, sigma, rng);
}

}  // namespace detail

/// Generates the recipe's path on n evenly spaced samples over iv.
inline SampledPath generate(const SignalRecipe& recipe, const Interval& iv) {
    if (recipe.n < 2) throw domain_error("signal generation needs n >= 2");
    if (!(iv.lo < iv.hi)) throw domain_error("signal interval must have positive width");
    const std::size_t n = recipe.n;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i)
        times[i] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    times.back() = iv.hi;

    std::vector<double> values(n, 0.0);
    switch (recipe.family) {
        case SignalFamily::ramp: {
            double v0 = detail::recipe_param(recipe, 0, 0.0);
            double v1 = detail::recipe_param(recipe, 1, 1.0);
            for (std::size_t i = 0; i < n; ++i)
                values[i] = v0 + (v1 - v0) * static_cast<double>(i) / static_cast<double>(n - 1);
            return SampledPath(times, values, Interp::linear);
        }
        case SignalFamily::weierstrass: {
            double a = detail::recipe_param(recipe, 0, 0.5);
            double b = detail::recipe_param(recipe, 1, 3.0);
            std::size_t terms = static_cast<std::size_t>(detail::recipe_param(recipe, 2, 16.0));
            if (!(a > 0.0 && a < 1.0)) throw domain_error("weierstrass needs 0 < a < 1");
            if (!(a * b > 1.0)) throw domain_error("weierstrass needs a*b > 1");
            if (terms < 1) throw domain_error("weierstrass needs at least one term");
            const double pi = 3.14159265358979323846264338327950288;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0, ak = 1.0, bk = 1.0;
                for (std::size_t k = 0; k < terms; ++k) {
                    acc += ak * std::cos(bk * pi * times[i]);
                    ak *= a;
                    bk *= b;
                }
                values[i] = acc;
            }
            return SampledPath(times, values, Interp::linear);
        }
        case SignalFamily::midpoint_walk: {
            double hurst = detail::recipe_param(recipe, 0, 0.8);
            double sigma = detail::recipe_param(recipe, 1, 1.0);
            if (!(hurst > 0.0 && hurst < 1.0)) throw domain_error("midpoint-walk needs H in (0,1)");
            detail::SplitMix64 rng(recipe.seed);
            detail::midpoint_displace(values, times, 0, n - 1, hurst, sigma, rng);
            return SampledPath(times, values, Interp::linear);
        }
        case SignalFamily::jump_step:
        default: {
            double scale = detail::recipe_param(recipe, 0, 1.0);
            detail::SplitMix64 rng(recipe.seed);
            for (std::size_t i = 1; i < n; ++i)
                values[i] = values[i - 1] + ((rng.next() & 1u) ? scale : -scale);
            return SampledPath(times, values, Interp::left_step);
        }
    }
}

/// p-variation norms of the recipe across sample counts; diagnostic for
/// where the family's variation index sits (entries grow with n for p below
/// it and stabilize above it).
struct PvarProfile {
    std::vector<double> p_grid;
    std::vector<std::size_t> n_grid;
    std::vector<std::vector<double>> norms;  ///< norms[ni][pi]
};

inline PvarProfile empirical_pvar_profile(const SignalRecipe& recipe, const Interval& iv,
                                          const std::vector<double>& p_grid,
                                          const std::vector<std::size_t>& n_grid) {
    if (p_grid.empty() || n_grid.empty()) throw domain_error("profile grids must be nonempty");
    PvarProfile profile{p_grid, n_grid, {}};
    for (std::size_t n : n_grid) {
        SignalRecipe r = recipe;
        r.n = n;
        SampledPath path = generate(r, iv);
        std::vector<double> row;
        row.reserve(p_grid.size());
        for (double p : p_grid) row.push_back(pvar_norm(path, p));
        profile.norms.push_back(std::move(row));
    }
    return profile;
}

}  // namespace pathvar
