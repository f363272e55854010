#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// p-variation value with the index subsequence attaining it (indices into
/// the interval restriction's sample grid).
struct PvarResult {
    double value = 0.0;
    double p = 1.0;
    std::vector<std::size_t> maximizer;
};

namespace detail {

inline double abs_pow(double x, double p) { return std::pow(std::abs(x), p); }

}  // namespace detail

/// Exact p-variation over sample subsequences, best[j] = max over i < j of
/// best[i] + |v_j - v_i|^p. For p >= 1 this equals V^p of the interpolated
/// path: sample-extrema partitions attain the supremum over arbitrary
/// partitions. For p < 1 it is the sampled-sequence p-variation only.
inline PvarResult pvar_dp(const SampledPath& path, const Interval& iv, double p) {
    if (!(p > 0.0)) throw domain_error("p-variation requires p > 0");
    auto v = restricted_values(path, iv);
    const std::size_t n = v.size();
    PvarResult res;
    res.p = p;
    if (n <= 1) return res;
    std::vector<double> dp(n, 0.0);
    std::vector<std::size_t> cnt(n, 1);
    std::vector<std::ptrdiff_t> parent(n, -1);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double cand = dp[i] + detail::abs_pow(v[j] - v[i], p);
            if (cand > dp[j] || (cand == dp[j] && cnt[i] + 1 < cnt[j])) {
                dp[j] = cand;
                cnt[j] = cnt[i] + 1;
                parent[j] = static_cast<std::ptrdiff_t>(i);
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (dp[j] > dp[best] || (dp[j] == dp[best] && cnt[j] < cnt[best])) best = j;
    res.value = dp[best];
    if (res.value > 0.0) {
        std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(best);
        while (cur >= 0) {
            res.maximizer.push_back(static_cast<std::size_t>(cur));
            cur = parent[static_cast<std::size_t>(cur)];
        }
        std::reverse(res.maximizer.begin(), res.maximizer.end());
    }
    return res;
}

inline PvarResult pvar_dp(const SampledPath& path, double p) {
    return pvar_dp(path, path.span(), p);
}

/// Brute force over all index subsequences; reference oracle for pvar_dp.
/// Refuses more than 14 samples.
inline double pvar_exhaustive(const SampledPath& path, const Interval& iv, double p) {
    if (!(p > 0.0)) throw domain_error("p-variation requires p > 0");
    auto v = restricted_values(path, iv);
    const std::size_t n = v.size();
    if (n > 14) throw domain_error("pvar_exhaustive refuses more than 14 samples");
    if (n <= 1) return 0.0;
    double best = 0.0;
    const std::size_t subsets = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        double sum = 0.0;
        bool have_prev = false;
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            if (have_prev) sum += detail::abs_pow(v[i] - prev, p);
            prev = v[i];
            have_prev = true;
        }
        best = std::max(best, sum);
    }
    return best;
}

inline double pvar_exhaustive(const SampledPath& path, double p) {
    return pvar_exhaustive(path, path.span(), p);
}

/// p-variation norm (V^p)^(1/p), defined for p >= 1.
inline double pvar_norm(const SampledPath& path, const Interval& iv, double p) {
    if (!(p >= 1.0)) throw domain_error("p-variation norm requires p >= 1");
    double vp = pvar_dp(path, iv, p).value;
    return vp == 0.0 ? 0.0 : std::pow(vp, 1.0 / p);
}

inline double pvar_norm(const SampledPath& path, double p) {
    return pvar_norm(path, path.span(), p);
}

/// Full p-variation norm |f(a)| + (V^p)^(1/p); the norm of the Banach space
/// the integral-equation solver works in.
inline double pvar_full_norm(const SampledPath& path, const Interval& iv, double p) {
    return std::abs(path.eval(iv.lo)) + pvar_norm(path, iv, p);
}

inline double pvar_full_norm(const SampledPath& path, double p) {
    return pvar_full_norm(path, path.span(), p);
}

}  // namespace pathvar
