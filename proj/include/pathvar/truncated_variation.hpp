#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// Truncated variation value together with a partition attaining it.
/// Maximizer entries index the sample grid of the interval restriction
/// (identical to path sample indices when the interval is the full span).
struct TtvResult {
    double value = 0.0;
    std::vector<std::size_t> maximizer;
};

namespace detail {

inline std::vector<std::size_t> chain_of(std::size_t j,
                                         const std::vector<std::ptrdiff_t>& parent) {
    std::vector<std::size_t> chain;
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(j);
    while (cur >= 0) {
        chain.push_back(static_cast<std::size_t>(cur));
        cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

/// Exact sup over index subsequences of sum max(|v_j - v_i| - delta, 0).
/// Ties resolve to the maximizer with fewest points, then the
/// lexicographically smallest index set.
inline TtvResult ttv_dp_values(const std::vector<double>& v, double delta) {
    const std::size_t n = v.size();
    if (n <= 1) return {};
    std::vector<double> dp(n, 0.0);
    std::vector<std::size_t> cnt(n, 1);
    std::vector<std::ptrdiff_t> parent(n, -1);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double w = std::max(std::abs(v[j] - v[i]) - delta, 0.0);
            double cand = dp[i] + w;
            bool better = cand > dp[j];
            if (!better && cand == dp[j]) {
                std::size_t cand_cnt = cnt[i] + 1;
                if (cand_cnt < cnt[j]) {
                    better = true;
                } else if (cand_cnt == cnt[j] && parent[j] >= 0) {
                    better = chain_of(i, parent) <
                             chain_of(static_cast<std::size_t>(parent[j]), parent);
                }
            }
            if (better) {
                dp[j] = cand;
                cnt[j] = cnt[i] + 1;
                parent[j] = static_cast<std::ptrdiff_t>(i);
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (dp[j] > dp[best] ||
            (dp[j] == dp[best] &&
             (cnt[j] < cnt[best] ||
              (cnt[j] == cnt[best] && chain_of(j, parent) < chain_of(best, parent))))) {
            best = j;
        }
    }
    TtvResult res;
    res.value = dp[best];
    if (res.value > 0.0) res.maximizer = chain_of(best, parent);
    return res;
}

/// Same supremum in one pass. Splitting max(|v_j - v_i| - delta, 0) by sign
/// reduces the quadratic recurrence to two running maxima: up-moves extend
/// the best base of dp[i] - v[i], down-moves the best base of dp[i] + v[i].
inline double ttv_sweep_values(const std::vector<double>& v, double delta) {
    const std::size_t n = v.size();
    if (n <= 1) return 0.0;
    double up_base = -v[0];
    double down_base = v[0];
    double best = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        double dp = std::max({0.0, v[j] - delta + up_base, -v[j] - delta + down_base});
        best = std::max(best, dp);
        up_base = std::max(up_base, dp - v[j]);
        down_base = std::max(down_base, dp + v[j]);
    }
    return best;
}

}  // namespace detail

/// Exact truncated variation TTV(f, iv, delta) by dynamic programming over
/// sample subsequences, which attains the supremum over all partitions for
/// the piecewise model.
inline TtvResult ttv_dp(const SampledPath& path, const Interval& iv, double delta) {
    if (delta < 0.0) throw domain_error("truncation parameter must be >= 0");
    return detail::ttv_dp_values(restricted_values(path, iv), delta);
}

inline TtvResult ttv_dp(const SampledPath& path, double delta) {
    return ttv_dp(path, path.span(), delta);
}

/// Linear-time truncated variation for delta > 0; equals ttv_dp exactly up
/// to floating round-off.
inline double ttv_sweep(const SampledPath& path, const Interval& iv, double delta) {
    if (!(delta > 0.0)) throw domain_error("ttv_sweep requires delta > 0 (use ttv_dp for 0)");
    return detail::ttv_sweep_values(restricted_values(path, iv), delta);
}

inline double ttv_sweep(const SampledPath& path, double delta) {
    return ttv_sweep(path, path.span(), delta);
}

/// Uniform delta/2-approximant of f on iv whose total variation equals
/// TTV(f, iv, delta). Chain points of the DP maximizer are clipped inward by
/// delta/2; samples between them follow a monotone clamp that stays inside
/// the band.
inline SampledPath optimal_approximant(const SampledPath& path, const Interval& iv,
                                       double delta) {
    if (!(delta > 0.0)) throw domain_error("optimal_approximant requires delta > 0");
    auto vals = restricted_values(path, iv);
    auto times = restricted_times(path, iv);
    const double half = delta / 2.0;

    TtvResult res = detail::ttv_dp_values(vals, delta);
    if (res.value == 0.0) {
        auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        std::vector<double> flat(vals.size(), (*mn + *mx) / 2.0);
        return SampledPath(times, flat, path.interp());
    }

    const auto& m = res.maximizer;
    std::vector<double> g(vals.size(), 0.0);
    std::vector<int> dir(m.size() - 1);
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        dir[k] = vals[m[k + 1]] > vals[m[k]] ? +1 : -1;
        if (k > 0 && dir[k] == dir[k - 1])
            throw std::logic_error("TTV maximizer is not alternating");
    }
    // clip each chain extremum toward the middle of its band
    for (std::size_t k = 0; k < m.size(); ++k) {
        int toward = k == 0 ? dir[0] : -dir[k - 1];
        g[m[k]] = vals[m[k]] + toward * half;
    }
    for (std::size_t i = 0; i < m.front(); ++i) g[i] = g[m.front()];
    for (std::size_t i = m.back() + 1; i < vals.size(); ++i) g[i] = g[m.back()];
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        double w = g[m[k]];
        double target = g[m[k + 1]];
        for (std::size_t i = m[k] + 1; i < m[k + 1]; ++i) {
            w = dir[k] > 0 ? std::min(target, std::max(w, vals[i] - half))
                           : std::max(target, std::min(w, vals[i] + half));
            g[i] = w;
        }
    }
    return SampledPath(times, g, path.interp());
}

inline SampledPath optimal_approximant(const SampledPath& path, double delta) {
    return optimal_approximant(path, path.span(), delta);
}

/// One-pass delta/2-approximant: cheap upper-bound witness with
/// TV(g) >= TTV(f, delta), not the optimum.
inline SampledPath lazy_approximant(const SampledPath& path, double delta) {
    if (!(delta > 0.0)) throw domain_error("lazy_approximant requires delta > 0");
    const double half = delta / 2.0;
    std::vector<double> g(path.size());
    g[0] = path.value(0);
    for (std::size_t i = 1; i < path.size(); ++i) {
        double d = path.value(i) - g[i - 1];
        if (std::abs(d) <= half)
            g[i] = g[i - 1];
        else
            g[i] = path.value(i) - (d > 0 ? half : -half);
    }
    return SampledPath(path.times(), g, path.interp());
}

}  // namespace pathvar
