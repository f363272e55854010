#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/pvariation.hpp"
#include "pathvar/truncated_variation.hpp"

namespace pathvar {

/// Validates p > 1, q > 1, 1/p + 1/q > 1 (the Young regime). The equivalent
/// inequality 1/p > 1 - 1/q is asserted alongside.
inline void validate_pq(double p, double q) {
    if (!(p > 1.0) || !(q > 1.0)) throw domain_error("variation indices must satisfy p, q > 1");
    if (!(1.0 / p + 1.0 / q > 1.0))
        throw domain_error("variation indices must satisfy 1/p + 1/q > 1");
    if (!(1.0 / p > 1.0 - 1.0 / q)) throw domain_error("exponent identity 1/p > 1 - 1/q failed");
}

/// Midpoint of the admissible interval (sqrt((q-1)(p-1)), 1).
inline double default_alpha(double p, double q) {
    validate_pq(p, q);
    return (std::sqrt((q - 1.0) * (p - 1.0)) + 1.0) / 2.0;
}

/// Parameters of the geometric truncation ladders: alpha in
/// (sqrt((q-1)(p-1)), 1), beta = sup deviation of the integrand from its
/// start value, gamma > 0 a free scale.
struct LadderParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    double p = 0.0;
    double q = 0.0;
};

inline double ladder_base(const LadderParams& prm) {
    validate_pq(prm.p, prm.q);
    double lo = std::sqrt((prm.q - 1.0) * (prm.p - 1.0));
    if (!(prm.alpha > lo) || !(prm.alpha < 1.0))
        throw domain_error("alpha must lie strictly between sqrt((q-1)(p-1)) and 1");
    if (!(prm.beta >= 0.0)) throw domain_error("beta must be >= 0");
    if (!(prm.gamma > 0.0)) throw domain_error("gamma must be > 0");
    return prm.alpha * prm.alpha / ((prm.q - 1.0) * (prm.p - 1.0));
}

/// Two non-increasing sequences eta_k, theta_k decreasing to zero, plus the
/// leading values eta_{-1} (sup deviation of the integrand from its start)
/// and theta_{-1} (sup deviation of the integrator from its end value, used
/// by the symmetric series).
struct TruncationLadder {
    std::vector<double> eta;
    std::vector<double> theta;
    double eta_minus1 = 0.0;
    double theta_minus1 = 0.0;
    std::size_t truncation_length() const { return eta.size(); }
};

/// Geometric ladders eta_{k-1} = beta * 2^(-A^k + 1) and
/// theta_k = gamma * 2^(-A^k * alpha/(q-1)) with A = alpha^2/((q-1)(p-1)),
/// generated until both entries underflow below 1e-300. theta_{-1} is left
/// at zero; evaluating the symmetric series requires filling it from the
/// integrator (see ladder_for_pair).
inline TruncationLadder geometric_ladder(const LadderParams& prm) {
    double base = ladder_base(prm);
    TruncationLadder ladder;
    ladder.eta_minus1 = prm.beta;
    double theta_exp = prm.alpha / (prm.q - 1.0);
    double pow_base = base;  // A^(k+1) for eta, A^k for theta starts at A^0
    double pow_theta = 1.0;
    for (std::size_t k = 0;; ++k) {
        double eta_k = prm.beta * std::exp2(-pow_base + 1.0);
        double theta_k = prm.gamma * std::exp2(-pow_theta * theta_exp);
        ladder.eta.push_back(eta_k);
        ladder.theta.push_back(theta_k);
        if (eta_k < 1e-300 && theta_k < 1e-300) break;
        pow_base *= base;
        pow_theta *= base;
        if (k > (1u << 22))
            throw budget_error("ladder decays too slowly (alpha too close to its lower bound)");
    }
    return ladder;
}

/// The constant C_{p,q}: the larger of the two series
/// sum_k 2^(k+2-(1-alpha) A^k) and sum_k 2^(k+2-(1-alpha) A^k alpha/(q-1) - p),
/// summed until terms drop below 1e-12.
inline double c_pq(double p, double q, double alpha) {
    validate_pq(p, q);
    double denom = (q - 1.0) * (p - 1.0);
    double base = alpha * alpha / denom;
    if (!(base > 1.0) || !(alpha < 1.0))
        throw domain_error("divergent parameterization: need sqrt((q-1)(p-1)) < alpha < 1");
    double s1 = 0.0, s2 = 0.0;
    double pow_base = 1.0;
    for (std::size_t k = 0;; ++k) {
        double kk = static_cast<double>(k);
        double t1 = std::exp2(kk + 2.0 - (1.0 - alpha) * pow_base);
        double t2 = std::exp2(kk + 2.0 - (1.0 - alpha) * pow_base * alpha / (q - 1.0) - p);
        s1 += t1;
        s2 += t2;
        if (t1 < 1e-12 && t2 < 1e-12) break;
        pow_base *= base;
        if (k > (1u << 22)) throw budget_error("C_{p,q} series converges too slowly");
    }
    return std::max(s1, s2);
}

/// Riemann zeta via partial sum plus integral tail bracket; the result is
/// within tol of the true value.
inline double zeta(double r, double tol) {
    if (!(r > 1.0)) throw domain_error("zeta series requires r > 1");
    if (!(tol > 0.0)) throw domain_error("zeta tolerance must be > 0");
    double partial = 0.0;
    for (double n = 1.0; n < 1e9; n += 1.0) {
        partial += std::pow(n, -r);
        double hi = std::pow(n, 1.0 - r) / (r - 1.0);
        double lo = std::pow(n + 1.0, 1.0 - r) / (r - 1.0);
        if (hi - lo < tol) return partial + 0.5 * (hi + lo);
    }
    throw budget_error("zeta: tolerance unreachable within the summation budget");
}

namespace detail {

inline double ttv_value(const SampledPath& path, const Interval& iv, double delta) {
    return delta == 0.0 ? total_variation(path, iv) : ttv_sweep(path, iv, delta);
}

inline double pow2k_times(double w, std::size_t k) {
    return w == 0.0 ? 0.0 : std::ldexp(w, static_cast<int>(k));
}

inline double zeta_cached(double r) {
    static std::map<double, double> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    double z = zeta(r, 1e-8);
    cache.emplace(r, z);
    return z;
}

}  // namespace detail

/// S = sum_k 2^k eta_{k-1} TTV(g, theta_k) + sum_k 2^k theta_k TTV(f, eta_k).
/// Finite for sampled paths since the ladder weights reach exact zero.
inline double s_sum(const SampledPath& f, const SampledPath& g, const Interval& iv,
                    const TruncationLadder& ladder) {
    check_interval(f, iv);
    check_interval(g, iv);
    double sum = 0.0;
    for (std::size_t k = 0; k < ladder.truncation_length(); ++k) {
        double eta_prev = k == 0 ? ladder.eta_minus1 : ladder.eta[k - 1];
        double w1 = detail::pow2k_times(eta_prev, k);
        if (w1 > 0.0) sum += w1 * detail::ttv_value(g, iv, ladder.theta[k]);
        double w2 = detail::pow2k_times(ladder.theta[k], k);
        if (w2 > 0.0) sum += w2 * detail::ttv_value(f, iv, ladder.eta[k]);
    }
    return sum;
}

inline double s_sum(const SampledPath& f, const SampledPath& g, const TruncationLadder& ladder) {
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi) throw domain_error("paths must share the same span");
    return s_sum(f, g, sf, ladder);
}

/// Symmetric series S~ = sum_k 2^k theta_{k-1} TTV(f, eta_k)
/// + sum_k 2^k eta_k TTV(g, theta_k) with theta_{-1} = sup |g(b) - g(t)|.
inline double s_tilde_sum(const SampledPath& f, const SampledPath& g, const Interval& iv,
                          const TruncationLadder& ladder) {
    check_interval(f, iv);
    check_interval(g, iv);
    double sum = 0.0;
    for (std::size_t k = 0; k < ladder.truncation_length(); ++k) {
        double theta_prev = k == 0 ? ladder.theta_minus1 : ladder.theta[k - 1];
        double w1 = detail::pow2k_times(theta_prev, k);
        if (w1 > 0.0) sum += w1 * detail::ttv_value(f, iv, ladder.eta[k]);
        double w2 = detail::pow2k_times(ladder.eta[k], k);
        if (w2 > 0.0) sum += w2 * detail::ttv_value(g, iv, ladder.theta[k]);
    }
    return sum;
}

inline double s_tilde_sum(const SampledPath& f, const SampledPath& g,
                          const TruncationLadder& ladder) {
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi) throw domain_error("paths must share the same span");
    return s_tilde_sum(f, g, sf, ladder);
}

/// Geometric ladder wired to a concrete pair: eta_{-1} = sup |f - f(lo)|
/// (which the caller should pass as beta) and theta_{-1} = sup |g(hi) - g|.
inline TruncationLadder ladder_for_pair(const SampledPath& f, const SampledPath& g,
                                        const Interval& iv, const LadderParams& prm) {
    TruncationLadder ladder = geometric_ladder(prm);
    ladder.eta_minus1 = sup_dev_from_start(f, iv);
    ladder.theta_minus1 = sup_dev_from_end(g, iv);
    return ladder;
}

/// |sum_i f(xi_i) [g(t_i) - g(t_{i-1})] - f(c) [g(d) - g(c)]|, the left-hand
/// side the summation-by-parts lemma estimates.
inline double tagged_sum_deviation(const SampledPath& f, const SampledPath& g,
                                   const std::vector<double>& partition,
                                   const std::vector<double>& tags) {
    if (partition.size() < 2) throw domain_error("partition needs at least two points");
    if (tags.size() + 1 != partition.size())
        throw domain_error("need exactly one tag per partition cell");
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        if (!(partition[i] < partition[i + 1]))
            throw domain_error("partition must be strictly increasing");
        if (!(partition[i] <= tags[i] && tags[i] <= partition[i + 1]))
            throw domain_error("tags must interleave the partition");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i)
        sum += f.eval(tags[i]) * (g.eval(partition[i + 1]) - g.eval(partition[i]));
    double c = partition.front(), d = partition.back();
    return std::abs(sum - f.eval(c) * (g.eval(d) - g.eval(c)));
}

namespace detail {

inline void validate_truncation_seq(const std::vector<double>& seq, std::size_t r,
                                    const char* name) {
    if (seq.size() < r + 1) throw domain_error(std::string(name) + " sequence shorter than r+1");
    for (std::size_t k = 0; k <= r; ++k) {
        if (!(seq[k] >= 0.0)) throw domain_error(std::string(name) + " entries must be >= 0");
        if (k > 0 && seq[k] > seq[k - 1])
            throw domain_error(std::string(name) + " sequence must be non-increasing");
    }
}

}  // namespace detail

/// Right-hand side of the summation-by-parts estimate:
/// sum_{k<=r} 2^k delta_{k-1} TTV(g, eps_k) + sum_{k<=r} 2^k eps_k TTV(f, delta_k)
/// + n delta_r eps_r, with delta_{-1} = sup_{[c,d]} |f - f(c)|.
inline double lemma_rhs(const SampledPath& f, const SampledPath& g,
                        const std::vector<double>& partition, const std::vector<double>& tags,
                        const std::vector<double>& delta_seq, const std::vector<double>& eps_seq,
                        std::size_t r) {
    if (partition.size() < 2) throw domain_error("partition needs at least two points");
    if (tags.size() + 1 != partition.size())
        throw domain_error("need exactly one tag per partition cell");
    for (std::size_t i = 0; i + 1 < partition.size(); ++i)
        if (!(partition[i] <= tags[i] && tags[i] <= partition[i + 1]))
            throw domain_error("tags must interleave the partition");
    detail::validate_truncation_seq(delta_seq, r, "delta");
    detail::validate_truncation_seq(eps_seq, r, "eps");
    Interval iv{partition.front(), partition.back()};
    double sum = 0.0;
    for (std::size_t k = 0; k <= r; ++k) {
        double delta_prev = k == 0 ? sup_dev_from_start(f, iv) : delta_seq[k - 1];
        double w1 = detail::pow2k_times(delta_prev, k);
        if (w1 > 0.0) sum += w1 * detail::ttv_value(g, iv, eps_seq[k]);
        double w2 = detail::pow2k_times(eps_seq[k], k);
        if (w2 > 0.0) sum += w2 * detail::ttv_value(f, iv, delta_seq[k]);
    }
    double n = static_cast<double>(partition.size() - 1);
    sum += n * delta_seq[r] * eps_seq[r];
    return sum;
}

/// Symmetric form of the lemma estimate:
/// sum 2^k eps_{k-1} TTV(f, delta_k) + sum 2^k delta_k TTV(g, eps_k)
/// + n delta_r eps_r, with eps_{-1} = sup_{[c,d]} |g(d) - g|.
inline double lemma_rhs_symmetric(const SampledPath& f, const SampledPath& g,
                                  const std::vector<double>& partition,
                                  const std::vector<double>& tags,
                                  const std::vector<double>& delta_seq,
                                  const std::vector<double>& eps_seq, std::size_t r) {
    if (partition.size() < 2) throw domain_error("partition needs at least two points");
    if (tags.size() + 1 != partition.size())
        throw domain_error("need exactly one tag per partition cell");
    for (std::size_t i = 0; i + 1 < partition.size(); ++i)
        if (!(partition[i] <= tags[i] && tags[i] <= partition[i + 1]))
            throw domain_error("tags must interleave the partition");
    detail::validate_truncation_seq(delta_seq, r, "delta");
    detail::validate_truncation_seq(eps_seq, r, "eps");
    Interval iv{partition.front(), partition.back()};
    double sum = 0.0;
    for (std::size_t k = 0; k <= r; ++k) {
        double eps_prev = k == 0 ? sup_dev_from_end(g, iv) : eps_seq[k - 1];
        double w1 = detail::pow2k_times(eps_prev, k);
        if (w1 > 0.0) sum += w1 * detail::ttv_value(f, iv, delta_seq[k]);
        double w2 = detail::pow2k_times(delta_seq[k], k);
        if (w2 > 0.0) sum += w2 * detail::ttv_value(g, iv, eps_seq[k]);
    }
    double n = static_cast<double>(partition.size() - 1);
    sum += n * delta_seq[r] * eps_seq[r];
    return sum;
}

/// Improved Loeve-Young bound
/// C_{p,q} (V^p f)^(1-1/q) ||f||_osc^(1+p/q-p) (V^q g)^(1/q).
inline double improved_ly_bound(const SampledPath& f, const SampledPath& g, const Interval& iv,
                                double p, double q, double alpha) {
    validate_pq(p, q);
    double vp = pvar_dp(f, iv, p).value;
    double vq = pvar_dp(g, iv, q).value;
    if (vp == 0.0 || vq == 0.0) return 0.0;
    double osc = osc_norm(f, iv);
    double c = c_pq(p, q, alpha);
    return c * std::pow(vp, 1.0 - 1.0 / q) * std::pow(osc, 1.0 + p / q - p) *
           std::pow(vq, 1.0 / q);
}

inline double improved_ly_bound(const SampledPath& f, const SampledPath& g, const Interval& iv,
                                double p, double q) {
    return improved_ly_bound(f, g, iv, p, q, default_alpha(p, q));
}

inline double improved_ly_bound(const SampledPath& f, const SampledPath& g, double p, double q) {
    return improved_ly_bound(f, g, f.span(), p, q);
}

/// Role-swapped companion of the improved bound (same constant C_{p,q}):
/// C_{p,q} ||f||_{p-var} ||g||_{q-var}^(q-q/p) ||g||_osc^(1+q/p-q).
inline double improved_ly_bound_swapped(const SampledPath& f, const SampledPath& g,
                                        const Interval& iv, double p, double q, double alpha) {
    validate_pq(p, q);
    double vp = pvar_dp(f, iv, p).value;
    double vq = pvar_dp(g, iv, q).value;
    if (vp == 0.0 || vq == 0.0) return 0.0;
    double osc_g = osc_norm(g, iv);
    double c = c_pq(p, q, alpha);
    return c * std::pow(vp, 1.0 / p) * std::pow(vq, 1.0 - 1.0 / p) *
           std::pow(osc_g, 1.0 + q / p - q);
}

/// Classical Loeve-Young bound zeta(1/p + 1/q) (V^p f)^(1/p) (V^q g)^(1/q).
inline double classical_ly_bound(const SampledPath& f, const SampledPath& g, const Interval& iv,
                                 double p, double q) {
    if (!(1.0 / p + 1.0 / q > 1.0))
        throw domain_error("classical bound requires 1/p + 1/q > 1 (zeta diverges)");
    double vp = pvar_dp(f, iv, p).value;
    double vq = pvar_dp(g, iv, q).value;
    if (vp == 0.0 || vq == 0.0) return 0.0;
    return detail::zeta_cached(1.0 / p + 1.0 / q) * std::pow(vp, 1.0 / p) *
           std::pow(vq, 1.0 / q);
}

inline double classical_ly_bound(const SampledPath& f, const SampledPath& g, double p, double q) {
    return classical_ly_bound(f, g, f.span(), p, q);
}

/// Tag-uniform estimate 2 min(S, S~), valid for |integral - f(xi) Delta g|
/// at any tag xi in the interval.
inline double min_tagged_bound(const SampledPath& f, const SampledPath& g, const Interval& iv,
                               const TruncationLadder& ladder, double xi) {
    if (!(iv.lo <= xi && xi <= iv.hi)) throw domain_error("tag must lie inside the interval");
    return 2.0 * std::min(s_sum(f, g, iv, ladder), s_tilde_sum(f, g, iv, ladder));
}

/// Variation-norm companion of the tag-uniform estimate:
/// 2 min of the improved bound and its role-swapped form.
inline double min_tagged_bound_pq(const SampledPath& f, const SampledPath& g, const Interval& iv,
                                  double p, double q, double alpha) {
    return 2.0 * std::min(improved_ly_bound(f, g, iv, p, q, alpha),
                          improved_ly_bound_swapped(f, g, iv, p, q, alpha));
}

inline double min_tagged_bound_pq(const SampledPath& f, const SampledPath& g, const Interval& iv,
                                  double p, double q) {
    return min_tagged_bound_pq(f, g, iv, p, q, default_alpha(p, q));
}

/// q-variation control of the indefinite integral t -> integral_a^t f dg.
struct QvarBound {
    double sharp = 0.0;       ///< (C ||f||_p^(p-p/q) ||f||_osc^(1+p/q-p) + ||f||_inf) ||g||_q
    double simplified = 0.0;  ///< (C ||f||_p + ||f||_inf) ||g||_q
};

inline QvarBound indefinite_qvar_bound(const SampledPath& f, const SampledPath& g,
                                       const Interval& iv, double p, double q, double alpha) {
    validate_pq(p, q);
    double vp = pvar_dp(f, iv, p).value;
    double vq = pvar_dp(g, iv, q).value;
    QvarBound out;
    if (vq == 0.0) return out;
    double norm_g = std::pow(vq, 1.0 / q);
    double sup_f = sup_norm(f, iv);
    if (vp == 0.0) {
        out.sharp = sup_f * norm_g;
        out.simplified = out.sharp;
        return out;
    }
    double osc = osc_norm(f, iv);
    double c = c_pq(p, q, alpha);
    double norm_f = std::pow(vp, 1.0 / p);
    out.sharp = (c * std::pow(vp, 1.0 - 1.0 / q) * std::pow(osc, 1.0 + p / q - p) + sup_f) * norm_g;
    out.simplified = (c * norm_f + sup_f) * norm_g;
    return out;
}

inline QvarBound indefinite_qvar_bound(const SampledPath& f, const SampledPath& g, double p,
                                       double q) {
    return indefinite_qvar_bound(f, g, f.span(), p, q, default_alpha(p, q));
}

/// The full estimate set for one pair, as surfaced by the CLI.
struct BoundReport {
    double s = 0.0;
    double s_tilde = 0.0;
    double improved_ly = 0.0;
    double classical_ly = 0.0;
    double c_pq = 0.0;
    double min_tagged_bound = 0.0;
    double p = 0.0;
    double q = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

inline BoundReport make_bound_report(const SampledPath& f, const SampledPath& g,
                                     const Interval& iv, double p, double q,
                                     std::optional<double> alpha_opt = std::nullopt) {
    validate_pq(p, q);
    BoundReport rep;
    rep.p = p;
    rep.q = q;
    rep.alpha = alpha_opt.value_or(default_alpha(p, q));
    rep.beta = sup_dev_from_start(f, iv);
    rep.c_pq = c_pq(p, q, rep.alpha);
    double vp = pvar_dp(f, iv, p).value;
    double vq = pvar_dp(g, iv, q).value;
    if (vp == 0.0 || vq == 0.0) {
        // a constant leg forces every estimate (and the deviation itself) to 0
        rep.gamma = 0.0;
        return rep;
    }
    rep.gamma = std::pow(vq / vp, 1.0 / q) * std::pow(rep.beta, p / q);
    LadderParams prm{rep.alpha, rep.beta, rep.gamma, p, q};
    TruncationLadder ladder = ladder_for_pair(f, g, iv, prm);
    rep.s = s_sum(f, g, iv, ladder);
    rep.s_tilde = s_tilde_sum(f, g, iv, ladder);
    rep.improved_ly = improved_ly_bound(f, g, iv, p, q, rep.alpha);
    rep.classical_ly = classical_ly_bound(f, g, iv, p, q);
    rep.min_tagged_bound = 2.0 * std::min(rep.s, rep.s_tilde);
    return rep;
}

}  // namespace pathvar
