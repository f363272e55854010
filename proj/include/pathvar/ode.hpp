#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pathvar/bounds.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/integrate.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/pvariation.hpp"

namespace pathvar {

/// Closed-form right-hand-side families with analytically known
/// alpha-Lipschitz parameters. Restricting to closed forms keeps the
/// a-priori bound constants trustworthy; a numerically estimated K would
/// contaminate the a-priori bound check.
class LipschitzSpec {
public:
    enum class Family { linear, power, sine, affine };

    static LipschitzSpec linear(double lambda) {
        return LipschitzSpec(Family::linear, {lambda}, 1.0, std::abs(lambda), 0.0);
    }

    /// F(y) = scale * sign(y) * |y|^alpha with alpha in (0, 1];
    /// K = |scale| * 2^(1-alpha) with equality at antipodal arguments.
    static LipschitzSpec power(double scale, double alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("power family needs alpha in (0,1]");
        return LipschitzSpec(Family::power, {scale, alpha}, alpha,
                             std::abs(scale) * std::exp2(1.0 - alpha), 0.0);
    }

    /// F(y) = mu * sin(nu * y), declared alpha-Lipschitz with
    /// K = |mu| * 2^(1-alpha) * |nu|^alpha (from min(2, |nu| d) <= 2^(1-a) (|nu| d)^a).
    static LipschitzSpec sine(double mu, double nu, double alpha = 1.0) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("sine family needs alpha in (0,1]");
        double k = std::abs(mu) * std::exp2(1.0 - alpha) * std::pow(std::abs(nu), alpha);
        return LipschitzSpec(Family::sine, {mu, nu}, alpha, k, 0.0);
    }

    static LipschitzSpec affine(double slope, double offset) {
        return LipschitzSpec(Family::affine, {slope, offset}, 1.0, std::abs(slope), offset);
    }

    double operator()(double y) const {
        switch (family_) {
            case Family::linear: return params_[0] * y;
            case Family::power: {
                double s = y > 0 ? 1.0 : (y < 0 ? -1.0 : 0.0);
                return params_[0] * s * std::pow(std::abs(y), params_[1]);
            }
            case Family::sine: return params_[0] * std::sin(params_[1] * y);
            case Family::affine:
            default: return params_[0] * y + params_[1];
        }
    }

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    double alpha() const { return alpha_; }
    double k_global() const { return k_global_; }
    /// Local parameter on the ball of radius R; constant for these families.
    double k_local(double) const { return k_global_; }
    double f0() const { return f0_; }

    std::string family_name() const {
        switch (family_) {
            case Family::linear: return "linear";
            case Family::power: return "power";
            case Family::sine: return "sine";
            case Family::affine:
            default: return "affine";
        }
    }

private:
    LipschitzSpec(Family family, std::vector<double> params, double alpha, double k_global,
                  double f0)
        : family_(family), params_(std::move(params)), alpha_(alpha), k_global_(k_global),
          f0_(f0) {}

    Family family_;
    std::vector<double> params_;
    double alpha_;
    double k_global_;
    double f0_;
};

/// y(t) = y0 + integral_a^t F(y(s)) dx(s) posed on the driver's sample grid.
struct OdeProblem {
    double y0 = 0.0;
    LipschitzSpec rhs = LipschitzSpec::linear(0.0);
    SampledPath driver;
    double p = 1.5;
    double tol = 1e-8;
    std::size_t max_iter = 200;
};

struct OdeSolution {
    SampledPath path;
    double residual = 0.0;
    std::size_t iterations = 0;
    double pvar_norm = 0.0;  ///< full norm |y(a)| + ||y||_{p-var}
    double radius = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> piece_breaks;  ///< sample indices of split points
};

/// Picard iteration ran out of iterations; carries the last iterate and the
/// residual trajectory.
class iteration_error : public budget_error {
public:
    iteration_error(const std::string& what, OdeSolution last, std::vector<double> residuals)
        : budget_error(what), last_(std::move(last)), residuals_(std::move(residuals)) {}
    const OdeSolution& last() const { return last_; }
    const std::vector<double>& residual_history() const { return residuals_; }

private:
    OdeSolution last_;
    std::vector<double> residuals_;
};

namespace detail {

inline void validate_ode_problem(const OdeProblem& prob) {
    if (!(prob.p > 1.0 && prob.p < 2.0)) throw domain_error("driver index p must lie in (1,2)");
    if (!(prob.tol > 0.0)) throw domain_error("tolerance must be > 0");
    if (prob.max_iter == 0) throw domain_error("max_iter must be >= 1");
    if (prob.driver.interp() != Interp::linear)
        throw domain_error("driver must be continuous (linear interpolation)");
    if (prob.driver.size() < 2) throw domain_error("driver needs at least two samples");
    double a = prob.rhs.alpha();
    if (a < 1.0 && !(prob.p - 1.0 < a))
        throw domain_error("alpha-Lipschitz exponent must exceed p - 1");
}

inline SampledPath subpath(const SampledPath& path, std::size_t i, std::size_t j) {
    std::vector<double> ts(path.times().begin() + static_cast<std::ptrdiff_t>(i),
                           path.times().begin() + static_cast<std::ptrdiff_t>(j) + 1);
    std::vector<double> vs(path.values().begin() + static_cast<std::ptrdiff_t>(i),
                           path.values().begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return SampledPath(std::move(ts), std::move(vs), path.interp());
}

}  // namespace detail

/// One application of the operator T y = y0 + integral_a^. F(y(t)) dx(t).
inline SampledPath picard_step(const SampledPath& y, const OdeProblem& prob) {
    if (y.times() != prob.driver.times())
        throw domain_error("iterate must live on the driver grid");
    std::vector<double> fy(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) fy[i] = prob.rhs(y.value(i));
    SampledPath integrand(y.times(), std::move(fy), Interp::linear);
    SampledPath integral = indefinite_integral(integrand, prob.driver);
    std::vector<double> out(integral.values());
    for (double& v : out) v += prob.y0;
    return SampledPath(y.times(), std::move(out), Interp::linear);
}

/// Least positive solution of R = A R^alpha + B. For alpha = 1 this is
/// B/(1-A) when A < 1 and infinity otherwise (splitting required).
inline double radius(double a_coef, double b_coef, double alpha) {
    if (!(a_coef >= 0.0) || !(b_coef >= 0.0)) throw domain_error("radius needs A, B >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("radius needs alpha in (0,1]");
    if (alpha == 1.0) {
        if (a_coef < 1.0) return b_coef / (1.0 - a_coef);
        return std::numeric_limits<double>::infinity();
    }
    if (a_coef == 0.0) return b_coef;
    if (b_coef == 0.0) return std::pow(a_coef, 1.0 / (1.0 - alpha));
    auto above = [&](double r) { return a_coef * std::pow(r, alpha) + b_coef - r; };
    double hi = std::max(1.0, b_coef);
    while (above(hi) > 0.0) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-12 * hi) {
        double mid = 0.5 * (lo + hi);
        if (above(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// A-priori ball coefficients A = (C_{p/alpha,p} + 2) K ||x||_{p-var} and
/// B = |y0| + |F(0)| ||x||_{p-var}.
inline std::pair<double, double> apriori_coefficients(const OdeProblem& prob,
                                                          const Interval& iv) {
    double alpha = prob.rhs.alpha();
    double x_norm = pvar_norm(prob.driver, iv, prob.p);
    double c = c_pq(prob.p / alpha, prob.p, default_alpha(prob.p / alpha, prob.p));
    double a_coef = (c + 2.0) * prob.rhs.k_global() * x_norm;
    double b_coef = std::abs(prob.y0) + std::abs(prob.rhs.f0()) * x_norm;
    return {a_coef, b_coef};
}

/// Picard iteration from the constant path y0, accepted once the fixed-point
/// residual ||y - Ty||_inf drops below tol.
inline OdeSolution solve(const OdeProblem& prob) {
    detail::validate_ode_problem(prob);
    SampledPath y(prob.driver.times(),
                  std::vector<double>(prob.driver.size(), prob.y0), Interp::linear);
    std::vector<double> residuals;
    for (std::size_t iter = 1; iter <= prob.max_iter; ++iter) {
        SampledPath z = picard_step(y, prob);
        double r = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            r = std::max(r, std::abs(z.value(i) - y.value(i)));
        residuals.push_back(r);
        if (r <= prob.tol) {
            OdeSolution sol{y, r, iter, 0.0, 0.0, {}};
            sol.pvar_norm = pvar_full_norm(y, prob.p);
            auto [a_coef, b_coef] = apriori_coefficients(prob, prob.driver.span());
            sol.radius = radius(a_coef, b_coef, prob.rhs.alpha());
            return sol;
        }
        y = z;
    }
    OdeSolution last{y, residuals.back(), prob.max_iter, pvar_full_norm(y, prob.p),
                     std::numeric_limits<double>::infinity(), {}};
    throw iteration_error("Picard iteration did not reach the tolerance", std::move(last),
                          std::move(residuals));
}

/// Globally 1-Lipschitz case: chops the span at sample times so that the
/// contraction coefficient A stays <= 1/2 on each piece, then chains solve()
/// with terminal values as the next initial conditions.
inline OdeSolution split_solve(const OdeProblem& prob) {
    detail::validate_ode_problem(prob);
    if (prob.rhs.alpha() != 1.0) throw domain_error("split_solve requires alpha = 1");

    double c = c_pq(prob.p, prob.p, default_alpha(prob.p, prob.p));
    double k = prob.rhs.k_global();
    auto piece_a = [&](std::size_t i, std::size_t j) {
        Interval iv{prob.driver.time(i), prob.driver.time(j)};
        return (c + 2.0) * k * pvar_norm(prob.driver, iv, prob.p);
    };

    const std::size_t n = prob.driver.size();
    std::vector<std::size_t> breaks{0};
    while (breaks.back() + 1 < n) {
        std::size_t s = breaks.back();
        if (piece_a(s, s + 1) > 0.5)
            throw budget_error("driver grid too coarse: one cell already exceeds the A <= 1/2 "
                               "splitting budget");
        // gallop then bisect for the furthest endpoint within budget
        std::size_t lo = s + 1, hi = lo;
        std::size_t step = 1;
        while (hi < n - 1 && piece_a(s, std::min(n - 1, hi + step)) <= 0.5) {
            hi = std::min(n - 1, hi + step);
            step *= 2;
        }
        std::size_t probe_hi = std::min(n - 1, hi + step);
        while (probe_hi > hi + 1) {
            std::size_t mid = hi + (probe_hi - hi) / 2;
            if (piece_a(s, mid) <= 0.5)
                hi = mid;
            else
                probe_hi = mid;
        }
        (void)lo;
        breaks.push_back(hi);
    }

    std::vector<double> values(n, 0.0);
    double y_start = prob.y0;
    std::size_t total_iters = 0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        std::size_t s = breaks[b], e = breaks[b + 1];
        OdeProblem sub{y_start, prob.rhs, detail::subpath(prob.driver, s, e), prob.p, prob.tol,
                       prob.max_iter};
        OdeSolution piece = solve(sub);
        for (std::size_t i = s; i <= e; ++i) values[i] = piece.path.value(i - s);
        y_start = piece.path.value(e - s);
        total_iters += piece.iterations;
    }

    OdeSolution sol{SampledPath(prob.driver.times(), values, Interp::linear), 0.0, total_iters,
                    0.0, 0.0, breaks};
    SampledPath ty = picard_step(sol.path, prob);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        r = std::max(r, std::abs(ty.value(i) - sol.path.value(i)));
    sol.residual = r;
    sol.pvar_norm = pvar_full_norm(sol.path, prob.p);
    auto [a_coef, b_coef] = apriori_coefficients(prob, prob.driver.span());
    sol.radius = radius(a_coef, b_coef, 1.0);
    return sol;
}

}  // namespace pathvar
