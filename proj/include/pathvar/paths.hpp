#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pathvar/errors.hpp"

namespace pathvar {

/// How sample values extend to the whole time span.
enum class Interp {
    linear,      ///< affine between samples (continuous)
    left_step,   ///< value of the last sample <= t
    right_step,  ///< value of the next sample >= t
};

inline std::string to_string(Interp interp) {
    switch (interp) {
        case Interp::linear: return "linear";
        case Interp::left_step: return "left-step";
        case Interp::right_step: return "right-step";
    }
    return "linear";
}

inline Interp interp_from_string(const std::string& s) {
    if (s == "linear") return Interp::linear;
    if (s == "left-step" || s == "left_step") return Interp::left_step;
    if (s == "right-step" || s == "right_step") return Interp::right_step;
    throw domain_error("unknown interpolation mode: " + s);
}

/// Closed time interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// A regulated function modelled as finite samples plus an interpolation
/// mode. Times are strictly increasing; duplicate times are rejected so step
/// semantics stay unambiguous.
class SampledPath {
public:
    SampledPath(std::vector<double> times, std::vector<double> values,
                Interp interp = Interp::linear)
        : times_(std::move(times)), values_(std::move(values)), interp_(interp) {
        if (times_.empty()) throw domain_error("path needs at least one sample");
        if (times_.size() != values_.size())
            throw domain_error("times and values must have equal length");
        for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
            if (!(times_[i] < times_[i + 1]))
                throw domain_error("sample times must be strictly increasing");
        }
        for (double t : times_)
            if (!std::isfinite(t)) throw domain_error("sample times must be finite");
        for (double v : values_)
            if (!std::isfinite(v)) throw domain_error("sample values must be finite");
    }

    std::size_t size() const { return times_.size(); }
    double time(std::size_t i) const { return times_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }
    Interp interp() const { return interp_; }

    Interval span() const { return {times_.front(), times_.back()}; }

    bool contains(double t) const { return t >= times_.front() && t <= times_.back(); }

    /// Index of the last sample time <= t. Requires t within the span.
    std::size_t index_at_or_before(double t) const {
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        return static_cast<std::size_t>(it - times_.begin()) - 1;
    }

    /// Index of the first sample time >= t. Requires t within the span.
    std::size_t index_at_or_after(double t) const {
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        return static_cast<std::size_t>(it - times_.begin());
    }

    double eval(double t) const {
        if (!contains(t)) throw domain_error("evaluation time outside the path span");
        switch (interp_) {
            case Interp::left_step:
                return values_[index_at_or_before(t)];
            case Interp::right_step:
                return values_[index_at_or_after(t)];
            case Interp::linear:
            default: {
                std::size_t i = index_at_or_before(t);
                if (times_[i] == t || i + 1 == times_.size()) return values_[i];
                double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
                return values_[i] + w * (values_[i + 1] - values_[i]);
            }
        }
    }

    /// Times where the interpolated function is discontinuous. Linear paths
    /// are continuous; step paths jump at sample times with unequal
    /// neighbouring values (on the left side for left-step, right side for
    /// right-step).
    std::vector<double> discontinuity_times() const {
        std::vector<double> out;
        if (interp_ == Interp::linear) return out;
        for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
            if (values_[i] != values_[i + 1])
                out.push_back(interp_ == Interp::left_step ? times_[i + 1] : times_[i]);
        }
        return out;
    }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    Interp interp_;
};

inline void check_interval(const SampledPath& path, const Interval& iv) {
    if (!(iv.lo <= iv.hi)) throw domain_error("interval must satisfy lo <= hi");
    if (!path.contains(iv.lo) || !path.contains(iv.hi))
        throw domain_error("interval outside the path span");
}

namespace detail {

/// Index range [first, last) of samples strictly inside (iv.lo, iv.hi).
inline std::pair<std::size_t, std::size_t> interior_sample_range(const SampledPath& path,
                                                                 const Interval& iv) {
    const auto& ts = path.times();
    auto first = std::upper_bound(ts.begin(), ts.end(), iv.lo);
    auto last = std::lower_bound(first, ts.end(), iv.hi);
    return {static_cast<std::size_t>(first - ts.begin()),
            static_cast<std::size_t>(last - ts.begin())};
}

}  // namespace detail

/// The value sequence of the path restricted to [iv.lo, iv.hi]: interpolated
/// value at iv.lo, every sample strictly inside, interpolated value at iv.hi.
/// Every value the restricted function attains appears in this sequence, and
/// its consecutive differences carry the restriction's total variation, for
/// all three interpolation modes.
inline std::vector<double> restricted_values(const SampledPath& path, const Interval& iv) {
    check_interval(path, iv);
    auto [first, last] = detail::interior_sample_range(path, iv);
    std::vector<double> vals;
    vals.reserve(last - first + 2);
    vals.push_back(path.eval(iv.lo));
    for (std::size_t i = first; i < last; ++i) vals.push_back(path.value(i));
    if (iv.hi > iv.lo) vals.push_back(path.eval(iv.hi));
    return vals;
}

/// Times of samples kept by restricted_values (iv.lo, interior samples, iv.hi).
inline std::vector<double> restricted_times(const SampledPath& path, const Interval& iv) {
    check_interval(path, iv);
    auto [first, last] = detail::interior_sample_range(path, iv);
    std::vector<double> ts;
    ts.reserve(last - first + 2);
    ts.push_back(iv.lo);
    for (std::size_t i = first; i < last; ++i) ts.push_back(path.time(i));
    if (iv.hi > iv.lo) ts.push_back(iv.hi);
    return ts;
}

/// Oscillation norm: sup over s < t in iv of |f(t) - f(s)|.
inline double osc_norm(const SampledPath& path, const Interval& iv) {
    auto vals = restricted_values(path, iv);
    auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    return *mx - *mn;
}

inline double osc_norm(const SampledPath& path) { return osc_norm(path, path.span()); }

/// sup over t in iv of |f(t) - f(iv.lo)|.
inline double sup_dev_from_start(const SampledPath& path, const Interval& iv) {
    auto vals = restricted_values(path, iv);
    double base = vals.front();
    double best = 0.0;
    for (double v : vals) best = std::max(best, std::abs(v - base));
    return best;
}

inline double sup_dev_from_start(const SampledPath& path) {
    return sup_dev_from_start(path, path.span());
}

/// sup over t in iv of |f(iv.hi) - f(t)|.
inline double sup_dev_from_end(const SampledPath& path, const Interval& iv) {
    auto vals = restricted_values(path, iv);
    double base = vals.back();
    double best = 0.0;
    for (double v : vals) best = std::max(best, std::abs(base - v));
    return best;
}

inline double sup_dev_from_end(const SampledPath& path) {
    return sup_dev_from_end(path, path.span());
}

/// sup over t in iv of |f(t)|.
inline double sup_norm(const SampledPath& path, const Interval& iv) {
    auto vals = restricted_values(path, iv);
    double best = 0.0;
    for (double v : vals) best = std::max(best, std::abs(v));
    return best;
}

inline double sup_norm(const SampledPath& path) { return sup_norm(path, path.span()); }

/// Total variation of the restriction to iv; exact for the piecewise model.
inline double total_variation(const SampledPath& path, const Interval& iv) {
    auto vals = restricted_values(path, iv);
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) tv += std::abs(vals[i + 1] - vals[i]);
    return tv;
}

inline double total_variation(const SampledPath& path) {
    return total_variation(path, path.span());
}

/// Intersection of the discontinuity-time sets of two paths on a shared span.
/// Checks the two-sided precondition for Young-integral existence; the
/// one-sided relaxation (Moore-Pollard style) is not implemented.
inline std::vector<double> common_discontinuities(const SampledPath& f, const SampledPath& g) {
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi)
        throw domain_error("paths must share the same time span");
    auto df = f.discontinuity_times();
    auto dg = g.discontinuity_times();
    std::vector<double> out;
    std::set_intersection(df.begin(), df.end(), dg.begin(), dg.end(), std::back_inserter(out));
    return out;
}

}  // namespace pathvar
