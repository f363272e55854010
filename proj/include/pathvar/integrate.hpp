#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pathvar/bounds.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// Partition points t_0 < ... < t_n with one tag per cell,
/// t_{i-1} <= xi_i <= t_i.
struct TaggedPartition {
    std::vector<double> points;
    std::vector<double> tags;

    double mesh() const {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            m = std::max(m, points[i + 1] - points[i]);
        return m;
    }
};

enum class TagMode { left, mid, right };

inline TaggedPartition uniform_tagged_partition(const Interval& iv, std::size_t cells,
                                                TagMode mode = TagMode::left) {
    if (cells == 0 || !(iv.lo < iv.hi))
        throw domain_error("partition needs at least one cell of positive width");
    TaggedPartition tp;
    tp.points.reserve(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        double w = static_cast<double>(i) / static_cast<double>(cells);
        tp.points.push_back(iv.lo + w * (iv.hi - iv.lo));
    }
    tp.points.back() = iv.hi;
    tp.tags.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        switch (mode) {
            case TagMode::left: tp.tags.push_back(tp.points[i]); break;
            case TagMode::right: tp.tags.push_back(tp.points[i + 1]); break;
            case TagMode::mid: tp.tags.push_back(0.5 * (tp.points[i] + tp.points[i + 1])); break;
        }
    }
    return tp;
}

inline void validate_partition(const SampledPath& f, const SampledPath& g,
                               const TaggedPartition& tp) {
    if (tp.points.size() < 2) throw domain_error("partition needs at least two points");
    if (tp.tags.size() + 1 != tp.points.size())
        throw domain_error("need exactly one tag per partition cell");
    for (std::size_t i = 0; i + 1 < tp.points.size(); ++i) {
        if (!(tp.points[i] < tp.points[i + 1]))
            throw domain_error("partition must be strictly increasing");
        if (!(tp.points[i] <= tp.tags[i] && tp.tags[i] <= tp.points[i + 1]))
            throw domain_error("tags must interleave the partition");
    }
    if (!f.contains(tp.points.front()) || !f.contains(tp.points.back()) ||
        !g.contains(tp.points.front()) || !g.contains(tp.points.back()))
        throw domain_error("partition outside the common span");
}

/// Tagged Riemann-Stieltjes sum sum_i f(xi_i) [g(t_i) - g(t_{i-1})].
inline double rs_sum(const SampledPath& f, const SampledPath& g, const TaggedPartition& tp) {
    validate_partition(f, g, tp);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < tp.points.size(); ++i)
        sum += f.eval(tp.tags[i]) * (g.eval(tp.points[i + 1]) - g.eval(tp.points[i]));
    return sum;
}

namespace detail {

inline void require_integrable_pair(const SampledPath& f, const SampledPath& g) {
    if (!common_discontinuities(f, g).empty())
        throw precondition_error(
            "integrand and integrator share a discontinuity time; "
            "the Riemann-Stieltjes integral need not exist");
}

/// Merged sample times of both paths restricted to iv, including endpoints.
inline std::vector<double> union_grid(const SampledPath& f, const SampledPath& g,
                                      const Interval& iv) {
    std::vector<double> grid;
    grid.push_back(iv.lo);
    std::vector<double> merged;
    std::merge(f.times().begin(), f.times().end(), g.times().begin(), g.times().end(),
               std::back_inserter(merged));
    for (double t : merged)
        if (t > iv.lo && t < iv.hi) grid.push_back(t);
    if (iv.hi > iv.lo) grid.push_back(iv.hi);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Exact integral over one elementary segment [u, w] containing no interior
/// sample of either path. Step integrators concentrate their increment at
/// one endpoint; step integrands are constant where the integrator moves.
inline double segment_integral(const SampledPath& f, const SampledPath& g, double u, double w) {
    double gu = g.eval(u), gw = g.eval(w);
    double dg = gw - gu;
    if (dg == 0.0) return 0.0;
    switch (g.interp()) {
        case Interp::left_step: return f.eval(w) * dg;
        case Interp::right_step: return f.eval(u) * dg;
        case Interp::linear:
        default:
            switch (f.interp()) {
                case Interp::left_step: return f.eval(u) * dg;
                case Interp::right_step: return f.eval(w) * dg;
                case Interp::linear:
                default: return 0.5 * (f.eval(u) + f.eval(w)) * dg;
            }
    }
}

}  // namespace detail

/// Exact Riemann-Stieltjes integral of f against g over iv for the sampled
/// interpolated model. Pairs with a common discontinuity are rejected.
inline double exact_integral(const SampledPath& f, const SampledPath& g, const Interval& iv) {
    check_interval(f, iv);
    check_interval(g, iv);
    detail::require_integrable_pair(f, g);
    auto grid = detail::union_grid(f, g, iv);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        sum += detail::segment_integral(f, g, grid[i], grid[i + 1]);
    return sum;
}

inline double exact_integral(const SampledPath& f, const SampledPath& g) {
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi) throw domain_error("paths must share the same span");
    return exact_integral(f, g, sf);
}

/// The path t -> integral_a^t f dg on f's sample grid; first value 0.
inline SampledPath indefinite_integral(const SampledPath& f, const SampledPath& g) {
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi) throw domain_error("paths must share the same span");
    detail::require_integrable_pair(f, g);
    auto grid = detail::union_grid(f, g, sf);
    std::vector<double> values(f.size(), 0.0);
    double acc = 0.0;
    std::size_t fi = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) acc += detail::segment_integral(f, g, grid[i - 1], grid[i]);
        while (fi < f.size() && f.time(fi) == grid[i]) values[fi++] = acc;
    }
    return SampledPath(f.times(), values, Interp::linear);
}

/// Certified integral approximation.
struct IntegralReport {
    double value = 0.0;
    double error_bound = 0.0;
    double mesh = 0.0;
    std::size_t refinements = 0;
};

/// Budget exhausted before the error bound met the tolerance; carries the
/// best report obtained.
class refinement_error : public budget_error {
public:
    refinement_error(const std::string& what, IntegralReport best)
        : budget_error(what), best_(best) {}
    const IntegralReport& best() const { return best_; }

private:
    IntegralReport best_;
};

/// Dyadically refines a tagged partition until the cell-wise sum of
/// localized improved Loeve-Young bounds is <= tol; the certified error of
/// the returned Riemann-Stieltjes sum. Localization is sound because
/// p-variation is superadditive over interval splits. Each cell certificate
/// also takes the r = 0 summation-by-parts estimate (sup deviation times
/// total variation), which wins once cells carry few samples.
inline IntegralReport adaptive_integrate(const SampledPath& f, const SampledPath& g, double p,
                                         double q, double tol, TagMode tags = TagMode::left,
                                         std::size_t max_refinements = 64,
                                         std::size_t max_cells = (std::size_t{1} << 21)) {
    validate_pq(p, q);
    if (!(tol > 0.0)) throw domain_error("tolerance must be > 0");
    Interval sf = f.span(), sg = g.span();
    if (sf.lo != sg.lo || sf.hi != sg.hi) throw domain_error("paths must share the same span");
    detail::require_integrable_pair(f, g);

    const double c = c_pq(p, q, default_alpha(p, q));
    auto cell_bound = [&](const Interval& cell) {
        double vp = pvar_dp(f, cell, p).value;
        double vq = pvar_dp(g, cell, q).value;
        double tv_g = total_variation(g, cell);
        if (vp == 0.0 || vq == 0.0) return 0.0;  // a constant leg on the cell
        if (tags == TagMode::left) {
            double dev = sup_dev_from_start(f, cell) * tv_g;
            double ly = c * std::pow(vp, 1.0 - 1.0 / q) *
                        std::pow(osc_norm(f, cell), 1.0 + p / q - p) * std::pow(vq, 1.0 / q);
            return std::min(ly, dev);
        }
        double osc_f = osc_norm(f, cell);
        double dev = osc_f * tv_g;
        double ly = c * std::pow(vp, 1.0 - 1.0 / q) * std::pow(osc_f, 1.0 + p / q - p) *
                    std::pow(vq, 1.0 / q);
        double ly_swapped = c * std::pow(vp, 1.0 / p) * std::pow(vq, 1.0 - 1.0 / p) *
                            std::pow(osc_norm(g, cell), 1.0 + q / p - q);
        return std::min(2.0 * std::min(ly, ly_swapped), dev);
    };

    // split at the interior sample (of either path) closest to the midpoint,
    // falling back to the arithmetic midpoint inside elementary segments
    auto split_point = [&](const Interval& cell) {
        double mid = 0.5 * (cell.lo + cell.hi);
        double best = mid;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const SampledPath* path : {&f, &g}) {
            auto [first, last] = pathvar::detail::interior_sample_range(*path, cell);
            if (first == last) continue;
            auto begin = path->times().begin();
            auto it = std::lower_bound(begin + static_cast<std::ptrdiff_t>(first),
                                       begin + static_cast<std::ptrdiff_t>(last), mid);
            std::size_t idx_hi = static_cast<std::size_t>(it - begin);
            for (std::size_t idx : {idx_hi, idx_hi > first ? idx_hi - 1 : idx_hi}) {
                if (idx < first || idx >= last) continue;
                double d = std::abs(path->time(idx) - mid);
                if (d < best_dist) {
                    best_dist = d;
                    best = path->time(idx);
                }
            }
        }
        return best;
    };

    std::vector<Interval> cells{sf};
    std::vector<double> bounds{cell_bound(sf)};
    std::size_t rounds = 0;

    auto report_of = [&]() {
        IntegralReport rep;
        TaggedPartition tp;
        tp.points.push_back(cells.front().lo);
        for (const auto& c : cells) tp.points.push_back(c.hi);
        for (const auto& c : cells) {
            switch (tags) {
                case TagMode::left: tp.tags.push_back(c.lo); break;
                case TagMode::right: tp.tags.push_back(c.hi); break;
                case TagMode::mid: tp.tags.push_back(0.5 * (c.lo + c.hi)); break;
            }
        }
        rep.value = rs_sum(f, g, tp);
        rep.error_bound = 0.0;
        for (double b : bounds) rep.error_bound += b;
        rep.mesh = tp.mesh();
        rep.refinements = rounds;
        return rep;
    };

    for (;;) {
        double total = 0.0;
        for (double b : bounds) total += b;
        if (total <= tol) return report_of();
        if (rounds >= max_refinements || cells.size() >= max_cells)
            throw refinement_error("refinement budget exhausted before reaching tolerance",
                                   report_of());
        double threshold = tol / static_cast<double>(cells.size());
        std::vector<Interval> next_cells;
        std::vector<double> next_bounds;
        bool split_any = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double mid = bounds[i] > threshold ? split_point(cells[i]) : cells[i].lo;
            if (bounds[i] > threshold && mid > cells[i].lo && mid < cells[i].hi) {
                Interval a{cells[i].lo, mid}, b{mid, cells[i].hi};
                next_cells.push_back(a);
                next_bounds.push_back(cell_bound(a));
                next_cells.push_back(b);
                next_bounds.push_back(cell_bound(b));
                split_any = true;
            } else {
                next_cells.push_back(cells[i]);
                next_bounds.push_back(bounds[i]);
            }
        }
        if (!split_any)
            throw refinement_error("cells can no longer be split but the bound exceeds tolerance",
                                   report_of());
        cells = std::move(next_cells);
        bounds = std::move(next_bounds);
        ++rounds;
    }
}

}  // namespace pathvar
