#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pathvar/bounds.hpp"
#include "pathvar/integrate.hpp"
#include "test_support.hpp"

using namespace pathvar;
using testsupport::Rng;
using testsupport::random_path;

namespace {

SampledPath quad() { return SampledPath({0, 1, 2, 3}, {0, 1, 0.5, 1.5}); }

LadderParams params_for(const SampledPath& f, const SampledPath& g, double p, double q) {
    LadderParams prm;
    prm.p = p;
    prm.q = q;
    prm.alpha = default_alpha(p, q);
    prm.beta = sup_dev_from_start(f, f.span());
    double vp = pvar_dp(f, f.span(), p).value;
    double vq = pvar_dp(g, g.span(), q).value;
    prm.gamma = (vp > 0 && vq > 0 && prm.beta > 0)
                    ? std::pow(vq / vp, 1.0 / q) * std::pow(prm.beta, p / q)
                    : 1.0;
    return prm;
}

double deviation_at(const SampledPath& f, const SampledPath& g, double xi) {
    Interval iv = f.span();
    return std::abs(exact_integral(f, g) - f.eval(xi) * (g.eval(iv.hi) - g.eval(iv.lo)));
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate_pq(1.0, 1.5), domain_error);
    CHECK_THROWS_AS(validate_pq(2.0, 2.0), domain_error);
    CHECK_NOTHROW(validate_pq(1.5, 1.5));
    // 1/p > 1 - 1/q holds across the admissible grid
    for (double p : {1.1, 1.5, 1.9})
        for (double q : {1.05, 1.5, 2.0})
            if (1.0 / p + 1.0 / q > 1.0) CHECK(1.0 / p > 1.0 - 1.0 / q);
}

TEST_CASE("geometric ladder closed forms") {
    LadderParams prm{0.75, 1.0, 1.0, 1.5, 1.5};
    TruncationLadder ladder = geometric_ladder(prm);
    CHECK(ladder.eta_minus1 == 1.0);
    CHECK(ladder.eta[0] == Catch::Approx(std::exp2(-1.25)).epsilon(1e-14));
    CHECK(ladder.eta[1] == Catch::Approx(std::exp2(-2.25 * 2.25 + 1.0)).epsilon(1e-14));
    CHECK(ladder.theta[0] == Catch::Approx(std::exp2(-1.5)).epsilon(1e-14));
    CHECK(ladder.theta[1] == Catch::Approx(std::exp2(-2.25 * 1.5)).epsilon(1e-14));

    SECTION("beta = 0 zeroes the eta ladder") {
        prm.beta = 0.0;
        TruncationLadder zero = geometric_ladder(prm);
        for (double e : zero.eta) CHECK(e == 0.0);
    }
    SECTION("super-geometric decay: successive ratios strictly decrease") {
        for (std::size_t k = 2; k < ladder.truncation_length(); ++k) {
            if (ladder.eta[k] < 1e-100 || ladder.theta[k] < 1e-100) break;
            CHECK(ladder.eta[k] / ladder.eta[k - 1] < ladder.eta[k - 1] / ladder.eta[k - 2]);
            CHECK(ladder.theta[k] / ladder.theta[k - 1] <
                  ladder.theta[k - 1] / ladder.theta[k - 2]);
        }
    }
    SECTION("invalid alpha is rejected") {
        prm.alpha = 0.4;  // below sqrt((q-1)(p-1)) = 0.5
        CHECK_THROWS_AS(geometric_ladder(prm), domain_error);
        prm.alpha = 1.0;
        CHECK_THROWS_AS(geometric_ladder(prm), domain_error);
    }
}

TEST_CASE("C_{p,q} series") {
    double c = c_pq(1.5, 1.5, 0.75);
    CHECK(c == Catch::Approx(20.6).margin(0.2));

    // independent direct summation of both displayed series
    double a = 0.75, base = 0.75 * 0.75 / 0.25;
    double s1 = 0, s2 = 0, powk = 1;
    for (int k = 0; k < 60; ++k) {
        s1 += std::pow(2.0, k + 2 - (1 - a) * powk);
        s2 += std::pow(2.0, k + 2 - (1 - a) * powk * a / 0.5 - 1.5);
        powk *= base;
    }
    CHECK(c == Catch::Approx(std::max(s1, s2)).epsilon(1e-10));
    CHECK(s1 > s2);  // first series dominates here

    SECTION("second parameterization stays finite, second series smaller") {
        double c2 = c_pq(1.2, 1.8, 0.9);
        CHECK(std::isfinite(c2));
        CHECK(c2 > 0.0);
    }
    SECTION("divergent parameterization rejected") {
        CHECK_THROWS_AS(c_pq(1.5, 1.5, 0.5), domain_error);
    }
}

TEST_CASE("zeta") {
    const double pi = 3.14159265358979323846;
    CHECK(std::abs(zeta(2.0, 1e-6) - pi * pi / 6.0) < 1e-6);
    CHECK(std::abs(zeta(4.0 / 3.0, 1e-6) - 3.6009) < 2e-3);
    CHECK(zeta(50.0, 1e-12) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(zeta(20.0, 1e-10) > zeta(30.0, 1e-10));
    CHECK_THROWS_AS(zeta(1.0, 1e-6), domain_error);
    CHECK_THROWS_AS(zeta(2.0, 0.0), domain_error);

    SECTION("partial sums are monotone non-decreasing") {
        double prev = 0.0;
        for (int n = 1; n <= 64; ++n) {
            double cur = prev + std::pow(n, -1.5);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("S and S~ on degenerate pairs") {
    SampledPath flat({0, 1, 2, 3}, {2, 2, 2, 2});
    SampledPath f = quad();

    SECTION("constant integrand: S = 0 with the matched ladder") {
        LadderParams prm = params_for(flat, f, 1.5, 1.5);
        TruncationLadder ladder = ladder_for_pair(flat, f, flat.span(), prm);
        CHECK(s_sum(flat, f, ladder) == 0.0);
        CHECK(s_tilde_sum(flat, f, ladder) ==
              0.0);  // both sums carry a zero factor per term
    }
    SECTION("constant integrator: first sum of S vanishes") {
        LadderParams prm = params_for(f, flat, 1.5, 1.5);
        TruncationLadder ladder = ladder_for_pair(f, flat, f.span(), prm);
        double s = s_sum(f, flat, ladder);
        double expected = 0.0;
        double expected_tilde = 0.0;
        for (std::size_t k = 0; k < ladder.truncation_length(); ++k) {
            double ttv_k = ttv_dp(f, ladder.eta[k]).value;
            if (ladder.theta[k] != 0.0)
                expected += std::ldexp(ladder.theta[k], static_cast<int>(k)) * ttv_k;
            double theta_prev = k == 0 ? ladder.theta_minus1 : ladder.theta[k - 1];
            if (theta_prev != 0.0)
                expected_tilde += std::ldexp(theta_prev, static_cast<int>(k)) * ttv_k;
        }
        CHECK(ladder.theta_minus1 == 0.0);  // sup |g(b) - g(t)| of a constant
        CHECK(s == Catch::Approx(expected).epsilon(1e-12));
        CHECK(s_tilde_sum(f, flat, ladder) == Catch::Approx(expected_tilde).epsilon(1e-12));
    }
    SECTION("f = g: S and S~ differ only through the eta/theta asymmetry") {
        LadderParams prm = params_for(f, f, 1.5, 1.5);
        TruncationLadder ladder = ladder_for_pair(f, f, f.span(), prm);
        double s = s_sum(f, f, ladder);
        double st = s_tilde_sum(f, f, ladder);
        CHECK(s > 0.0);
        CHECK(st > 0.0);
    }
}

TEST_CASE("series estimates dominate the deviation; 2 min is tag-uniform") {
    Rng rng(57);
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t n = 2 + rng.index(31);
        SampledPath f = random_path(rng, n);
        SampledPath g = random_path(rng, n);
        double p = 1.5, q = 1.5;
        LadderParams prm = params_for(f, g, p, q);
        TruncationLadder ladder = ladder_for_pair(f, g, f.span(), prm);
        double s = s_sum(f, g, ladder);
        double st = s_tilde_sum(f, g, ladder);
        double lhs = deviation_at(f, g, f.time(0));
        CHECK(lhs <= s + 1e-10);
        CHECK(lhs <= st + 1e-10);
        for (int probe = 0; probe < 4; ++probe) {
            double xi = f.time(rng.index(n));
            CHECK(deviation_at(f, g, xi) <= min_tagged_bound(f, g, f.span(), ladder, xi) + 1e-10);
            CHECK(deviation_at(f, g, xi) <= min_tagged_bound_pq(f, g, f.span(), p, q) + 1e-10);
        }
    }
}

TEST_CASE("summation-by-parts lemma") {
    SampledPath f = quad();
    SampledPath g({0, 1, 2, 3}, {1, -1, 2, 0.5});

    SECTION("r = 0 with zero sequences reduces to sup-dev times TV") {
        std::vector<double> partition{0, 1, 2, 3};
        std::vector<double> tags{0.5, 1.5, 2.5};
        double rhs = lemma_rhs(f, g, partition, tags, {0.0}, {0.0}, 0);
        CHECK(rhs == Catch::Approx(sup_dev_from_start(f, f.span()) * total_variation(g)));
        CHECK(tagged_sum_deviation(f, g, partition, tags) <= rhs + 1e-12);
    }
    SECTION("constant integrand gives zero deviation") {
        SampledPath flat({0, 1, 2, 3}, {3, 3, 3, 3});
        std::vector<double> partition{0, 1.5, 3};
        std::vector<double> tags{1.0, 2.0};
        CHECK(tagged_sum_deviation(flat, g, partition, tags) == 0.0);
    }
    SECTION("malformed tags rejected") {
        CHECK_THROWS_AS(tagged_sum_deviation(f, g, {0, 1, 3}, {2.0, 2.0}), domain_error);
        CHECK_THROWS_AS(lemma_rhs(f, g, {0, 1, 3}, {2.0, 2.0}, {0.1}, {0.1}, 0), domain_error);
    }
    SECTION("property: LHS <= RHS for random partitions, tags and ladders") {
        Rng rng(61);
        for (int rep = 0; rep < 60; ++rep) {
            std::size_t n = 2 + rng.index(15);
            SampledPath ff = random_path(rng, n);
            SampledPath gg = random_path(rng, n);
            // random sample-subset partition of the full span
            std::vector<double> partition{ff.time(0)};
            for (std::size_t i = 1; i + 1 < n; ++i)
                if (rng.coin()) partition.push_back(ff.time(i));
            partition.push_back(ff.time(n - 1));
            std::vector<double> tags;
            for (std::size_t i = 0; i + 1 < partition.size(); ++i)
                tags.push_back(rng.uniform(partition[i], partition[i + 1]));

            std::size_t r = static_cast<std::size_t>(rng.index(4));
            std::vector<double> deltas, epses;
            double dv = rng.uniform(0.2, 1.0), ev = rng.uniform(0.2, 1.0);
            for (std::size_t k = 0; k <= r; ++k) {
                deltas.push_back(dv);
                epses.push_back(ev);
                dv *= rng.uniform(0.2, 0.9);
                ev *= rng.uniform(0.2, 0.9);
            }
            double lhs = tagged_sum_deviation(ff, gg, partition, tags);
            CHECK(lhs <= lemma_rhs(ff, gg, partition, tags, deltas, epses, r) + 1e-10);
            CHECK(lhs <= lemma_rhs_symmetric(ff, gg, partition, tags, deltas, epses, r) + 1e-10);
            // n = 1 forms
            std::vector<double> whole{ff.time(0), ff.time(n - 1)};
            std::vector<double> tag1{rng.uniform(whole[0], whole[1])};
            double lhs1 = tagged_sum_deviation(ff, gg, whole, tag1);
            CHECK(lhs1 <= lemma_rhs(ff, gg, whole, tag1, deltas, epses, r) + 1e-10);
            CHECK(lhs1 <= lemma_rhs_symmetric(ff, gg, whole, tag1, deltas, epses, r) + 1e-10);
        }
    }
}

TEST_CASE("Loeve-Young bounds") {
    SECTION("degenerate legs give zero") {
        SampledPath flat({0, 1, 2, 3}, {1, 1, 1, 1});
        SampledPath f = quad();
        CHECK(improved_ly_bound(flat, f, 1.5, 1.5) == 0.0);
        CHECK(improved_ly_bound(f, flat, 1.5, 1.5) == 0.0);
        CHECK(classical_ly_bound(flat, f, 1.5, 1.5) == 0.0);
    }
    SECTION("worked example follows the displayed formula") {
        SampledPath f = quad();
        double vp = pvar_dp(f, 1.5).value;
        double osc = osc_norm(f);
        double alpha = default_alpha(1.5, 1.5);
        double expected = c_pq(1.5, 1.5, alpha) * std::pow(vp, 1.0 / 3.0) *
                          std::pow(osc, 0.5) * std::pow(vp, 2.0 / 3.0);
        CHECK(improved_ly_bound(f, f, 1.5, 1.5) == Catch::Approx(expected).epsilon(1e-12));
        double zeta43 = zeta(4.0 / 3.0, 1e-8);
        CHECK(classical_ly_bound(f, f, 1.5, 1.5) ==
              Catch::Approx(zeta43 * std::pow(vp, 4.0 / 3.0)).epsilon(1e-6));
    }
    SECTION("validity on random pairs") {
        Rng rng(71);
        for (int rep = 0; rep < 60; ++rep) {
            std::size_t n = 2 + rng.index(31);
            SampledPath f = random_path(rng, n);
            SampledPath g = random_path(rng, n);
            double lhs = deviation_at(f, g, f.time(0));
            for (auto [p, q] : {std::pair{1.5, 1.5}, {1.2, 1.8}, {1.8, 1.2}}) {
                CHECK(lhs <= improved_ly_bound(f, g, p, q) + 1e-10);
                CHECK(lhs <= classical_ly_bound(f, g, p, q) + 1e-10);
            }
        }
    }
    SECTION("divergent zeta argument rejected") {
        SampledPath f = quad();
        CHECK_THROWS_AS(classical_ly_bound(f, f, 2.0, 2.0), domain_error);
    }
}

TEST_CASE("indefinite-integral q-variation bound") {
    SECTION("constant integrand") {
        SampledPath c({0, 1, 2}, {3, 3, 3});
        SampledPath g({0, 1, 2}, {0, 1, 0.5});
        QvarBound b = indefinite_qvar_bound(c, g, 1.5, 1.5);
        CHECK(b.sharp == Catch::Approx(3.0 * pvar_norm(g, 1.5)));
        CHECK(b.simplified == b.sharp);
    }
    SECTION("constant integrator") {
        SampledPath f = quad();
        SampledPath c({0, 1, 2, 3}, {3, 3, 3, 3});
        QvarBound b = indefinite_qvar_bound(f, c, 1.5, 1.5);
        CHECK(b.sharp == 0.0);
        CHECK(b.simplified == 0.0);
    }
    SECTION("property: q-var of the indefinite integral is controlled") {
        Rng rng(83);
        for (int rep = 0; rep < 50; ++rep) {
            std::size_t n = 2 + rng.index(24);
            SampledPath f = random_path(rng, n);
            SampledPath g = random_path(rng, n);
            for (auto [p, q] : {std::pair{1.5, 1.5}, {1.2, 1.8}}) {
                QvarBound b = indefinite_qvar_bound(f, g, p, q);
                SampledPath integral = indefinite_integral(f, g);
                CHECK(pvar_norm(integral, q) <= b.sharp + 1e-10);
                CHECK(b.sharp <= b.simplified + 1e-12);
            }
        }
    }
}

TEST_CASE("bound report") {
    SampledPath f = quad();
    SampledPath g({0, 1, 2, 3}, {1, -0.5, 0.5, 2});
    BoundReport rep = make_bound_report(f, g, f.span(), 1.5, 1.5);
    CHECK(rep.s >= 0.0);
    CHECK(rep.s_tilde >= 0.0);
    CHECK(rep.min_tagged_bound == 2.0 * std::min(rep.s, rep.s_tilde));
    CHECK(rep.beta == sup_dev_from_start(f, f.span()));
    CHECK(rep.alpha == default_alpha(1.5, 1.5));
    CHECK(rep.gamma > 0.0);
    double lhs = deviation_at(f, g, 0.0);
    CHECK(lhs <= rep.s + 1e-10);
    CHECK(lhs <= rep.improved_ly + 1e-10);
    CHECK(lhs <= rep.classical_ly + 1e-10);
}
