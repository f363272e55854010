#include <catch2/catch_amalgamated.hpp>

#include "pathvar/paths.hpp"
#include "test_support.hpp"

using namespace pathvar;
using testsupport::Rng;
using testsupport::random_path;

namespace {

SampledPath quad() { return SampledPath({0, 1, 2, 3}, {0, 1, 0.5, 1.5}); }

}  // namespace

TEST_CASE("construction rejects malformed input") {
    REQUIRE_THROWS_AS(SampledPath({}, {}), domain_error);
    REQUIRE_THROWS_AS(SampledPath({0, 1}, {0}), domain_error);
    REQUIRE_THROWS_AS(SampledPath({0, 0}, {1, 2}), domain_error);
    REQUIRE_THROWS_AS(SampledPath({1, 0}, {1, 2}), domain_error);
    REQUIRE_NOTHROW(SampledPath({0}, {3}));
}

TEST_CASE("eval follows the interpolation mode") {
    SampledPath lin({0, 1}, {0, 2}, Interp::linear);
    SampledPath lstep({0, 1}, {0, 2}, Interp::left_step);
    SampledPath rstep({0, 1}, {0, 2}, Interp::right_step);

    CHECK(lin.eval(0.5) == 1.0);
    CHECK(lstep.eval(0.5) == 0.0);
    CHECK(rstep.eval(0.5) == 2.0);

    SECTION("endpoints and sample times return stored values in every mode") {
        for (const auto& path : {lin, lstep, rstep}) {
            CHECK(path.eval(0.0) == 0.0);
            CHECK(path.eval(1.0) == 2.0);
        }
    }
    SECTION("outside the span is a domain error") {
        CHECK_THROWS_AS(lin.eval(-0.1), domain_error);
        CHECK_THROWS_AS(lin.eval(1.1), domain_error);
    }
}

TEST_CASE("oscillation norm") {
    CHECK(osc_norm(quad()) == 1.5);
    CHECK(osc_norm(SampledPath({0, 1, 2}, {4, 4, 4})) == 0.0);
    CHECK(osc_norm(SampledPath({0, 1, 2}, {0, 1, 0})) == 1.0);
    SECTION("empty interval gives zero") {
        CHECK(osc_norm(quad(), Interval{1.0, 1.0}) == 0.0);
    }
    SECTION("non-sample endpoints use interpolated values") {
        SampledPath lin({0, 1}, {0, 2}, Interp::linear);
        CHECK(osc_norm(lin, Interval{0.25, 0.75}) == 1.0);
        SampledPath lstep({0, 1}, {0, 2}, Interp::left_step);
        CHECK(osc_norm(lstep, Interval{0.25, 0.75}) == 0.0);
    }
}

TEST_CASE("sup deviation from the interval start") {
    CHECK(sup_dev_from_start(quad()) == 1.5);
    CHECK(sup_dev_from_start(SampledPath({0, 1, 2}, {0, 1, 2})) == 2.0);
    CHECK(sup_dev_from_start(SampledPath({0, 1}, {3, 3})) == 0.0);
}

TEST_CASE("total variation") {
    CHECK(total_variation(quad()) == 2.5);
    CHECK(total_variation(SampledPath({0, 1}, {0, 3})) == 3.0);
    CHECK(total_variation(SampledPath({0, 1, 2}, {1, 1, 1})) == 0.0);
}

TEST_CASE("common discontinuities") {
    SampledPath lin1({0, 1, 2, 3}, {0, 1, 0, 1});
    SampledPath lin2({0, 1, 2, 3}, {1, 0, 1, 0});
    CHECK(common_discontinuities(lin1, lin2).empty());

    SampledPath s1({0, 1, 2, 3}, {0, 1, 2, 2}, Interp::left_step);  // jumps at 1, 2
    SampledPath s2({0, 1, 2, 3}, {0, 0, 1, 2}, Interp::left_step);  // jumps at 2, 3
    auto common = common_discontinuities(s1, s2);
    REQUIRE(common.size() == 1);
    CHECK(common[0] == 2.0);

    SampledPath flat({0, 1, 2, 3}, {5, 5, 5, 5}, Interp::left_step);
    CHECK(common_discontinuities(s1, flat).empty());

    SampledPath other_span({0, 1, 2}, {0, 1, 2});
    CHECK_THROWS_AS(common_discontinuities(lin1, other_span), domain_error);
}

TEST_CASE("norm inequalities and additivity on random paths") {
    Rng rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        auto interp = static_cast<Interp>(rng.index(3));
        std::size_t n = 2 + rng.index(15);
        SampledPath f = random_path(rng, n, -2, 2, interp);
        Interval iv = f.span();

        double osc = osc_norm(f, iv);
        double dev = sup_dev_from_start(f, iv);
        double tv = total_variation(f, iv);
        CHECK(osc <= tv + 1e-12);
        CHECK(dev <= osc + 1e-12);
        CHECK(osc <= 2 * dev + 1e-12);

        if (n >= 3) {
            double d = f.time(1 + rng.index(n - 2));
            double left = total_variation(f, Interval{iv.lo, d});
            double right = total_variation(f, Interval{d, iv.hi});
            CHECK(testsupport::rel_diff(left + right, tv) < 1e-12);
        }

        for (std::size_t i = 0; i < n; ++i) CHECK(f.eval(f.time(i)) == f.value(i));
    }
}
