#include <doctest.h>

#include "mlabel/common.hpp"
#include "mlabel/discretize.hpp"

using namespace mlabel;

TEST_CASE("mdl cuts: a perfect separator gets one cut at the boundary midpoint") {
    // HandMDL check: gain = 1 bit, threshold = (log2(3) + log2(7) - 2)/4 ~ 0.598
    const std::vector<double> values{0.2, 0.3, 0.7, 0.8};
    const std::vector<std::uint8_t> classes{1, 1, 0, 0};
    const auto cuts = mdl_cut_points(values, classes);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mdl cuts: constant feature yields a single bin") {
    const std::vector<double> values{0.4, 0.4, 0.4, 0.4};
    const std::vector<std::uint8_t> classes{1, 0, 1, 0};
    CHECK(mdl_cut_points(values, classes).empty());
}

TEST_CASE("mdl cuts: weak separation is rejected by the MDL test") {
    // Interleaved classes: any cut has near-zero gain.
    const std::vector<double> values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    const std::vector<std::uint8_t> classes{1, 0, 1, 0, 1, 0, 1, 0};
    CHECK(mdl_cut_points(values, classes).empty());
}

TEST_CASE("mdl cuts: two boundaries recovered when both sides justify splits") {
    std::vector<double> values;
    std::vector<std::uint8_t> classes;
    for (int i = 0; i < 20; ++i) {
        values.push_back(0.1 + i * 0.001);
        classes.push_back(0);
    }
    for (int i = 0; i < 20; ++i) {
        values.push_back(0.5 + i * 0.001);
        classes.push_back(1);
    }
    for (int i = 0; i < 20; ++i) {
        values.push_back(0.9 + i * 0.001);
        classes.push_back(0);
    }
    const auto cuts = mdl_cut_points(values, classes);
    REQUIRE(cuts.size() == 2);
    CHECK(cuts[0] > 0.119);
    CHECK(cuts[0] < 0.5);
    CHECK(cuts[1] > 0.519);
    CHECK(cuts[1] < 0.9);
}

TEST_CASE("mdl cuts: single-class data is degenerate") {
    CHECK_THROWS_WITH_AS(mdl_cut_points({0.1, 0.2}, {1, 1}), doctest::Contains("degenerate"),
                         error);
}

TEST_CASE("apply_cuts boundary semantics") {
    const std::vector<double> cuts{0.3};
    CHECK(apply_cuts(cuts, 0.29) == 0);
    CHECK(apply_cuts(cuts, 0.30) == 0);  // value == cut goes left
    CHECK(apply_cuts(cuts, 0.31) == 1);
    CHECK(apply_cuts(cuts, -100.0) == 0);
    CHECK(apply_cuts(cuts, +100.0) == 1);
    CHECK(apply_cuts({}, 0.5) == 0);  // no cuts: everything in bin 0

    const std::vector<double> two{0.2, 0.6};
    CHECK(apply_cuts(two, 0.1) == 0);
    CHECK(apply_cuts(two, 0.4) == 1);
    CHECK(apply_cuts(two, 0.9) == 2);
}
