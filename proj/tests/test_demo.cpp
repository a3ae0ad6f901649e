#include <algorithm>
#include <set>

#include "doctest.h"
#include "wbchart/demo.hpp"

using namespace wbchart;

TEST_CASE("carbon-fibre data") {
    const auto& d = carbon_fibre_samples();
    REQUIRE(d.size() == 20);
    for (const auto& s : d) CHECK(s.size() == 5);
    CHECK(d[0][0] == 3.70);
    const ChartConfig c = carbon_fibre_config();
    CHECK(c.phase1_samples == 10);
    CHECK(c.enable_beta_chart);
}

TEST_CASE("resampled training") {
    const auto t = resampled_training(5);
    REQUIRE(t.size() == 40);
    const auto& d = carbon_fibre_samples();
    CHECK(std::equal(d.begin(), d.begin() + 10, t.begin()));
    std::set<double> pool;
    for (std::size_t i = 0; i < 10; ++i) pool.insert(d[i].begin(), d[i].end());
    for (std::size_t i = 10; i < 40; ++i)
        for (double x : t[i]) CHECK(pool.count(x) == 1);
    CHECK(resampled_training(5) == t);
    CHECK(resampled_training(6) != t);
}
