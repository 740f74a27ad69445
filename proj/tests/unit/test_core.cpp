#include <doctest.h>

#include <set>

#include "gpslab/geometry.hpp"
#include "gpslab/parallel.hpp"
#include "gpslab/rng.hpp"
#include "gpslab/stats.hpp"

using namespace gpslab;

TEST_SUITE("core") {

TEST_CASE("philox known answers") {
    using B = Philox::block_t;
    using K = Philox::key_t;
    CHECK(Philox::bijection(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    Philox a = sample_rng(7, 3), b = sample_rng(7, 3), c = sample_rng(7, 4), d = sample_rng(8, 3);
    std::set<std::uint64_t> seen;
    for (int k = 0; k < 100; ++k) {
        const auto x = a();
        CHECK(x == b());
        seen.insert(x);
        seen.insert(c());
        seen.insert(d());
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("uniform lies in [0,1) with mean one half") {
    Philox r(11);
    double s = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("trajectory predicates") {
    CHECK(valid_trajectory({{1, 1}, {2, 3}, {5, 4}}));
    CHECK_FALSE(valid_trajectory({{1, 1}, {1, 3}}));
    CHECK_FALSE(valid_trajectory({{2, 2}, {3, 2}}));
    CHECK_FALSE(valid_trajectory({{0, 1}}));
    CHECK(valid_trajectory({}));
    CHECK(precedes({1, 1}, {2, 2}));
    CHECK_FALSE(precedes({1, 2}, {2, 2}));
    CHECK(weakly_precedes({1, 2}, {2, 2}));
    CHECK(aligned({1, 2}, {1, 5}));
    CHECK_FALSE(aligned({1, 2}, {1, 2}));
    const Trajectory t = restrict_to_box({{1, 1}, {3, 2}, {4, 6}}, {4, 5});
    CHECK(t == Trajectory{{1, 1}, {3, 2}});
}

TEST_CASE("summarize") {
    const auto e = summarize({1.0, 2.0, 3.0, 4.0}, {2, 2});
    CHECK(e.value == doctest::Approx(2.5));
    CHECK(e.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(e.samples == 4);
    CHECK(e.box == Box{2, 2});
    CHECK(summarize({}).samples == 0);
}

TEST_CASE("sample_map is independent of the worker count") {
    auto f = [](std::uint64_t k) {
        Philox r = sample_rng(99, k);
        return r.uniform();
    };
    set_workers(1);
    const auto a = sample_map<double>(1000, f);
    set_workers(4);
    const auto b = sample_map<double>(1000, f);
    set_workers(0);
    CHECK(a == b);
}

}
