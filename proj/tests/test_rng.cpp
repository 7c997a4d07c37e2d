#include <catch2/catch_amalgamated.hpp>

#include "flotilla/rng.hpp"

using namespace flotilla;
using Catch::Approx;

TEST_CASE("fnv1a64 matches published test vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("same seed and label reproduce the same stream") {
    NoiseStreams a(42), b(42);
    SplitMix64 sa = a.stream("compass.usv");
    SplitMix64 sb = b.stream("compass.usv");
    for (int i = 0; i < 32; ++i) CHECK(sa.next() == sb.next());
}

TEST_CASE("streams differ across labels and across master seeds") {
    NoiseStreams n(42);
    SplitMix64 s1 = n.stream("compass.usv");
    SplitMix64 s2 = n.stream("compass.gcs");
    bool all_equal = true;
    for (int i = 0; i < 16; ++i)
        if (s1.next() != s2.next()) all_equal = false;
    CHECK_FALSE(all_equal);

    SplitMix64 m1 = NoiseStreams(1).stream("rssi.wifi");
    SplitMix64 m2 = NoiseStreams(2).stream("rssi.wifi");
    all_equal = true;
    for (int i = 0; i < 16; ++i)
        if (m1.next() != m2.next()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform draws stay inside the half-open unit interval") {
    SplitMix64 s = NoiseStreams(7).stream("uniform");
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == Approx(0.5).margin(0.02));
}

TEST_CASE("gaussian draws have the requested moments") {
    SplitMix64 s = NoiseStreams(11).stream("gauss");
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = s.gaussian(0.0, 1.0);
        sum += g;
        sumsq += g * g;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == Approx(0.0).margin(0.05));
    CHECK(var == Approx(1.0).margin(0.07));
}

TEST_CASE("gaussian mean and sigma are an affine map of the unit draw") {
    SplitMix64 a = NoiseStreams(3).stream("affine");
    SplitMix64 b = NoiseStreams(3).stream("affine");
    for (int i = 0; i < 100; ++i) {
        const double unit = a.gaussian(0.0, 1.0);
        const double scaled = b.gaussian(5.0, 2.0);
        CHECK(scaled == Approx(5.0 + 2.0 * unit).margin(1e-12));
    }
}
