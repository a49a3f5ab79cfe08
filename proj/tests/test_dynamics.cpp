#include <cmath>
#include <doctest.h>
#include <random>

#include "thickthin/dynamics.hpp"

using namespace thickthin;

namespace {
const ParameterSequence& default_seq() {
    static const ParameterSequence seq = build_sequence({-7.0, -10.0, -13.0});
    return seq;
}
}  // namespace

TEST_CASE("compose identity and block anchors") {
    const auto& seq = default_seq();
    const OrbitPoint id = compose(seq, 4, 4, Complex(1.0, 2.0));
    CHECK(id.value == Complex(1.0, 2.0));
    CHECK_FALSE(id.overflow);

    // 0 is fixed by every full block
    for (int k = 1; k <= 3; ++k) {
        const OrbitPoint p = compose(seq, seq.checkpoint(k - 1), seq.checkpoint(k), Complex(0, 0));
        CHECK(std::abs(p.value) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // ... via the marked step a_1 one step earlier
    const OrbitPoint side = compose(seq, 0, 5, Complex(0, 0));
    CHECK(side.value.real() == doctest::Approx(-2.6457513).epsilon(1e-7));

    const OrbitPoint big = compose(seq, 0, seq.total_time(), Complex(3.0, 0.0));
    CHECK(big.overflow);
}

TEST_CASE("classify: center point rides H to the horizon") {
    const auto& seq = default_seq();
    const Classification c = classify(seq, Complex(0, 0), 0, 3);
    REQUIRE(c.survived());
    REQUIRE(c.itinerary.size() == 3);
    CHECK(c.first_stage == 1);
    for (Side s : c.itinerary) CHECK(s == Side::H);
    CHECK_FALSE(c.anomaly);
    CHECK(c.survived_depth == 3);
    CHECK(joining_stage(c.itinerary) == 0);
}

TEST_CASE("classify: far points escape at stage 1") {
    const auto& seq = default_seq();
    const Classification c = classify(seq, Complex(3, 0), 0, 3);
    REQUIRE_FALSE(c.survived());
    CHECK(c.escape_stage == 1);
    const Classification c10 = classify(seq, Complex(10, 0), 0, 3);
    CHECK(c10.escape_stage == 1);
}

TEST_CASE("classify: sqrt(-b_1) started at the side time joins at stage 1") {
    const auto& seq = default_seq();
    const Classification c = classify(seq, Complex(std::sqrt(7.0), 0.0), 5, 3);
    REQUIRE(c.survived());
    REQUIRE(c.itinerary.size() == 3);
    CHECK(c.itinerary[0] == Side::G);
    CHECK(c.itinerary[1] == Side::H);
    CHECK(c.itinerary[2] == Side::H);
    CHECK(c.first_stage == 1);
    CHECK(joining_stage(c.itinerary) == 1);
    CHECK_FALSE(c.anomaly);
}

TEST_CASE("survival_depth anchors and nesting") {
    const auto& seq = default_seq();
    CHECK(survival_depth(seq, Complex(0, 0), 0, 3) == 3);
    CHECK(survival_depth(seq, Complex(10, 0), 0, 3) == 0);
    CHECK(survival_depth(seq, Complex(2.0, 0), 0, 3) == 0);  // 2^32 dwarfs the offsets

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Complex z(coord(rng), coord(rng));
        const int d = survival_depth(seq, z, 0, 3);
        for (int k = 1; k <= d; ++k) {
            CHECK(survival_depth(seq, z, 0, k) == k);  // nested survival sets
        }
        const Classification c = classify(seq, z, 0, 3);
        CHECK((c.survived() ? 3 : c.escape_stage - 1) == d);
    }
}

TEST_CASE("escaped orbits grow monotonically at later checkpoints") {
    const auto& seq = default_seq();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    int escaped_seen = 0;
    for (int i = 0; i < 2000 && escaped_seen < 500; ++i) {
        const Complex z(coord(rng), coord(rng));
        const Classification c = classify(seq, z, 0, 3);
        if (c.survived()) continue;
        ++escaped_seen;
        double prev = 2.0;
        for (int k = c.escape_stage; k <= 3; ++k) {
            const OrbitPoint p = compose(seq, 0, seq.checkpoint(k), z);
            const double mod = p.overflow ? kBailoutRadius : std::abs(p.value);
            CHECK(mod >= prev);
            prev = std::min(mod, kBailoutRadius);  // overflow caps comparability
            if (p.overflow) break;
        }
    }
    CHECK(escaped_seen > 100);
}

TEST_CASE("forward invariance of surviving itineraries") {
    const auto& seq = default_seq();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coord(-0.4, 0.4);
    int checked = 0;
    for (int i = 0; i < 3000 && checked < 1000; ++i) {
        const Complex z(coord(rng), coord(rng));
        const Classification c0 = classify(seq, z, 0, 3);
        if (!c0.survived()) continue;
        const Complex z1 = z * z + seq.coefficient_at(1);
        const Classification c1 = classify(seq, z1, 1, 3);
        REQUIRE(c1.survived());
        REQUIRE(c1.itinerary.size() == c0.itinerary.size());
        for (std::size_t j = 0; j < c0.itinerary.size(); ++j) {
            CHECK(c0.itinerary[j] == c1.itinerary[j]);
        }
        ++checked;
    }
    CHECK(checked > 200);
}

TEST_CASE("surviving grids raise no disk-test anomalies") {
    const auto& seq = default_seq();
    for (int iy = 0; iy < 40; ++iy) {
        for (int ix = 0; ix < 40; ++ix) {
            const Complex z(-2.0 + 4.0 * ix / 39.0, -2.0 + 4.0 * iy / 39.0);
            CHECK_FALSE(classify(seq, z, 0, 3).anomaly);
        }
    }
}

TEST_CASE("itinerary classes") {
    const auto G = Side::G;
    const auto H = Side::H;
    using IC = ItineraryClass;
    const std::vector<Side> hhhh{H, H, H, H};
    CHECK(classify_itinerary(hhhh, 2).cls == IC::AllH);
    const std::vector<Side> ghhh{G, H, H, H};
    const auto tail = classify_itinerary(ghhh, 2);
    CHECK(tail.cls == IC::TailH);
    CHECK(tail.joining == 1);
    const std::vector<Side> hhhg{H, H, H, G};
    CHECK(classify_itinerary(hhhg, 2).cls == IC::HitsGLate);
    const std::vector<Side> hhgh{H, H, G, H};
    CHECK(classify_itinerary(hhgh, 2).cls == IC::HitsGLate);  // only one trailing H
    CHECK(classify_itinerary({}, 2).cls == IC::Mixed);
    CHECK_THROWS_AS(classify_itinerary(hhhh, 0), std::invalid_argument);

    CHECK(joining_stage(hhhh) == 0);
    CHECK(joining_stage(ghhh) == 1);
    CHECK(joining_stage(hhhg) == 4);
}
