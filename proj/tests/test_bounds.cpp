#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "mixlab/bounds.hpp"
#include "mixlab/conservation_law.hpp"

using namespace mixlab;
using Catch::Detail::Approx;

namespace {

std::vector<DiagnosticsRecord> rarefaction_series(double U, double T, int n) {
    std::vector<DiagnosticsRecord> s(n);
    for (int i = 0; i < n; ++i) {
        const double t = T * (i + 1) / n;
        const RarefactionReference r = rarefaction_diagnostics(t, U);
        s[i].t = t;
        s[i].l = r.l;
        s[i].E = r.E;
        s[i].D = r.D;
        s[i].m = 0.0;
    }
    return s;
}

} // namespace

TEST_CASE("tail ratios of the closed-form series hit the saturation constants") {
    const auto s = rarefaction_series(1.0, 3.0, 60);
    CHECK(tail_ratio(s, BoundQuantity::MixingWidth, 1.0) ==
          Approx(kWidthBound).epsilon(1e-14));
    CHECK(tail_ratio(s, BoundQuantity::RenormalizedEnergy, 1.0) ==
          Approx(kEnergyBound).epsilon(1e-14));
    CHECK(tail_ratio(s, BoundQuantity::EnergySeparation, 1.0) ==
          Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("tail ratio edge cases") {
    SECTION("all-zero series gives zero") {
        std::vector<DiagnosticsRecord> s(30);
        for (int i = 0; i < 30; ++i) s[i].t = 0.1 * (i + 1);
        CHECK(tail_ratio(s, BoundQuantity::MixingWidth, 1.0) == 0.0);
    }
    SECTION("a single extreme tail sample dominates") {
        std::vector<DiagnosticsRecord> s(30);
        for (int i = 0; i < 30; ++i) s[i].t = 0.1 * (i + 1);
        s[25].l = 1.0 * s[25].t;  // l = U t
        CHECK(tail_ratio(s, BoundQuantity::MixingWidth, 1.0) == Approx(1.0).epsilon(1e-15));
    }
    SECTION("too few tail samples is an error") {
        std::vector<DiagnosticsRecord> s(8);
        for (int i = 0; i < 8; ++i) s[i].t = 0.1 * (i + 1);
        CHECK_THROWS_AS(tail_ratio(s, BoundQuantity::MixingWidth, 1.0),
                        std::invalid_argument);
    }
    SECTION("order of records does not matter") {
        auto s = rarefaction_series(2.0, 4.0, 40);
        auto shuffled = s;
        std::mt19937 rng(3);
        std::shuffle(shuffled.begin() + 1, shuffled.end() - 1, rng);
        // keep first/last so the window (defined by max t) is identical
        CHECK(tail_ratio(shuffled, BoundQuantity::MixingWidth, 2.0) ==
              tail_ratio(s, BoundQuantity::MixingWidth, 2.0));
    }
}

TEST_CASE("theorem verdicts on closed-form and synthetic series") {
    SECTION("rarefaction series: width and energy pass at zero margin") {
        const auto s = rarefaction_series(1.0, 2.0, 50);
        VerdictTolerances tol;
        tol.width = 1e-9;
        tol.energy = 1e-9;
        tol.separation = 1e-9;
        const auto vs = verify_theorem(s, 1.0, 8.0, tol);
        REQUIRE(vs.size() == 4);
        CHECK(vs[0].pass);
        CHECK(vs[0].margin == Approx(1e-9).margin(1e-12));
        CHECK(vs[1].pass);
        CHECK(vs[2].pass);
        CHECK(vs[2].margin == Approx(kSeparationBound - 1.0 / 24.0).epsilon(1e-6));
        CHECK(vs[3].pass);  // m identically zero
        CHECK(all_pass(vs));
    }
    SECTION("diffusive series passes with large margins") {
        std::vector<DiagnosticsRecord> s(50);
        const double U = 4.0;
        for (int i = 0; i < 50; ++i) {
            const double t = 4.0 * (i + 1) / 50.0;
            s[i].t = t;
            s[i].l = std::sqrt(2.0 * t);
            s[i].E = U * std::sqrt(t / (2.0 * std::numbers::pi));
            s[i].D = 0.5 * s[i].E;
            s[i].m = 0.0;
        }
        const auto vs = verify_theorem(s, U, 8.0);
        CHECK(all_pass(vs));
    }
    SECTION("a constructed violation is detected") {
        auto s = rarefaction_series(1.0, 2.0, 50);
        for (auto& r : s) r.l = 0.3 * 1.0 * r.t;  // 0.3 > 1/(2 sqrt 3)
        VerdictTolerances tol;
        tol.width = 1e-3;
        const auto vs = verify_theorem(s, 1.0, 8.0, tol);
        CHECK_FALSE(vs[0].pass);
        CHECK_FALSE(all_pass(vs));
    }
    SECTION("moment drift fails the conservation verdict") {
        auto s = rarefaction_series(1.0, 2.0, 50);
        s[20].m = 1e-3;
        const auto vs = verify_theorem(s, 1.0, 8.0);
        CHECK_FALSE(vs[3].pass);
    }
    SECTION("verdicts are monotone in the tolerance") {
        auto s = rarefaction_series(1.0, 2.0, 50);
        for (auto& r : s) r.l *= 1.05;  // slightly above the bound
        for (double lo : {1e-4, 1e-3, 1e-2}) {
            VerdictTolerances ta, tb;
            ta.width = lo;
            tb.width = 10.0 * lo;
            const bool pa = verify_theorem(s, 1.0, 8.0, ta)[0].pass;
            const bool pb = verify_theorem(s, 1.0, 8.0, tb)[0].pass;
            if (pa) CHECK(pb);
        }
    }
}

TEST_CASE("scale comparison of matched series") {
    SECTION("a series compared with itself has zero differences") {
        const auto s = rarefaction_series(1.0, 2.0, 40);
        const ScaleComparison c = scale_invariance_report(s, 1.0, s, 1.0, 1.0);
        CHECK(c.compared_samples > 10);
        CHECK(c.max_diff_width <= 1e-15);
        CHECK(c.max_diff_energy <= 1e-15);
        CHECK(c.max_diff_separation <= 1e-15);
    }
    SECTION("self-similar series at two widths agree after rescaling") {
        // physical times t = L t'; the rarefaction family has L-independent ratios
        const auto a = rarefaction_series(1.0, 2.0, 80);
        const auto b = rarefaction_series(1.0, 4.0, 80);
        const ScaleComparison c = scale_invariance_report(a, 1.0, b, 2.0, 1.0);
        CHECK(c.compared_samples > 10);
        CHECK(c.max_diff_width <= 1e-12);
        CHECK(c.max_diff_energy <= 1e-12);
        CHECK(c.max_diff_separation <= 1e-12);
    }
}
