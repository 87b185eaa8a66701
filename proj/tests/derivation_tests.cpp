#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/derivation.hpp"
#include "curveforge/errors.hpp"
#include "curveforge/surface.hpp"
#include "curveforge/tracks.hpp"

using namespace cf;
using curves::Coord;
using curves::DT;
using curves::NormalCurve;
using surface::PantsDecomposition;

namespace {

DT mk(int genus, std::vector<Coord> m, std::vector<Coord> t) {
    DT d = DT::zero(genus);
    d.m = std::move(m);
    d.t = std::move(t);
    return d;
}

struct Carried {
    tracks::Track track;
    std::vector<Coord> weights;
};

Carried carriedTrack(const PantsDecomposition& pd, const DT& d) {
    NormalCurve c(pd, d);
    auto t = tracks::buildCompleteFatTrack(pd, c);
    auto r = tracks::carries(t, c);
    REQUIRE(r.carried());
    return {std::move(t), r.witness->weights};
}

}  // namespace

TEST_CASE("one derivation step obeys the exact length law") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {16, 18, 16}, {15, 17, 16}));
    for (Coord x : w) REQUIRE(x >= 1);

    auto r = derivation::derive(t, w);
    REQUIRE(r.ok());
    const auto& out = *r.out;

    // one zipper per cusp, all completed, each covering the whole track
    CHECK((int)out.paths.size() == t.numSwitches());
    long long tau0 = t.eLength();
    long long sigma = 0;
    for (const auto& ps : out.paths) {
        CHECK(ps.completed);
        CHECK(ps.omega >= tau0);  // a covering path is at least as long as the track
        sigma += ps.omega;
    }
    // |tau_1| = |tau_0| + sum |sigma_i|, hence >= (12g-11) |tau_0|
    CHECK(out.derived.eLength() == tau0 + sigma);
    CHECK(out.derived.eLength() >= (12 * 2 - 11) * tau0);

    // still a trivalent track over the same system
    CHECK(2 * out.derived.numBranches() == 3 * out.derived.numSwitches());
    CHECK(out.derived.numSwitches() >= t.numSwitches());
    CHECK(out.derived.flagMaximal);
    auto rep = tracks::isTightTrack(out.derived, pd);
    CHECK(rep.cuspsOnCores);

    // weights are balanced at every derived switch
    for (const auto& sw : out.derived.switches)
        CHECK(out.weights[(size_t)sw.merged.branch] ==
              out.weights[(size_t)sw.first.branch] + out.weights[(size_t)sw.second.branch]);

    // pushing the strand counts forward recovers the carried curve on tau_0
    CHECK(derivation::pushForward(out, out.weights) == w);
    // pushforward is linear
    std::vector<Coord> doubled = out.weights;
    for (auto& x : doubled) x *= 2;
    auto back = derivation::pushForward(out, doubled);
    for (size_t i = 0; i < back.size(); ++i) CHECK(back[i] == 2 * w[i]);
}

TEST_CASE("derivation works at genus 3") {
    auto pd = PantsDecomposition::standard(3);
    auto [t, w] = carriedTrack(pd, mk(3, {16, 18, 16, 16, 18, 16}, {15, 17, 16, 15, 17, 16}));
    derivation::DeriveOptions opts;
    opts.maxSteps = 400000;  // the joint search needs a deep budget at genus 3
    auto r = derivation::derive(t, w, opts);
    REQUIRE(r.ok());
    long long tau0 = t.eLength();
    CHECK(r.out->derived.eLength() >= (12 * 3 - 11) * tau0);
    CHECK((int)r.out->paths.size() == 12 * 3 - 12);
}

TEST_CASE("towers grow by the derived-length law at every level") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {8201, 9496, 8249}, {7002, 8667, 7855}));
    derivation::DeriveOptions opts;
    opts.maxSteps = 4000;
    auto tr = derivation::buildTower(t, w, 2, opts);
    CHECK(tr.reached(2));
    long long prev = t.eLength();
    for (const auto& st : tr.tower.steps) {
        long long cur = st.out.derived.eLength();
        CHECK(cur >= 13 * prev);
        prev = cur;
    }
}

TEST_CASE("a curve that does not cover the track fails honestly") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {2, 2, 2}, {0, 0, 0}));
    auto r = derivation::derive(t, w);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failure->kind == derivation::DeriveFailure::Kind::NotPositive);
    CHECK(r.failure->branch >= 0);
}

TEST_CASE("a tiny step cap reports no completion, naming the zipper") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {16, 18, 16}, {15, 17, 16}));
    derivation::DeriveOptions opts;
    opts.maxSteps = 1;
    auto r = derivation::derive(t, w, opts);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failure->kind == derivation::DeriveFailure::Kind::NoCompletion);
    CHECK(r.failure->cusp == 0);
}

TEST_CASE("gregariousness follows the tower") {
    auto pd = PantsDecomposition::standard(2);

    NormalCurve wave(pd, mk(2, {0, 4, 2}, {0, 3, -2}));
    auto g0 = derivation::isNGregarious(pd, wave, 1);
    CHECK_FALSE(g0.gregarious);
    REQUIRE(g0.denial.has_value());
    CHECK(g0.denial->kind == tracks::CarryDenial::Kind::Wave);

    NormalCurve small(pd, mk(2, {2, 2, 2}, {0, 0, 0}));
    auto g1 = derivation::isNGregarious(pd, small, 1);
    CHECK_FALSE(g1.gregarious);
    REQUIRE(g1.failure.has_value());
    CHECK(g1.failure->kind == derivation::DeriveFailure::Kind::NotPositive);

    NormalCurve good(pd, mk(2, {16, 18, 16}, {15, 17, 16}));
    auto g2 = derivation::isNGregarious(pd, good, 1);
    CHECK(g2.gregarious);
    CHECK(g2.reachedDepth == 1);
}

TEST_CASE("zippers on a collision course are reported as a pair") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {2, 2, 2}, {3, 6, 7}));
    derivation::DeriveOptions opts;
    opts.maxSteps = 400;
    auto r = derivation::derive(t, w, opts);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.failure->kind == derivation::DeriveFailure::Kind::Collision);
    const auto& col = r.failure->collision;
    CHECK(col.zipA == 1);
    CHECK(col.zipB == 0);
    CHECK(col.branch >= 0);
    CHECK(col.gap >= 0);
    CHECK(col.zipA != col.zipB);
}

TEST_CASE("tower files round-trip through the summary loader") {
    auto pd = PantsDecomposition::standard(2);
    auto [t, w] = carriedTrack(pd, mk(2, {16, 18, 16}, {15, 17, 16}));
    derivation::DeriveOptions opts;
    opts.keepPaths = true;
    auto tr = derivation::buildTower(t, w, 1, opts);
    REQUIRE(tr.reached(1));
    std::ostringstream os;
    derivation::save(tr.tower, os);
    std::istringstream is(os.str());
    auto ts = derivation::loadSummary(is);
    CHECK(ts.genus == 2);
    CHECK(ts.depth == 1);
    REQUIRE(ts.trackLengths.size() == 2);
    CHECK(ts.trackLengths[0] == t.eLength());
    CHECK(ts.trackLengths[1] == tr.tower.steps[0].out.derived.eLength());
    REQUIRE(ts.pathLengths.size() == 1);
    REQUIRE((int)ts.pathLengths[0].size() == t.numSwitches());
    for (size_t j = 0; j < ts.pathLengths[0].size(); ++j)
        CHECK(ts.pathLengths[0][j] == tr.tower.steps[0].out.paths[j].length);

    std::istringstream bad("format=1\ntower genus=2 depth=1\nnonsense\n");
    CHECK_THROWS_AS(derivation::loadSummary(bad), UsageError);
}
