#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/errors.hpp"
#include "curveforge/surface.hpp"
#include "curveforge/tracks.hpp"

using namespace cf;
using curves::Coord;
using curves::DT;
using curves::NormalCurve;
using surface::CellComplex;
using surface::PantsDecomposition;

namespace {

DT mk(int genus, std::vector<Coord> m, std::vector<Coord> t) {
    DT d = DT::zero(genus);
    d.m = std::move(m);
    d.t = std::move(t);
    return d;
}

}  // namespace

TEST_CASE("complete fat track structure has the expected census") {
    for (int genus : {2, 3}) {
        CAPTURE(genus);
        auto pd = PantsDecomposition::standard(genus);
        std::vector<int> signs((size_t)pd.numCurves(), 1);
        auto t = tracks::buildCompleteFatTrackSigned(pd, signs);
        CHECK(t.numBranches() == 18 * genus - 18);
        CHECK(t.numSwitches() == 12 * genus - 12);
        CHECK(t.numCusps() == 12 * genus - 12);
        CHECK((int)t.exceptional.size() == 3 * genus - 3);
        CHECK(t.flagFat);
        CHECK(t.flagMaximal);
        CHECK(t.flagComplete);
        auto walks = t.boundaryWalks();
        CHECK((int)walks.size() == 4 * genus - 4);
        for (auto& w : walks) CHECK(w.cusps == 3);
        CellComplex cx(pd);
        CHECK(tracks::trackELength(t, cx) == 2 * (18 * genus - 18));
        auto rep = tracks::isTightTrack(t, pd);
        CHECK(rep.fibersOnCores);
        CHECK(rep.segmentsJoinSides);
        CHECK(rep.cuspsOnCores);
        CHECK(rep.tight());
    }
}

TEST_CASE("waveless filling curves are carried with balanced weights") {
    auto pd = PantsDecomposition::standard(2);
    for (DT d : {mk(2, {2, 2, 2}, {1, -1, 2}), mk(2, {2, 2, 2}, {4, 3, 2}),
                 mk(2, {4, 2, 2}, {-2, 5, -1}), mk(2, {2, 4, 2}, {0, 0, 0})}) {
        CAPTURE(d.m[0]);
        CAPTURE(d.t[0]);
        NormalCurve c(pd, d);
        REQUIRE_FALSE(c.waves().any());
        auto t = tracks::buildCompleteFatTrack(pd, c);
        auto r = tracks::carries(t, c);
        REQUIRE(r.carried());
        const auto& w = *r.witness;
        CHECK(w.target == d);
        // seam weights match the tight pants solutions
        for (int p = 0; p < pd.numPants(); ++p) {
            auto a = c.arcs(p);
            CHECK(w.weights[(size_t)(3 * p + 0)] == a.seam01);
            CHECK(w.weights[(size_t)(3 * p + 1)] == a.seam02);
            CHECK(w.weights[(size_t)(3 * p + 2)] == a.seam12);
        }
        // switch balance holds everywhere
        for (const auto& sw : t.switches)
            CHECK(w.weights[(size_t)sw.merged.branch] ==
                  w.weights[(size_t)sw.first.branch] + w.weights[(size_t)sw.second.branch]);
        // winding surplus matches the frozen twist convention
        for (int k = 0; k < pd.numCurves(); ++k) {
            Coord lam = t.collarSign[(size_t)k] > 0 ? d.t[(size_t)k] : -1 - d.t[(size_t)k];
            CHECK(w.lambda[(size_t)k] == lam);
            CHECK(lam >= 0);
        }
    }
}

TEST_CASE("a wave blocks both building and carrying") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve c(pd, mk(2, {0, 4, 2}, {0, 3, -2}));
    REQUIRE(c.waves().any());
    CHECK_THROWS_AS(tracks::buildCompleteFatTrack(pd, c), Refusal);
    std::vector<int> signs(3, 1);
    auto t = tracks::buildCompleteFatTrackSigned(pd, signs);
    auto r = tracks::carries(t, c);
    REQUIRE_FALSE(r.carried());
    REQUIRE(r.denial.has_value());
    CHECK(r.denial->kind == tracks::CarryDenial::Kind::Wave);
    CHECK_FALSE(r.denial->waves.sites.empty());
}

TEST_CASE("twist direction against the winding is refused with the collar named") {
    auto pd = PantsDecomposition::standard(2);
    std::vector<int> signs(3, 1);
    auto t = tracks::buildCompleteFatTrackSigned(pd, signs);
    NormalCurve c(pd, mk(2, {2, 2, 2}, {1, -3, 2}));
    auto r = tracks::carries(t, c);
    REQUIRE_FALSE(r.carried());
    CHECK(r.denial->kind == tracks::CarryDenial::Kind::TwistSign);
    CHECK(r.denial->collar == 1);
}

TEST_CASE("an exceptional fiber of the track is carried") {
    auto pd = PantsDecomposition::standard(2);
    std::vector<int> signs(3, 1);
    auto t = tracks::buildCompleteFatTrackSigned(pd, signs);
    DT d = DT::zero(2);
    d.parallel = {1, 0, 0};
    NormalCurve ek(pd, d);
    auto r = tracks::carries(t, ek);
    CHECK(r.carried());
}

TEST_CASE("covering needs every branch weighted, which needs twisting") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve small(pd, mk(2, {2, 2, 2}, {0, 0, 0}));
    auto t = tracks::buildCompleteFatTrack(pd, small);
    auto r1 = tracks::carries(t, small);
    REQUIRE(r1.carried());
    CHECK_FALSE(tracks::covers(t, *r1.witness));

    NormalCurve big(pd, mk(2, {4, 4, 4}, {5, 6, 7}));
    auto r2 = tracks::carries(t, big);
    REQUIRE(r2.carried());
    CHECK(tracks::covers(t, *r2.witness));
    CHECK(r2.witness->allPositive());

    // carry via a covering arc naming all branches
    std::vector<int> beta;
    for (int b = 0; b < t.numBranches(); ++b) beta.push_back(b);
    auto w = tracks::carryTightenedCurve(t, big, beta);
    CHECK(w.weights == r2.witness->weights);
    // a non-covering arc is refused
    beta.pop_back();
    CHECK_THROWS_AS(tracks::carryTightenedCurve(t, big, beta), Refusal);
}

TEST_CASE("tightness report flags a cusp off the system") {
    auto pd = PantsDecomposition::standard(2);
    std::vector<int> signs(3, 1);
    auto t = tracks::buildCompleteFatTrackSigned(pd, signs);
    t.switches[0].onCurve = -1;
    auto rep = tracks::isTightTrack(t, pd);
    CHECK_FALSE(rep.cuspsOnCores);
    CHECK_FALSE(rep.tight());
}

TEST_CASE("track files round-trip") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve c(pd, mk(2, {2, 2, 2}, {1, -1, 2}));
    auto t = tracks::buildCompleteFatTrack(pd, c);
    std::ostringstream os;
    tracks::save(t, os);
    std::istringstream is(os.str());
    auto t2 = tracks::load(pd, is);
    CHECK(t2.genus == t.genus);
    CHECK(t2.numBranches() == t.numBranches());
    CHECK(t2.numSwitches() == t.numSwitches());
    CHECK(t2.collarSign == t.collarSign);
    CHECK(t2.flagFat == t.flagFat);
    for (int i = 0; i < t.numSwitches(); ++i) {
        CHECK(t2.switches[(size_t)i].merged == t.switches[(size_t)i].merged);
        CHECK(t2.switches[(size_t)i].first == t.switches[(size_t)i].first);
        CHECK(t2.switches[(size_t)i].second == t.switches[(size_t)i].second);
        CHECK(t2.switches[(size_t)i].onCurve == t.switches[(size_t)i].onCurve);
    }
    for (int i = 0; i < t.numBranches(); ++i) {
        CHECK(t2.branches[(size_t)i].word == t.branches[(size_t)i].word);
        CHECK(t2.branches[(size_t)i].omega == t.branches[(size_t)i].omega);
    }
    // carried the same way after the round trip
    auto r = tracks::carries(t2, c);
    REQUIRE(r.carried());
    CHECK(r.witness->weights == tracks::carries(t, c).witness->weights);
    // format errors are reported with the line
    std::istringstream bad("format=1\ntrack genus=2\nbogus 1 2\n");
    CHECK_THROWS_AS(tracks::load(pd, bad), UsageError);
}
