#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/errors.hpp"
#include "curveforge/overlay.hpp"
#include "curveforge/surface.hpp"
#include "curveforge/twist.hpp"

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

DT core(int genus, int k) {
    DT d = DT::zero(genus);
    d.parallel[(size_t)k] = 1;
    return d;
}

std::vector<long long> lengths(const std::vector<twist::IntersectionArc>& arcs) {
    std::vector<long long> out;
    for (const auto& a : arcs) out.push_back(a.length);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("intersection numbers agree with boundary counts") {
    auto pd = PantsDecomposition::standard(2);
    std::vector<NormalCurve> sample = {
        NormalCurve(pd, mk(2, {1, 2, 1}, {1, 0, 1})),
        NormalCurve(pd, mk(2, {2, 2, 2}, {1, 0, 1})),
        NormalCurve(pd, mk(2, {4, 2, 2}, {1, 1, 0})),
        NormalCurve(pd, mk(2, {3, 2, 1}, {-2, 5, 0})),
    };
    for (const auto& a : sample) {
        CHECK(overlay::intersectionNumber(a, a) == 0);
        for (int k = 0; k < 3; ++k) {
            NormalCurve ek(pd, core(2, k));
            CHECK(overlay::intersectionNumber(a, ek) == a.m(k));
            CHECK(overlay::intersectionNumber(ek, a) == a.m(k));
        }
        for (const auto& b : sample)
            CHECK(overlay::intersectionNumber(a, b) == overlay::intersectionNumber(b, a));
    }
    // a curve meeting one decomposing curve twice
    NormalCurve e0(pd, core(2, 0));
    NormalCurve twoAcross(pd, mk(2, {2, 0, 0}, {0, 0, 0}));
    CHECK(overlay::intersectionNumber(e0, twoAcross) == 2);
}

TEST_CASE("filling pairs are recognized") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve a(pd, mk(2, {2, 2, 2}, {1, 0, 1}));
    CHECK_FALSE(overlay::fills(a, a));
    NormalCurve apart(pd, mk(2, {1, 2, 1}, {0, 1, 0}));
    REQUIRE(overlay::intersectionNumber(a, apart) == 0);
    CHECK_FALSE(overlay::fills(a, apart));
    NormalCurve b(pd, mk(2, {2, 2, 2}, {-1, 1, -1}));
    CHECK(overlay::fills(a, b));
    CHECK(overlay::fills(b, a));
}

TEST_CASE("small versus large is a strict threshold") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve c13(pd, mk(2, {1, 2, 10}, {0, 0, 0}));
    REQUIRE(c13.eLength() == 13);
    // genus 2: the cut is at 3/13 of the curve length
    CHECK(twist::classifyArc(2, c13) == twist::ArcSize::Small);
    CHECK(twist::classifyArc(3, c13) == twist::ArcSize::Large);
    CHECK(twist::classifyArc(13, c13) == twist::ArcSize::Large);
    NormalCurve e0(pd, core(2, 0));
    CHECK_THROWS_AS(twist::classifyArc(1, e0), UsageError);
}

TEST_CASE("twisting along a decomposing curve shifts the twist coordinate") {
    for (int genus : {2, 3}) {
        auto pd = PantsDecomposition::standard(genus);
        std::vector<Coord> ms((size_t)(3 * genus - 3), 2), ts((size_t)(3 * genus - 3), 1);
        ms[0] = 4;
        NormalCurve d(pd, mk(genus, ms, ts));
        for (int k = 0; k < pd.numCurves(); ++k) {
            NormalCurve ek(pd, core(genus, k));
            for (long long m : {1ll, -1ll, 2ll}) {
                auto r = twist::dehnTwist(pd, d, ek, m);
                for (int j = 0; j < pd.numCurves(); ++j) {
                    CHECK(r.m(j) == d.m(j));
                    CHECK(r.t(j) == d.t(j) + (j == k ? m * d.m(k) : 0));
                }
            }
        }
    }
}

TEST_CASE("twists obey the group laws") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve d(pd, mk(2, {4, 2, 2}, {1, 1, 0}));
    NormalCurve c(pd, mk(2, {2, 2, 2}, {1, 0, 1}));
    REQUIRE(c.isSingleCurve());

    CHECK(twist::dehnTwist(pd, d, c, 0).dt() == d.dt());

    auto t1 = twist::dehnTwist(pd, d, c, 1);
    auto t2 = twist::dehnTwist(pd, d, c, 2);
    CHECK(twist::dehnTwist(pd, t1, c, 1).dt() == t2.dt());
    CHECK(twist::dehnTwist(pd, t2, c, -2).dt() == d.dt());
    CHECK(twist::dehnTwist(pd, t1, c, -1).dt() == d.dt());

    // a homeomorphism preserves intersection numbers
    NormalCurve e(pd, mk(2, {2, 4, 2}, {-1, 0, 2}));
    auto te = twist::dehnTwist(pd, e, c, 2);
    CHECK(overlay::intersectionNumber(t2, te) == overlay::intersectionNumber(d, e));
    CHECK(overlay::intersectionNumber(t2, c) == overlay::intersectionNumber(d, c));

    CHECK_THROWS_AS(twist::dehnTwist(pd, d, NormalCurve(pd, DT::zero(2)), 1), UsageError);
    NormalCurve multi(pd, mk(2, {16, 18, 16}, {15, 17, 16}));
    REQUIRE_FALSE(multi.isSingleCurve());
    CHECK_THROWS_AS(twist::dehnTwist(pd, d, multi, 1), UsageError);
}

TEST_CASE("a crossing-one instance matches the composition oracle") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve d(pd, mk(2, {2, 0, 0}, {0, 0, 0}));
    NormalCurve c(pd, mk(2, {0, 2, 2}, {0, 1, 1}));
    REQUIRE(c.isSingleCurve());
    long long i = overlay::intersectionNumber(d, c);
    // composing single steps must agree with one double step, both ways
    for (long long m : {2ll, -2ll}) {
        long long s = m > 0 ? 1 : -1;
        auto direct = twist::dehnTwist(pd, d, c, m);
        auto step = twist::dehnTwist(pd, twist::dehnTwist(pd, d, c, s), c, s);
        CHECK(direct.dt() == step.dt());
        CHECK(overlay::intersectionNumber(direct, c) == i);
    }
}

TEST_CASE("the twist record keeps the ledger identities") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve d(pd, mk(2, {1, 2, 1}, {1, 0, 1}));
    NormalCurve c(pd, mk(2, {2, 2, 2}, {1, 0, 1}));
    twist::TwistRecord rec;
    auto r = twist::dehnTwist(pd, d, c, 2, &rec);
    CHECK(rec.exponent == 2);
    CHECK(rec.cLength == c.eLength());
    CHECK(rec.eta == 2 * c.eLength());
    CHECK(rec.beta == 0);
    CHECK(rec.crossings == overlay::intersectionNumber(d, c));
    CHECK((long long)rec.points.size() == rec.crossings);
    for (const auto& p : rec.points) {
        CHECK(p.p == p.dIn + p.dTr);
        CHECK(p.p == p.etaIn + p.etaTr);
        // the cancelled stretches never overlap on the inserted spiral
        CHECK(p.etaIn + p.etaTr <= rec.eta);
    }
    CHECK(r.eLength() > d.eLength());
}

TEST_CASE("intersection arcs have well-defined lengths") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve d(pd, mk(2, {1, 2, 1}, {1, 0, 1}));
    NormalCurve c(pd, mk(2, {2, 2, 2}, {1, 0, 1}));
    REQUIRE_FALSE(d.waves().any());
    REQUIRE_FALSE(c.waves().any());

    auto dc = twist::intersectionArcs(pd, d, c);
    CHECK((long long)dc.size() == overlay::intersectionNumber(d, c));
    for (const auto& a : dc) {
        CHECK(a.length >= 1);  // no wave subarcs on either curve
        CHECK_FALSE(a.wave);
        CHECK(a.length == a.forward + a.backward);
    }
    // the same lengths measured on the other host
    auto cd = twist::intersectionArcs(pd, c, d);
    CHECK(lengths(dc) == lengths(cd));

    // disjoint curves have no intersection arcs
    NormalCurve apart(pd, mk(2, {1, 2, 1}, {0, 1, 0}));
    CHECK(twist::intersectionArcs(pd, c, apart).empty());
}

TEST_CASE("twisting turns small intersection arcs into large ones") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve c(pd, mk(2, {12, 14, 16}, {3, 5, 7}));
    REQUIRE(c.isSingleCurve());
    NormalCurve d(pd, mk(2, {1, 2, 1}, {1, 0, 1}));

    CHECK_THROWS_AS(twist::twistDichotomyCheck(pd, d, c, 0), UsageError);
    for (long long m : {1ll, -1ll, 2ll}) {
        auto rep = twist::twistDichotomyCheck(pd, d, c, m);
        REQUIRE(rep.hypothesisHolds);
        REQUIRE(rep.checked);
        CHECK(rep.allLarge);
        CHECK(rep.boundHolds);
        CHECK((long long)rep.points.size() == overlay::intersectionNumber(d, c));
        for (const auto& p : rep.points)
            CHECK(p.s >= (m < 0 ? -m : m) * rep.cLength - rep.maxP);
    }
    // a pair violating the hypothesis is reported, not checked
    NormalCurve small(pd, mk(2, {2, 2, 2}, {1, 0, 1}));
    auto rep = twist::twistDichotomyCheck(pd, d, small, 1);
    CHECK_FALSE(rep.hypothesisHolds);
    CHECK_FALSE(rep.checked);
}

TEST_CASE("the intersection count has a strict minimum at exponent zero") {
    auto pd = PantsDecomposition::standard(2);
    NormalCurve c(pd, mk(2, {12, 14, 16}, {3, 5, 7}));
    NormalCurve d(pd, mk(2, {1, 2, 1}, {1, 0, 1}));
    auto tab = twist::twistMinimumTable(pd, d, c, 2);
    REQUIRE(tab.hypothesisHolds);
    REQUIRE((int)tab.counts.size() == 5);
    CHECK(tab.at(0) == d.eLength());
    CHECK(tab.strictMinimumAtZero());

    // disjoint curves: the twist acts trivially and the table is constant
    NormalCurve e0(pd, core(2, 0));
    NormalCurve off(pd, mk(2, {0, 2, 2}, {0, 1, 1}));
    REQUIRE(overlay::intersectionNumber(e0, off) == 0);
    auto flat = twist::twistMinimumTable(pd, e0, off, 2);
    for (long long x : flat.counts) CHECK(x == 0);
    CHECK_FALSE(flat.strictMinimumAtZero());
}
