#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "curveforge/errors.hpp"
#include "curveforge/surface.hpp"

using namespace cf;
using namespace cf::surface;

TEST_CASE("standard decomposition counts") {
    auto pd2 = PantsDecomposition::standard(2);
    CHECK(pd2.numCurves() == 3);
    CHECK(pd2.numPants() == 2);
    auto pd3 = PantsDecomposition::standard(3);
    CHECK(pd3.numCurves() == 6);
    CHECK(pd3.numPants() == 4);
    CHECK_THROWS_AS(PantsDecomposition::standard(1), UsageError);
    CHECK_THROWS_AS(PantsDecomposition::standard(0), UsageError);
}

TEST_CASE("standard decomposition is deterministic") {
    for (int g = 2; g <= 6; ++g) {
        auto a = PantsDecomposition::standard(g);
        auto b = PantsDecomposition::standard(g);
        CHECK(a == b);
        a.validate();
    }
}

TEST_CASE("surface file round-trip") {
    for (int g = 2; g <= 5; ++g) {
        auto pd = PantsDecomposition::standard(g);
        std::ostringstream out;
        pd.save(out);
        std::istringstream in(out.str());
        auto back = PantsDecomposition::load(in);
        CHECK(pd == back);
    }
}

TEST_CASE("load rejects bad documents") {
    SUBCASE("unglued slot") {
        std::istringstream in(
            "format=1\nsurface genus=2\n"
            "pants 0 0 0 1\npants 1 2 2 1\n"
            "glue 0 0.0 0.1 orient=+\nglue 2 1.0 1.1 orient=+\n");
        CHECK_THROWS_WITH_AS(PantsDecomposition::load(in),
                             doctest::Contains("unglued"), UsageError);
    }
    SUBCASE("wrong curve count for genus") {
        std::istringstream in(
            "format=1\nsurface genus=2\n"
            "pants 0 0 0 1\npants 1 2 2 3\n"
            "glue 0 0.0 0.1 orient=+\nglue 1 0.2 1.2 orient=+\n"
            "glue 2 1.0 1.1 orient=+\nglue 3 1.1 1.2 orient=+\n");
        CHECK_THROWS_AS(PantsDecomposition::load(in), UsageError);
    }
    SUBCASE("missing version line") {
        std::istringstream in("surface genus=2\n");
        CHECK_THROWS_AS(PantsDecomposition::load(in), ParseError);
    }
    SUBCASE("parse error carries line number") {
        std::istringstream in("format=1\nsurface genus=2\npants zero 0 0 1\n");
        try {
            PantsDecomposition::load(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }
}

TEST_CASE("cell complex euler characteristic and face census") {
    for (int g = 2; g <= 6; ++g) {
        auto pd = PantsDecomposition::standard(g);
        CellComplex cx(pd);
        CHECK(cx.eulerCharacteristic() == 2 - 2 * g);
        int hex = 0, sq = 0;
        for (const auto& f : cx.faces())
            (f.kind == FaceKind::Hexagon ? hex : sq)++;
        CHECK(hex == 2 * (2 * g - 2));
        CHECK(sq == 4 * (3 * g - 3));
    }
}

TEST_CASE("cell complex faces are embedded disks with coherent orientation") {
    for (int g = 2; g <= 4; ++g) {
        auto pd = PantsDecomposition::standard(g);
        CellComplex cx(pd);
        // Every edge bounds exactly one face on each side.
        for (int e = 0; e < (int)cx.edges().size(); ++e) {
            CHECK(cx.faceLeftOf(e, true) >= 0);
            CHECK(cx.faceLeftOf(e, false) >= 0);
        }
        // Hexagons have 6 sides, squares 4.
        for (const auto& f : cx.faces())
            CHECK((int)f.edges.size() == (f.kind == FaceKind::Hexagon ? 6 : 4));
    }
}

TEST_CASE("opposite slot is an involution") {
    auto pd = PantsDecomposition::standard(3);
    for (int p = 0; p < pd.numPants(); ++p)
        for (int s = 0; s < 3; ++s) {
            Slot here{p, s};
            Slot there = pd.oppositeSlot(here);
            CHECK(pd.oppositeSlot(there) == here);
            CHECK(pd.curveAt(there.pants, there.slot) == pd.curveAt(p, s));
        }
}
