#pragma once

// Simple closed curves and multicurves in tight position with respect to the
// decomposing system, stored in Dehn-Thurston style coordinates: one
// intersection count m_k >= 0 and one twist t_k per decomposing curve, plus a
// vector of components parallel to decomposing curves.  Tight position inside
// a pants is unique given the boundary counts, so the per-pants arc-type
// counts (three seam families, three wave families) are derived data.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curveforge/surface.hpp"

namespace cf::curves {

using Coord = long long;

struct DT {
    int genus = 0;
    std::vector<Coord> m;         // size 3g-3, m[k] >= 0
    std::vector<Coord> t;         // size 3g-3
    std::vector<Coord> parallel;  // size 3g-3, components parallel to E_k

    static DT zero(int genus);
    bool operator==(const DT&) const = default;
};

// Arc-type counts inside one pants.  seam(i,j) joins boundary slots i and j;
// wave[i] arcs return to slot i (and separate the other two slots).
struct PantsArcs {
    Coord seam01 = 0, seam02 = 0, seam12 = 0;
    Coord wave[3] = {0, 0, 0};
    Coord seamBetween(int a, int b) const;
    Coord totalAtSlot(int s) const;  // endpoints on slot s = m of that slot
};

// Unique tight normal-arc solution for boundary counts (m0, m1, m2).
// Throws UsageError when m0+m1+m2 is odd (no such multicurve exists).
PantsArcs solvePants(Coord m0, Coord m1, Coord m2);

struct WaveSite {
    int pants = -1;
    int side = -1;  // slot the wave returns to
    bool operator==(const WaveSite&) const = default;
};

struct WaveReport {
    std::vector<WaveSite> sites;       // proper waves, one entry per site
    std::vector<int> parallelCurves;   // components parallel to E_k count as waves
    bool any() const { return !sites.empty() || !parallelCurves.empty(); }
};

class NormalCurve {
public:
    NormalCurve(const surface::PantsDecomposition& pd, DT dt);

    const surface::PantsDecomposition& pd() const { return *pd_; }
    const DT& dt() const { return dt_; }
    int genus() const { return dt_.genus; }
    Coord m(int k) const { return dt_.m.at(k); }
    Coord t(int k) const { return dt_.t.at(k); }
    Coord parallel(int k) const { return dt_.parallel.at(k); }

    PantsArcs arcs(int pants) const;     // derived tight solution in a pants
    Coord eLength() const;               // sum of m_k
    int components() const;              // computed once, cached
    bool isSingleCurve() const { return components() == 1; }
    bool isEmpty() const;

    WaveReport waves() const;

    bool operator==(const NormalCurve& o) const { return dt_ == o.dt_; }

private:
    const surface::PantsDecomposition* pd_;
    DT dt_;
    mutable int components_ = -1;
};

Coord eLength(const NormalCurve& c);
WaveReport detectWaves(const NormalCurve& c);

// ---------------------------------------------------------------------------
// Abstract strand model.
//
// The canonical placement puts the m_k crossing points of each collar at
// indexed positions 0..m_k-1 around each boundary circle (counted from the
// seam endpoint A in the direction of the pants boundary orientation).  The
// collar pairing and the in-pants chord pairing below determine the curve up
// to isotopy and drive component tracing, placement and track carrying.

// Families of chords inside one hexagon: (fromSide, toSide, count) with the
// six sides indexed by the face-walk order.  The layout assigns each family a
// block of endpoint slots on both sides, ordered so that the chord system is
// embedded; the k-th endpoint of a family on the "from" side pairs with the
// (count-1-k)-th on the "to" side.
struct HexFamily {
    int from = 0, to = 0;
    Coord count = 0;
    int tag = 0;  // caller-defined family id
};

struct HexLayout {
    // For each side: ordered list of (family tag, copy index within family,
    // isFromEnd) along the side in face-walk direction.
    struct Slot {
        int tag;
        Coord copy;
        bool fromEnd;
    };
    std::vector<std::vector<Slot>> sides;  // size 6
};

// Throws Alarm if two nonzero families interleave (cannot be embedded).
HexLayout layoutHexagon(const std::vector<HexFamily>& families);

// Collar pairing: entry i on the gluing's A side exits at pairing[i] on the
// B side.  uCountB is the number of B-side circle points on the front arc
// (needed only when the gluing orientation is reversed).
std::vector<Coord> collarPairing(Coord m, Coord t, bool orientPlus, Coord uCountB);

// One crossing point of the curve with a boundary circle, in pants-side terms.
struct CirclePoint {
    int family;   // 0..5: seam01, seam02, seam12, wave0, wave1, wave2
    Coord copy;   // index within the family
    int end;      // 0 or 1: which endpoint of the chord family
};

// Per-pants canonical layout: circle point sequences for the three slots
// (cyclic order from vertex A, u-arc then w-arc) and the chord pairing.
struct PantsModel {
    // circle[s]: the ordered points on slot s; uCount[s] of them lie on the
    // u-arc (the rest on the w-arc).
    std::vector<CirclePoint> circle[3];
    Coord uCount[3] = {0, 0, 0};
    PantsArcs arcs;

    // partner(slot, idx) -> (slot', idx'): the other endpoint of the chord
    // through circle point idx of slot s.
    std::pair<int, Coord> partner(int slot, Coord idx) const;
};

PantsModel buildPantsModel(const PantsArcs& arcs);

// Number of connected components of the multicurve (excluding parallel ones).
int traceComponents(const surface::PantsDecomposition& pd, const DT& dt);

// ---------------------------------------------------------------------------
// Serialization (curve file format)

void save(const NormalCurve& c, std::ostream& out);
NormalCurve load(const surface::PantsDecomposition& pd, std::istream& in);

}  // namespace cf::curves
