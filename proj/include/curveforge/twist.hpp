#pragma once

// Dehn twists by cut-insert-tighten: the twisted curve is built by removing
// the short arc of d crossing a thin annulus around c at each crossing point
// and splicing in a spiral that winds m times around the annulus, then
// tightening the result.  In a flat chart of the annulus the spirals are
// parallel lines, so the construction never introduces self-crossings.
//
// The same minimal-position machinery yields the intersection-arc analysis:
// at every crossing point P of two curves, the maximal parallel arcs through
// P are traced by matching the two crossing sequences with the decomposing
// system outward from P in both directions.

#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/overlay.hpp"

namespace cf::twist {

using curves::NormalCurve;

// ---------------------------------------------------------------------------
// Intersection arcs

struct IntersectionArc {
    int point = 0;          // crossing index, in order along k
    long long length = 0;   // |P|: matched system crossings of the parallel arcs
    long long forward = 0;  // split of |P| into the two sides of P along k
    long long backward = 0;
    bool wave = false;      // length 0: P sits on a wave subarc
};

// One record per geometric crossing of k with c (after minimal position).
std::vector<IntersectionArc> intersectionArcs(const surface::PantsDecomposition& pd,
                                              const NormalCurve& k, const NormalCurve& c);

enum class ArcSize { Small, Large };

// Small iff arcLen < 3/(12g-11) * |c| (strict).  Refuses |c| = 0.
ArcSize classifyArc(long long arcLen, const NormalCurve& c);

// ---------------------------------------------------------------------------
// Dehn twist

struct PointLedger {
    long long p = 0;               // |P| at this crossing of d with c
    long long dIn = 0, dTr = 0;    // the two sides of the intersection arc on d
    long long etaIn = 0, etaTr = 0;  // cancelled stretches of the inserted spiral
};

struct TwistRecord {
    long long exponent = 0;
    long long crossings = 0;   // i(d, c) in minimal position
    long long cLength = 0;     // system crossings of c
    long long eta = 0;         // length of each inserted spiral: |m| * cLength
    long long beta = 0;        // length of each removed arc (always 0: it stays
                               // inside the annulus)
    long long tightenMoves = 0;  // trade-off moves spent tightening the result
    std::vector<PointLedger> points;
};

// delta_c^m(d).  Positive m twists right-handedly with respect to the fixed
// surface orientation; on a curve parallel to E_k this adds m * m_k(d) to the
// twist coordinate t_k(d).  Requires c essential and connected.
NormalCurve dehnTwist(const surface::PantsDecomposition& pd, const NormalCurve& d,
                      const NormalCurve& c, long long m, TwistRecord* rec = nullptr);

// ---------------------------------------------------------------------------
// Dichotomy and minimum checks

struct DichotomyPoint {
    long long s = 0;       // |S| at a crossing of the twisted curve with c
    long long bound = 0;   // |m| * |c| - max_P |P|
    long long margin = 0;  // s - bound
    bool large = false;
};

struct DichotomyReport {
    bool hypothesisHolds = false;  // every |P| small
    bool checked = false;          // false when the hypothesis failed
    bool allLarge = false;
    bool boundHolds = false;  // every |S| >= |m| * |c| - max_P |P|
    long long maxP = 0;
    long long cLength = 0;
    std::vector<DichotomyPoint> points;
};

// Hypothesis: every crossing of d with c has small intersection length.
// Verifies that every crossing of delta_c^m(d) with c has large intersection
// length, with per-point margins.  Requires m != 0.
DichotomyReport twistDichotomyCheck(const surface::PantsDecomposition& pd,
                                    const NormalCurve& d, const NormalCurve& c,
                                    long long m);

struct MinimumTable {
    int range = 0;
    bool hypothesisHolds = false;
    std::vector<long long> counts;  // system crossings of delta_c^m(d), m = -range..range
    long long at(long long m) const { return counts.at((size_t)(m + range)); }
    bool strictMinimumAtZero() const;
};

MinimumTable twistMinimumTable(const surface::PantsDecomposition& pd, const NormalCurve& d,
                               const NormalCurve& c, int range);

}  // namespace cf::twist
