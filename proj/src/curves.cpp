#include "curveforge/curves.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "curveforge/errors.hpp"

namespace cf::curves {

using surface::PantsDecomposition;

DT DT::zero(int genus) {
    DT d;
    d.genus = genus;
    int n = 3 * genus - 3;
    d.m.assign(n, 0);
    d.t.assign(n, 0);
    d.parallel.assign(n, 0);
    return d;
}

Coord PantsArcs::seamBetween(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == 1) return seam01;
    if (a == 0 && b == 2) return seam02;
    if (a == 1 && b == 2) return seam12;
    throw UsageError("seamBetween: slots must be distinct in 0..2");
}

Coord PantsArcs::totalAtSlot(int s) const {
    switch (s) {
        case 0: return seam01 + seam02 + 2 * wave[0];
        case 1: return seam01 + seam12 + 2 * wave[1];
        case 2: return seam02 + seam12 + 2 * wave[2];
    }
    throw UsageError("totalAtSlot: slot must be 0..2");
}

PantsArcs solvePants(Coord m0, Coord m1, Coord m2) {
    require(m0 >= 0 && m1 >= 0 && m2 >= 0, "negative boundary count");
    require((m0 + m1 + m2) % 2 == 0,
            "boundary counts of a pants must have even sum");
    PantsArcs a;
    // At most one side can exceed the sum of the others.
    if (m0 > m1 + m2) {
        a.wave[0] = (m0 - m1 - m2) / 2;
        a.seam01 = m1;
        a.seam02 = m2;
    } else if (m1 > m0 + m2) {
        a.wave[1] = (m1 - m0 - m2) / 2;
        a.seam01 = m0;
        a.seam12 = m2;
    } else if (m2 > m0 + m1) {
        a.wave[2] = (m2 - m0 - m1) / 2;
        a.seam02 = m0;
        a.seam12 = m1;
    } else {
        a.seam01 = (m0 + m1 - m2) / 2;
        a.seam02 = (m0 + m2 - m1) / 2;
        a.seam12 = (m1 + m2 - m0) / 2;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Hexagon layout

static bool strictlyInside(int x, int i, int j) {
    // Is side x strictly inside the cyclic interval (i, j) on 6 sides?
    for (int s = (i + 1) % 6; s != j; s = (s + 1) % 6)
        if (s == x) return true;
    return false;
}

HexLayout layoutHexagon(const std::vector<HexFamily>& families) {
    std::vector<HexFamily> live;
    for (const auto& f : families)
        if (f.count > 0) {
            require(f.from != f.to && f.from >= 0 && f.from < 6 && f.to >= 0 &&
                        f.to < 6,
                    "hexagon chord family must join two distinct sides");
            live.push_back(f);
        }
    for (size_t i = 0; i < live.size(); ++i)
        for (size_t j = i + 1; j < live.size(); ++j) {
            const auto &a = live[i], &b = live[j];
            if (b.from == a.from || b.from == a.to || b.to == a.from ||
                b.to == a.to)
                continue;  // shared side: orderable without crossing
            bool in1 = strictlyInside(b.from, a.from, a.to);
            bool in2 = strictlyInside(b.to, a.from, a.to);
            check(in1 == in2, "hexagon chord families interleave");
        }

    HexLayout out;
    out.sides.resize(6);
    for (int s = 0; s < 6; ++s) {
        // Families with an endpoint on side s, ordered so that the earlier
        // endpoints belong to chords reaching farther ahead (counterclockwise)
        // -- the unique non-crossing arrangement.
        struct Inc {
            int fam;
            bool fromEnd;
            int dist;
        };
        std::vector<Inc> inc;
        for (size_t f = 0; f < live.size(); ++f) {
            if (live[f].from == s)
                inc.push_back({(int)f, true, (live[f].to - s + 6) % 6});
            if (live[f].to == s)
                inc.push_back({(int)f, false, (live[f].from - s + 6) % 6});
        }
        std::stable_sort(inc.begin(), inc.end(),
                         [](const Inc& a, const Inc& b) { return a.dist > b.dist; });
        for (const auto& e : inc) {
            const auto& f = live[e.fam];
            for (Coord c = 0; c < f.count; ++c) {
                // Chord id c sits at block position c on the from side and at
                // position count-1-c on the to side (rainbow nesting).
                Coord copy = e.fromEnd ? c : f.count - 1 - c;
                out.sides[s].push_back({f.tag, copy, e.fromEnd});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pants model

PantsModel buildPantsModel(const PantsArcs& arcs) {
    PantsModel pm;
    pm.arcs = arcs;

    // Front hexagon walk sides: 0=w0(B0->A0) 1=s01 2=u1(A1->B1) 3=s12
    // 4=w2(B2->A2) 5=s02(reversed).  Family tags: 0..2 seams, 3..5 waves.
    std::vector<HexFamily> upper = {
        {0, 2, arcs.seam01, 0}, {0, 4, arcs.seam02, 1}, {2, 4, arcs.seam12, 2},
        {0, 3, arcs.wave[0], 3}, {2, 5, arcs.wave[1], 4}, {4, 1, arcs.wave[2], 5},
    };
    // Back hexagon walk sides: 0=u0(A0->B0) 1=s02 2=u2(A2->B2) 3=s12(rev)
    // 4=w1(B1->A1) 5=s01(rev).  Only the return halves of wave arcs.
    std::vector<HexFamily> lower = {
        {3, 0, arcs.wave[0], 3},
        {1, 4, arcs.wave[1], 4},
        {5, 2, arcs.wave[2], 5},
    };
    HexLayout up = layoutHexagon(upper);
    HexLayout lo = layoutHexagon(lower);

    // Circle order of each slot: front arc (A->B) then back arc (B->A).  Both
    // hexagon walks traverse these arcs in exactly those directions.
    auto emit = [&](int slot, const std::vector<HexLayout::Slot>& lst) {
        for (const auto& e : lst)
            pm.circle[slot].push_back({e.tag, e.copy, e.fromEnd ? 0 : 1});
    };
    emit(0, lo.sides[0]);  // u0
    pm.uCount[0] = (Coord)pm.circle[0].size();
    emit(0, up.sides[0]);  // w0
    emit(1, up.sides[2]);  // u1
    pm.uCount[1] = (Coord)pm.circle[1].size();
    emit(1, lo.sides[4]);  // w1
    emit(2, lo.sides[2]);  // u2
    pm.uCount[2] = (Coord)pm.circle[2].size();
    emit(2, up.sides[4]);  // w2
    return pm;
}

std::pair<int, Coord> PantsModel::partner(int slot, Coord idx) const {
    const CirclePoint& cp = circle[slot].at((size_t)idx);
    int otherEnd = 1 - cp.end;
    // Which slot holds the other endpoint of this chord?
    static const int seamSlots[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    int otherSlot;
    if (cp.family < 3) {
        otherSlot = seamSlots[cp.family][0] == slot ? seamSlots[cp.family][1]
                                                    : seamSlots[cp.family][0];
    } else {
        otherSlot = cp.family - 3;  // waves return to the same slot
    }
    const auto& lst = circle[otherSlot];
    for (Coord j = 0; j < (Coord)lst.size(); ++j)
        if (lst[(size_t)j].family == cp.family && lst[(size_t)j].copy == cp.copy &&
            lst[(size_t)j].end == otherEnd)
            return {otherSlot, j};
    throw Alarm("pants model: chord endpoint has no partner");
}

// ---------------------------------------------------------------------------
// Collar pairing

std::vector<Coord> collarPairing(Coord m, Coord t, bool orientPlus, Coord uCountB) {
    require(m >= 0, "collar pairing: negative strand count");
    std::vector<Coord> out((size_t)m);
    if (m == 0) return out;
    // Exit indices sorted by position along the unrolled collar top.  With the
    // plus identification the B circle appears reversed; with the minus one it
    // is reversed about the far vertical arc, which splits at the front/back
    // arc boundary of the B circle.
    std::vector<Coord> e((size_t)m);
    if (orientPlus) {
        for (Coord q = 0; q < m; ++q) e[(size_t)q] = m - 1 - q;
    } else {
        Coord u = uCountB;
        require(u >= 0 && u <= m, "collar pairing: bad front-arc count");
        for (Coord q = 0; q < u; ++q) e[(size_t)q] = u - 1 - q;
        for (Coord q = u; q < m; ++q) e[(size_t)q] = m - 1 - (q - u);
    }
    for (Coord i = 0; i < m; ++i) {
        Coord q = ((i + t) % m + m) % m;
        out[(size_t)i] = e[(size_t)q];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Component tracing

int traceComponents(const PantsDecomposition& pd, const DT& dt) {
    int nC = pd.numCurves(), nP = pd.numPants();
    std::vector<PantsModel> models((size_t)nP);
    for (int p = 0; p < nP; ++p) {
        models[(size_t)p] = buildPantsModel(
            solvePants(dt.m.at((size_t)pd.curveAt(p, 0)),
                       dt.m.at((size_t)pd.curveAt(p, 1)),
                       dt.m.at((size_t)pd.curveAt(p, 2))));
    }
    // Pairings per collar; the B-side front-arc count comes from the model of
    // the pants holding the B slot.
    std::vector<std::vector<Coord>> pairing((size_t)nC);
    std::vector<std::vector<Coord>> inverse((size_t)nC);
    for (int k = 0; k < nC; ++k) {
        const auto& g = pd.gluing(k);
        Coord m = dt.m.at((size_t)k);
        Coord uB = models[(size_t)g.b.pants].uCount[g.b.slot];
        pairing[(size_t)k] = collarPairing(m, dt.t.at((size_t)k), g.orientPlus, uB);
        inverse[(size_t)k].assign((size_t)m, -1);
        for (Coord i = 0; i < m; ++i)
            inverse[(size_t)k][(size_t)pairing[(size_t)k][(size_t)i]] = i;
        for (Coord i = 0; i < m; ++i)
            check(inverse[(size_t)k][(size_t)i] >= 0,
                  "collar pairing is not a bijection");
    }

    // Points: (curve, side, idx) flattened.
    std::vector<Coord> base((size_t)nC + 1, 0);
    for (int k = 0; k < nC; ++k) base[(size_t)k + 1] = base[(size_t)k] + 2 * dt.m.at((size_t)k);
    auto id = [&](int k, int side, Coord idx) {
        return base[(size_t)k] + side * dt.m.at((size_t)k) + idx;
    };
    Coord total = base[(size_t)nC];
    std::vector<char> seen((size_t)total, 0);
    int orbits = 0;
    for (Coord start = 0; start < total; ++start) {
        if (seen[(size_t)start]) continue;
        ++orbits;
        Coord cur = start;
        do {
            seen[(size_t)cur] = 1;
            // Decode.
            int k = (int)(std::upper_bound(base.begin(), base.end(), cur) -
                          base.begin()) - 1;
            Coord off = cur - base[(size_t)k];
            int side = off >= dt.m.at((size_t)k) ? 1 : 0;
            Coord idx = off - side * dt.m.at((size_t)k);
            // Step into the pants on this side of the collar...
            const auto& g = pd.gluing(k);
            surface::Slot sl = side == 0 ? g.a : g.b;
            auto [slot2, idx2] = models[(size_t)sl.pants].partner(sl.slot, idx);
            int k2 = pd.curveAt(sl.pants, slot2);
            const auto& g2 = pd.gluing(k2);
            int side2 = (g2.a.pants == sl.pants && g2.a.slot == slot2) ? 0 : 1;
            Coord mid = id(k2, side2, idx2);
            if (!seen[(size_t)mid]) seen[(size_t)mid] = 1;
            // ...and across that collar to the far side.
            Coord idx3 = side2 == 0 ? pairing[(size_t)k2][(size_t)idx2]
                                    : inverse[(size_t)k2][(size_t)idx2];
            cur = id(k2, 1 - side2, idx3);
        } while (cur != start);
    }
    return orbits;
}

// ---------------------------------------------------------------------------
// NormalCurve

NormalCurve::NormalCurve(const PantsDecomposition& pd, DT dt)
    : pd_(&pd), dt_(std::move(dt)) {
    require(dt_.genus == pd.genus(), "curve genus does not match surface");
    size_t n = (size_t)pd.numCurves();
    require(dt_.m.size() == n && dt_.t.size() == n && dt_.parallel.size() == n,
            "coordinate vectors must have one entry per decomposing curve");
    for (size_t k = 0; k < n; ++k) {
        require(dt_.m[k] >= 0, "intersection count m must be nonnegative");
        require(dt_.parallel[k] >= 0, "parallel count must be nonnegative");
        require(dt_.m[k] > 0 || dt_.t[k] == 0,
                "twist must vanish when the intersection count is zero");
    }
    // Parity inside every pants.
    for (int p = 0; p < pd.numPants(); ++p)
        solvePants(dt_.m[(size_t)pd.curveAt(p, 0)], dt_.m[(size_t)pd.curveAt(p, 1)],
                   dt_.m[(size_t)pd.curveAt(p, 2)]);
}

PantsArcs NormalCurve::arcs(int pants) const {
    return solvePants(dt_.m.at((size_t)pd_->curveAt(pants, 0)),
                      dt_.m.at((size_t)pd_->curveAt(pants, 1)),
                      dt_.m.at((size_t)pd_->curveAt(pants, 2)));
}

Coord NormalCurve::eLength() const {
    return std::accumulate(dt_.m.begin(), dt_.m.end(), (Coord)0);
}

int NormalCurve::components() const {
    if (components_ < 0) {
        Coord par = std::accumulate(dt_.parallel.begin(), dt_.parallel.end(), (Coord)0);
        components_ = traceComponents(*pd_, dt_) + (int)par;
    }
    return components_;
}

bool NormalCurve::isEmpty() const {
    for (auto v : dt_.m)
        if (v) return false;
    for (auto v : dt_.parallel)
        if (v) return false;
    return true;
}

WaveReport NormalCurve::waves() const {
    WaveReport r;
    for (int p = 0; p < pd_->numPants(); ++p) {
        PantsArcs a = arcs(p);
        for (int s = 0; s < 3; ++s)
            if (a.wave[s] > 0) r.sites.push_back({p, s});
    }
    for (int k = 0; k < pd_->numCurves(); ++k)
        if (dt_.parallel.at((size_t)k) > 0) r.parallelCurves.push_back(k);
    return r;
}

Coord eLength(const NormalCurve& c) { return c.eLength(); }
WaveReport detectWaves(const NormalCurve& c) { return c.waves(); }

// ---------------------------------------------------------------------------
// Serialization

void save(const NormalCurve& c, std::ostream& out) {
    out << "format=1\n";
    out << "curve genus=" << c.genus() << "\n";
    for (int k = 0; k < c.pd().numCurves(); ++k)
        out << "coord " << k << " m=" << c.m(k) << " t=" << c.t(k) << "\n";
    for (int k = 0; k < c.pd().numCurves(); ++k)
        if (c.parallel(k) > 0)
            out << "parallel " << k << " " << c.parallel(k) << "\n";
}

NormalCurve load(const PantsDecomposition& pd, std::istream& in) {
    std::string line;
    int lineNo = 0;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(lineNo, msg);
    };
    bool sawVersion = false, sawHeader = false;
    DT dt;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!sawVersion) {
            if (line != "format=1") throw fail("expected 'format=1'");
            sawVersion = true;
            continue;
        }
        std::string word;
        ls >> word;
        if (!sawHeader) {
            std::string gv;
            if (word != "curve" || !(ls >> gv) || gv.rfind("genus=", 0) != 0)
                throw fail("expected 'curve genus=<g>'");
            int g = 0;
            try {
                g = std::stoi(gv.substr(6));
            } catch (...) {
                throw fail("bad genus value");
            }
            if (g != pd.genus()) throw fail("curve genus does not match surface");
            dt = DT::zero(g);
            sawHeader = true;
            continue;
        }
        if (word == "coord") {
            int k;
            std::string mv, tv;
            if (!(ls >> k >> mv >> tv) || mv.rfind("m=", 0) != 0 ||
                tv.rfind("t=", 0) != 0)
                throw fail("expected 'coord <k> m=<int> t=<int>'");
            if (k < 0 || k >= pd.numCurves()) throw fail("curve index out of range");
            try {
                dt.m.at((size_t)k) = std::stoll(mv.substr(2));
                dt.t.at((size_t)k) = std::stoll(tv.substr(2));
            } catch (...) {
                throw fail("bad coordinate value");
            }
        } else if (word == "parallel") {
            int k;
            Coord v;
            if (!(ls >> k >> v)) throw fail("expected 'parallel <k> <count>'");
            if (k < 0 || k >= pd.numCurves()) throw fail("curve index out of range");
            dt.parallel.at((size_t)k) = v;
        } else {
            throw fail("unknown record '" + word + "'");
        }
    }
    if (!sawVersion) throw ParseError(1, "missing 'format=1' line");
    if (!sawHeader) throw ParseError(lineNo, "missing 'curve genus=<g>' line");
    return NormalCurve(pd, std::move(dt));
}

}  // namespace cf::curves
