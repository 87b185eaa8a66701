#include "curveforge/arrangement.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "curveforge/errors.hpp"

namespace cf::arr {

using curves::Coord;
using curves::NormalCurve;
using surface::CellComplex;

// ---------------------------------------------------------------------------
// Exact rational positions along edges.  Denominators stay small because
// every bulk operation renormalizes the touched edges afterwards.

namespace {

struct Rat {
    long long n = 0, d = 1;
};

int ratCmp(const Rat& a, const Rat& b) {
    __int128 lhs = (__int128)a.n * b.d, rhs = (__int128)b.n * a.d;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

Rat ratMake(long long n, long long d) {
    check(d > 0, "rational position with nonpositive denominator");
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    return {n, d};
}

Rat ratAdd(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.n * b.d + (__int128)b.n * a.d;
    __int128 d = (__int128)a.d * b.d;
    check(n > -((__int128)1 << 62) && n < ((__int128)1 << 62) && d < ((__int128)1 << 62),
          "rational position overflow");
    return ratMake((long long)n, (long long)d);
}

Rat ratSub(const Rat& a, const Rat& b) { return ratAdd(a, {-b.n, b.d}); }

Rat ratDiv2(const Rat& a) { return ratMake(a.n, 2 * a.d); }

Rat ratMediant(const Rat& a, const Rat& b) {
    check(a.d < (1ll << 60) && b.d < (1ll << 60), "mediant overflow");
    return {a.n + b.n, a.d + b.d};
}

long long ratFloor(const Rat& a) {
    long long q = a.n / a.d;
    if (a.n % a.d != 0 && a.n < 0) --q;
    return q;
}

Rat ratFrac(const Rat& a) { return ratMake(a.n - ratFloor(a) * a.d, a.d); }

}  // namespace

Arrangement::Arrangement(const CellComplex& cx) : cx_(&cx) {
    order_.assign(cx.edges().size(), {});
}

int Arrangement::newNode(int edge, int curve, int comp, bool toLeft) {
    Node n;
    n.edge = edge;
    n.curve = curve;
    n.comp = comp;
    n.toLeft = toLeft;
    nodes_.push_back(n);
    pos_.push_back({0, 1});
    return (int)nodes_.size() - 1;
}

void Arrangement::insertInOrder(int edge, int nodeId, int position) {
    auto& lst = order_.at((size_t)edge);
    require(position >= 0 && position <= (int)lst.size(), "bad order insertion index");
    lst.insert(lst.begin() + position, nodeId);
}

void Arrangement::eraseFromOrder(int edge, int nodeId) {
    auto& lst = order_.at((size_t)edge);
    auto it = std::find(lst.begin(), lst.end(), nodeId);
    check(it != lst.end(), "node missing from its edge order list");
    lst.erase(it);
}

int Arrangement::faceEntered(int nodeId) const {
    const Node& n = nodes_.at((size_t)nodeId);
    return cx_->faceLeftOf(n.edge, n.toLeft);
}

int Arrangement::faceApproach(int nodeId) const {
    const Node& n = nodes_.at((size_t)nodeId);
    return cx_->faceLeftOf(n.edge, !n.toLeft);
}

std::vector<int> Arrangement::componentNodes(int rep) const {
    std::vector<int> out;
    int cur = rep;
    do {
        out.push_back(cur);
        cur = nodes_.at((size_t)cur).next;
    } while (cur != rep);
    return out;
}

long long Arrangement::size(int c) const {
    long long total = 0;
    for (int rep : curveComps_.at((size_t)c)) total += (long long)componentNodes(rep).size();
    return total;
}

long long Arrangement::coreCrossings(int c, int k) const {
    long long total = 0;
    int e0 = cx_->coreEdge(k, 0), e1 = cx_->coreEdge(k, 1);
    for (int rep : curveComps_.at((size_t)c))
        for (int id : componentNodes(rep)) {
            int e = nodes_[(size_t)id].edge;
            if (e == e0 || e == e1) ++total;
        }
    return total;
}

int Arrangement::adoptCurve(std::vector<int> componentReps) {
    int id = (int)curveComps_.size();
    for (int rep : componentReps)
        for (int nid : componentNodes(rep)) nodes_.at((size_t)nid).curve = id;
    curveComps_.push_back(std::move(componentReps));
    validate();
    return id;
}

void Arrangement::validate() const {
    std::vector<int> seen(nodes_.size(), 0);
    for (int e = 0; e < (int)order_.size(); ++e)
        for (int id : order_[(size_t)e]) {
            check(nodes_.at((size_t)id).alive, "dead node in order list");
            check(nodes_[(size_t)id].edge == e, "node filed under wrong edge");
            check(!seen[(size_t)id]++, "node appears twice in order lists");
        }
    for (int id = 0; id < (int)nodes_.size(); ++id)
        check(!nodes_[(size_t)id].alive || seen[(size_t)id] == 1,
              "live node missing from order lists");
    for (int c = 0; c < (int)curveComps_.size(); ++c)
        for (int rep : curveComps_[(size_t)c])
            for (int id : componentNodes(rep)) {
                const Node& n = nodes_[(size_t)id];
                check(n.alive && n.curve == c, "component node bookkeeping broken");
                check(nodes_[(size_t)n.next].prev == id, "linked list broken");
                check(faceEntered(id) == faceApproach(n.next),
                      "consecutive crossings do not share a face");
            }
}

// ---------------------------------------------------------------------------
// Canonical placement
//
// Collar model (everything exact rationals): unroll the collar of curve k as
// the strip [0,1) x [0,1].  The bottom circle is the gluing's A side with its
// seam vertex at x = 0, front arc over (0,1/2), back arc over (1/2,1).  The
// vertical arc v1 is the line x = 0, v2 the line x = 1/2; the core is the
// line y = 1/2 with c1 at x = 0 and c2 at x = 1/2.  The top circle appears
// reversed: its point at circle coordinate y sits at x = -y (plus gluing) or
// x = 1/2 - y (minus gluing), mod 1.  Strands are straight segments from
// bottom to top lifted to the universal cover; their crossing words with the
// vertical and core edges are read off the segment.
//
// Edge coordinates in strip terms:
//   v1 lower/upper: xi = 2y, 2y-1 at x = 0;   v2 likewise at x = 1/2
//   core front half cv (c2 -> c1): spans x in (0,1/2) with xi = 1 - 2x
//   core back half cu (c1 -> c2): spans x in (1/2,1) with xi = 2 - 2x

namespace {

struct CollarEvent {
    int edge = -1;
    Rat xi;
    int faceBelow = -1, faceAbove = -1;  // collar squares below/above in upward direction
};

struct CollarStrand {
    Coord botIdx = -1, topIdx = -1;
    std::vector<CollarEvent> events;
    int firstFace = -1;  // square entered from the bottom circle
};

// xHalf 0 = x in (0,1/2), 1 = x in (1/2,1)
int collarSquare(const CellComplex& cx, int k, int xHalf, bool yHigh) {
    if (!yHigh) return xHalf == 0 ? cx.squareFace(k, 2) : cx.squareFace(k, 0);
    return xHalf == 0 ? cx.squareFace(k, 3) : cx.squareFace(k, 1);
}

}  // namespace

int Arrangement::addParallelCore(int k) {
    int curve = (int)curveComps_.size();
    int v1a = cx_->verticalEdge(k, 0), v2a = cx_->verticalEdge(k, 2);
    int a = newNode(v1a, curve, 0, false);
    int b = newNode(v2a, curve, 0, false);
    // A loop just below the core, running in the +x direction: after v1 it
    // enters the front-bottom square, after v2 the back-bottom square.
    nodes_[(size_t)a].toLeft = (cx_->faceLeftOf(v1a, true) == cx_->squareFace(k, 2));
    nodes_[(size_t)b].toLeft = (cx_->faceLeftOf(v2a, true) == cx_->squareFace(k, 0));
    nodes_[(size_t)a].next = nodes_[(size_t)a].prev = b;
    nodes_[(size_t)b].next = nodes_[(size_t)b].prev = a;
    for (int id : {a, b}) {
        int e = nodes_[(size_t)id].edge;
        Rat below = order_[(size_t)e].empty()
                        ? Rat{0, 1}
                        : Rat{pos_[(size_t)order_[(size_t)e].back()][0],
                              pos_[(size_t)order_[(size_t)e].back()][1]};
        Rat p = ratMediant(below, {1, 1});
        pos_[(size_t)id] = {p.n, p.d};
        insertInOrder(e, id, (int)order_[(size_t)e].size());
    }
    curveComps_.push_back({a});
    validate();
    return curve;
}

int Arrangement::addCanonical(const NormalCurve& c) {
    const auto& pd = cx_->pd();
    require(&pd == &c.pd() || pd == c.pd(), "curve belongs to a different surface");
    const curves::DT& dt = c.dt();
    int nP = pd.numPants(), nC = pd.numCurves();
    int curveId = (int)curveComps_.size();
    long long epsCounter = 1;
    const long long epsDen = 1ll << 55;

    std::vector<curves::PantsModel> models((size_t)nP);
    for (int p = 0; p < nP; ++p) models[(size_t)p] = curves::buildPantsModel(c.arcs(p));

    // Rational positions of the circle points.
    struct CirclePt {
        int edge = -1;
        Rat xi;  // along the edge
        Rat x;   // along the circle, from the seam vertex A
    };
    std::vector<std::array<std::vector<CirclePt>, 3>> pts((size_t)nP);
    for (int p = 0; p < nP; ++p)
        for (int s = 0; s < 3; ++s) {
            const auto& model = models[(size_t)p];
            Coord m = (Coord)model.circle[s].size();
            Coord nu = model.uCount[s], nw = m - nu;
            auto& lst = pts[(size_t)p][s];
            lst.resize((size_t)m);
            for (Coord i = 0; i < m; ++i) {
                CirclePt cp;
                if (i < nu) {
                    cp.edge = cx_->arcEdge(p, s, 0);
                    cp.xi = ratMake(2 * i + 1, 2 * nu);
                    cp.x = ratDiv2(cp.xi);
                } else {
                    Coord r = i - nu;
                    cp.edge = cx_->arcEdge(p, s, 1);
                    cp.xi = ratMake(2 * r + 1, 2 * nw);
                    cp.x = ratAdd({1, 2}, ratDiv2(cp.xi));
                }
                lst[(size_t)i] = cp;
            }
        }

    // Wave crossing points on the seams.  In the upper hexagon the seam sides
    // s01 and s12 run in edge direction and s02 against it; the rainbow
    // layout puts wave copy c at walk position (w-1-c) of its seam block.
    std::vector<std::array<std::vector<Rat>, 3>> seamXi((size_t)nP);
    std::vector<std::array<int, 3>> seamEdgeOf((size_t)nP, {-1, -1, -1});
    for (int p = 0; p < nP; ++p) {
        curves::PantsArcs arcs = models[(size_t)p].arcs;
        for (int side = 0; side < 3; ++side) {
            Coord w = arcs.wave[side];
            if (w == 0) continue;
            int o1 = side == 0 ? 1 : 0, o2 = side == 2 ? 1 : 2;
            seamEdgeOf[(size_t)p][side] = cx_->seamEdgeBetween(p, o1, o2);
            bool reversed = (side == 1);  // the wave at slot 1 crosses s02
            auto& xs = seamXi[(size_t)p][side];
            xs.resize((size_t)w);
            for (Coord cpy = 0; cpy < w; ++cpy) {
                Coord r = w - 1 - cpy;
                Rat xi = ratMake(2 * r + 1, 2 * w);
                if (reversed) xi = ratSub({1, 1}, xi);
                xs[(size_t)cpy] = xi;
            }
        }
    }

    // Collar strands.
    std::vector<std::vector<CollarStrand>> strands((size_t)nC);
    for (int k = 0; k < nC; ++k) {
        Coord m = dt.m.at((size_t)k);
        if (m == 0) continue;
        const auto& g = pd.gluing(k);
        auto& botPts = pts[(size_t)g.a.pants][g.a.slot];
        auto& topPts = pts[(size_t)g.b.pants][g.b.slot];
        check((Coord)botPts.size() == m && (Coord)topPts.size() == m,
              "pants model size disagrees with intersection count");
        std::vector<std::pair<Rat, Coord>> tops;
        for (Coord j = 0; j < m; ++j) {
            Rat xt = g.orientPlus ? ratFrac(ratSub({0, 1}, topPts[(size_t)j].x))
                                  : ratFrac(ratSub({1, 2}, topPts[(size_t)j].x));
            tops.push_back({xt, j});
        }
        std::sort(tops.begin(), tops.end(),
                  [](const auto& a, const auto& b) { return ratCmp(a.first, b.first) < 0; });
        for (Coord q = 0; q + 1 < m; ++q)
            check(ratCmp(tops[(size_t)q].first, tops[(size_t)q + 1].first) != 0,
                  "coincident collar endpoints");

        Coord t = dt.t.at((size_t)k);
        auto& sv = strands[(size_t)k];
        sv.resize((size_t)m);
        for (Coord i = 0; i < m; ++i) {
            Coord qraw = i + t;
            Coord qm = ((qraw % m) + m) % m;
            Coord K = (qraw - qm) / m;
            CollarStrand st;
            st.botIdx = i;
            st.topIdx = tops[(size_t)qm].second;
            Rat xb = botPts[(size_t)i].x;
            Rat xt = ratAdd(tops[(size_t)qm].first, {K, 1});
            Rat dx = ratSub(xt, xb);
            int dir = ratCmp(dx, {0, 1});
            Rat xmid = ratDiv2(ratAdd(xb, xt));

            struct Ev {
                Rat x;
                int kind;  // 0 = vertical lattice line, 1 = core
            };
            std::vector<Ev> evs;
            Rat lo = dir >= 0 ? xb : xt, hi = dir >= 0 ? xt : xb;
            for (long long z2 = 2 * ratFloor(lo) - 2; z2 <= 2 * ratFloor(hi) + 4; ++z2) {
                Rat z = ratMake(z2, 2);
                if (ratCmp(z, lo) > 0 && ratCmp(z, hi) < 0) evs.push_back({z, 0});
            }
            if (dir < 0) std::reverse(evs.begin(), evs.end());
            size_t corePos = 0;
            while (corePos < evs.size() &&
                   (dir >= 0 ? ratCmp(evs[corePos].x, xmid) < 0
                             : ratCmp(evs[corePos].x, xmid) > 0))
                ++corePos;
            bool coreAtVertex = corePos < evs.size() && ratCmp(evs[corePos].x, xmid) == 0;
            evs.insert(evs.begin() + (long)corePos + (coreAtVertex ? 1 : 0), {xmid, 1});

            int xHalf = ratCmp(ratFrac(xb), {1, 2}) < 0 ? 0 : 1;
            bool yHigh = false;
            st.firstFace = collarSquare(*cx_, k, xHalf, yHigh);
            for (const Ev& ev : evs) {
                CollarEvent ce;
                int before = collarSquare(*cx_, k, xHalf, yHigh);
                (void)before;
                ce.faceBelow = collarSquare(*cx_, k, xHalf, yHigh);
                if (ev.kind == 0) {
                    bool isV1 = (ev.x.d == 1);
                    Rat num = ratSub(ev.x, xb);
                    __int128 hn = (__int128)num.n * dx.d;
                    __int128 hd = (__int128)num.d * dx.n;
                    if (hd < 0) { hn = -hn; hd = -hd; }
                    check(hd > 0 && hn > 0 && hn < hd, "collar event height out of range");
                    check(hn < ((__int128)1 << 62) && hd < ((__int128)1 << 62),
                          "collar height overflow");
                    Rat h = ratMake((long long)hn, (long long)hd);
                    int cmpHalf = ratCmp(h, {1, 2});
                    bool lower = cmpHalf <= 0;  // vertex clash resolved downward
                    ce.edge = cx_->verticalEdge(k, isV1 ? (lower ? 0 : 1) : (lower ? 2 : 3));
                    if (cmpHalf == 0) {
                        // The segment runs exactly through a core vertex:
                        // cross the lower vertical just below it.
                        ce.xi = ratSub({1, 1}, ratMake(epsCounter++, epsDen));
                    } else {
                        ce.xi = lower ? ratAdd(h, h) : ratSub(ratAdd(h, h), {1, 1});
                    }
                    xHalf ^= 1;
                } else {
                    Rat f = ratFrac(xmid);
                    int cu = cx_->coreEdge(k, 0), cv = cx_->coreEdge(k, 1);
                    if (ratCmp(f, {0, 1}) == 0) {
                        // exactly at c1: nudge in the direction of travel
                        if (dir >= 0) { ce.edge = cv; ce.xi = ratSub({1, 1}, ratMake(epsCounter++, epsDen)); }
                        else { ce.edge = cu; ce.xi = ratMake(epsCounter++, epsDen); }
                    } else if (ratCmp(f, {1, 2}) == 0) {
                        // exactly at c2
                        if (dir >= 0) { ce.edge = cu; ce.xi = ratSub({1, 1}, ratMake(epsCounter++, epsDen)); }
                        else { ce.edge = cv; ce.xi = ratMake(epsCounter++, epsDen); }
                    } else if (ratCmp(f, {1, 2}) < 0) {
                        ce.edge = cv;
                        ce.xi = ratSub({1, 1}, ratAdd(f, f));
                    } else {
                        ce.edge = cu;
                        ce.xi = ratSub({2, 1}, ratAdd(f, f));
                    }
                    yHigh = true;
                }
                ce.faceAbove = collarSquare(*cx_, k, xHalf, yHigh);
                st.events.push_back(ce);
            }
            check(yHigh, "collar strand missed its core crossing");
            check(xHalf == (ratCmp(ratFrac(xt), {1, 2}) < 0 ? 0 : 1),
                  "collar strand ended in the wrong square");
            sv[(size_t)i] = std::move(st);
        }
        std::vector<char> hit((size_t)m, 0);
        for (auto& st : sv) {
            check(!hit[(size_t)st.topIdx], "collar pairing not a bijection");
            hit[(size_t)st.topIdx] = 1;
        }
    }

    // ---- assemble components --------------------------------------------
    std::vector<Coord> base((size_t)nC + 1, 0);
    for (int k = 0; k < nC; ++k) base[(size_t)k + 1] = base[(size_t)k] + 2 * dt.m.at((size_t)k);
    auto pid = [&](int k, int side, Coord idx) {
        return base[(size_t)k] + (Coord)side * dt.m.at((size_t)k) + idx;
    };
    Coord totalPts = base[(size_t)nC];
    std::vector<char> seen((size_t)totalPts, 0);

    // The hexagon bordering an arc: the upper hexagon holds the back arcs of
    // slots 0 and 2 and the front arc of slot 1; the lower hexagon the rest.
    auto hexOfArc = [&](int p, int s, bool frontArc) {
        bool upper = ((s == 1) == frontArc);
        return cx_->hexFace(p, upper ? 0 : 1);
    };

    std::vector<int> reps;
    std::vector<std::pair<int, Rat>> placed;
    auto makeNode = [&](int edge, Rat xi, int enteredFace, int comp) {
        int id = newNode(edge, curveId, comp, false);
        nodes_[(size_t)id].toLeft = (cx_->faceLeftOf(edge, true) == enteredFace);
        check(cx_->faceLeftOf(edge, nodes_[(size_t)id].toLeft) == enteredFace,
              "placement entered a face not adjacent to the edge");
        placed.push_back({id, xi});
        return id;
    };

    int compIdx = 0;
    for (Coord start = 0; start < totalPts; ++start) {
        if (seen[(size_t)start]) continue;
        std::vector<int> cycle;
        Coord cur = start;  // always a point about to enter its collar
        do {
            int k = (int)(std::upper_bound(base.begin(), base.end(), cur) - base.begin()) - 1;
            Coord off = cur - base[(size_t)k];
            int side = off >= dt.m.at((size_t)k) ? 1 : 0;
            Coord idx = off - (Coord)side * dt.m.at((size_t)k);
            seen[(size_t)cur] = 1;
            const auto& g = pd.gluing(k);
            bool upward = (side == 0);

            const CollarStrand* st = nullptr;
            for (auto& s : strands[(size_t)k])
                if (upward ? s.botIdx == idx : s.topIdx == idx) { st = &s; break; }
            check(st != nullptr, "collar strand lookup failed");

            surface::Slot here = upward ? g.a : g.b;
            surface::Slot there = upward ? g.b : g.a;
            const CirclePt& herePt = pts[(size_t)here.pants][here.slot][(size_t)idx];
            int entryFace = upward ? st->firstFace : st->events.back().faceAbove;
            cycle.push_back(makeNode(herePt.edge, herePt.xi, entryFace, compIdx));
            if (upward) {
                for (const auto& ev : st->events)
                    cycle.push_back(makeNode(ev.edge, ev.xi, ev.faceAbove, compIdx));
            } else {
                for (auto it = st->events.rbegin(); it != st->events.rend(); ++it)
                    cycle.push_back(makeNode(it->edge, it->xi, it->faceBelow, compIdx));
            }
            Coord farIdx = upward ? st->topIdx : st->botIdx;
            seen[(size_t)pid(k, 1 - side, farIdx)] = 1;

            // pants arc from the far point to its partner
            int p = there.pants, s = there.slot;
            const auto& model = models[(size_t)p];
            const CirclePt& exitPt = pts[(size_t)p][s][(size_t)farIdx];
            bool frontArc = (exitPt.edge == cx_->arcEdge(p, s, 0));
            cycle.push_back(makeNode(exitPt.edge, exitPt.xi, hexOfArc(p, s, frontArc), compIdx));

            auto [slot2, idx2] = model.partner(s, farIdx);
            const curves::CirclePoint& cp = model.circle[s][(size_t)farIdx];
            if (cp.family >= 3) {
                int wside = cp.family - 3;
                check(slot2 == s, "wave partner on a different slot");
                // traversing a wave from its upper-hexagon end crosses the
                // seam into the lower hexagon, and vice versa
                int entered = cx_->hexFace(p, cp.end == 0 ? 1 : 0);
                cycle.push_back(makeNode(seamEdgeOf[(size_t)p][wside],
                                         seamXi[(size_t)p][wside].at((size_t)cp.copy),
                                         entered, compIdx));
            }
            int k2 = pd.curveAt(p, slot2);
            const auto& g2 = pd.gluing(k2);
            int side2 = (g2.a.pants == p && g2.a.slot == slot2) ? 0 : 1;
            cur = pid(k2, side2, idx2);
        } while (cur != start);

        int n = (int)cycle.size();
        for (int i = 0; i < n; ++i) {
            nodes_[(size_t)cycle[(size_t)i]].next = cycle[(size_t)(i + 1) % n];
            nodes_[(size_t)cycle[(size_t)i]].prev = cycle[(size_t)(i + n - 1) % n];
        }
        reps.push_back(cycle[0]);
        ++compIdx;
    }

    // ---- register nodes in the order lists ------------------------------
    std::set<int> touched;
    for (auto& [id, xi] : placed) touched.insert(nodes_[(size_t)id].edge);
    for (int e : touched) {
        auto& lst = order_[(size_t)e];
        std::map<int, Rat> xiOf;
        for (int id : lst) xiOf[id] = {pos_[(size_t)id][0], pos_[(size_t)id][1]};
        for (auto& [id, xi] : placed)
            if (nodes_[(size_t)id].edge == e) {
                lst.push_back(id);
                xiOf[id] = xi;
            }
        std::stable_sort(lst.begin(), lst.end(), [&](int a, int b) {
            int cmp = ratCmp(xiOf.at(a), xiOf.at(b));
            if (cmp != 0) return cmp < 0;
            if (nodes_[(size_t)a].curve != nodes_[(size_t)b].curve)
                return nodes_[(size_t)a].curve < nodes_[(size_t)b].curve;
            return a < b;
        });
        for (int i = 0; i < (int)lst.size(); ++i)
            pos_[(size_t)lst[(size_t)i]] = {i + 1, (long long)lst.size() + 1};
    }

    // parallel components: loops just below the core
    for (int k = 0; k < nC; ++k)
        for (Coord l = 0; l < dt.parallel.at((size_t)k); ++l) {
            int v1a = cx_->verticalEdge(k, 0), v2a = cx_->verticalEdge(k, 2);
            int a = newNode(v1a, curveId, compIdx, false);
            int b = newNode(v2a, curveId, compIdx, false);
            nodes_[(size_t)a].toLeft = (cx_->faceLeftOf(v1a, true) == cx_->squareFace(k, 2));
            nodes_[(size_t)b].toLeft = (cx_->faceLeftOf(v2a, true) == cx_->squareFace(k, 0));
            nodes_[(size_t)a].next = nodes_[(size_t)a].prev = b;
            nodes_[(size_t)b].next = nodes_[(size_t)b].prev = a;
            for (int id : {a, b}) {
                int e = nodes_[(size_t)id].edge;
                Rat below = order_[(size_t)e].empty()
                                ? Rat{0, 1}
                                : Rat{pos_[(size_t)order_[(size_t)e].back()][0],
                                      pos_[(size_t)order_[(size_t)e].back()][1]};
                Rat ppos = ratMediant(below, {1, 1});
                pos_[(size_t)id] = {ppos.n, ppos.d};
                insertInOrder(e, id, (int)order_[(size_t)e].size());
            }
            reps.push_back(a);
            ++compIdx;
        }

    curveComps_.push_back(std::move(reps));
    validate();
    return curveId;
}

int Arrangement::addRaw(const std::vector<std::vector<RawVisit>>& components) {
    int curveId = (int)curveComps_.size();
    std::vector<int> reps;
    std::vector<std::pair<int, Rat>> placed;
    int compIdx = 0;
    for (const auto& comp : components) {
        require(!comp.empty(), "raw component with no crossings");
        std::vector<int> cycle;
        for (const auto& v : comp) {
            require(v.edge >= 0 && v.edge < (int)order_.size(), "raw visit names unknown edge");
            require(v.den > 0 && v.num > 0 && v.num < v.den,
                    "raw visit position must be strictly inside the edge");
            int id = newNode(v.edge, curveId, compIdx, v.toLeft);
            placed.push_back({id, ratMake(v.num, v.den)});
            cycle.push_back(id);
        }
        int n = (int)cycle.size();
        for (int i = 0; i < n; ++i) {
            nodes_[(size_t)cycle[(size_t)i]].next = cycle[(size_t)(i + 1) % n];
            nodes_[(size_t)cycle[(size_t)i]].prev = cycle[(size_t)(i + n - 1) % n];
        }
        reps.push_back(cycle[0]);
        ++compIdx;
    }
    std::set<int> touched;
    for (auto& [id, xi] : placed) touched.insert(nodes_[(size_t)id].edge);
    for (int e : touched) {
        auto& lst = order_[(size_t)e];
        std::map<int, Rat> xiOf;
        for (int id : lst) xiOf[id] = {pos_[(size_t)id][0], pos_[(size_t)id][1]};
        for (auto& [id, xi] : placed)
            if (nodes_[(size_t)id].edge == e) {
                lst.push_back(id);
                xiOf[id] = xi;
            }
        std::stable_sort(lst.begin(), lst.end(), [&](int a, int b) {
            int cmp = ratCmp(xiOf.at(a), xiOf.at(b));
            return cmp != 0 ? cmp < 0 : a < b;
        });
        for (int i = 0; i < (int)lst.size(); ++i)
            pos_[(size_t)lst[(size_t)i]] = {i + 1, (long long)lst.size() + 1};
    }
    curveComps_.push_back(std::move(reps));
    validate();
    return curveId;
}

// ---------------------------------------------------------------------------
// Crossing counts.  Inside a face every strand segment is a chord of the
// boundary polygon; two chords with four distinct endpoints cross exactly
// when their endpoints interleave around the boundary.

namespace {

void faceRanks(const CellComplex& cx, const std::vector<std::vector<int>>& order, int f,
               std::map<int, int>& rank) {
    int r = 0;
    const auto& face = cx.faces()[(size_t)f];
    for (size_t i = 0; i < face.edges.size(); ++i) {
        ++r;  // polygon corner
        const auto& lst = order[(size_t)face.edges[i]];
        if (face.forward[i])
            for (int id : lst) rank[id] = r++;
        else
            for (auto it = lst.rbegin(); it != lst.rend(); ++it) rank[*it] = r++;
    }
}

}  // namespace

long long Arrangement::crossings(int a, int b) const {
    require(a != b, "use selfCrossings for a curve against itself");
    long long total = 0;
    for (int f = 0; f < (int)cx_->faces().size(); ++f) {
        std::map<int, int> rank;
        faceRanks(*cx_, order_, f, rank);
        auto chordsOf = [&](int curve, std::vector<std::pair<int, int>>& out) {
            for (int rep : curveComps_.at((size_t)curve))
                for (int id : componentNodes(rep)) {
                    if (faceEntered(id) != f) continue;
                    int nx = nodes_[(size_t)id].next;
                    auto i1 = rank.find(id), i2 = rank.find(nx);
                    check(i1 != rank.end() && i2 != rank.end(),
                          "chord endpoint missing from face boundary");
                    out.push_back({i1->second, i2->second});
                }
        };
        std::vector<std::pair<int, int>> ca, cb;
        chordsOf(a, ca);
        chordsOf(b, cb);
        for (auto& p : ca)
            for (auto& q : cb) {
                int lo = std::min(p.first, p.second), hi = std::max(p.first, p.second);
                if ((q.first > lo && q.first < hi) != (q.second > lo && q.second < hi))
                    ++total;
            }
    }
    return total;
}

long long Arrangement::selfCrossings(int a) const {
    long long total = 0;
    for (int f = 0; f < (int)cx_->faces().size(); ++f) {
        std::map<int, int> rank;
        faceRanks(*cx_, order_, f, rank);
        std::vector<std::pair<int, int>> ch;
        for (int rep : curveComps_.at((size_t)a))
            for (int id : componentNodes(rep)) {
                if (faceEntered(id) != f) continue;
                ch.push_back({rank.at(id), rank.at(nodes_[(size_t)id].next)});
            }
        for (size_t i = 0; i < ch.size(); ++i)
            for (size_t j = i + 1; j < ch.size(); ++j) {
                if (ch[j].first == ch[i].first || ch[j].first == ch[i].second ||
                    ch[j].second == ch[i].first || ch[j].second == ch[i].second)
                    continue;
                int lo = std::min(ch[i].first, ch[i].second),
                    hi = std::max(ch[i].first, ch[i].second);
                if ((ch[j].first > lo && ch[j].first < hi) !=
                    (ch[j].second > lo && ch[j].second < hi))
                    ++total;
            }
    }
    return total;
}

}  // namespace cf::arr
