#include "curveforge/twist.hpp"

#include <algorithm>
#include <map>

#include "curveforge/errors.hpp"

namespace cf::twist {

using arr::Arrangement;
using curves::Coord;
using curves::DT;
using surface::CellComplex;
using surface::EdgeKind;

namespace {

// ---------------------------------------------------------------------------
// Face-boundary combinatorics.  Inside a face every strand segment is a chord
// of the boundary polygon; crossings and their order along a chord are read
// off the cyclic boundary ranks of the chord endpoints.

std::map<int, int> boundaryRanks(const CellComplex& cx, const Arrangement& A, int f,
                                 int* modulus) {
    std::map<int, int> rank;
    int r = 0;
    const auto& face = cx.faces()[(size_t)f];
    for (size_t i = 0; i < face.edges.size(); ++i) {
        ++r;  // polygon corner
        const auto& lst = A.order()[(size_t)face.edges[i]];
        if (face.forward[i])
            for (int id : lst) rank[id] = r++;
        else
            for (auto it = lst.rbegin(); it != lst.rend(); ++it) rank[*it] = r++;
    }
    *modulus = r;
    return rank;
}

bool cyclicBetween(int s, int x, int t, int M) {
    int dx = ((x - s) % M + M) % M;
    int dt = ((t - s) % M + M) % M;
    return dx > 0 && dx < dt;
}

int faceEnteredOf(const CellComplex& cx, const Arrangement::Node& n) {
    return cx.faceLeftOf(n.edge, n.toLeft);
}

// One transverse crossing of a d-chord with a c-chord.
struct Crossing {
    int dNode = -1;        // d-chord (dNode, next)
    int cAngle = -1;       // index of the c-chord's first node along the c cycle
    long long rOnC = 0;    // rank of this crossing along the c-chord
    long long nOnC = 0;    // total crossings on that c-chord
    bool enteredLeft = false;  // d approaches from the left of the oriented c-chord
    long long keyOnD = 0, keyOnC = 0;
};

// All crossings of curve d with curve c, with their chord-order data filled
// in.  c must be a single closed strand; angleOf maps its node ids to cyclic
// positions.
std::vector<Crossing> enumerateCrossings(const CellComplex& cx, const Arrangement& A,
                                         int dId, int cId,
                                         const std::map<int, int>& angleOf) {
    std::vector<Crossing> out;
    const auto& nodes = A.nodes();
    for (int f = 0; f < (int)cx.faces().size(); ++f) {
        int M = 0;
        std::map<int, int> rank = boundaryRanks(cx, A, f, &M);
        struct Chord {
            int node, r0, r1;
        };
        std::vector<Chord> dc, cc;
        auto collect = [&](int curve, std::vector<Chord>& into) {
            for (int rep : A.components(curve))
                for (int id : A.componentNodes(rep)) {
                    if (faceEnteredOf(cx, nodes[(size_t)id]) != f) continue;
                    into.push_back({id, rank.at(id), rank.at(nodes[(size_t)id].next)});
                }
        };
        collect(dId, dc);
        collect(cId, cc);
        for (const Chord& d : dc)
            for (const Chord& c : cc) {
                bool aIn = cyclicBetween(d.r0, c.r0, d.r1, M);
                bool bIn = cyclicBetween(d.r0, c.r1, d.r1, M);
                if (aIn == bIn) continue;
                Crossing x;
                x.dNode = d.node;
                x.cAngle = angleOf.at(c.node);
                x.enteredLeft = cyclicBetween(c.r1, d.r0, c.r0, M);
                x.keyOnD = ((long long)((aIn ? c.r0 : c.r1) - d.r0) % M + M) % M;
                bool uIn = cyclicBetween(c.r0, d.r0, c.r1, M);
                x.keyOnC = ((long long)((uIn ? d.r0 : d.r1) - c.r0) % M + M) % M;
                out.push_back(x);
            }
    }
    // Ranks along each c-chord.
    std::map<int, std::vector<int>> byC;
    for (int i = 0; i < (int)out.size(); ++i) byC[out[(size_t)i].cAngle].push_back(i);
    for (auto& [angle, idxs] : byC) {
        std::sort(idxs.begin(), idxs.end(),
                  [&](int a, int b) { return out[(size_t)a].keyOnC < out[(size_t)b].keyOnC; });
        for (int r = 0; r < (int)idxs.size(); ++r) {
            out[(size_t)idxs[(size_t)r]].rOnC = r;
            out[(size_t)idxs[(size_t)r]].nOnC = (long long)idxs.size();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Minimal mutual position with the moving curve's crossings of the fixed one
// worked out, plus the fixed curve's cyclic strand.

struct Joint {
    overlay::Mutual M;
    std::vector<int> cycle;       // node ids of c in cyclic order
    std::map<int, int> angleOf;   // node id -> index in cycle
    std::vector<Crossing> cross;  // crossings of the moving curve with c
    std::map<int, std::vector<int>> byDChord;  // dNode -> crossing indices, in chord order

    Joint(const surface::PantsDecomposition& pd, const NormalCurve& moving,
          const NormalCurve& c, bool needConnected)
        : M(pd, moving, c) {
        const auto& A = M.arrangement();
        const auto& reps = A.components(M.b());
        if (needConnected)
            require((int)reps.size() == 1, "the twisting curve must be connected");
        // For arc tracing the "cycle" may be a concatenation over components;
        // the spiral construction requires a genuine single cycle.
        cycle.clear();
        for (int rep : reps)
            for (int id : A.componentNodes(rep)) cycle.push_back(id);
        for (int i = 0; i < (int)cycle.size(); ++i) angleOf[cycle[(size_t)i]] = i;
        cross = enumerateCrossings(M.cx(), A, M.a(), M.b(), angleOf);
        for (int i = 0; i < (int)cross.size(); ++i)
            byDChord[cross[(size_t)i].dNode].push_back(i);
        for (auto& [n, idxs] : byDChord)
            std::sort(idxs.begin(), idxs.end(), [&](int a, int b) {
                return cross[(size_t)a].keyOnD < cross[(size_t)b].keyOnD;
            });
    }
};

// ---------------------------------------------------------------------------
// Intersection-arc tracing.  Walk outward from a crossing along both strands,
// comparing the sequences of decomposing-system crossings; the matched length
// is the arc length at that crossing.

struct CoreToken {
    int curve = -1;
    bool up = false;
    bool operator==(const CoreToken&) const = default;
};

struct StreamIter {
    const CellComplex* cx;
    const Arrangement* A;
    int cur;
    bool fwd;            // traversal direction relative to the strand
    long long left;      // node budget
    // Advance to the next system crossing; false when the budget runs out.
    bool next(CoreToken* tok) {
        const auto& nodes = A->nodes();
        while (left-- > 0) {
            const auto& n = nodes[(size_t)cur];
            cur = fwd ? n.next : n.prev;
            const auto& e = cx->edges()[(size_t)n.edge];
            if (e.kind != EdgeKind::Core) continue;
            tok->curve = e.curve;
            int entered = cx->faceLeftOf(n.edge, fwd ? n.toLeft : !n.toLeft);
            tok->up = entered == cx->squareFace(e.curve, 1) ||
                      entered == cx->squareFace(e.curve, 3);
            return true;
        }
        return false;
    }
};

long long matched(StreamIter a, StreamIter b) {
    long long n = 0;
    CoreToken ta, tb;
    while (a.next(&ta) && b.next(&tb) && ta == tb) ++n;
    return n;
}

std::vector<IntersectionArc> arcsOf(const Joint& J) {
    const auto& A = J.M.arrangement();
    const auto& cx = J.M.cx();
    const auto& nodes = A.nodes();
    long long kNodes = A.size(J.M.a()), cNodes = A.size(J.M.b());
    std::vector<IntersectionArc> out;
    // Crossings in order along the moving curve.
    for (int rep : A.components(J.M.a()))
        for (int u : A.componentNodes(rep)) {
            auto it = J.byDChord.find(u);
            if (it == J.byDChord.end()) continue;
            for (int ci : it->second) {
                const Crossing& X = J.cross[(size_t)ci];
                int a = J.cycle[(size_t)X.cAngle];
                int b = nodes[(size_t)a].next;
                int v = nodes[(size_t)u].next;
                auto kF = StreamIter{&cx, &A, v, true, kNodes};
                auto kB = StreamIter{&cx, &A, u, false, kNodes};
                long long cap = 2 * (kNodes + cNodes);
                auto cF = StreamIter{&cx, &A, b, true, cap};
                auto cB = StreamIter{&cx, &A, a, false, cap};
                // The parallel pairing can run along c in either direction.
                long long fPlus = matched(kF, cF), bPlus = matched(kB, cB);
                long long fMinus = matched(kF, cB), bMinus = matched(kB, cF);
                IntersectionArc arc;
                arc.point = (int)out.size();
                if (fPlus + bPlus >= fMinus + bMinus) {
                    arc.forward = fPlus;
                    arc.backward = bPlus;
                } else {
                    arc.forward = fMinus;
                    arc.backward = bMinus;
                }
                arc.length = arc.forward + arc.backward;
                arc.wave = arc.length == 0;
                out.push_back(arc);
            }
        }
    check((long long)out.size() == A.crossings(J.M.a(), J.M.b()),
          "crossing enumeration disagrees with the chord census");
    return out;
}

}  // namespace

std::vector<IntersectionArc> intersectionArcs(const surface::PantsDecomposition& pd,
                                              const NormalCurve& k, const NormalCurve& c) {
    Joint J(pd, k, c, /*needConnected=*/false);
    return arcsOf(J);
}

ArcSize classifyArc(long long arcLen, const NormalCurve& c) {
    require(arcLen >= 0, "arc length must be nonnegative");
    long long cl = c.eLength();
    require(cl > 0, "small/large classification needs a curve crossing the system");
    int g = c.genus();
    return arcLen * (12 * g - 11) < 3 * cl ? ArcSize::Small : ArcSize::Large;
}

// ---------------------------------------------------------------------------
// The twist itself.  Around the connected curve c take a thin annulus; in the
// flat chart the angle runs over one cyclic position per strand crossing of c
// and the radial coordinate x over [0,1], left to right of c.  At a crossing
// at angle theta the inserted spiral is the straight line y = theta + m*L*x.
// Those lines are parallel for all crossings, hence disjoint, which is what
// makes the construction embedded by design.  Each time a spiral passes the
// angle of a c-node it crosses the same cell edge, offset from c's crossing
// point toward the side given by its current radial position.

NormalCurve dehnTwist(const surface::PantsDecomposition& pd, const NormalCurve& d,
                      const NormalCurve& c, long long m, TwistRecord* rec) {
    require(d.pd() == pd && c.pd() == pd, "curves live on a different surface");
    require(!c.isEmpty(), "cannot twist along a null-homotopic curve");
    if (rec) *rec = TwistRecord{};
    if (rec) {
        rec->exponent = m;
        rec->cLength = c.eLength();
    }
    if (m == 0 || d.isEmpty()) return d;

    Joint J(pd, d, c, /*needConnected=*/true);
    const Arrangement& A = J.M.arrangement();
    const CellComplex& cx = J.M.cx();
    const auto& nodes = A.nodes();
    long long L = (long long)J.cycle.size();
    long long S = m * L;

    if (rec) {
        rec->crossings = A.crossings(J.M.a(), J.M.b());
        rec->eta = (m < 0 ? -m : m) * rec->cLength;
        for (const auto& arc : arcsOf(J))
            rec->points.push_back({arc.length, arc.forward, arc.backward, arc.forward,
                                   arc.backward});
    }
    if (J.cross.empty()) return d;  // disjoint from c: the twist acts trivially

    // Index of every node on its edge, and the occupancy of each edge.
    std::vector<long long> idxOn(nodes.size(), -1);
    for (const auto& lst : A.order())
        for (int i = 0; i < (int)lst.size(); ++i) idxOn[(size_t)lst[(size_t)i]] = i;

    std::vector<std::vector<Arrangement::RawVisit>> comps;
    for (int rep : A.components(J.M.a())) {
        std::vector<Arrangement::RawVisit> vis;
        for (int u : A.componentNodes(rep)) {
            const auto& nu = nodes[(size_t)u];
            long long ne = (long long)A.order()[(size_t)nu.edge].size();
            vis.push_back({nu.edge, idxOn[(size_t)u] + 1, ne + 1, nu.toLeft});
            auto it = J.byDChord.find(u);
            if (it == J.byDChord.end()) continue;
            for (int ci : it->second) {
                const Crossing& X = J.cross[(size_t)ci];
                long long D = X.nOnC + 1;
                long long tN = (long long)X.cAngle * D + X.rOnC + 1;  // theta = tN/D
                bool ascending = (m > 0) == X.enteredLeft;
                long long lo = m > 0 ? X.cAngle + 1 : X.cAngle + S + 1;
                long long hi = m > 0 ? X.cAngle + S : X.cAngle;
                long long a = ascending ? lo : hi, stop = ascending ? hi : lo;
                long long step = ascending ? 1 : -1;
                for (;; a += step) {
                    int cn = J.cycle[(size_t)(((a % L) + L) % L)];
                    const auto& ncn = nodes[(size_t)cn];
                    long long nce = (long long)A.order()[(size_t)ncn.edge].size();
                    long long xn = a * D - tN, xd = S * D;
                    if (xd < 0) { xn = -xn; xd = -xd; }
                    check(xn > 0 && xn < xd, "spiral event out of its radial range");
                    long long sigma = ncn.toLeft ? 1 : -1;
                    long long num = (idxOn[(size_t)cn] + 1) * 2 * xd + sigma * (2 * xn - xd);
                    long long den = (nce + 1) * 2 * xd;
                    check(den > 0 && den < (1ll << 61) && num > 0 && num < den,
                          "spiral position overflow");
                    vis.push_back({ncn.edge, num, den,
                                   ascending ? ncn.toLeft : !ncn.toLeft});
                    if (a == stop) break;
                }
            }
        }
        comps.push_back(std::move(vis));
    }

    Arrangement B(cx);
    int rid = B.addRaw(comps);
    check(B.selfCrossings(rid) == 0, "twisted curve is not embedded");
    long long moves = 0;
    for (int round = 0;; ++round) {
        check(round < 256, "twisted curve did not tighten");
        int dropped = 0;
        long long s = B.tighten(rid, &dropped);
        check(dropped == 0, "twist dropped an essential component");
        moves += s;
        if (s == 0) break;
    }
    if (rec) rec->tightenMoves = moves;
    DT out = B.extract(rid);
    return NormalCurve(pd, std::move(out));
}

// ---------------------------------------------------------------------------

DichotomyReport twistDichotomyCheck(const surface::PantsDecomposition& pd,
                                    const NormalCurve& d, const NormalCurve& c,
                                    long long m) {
    require(m != 0, "the twist exponent must be nonzero");
    DichotomyReport rep;
    rep.cLength = c.eLength();
    require(rep.cLength > 0, "the dichotomy needs a twisting curve crossing the system");
    auto arcs = intersectionArcs(pd, d, c);
    rep.hypothesisHolds = true;
    for (const auto& a : arcs) {
        rep.maxP = std::max(rep.maxP, a.length);
        if (classifyArc(a.length, c) == ArcSize::Large) rep.hypothesisHolds = false;
    }
    if (!rep.hypothesisHolds) return rep;

    NormalCurve dd = dehnTwist(pd, d, c, m);
    auto sArcs = intersectionArcs(pd, dd, c);
    long long absM = m < 0 ? -m : m;
    rep.allLarge = true;
    rep.boundHolds = true;
    for (const auto& a : sArcs) {
        DichotomyPoint p;
        p.s = a.length;
        p.bound = absM * rep.cLength - rep.maxP;
        p.margin = p.s - p.bound;
        p.large = classifyArc(p.s, c) == ArcSize::Large;
        rep.allLarge = rep.allLarge && p.large;
        rep.boundHolds = rep.boundHolds && p.margin >= 0;
        rep.points.push_back(p);
    }
    rep.checked = true;
    return rep;
}

bool MinimumTable::strictMinimumAtZero() const {
    long long zero = counts.at((size_t)range);
    for (int i = 0; i < (int)counts.size(); ++i)
        if (i != range && counts[(size_t)i] <= zero) return false;
    return true;
}

MinimumTable twistMinimumTable(const surface::PantsDecomposition& pd, const NormalCurve& d,
                               const NormalCurve& c, int range) {
    require(range >= 1, "the exponent range must be positive");
    MinimumTable tab;
    tab.range = range;
    tab.hypothesisHolds = true;
    if (c.eLength() > 0)
        for (const auto& a : intersectionArcs(pd, d, c))
            if (classifyArc(a.length, c) == ArcSize::Large) tab.hypothesisHolds = false;
    for (long long m = -range; m <= range; ++m)
        tab.counts.push_back(dehnTwist(pd, d, c, m).eLength());
    return tab;
}

}  // namespace cf::twist
