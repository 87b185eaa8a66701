// Region census and isotopy moves for strand arrangements.
//
// Inside every face the boundary items (polygon corners and edge crossings)
// are placed on the convex parabola point (X, X^2) with exact integer X, so
// chords between boundary items cross exactly when their endpoints
// interleave, crossing points order exactly along each chord, and the induced
// planar subdivision is computed with integer predicates only.  Gluing the
// sub-faces across edge intervals yields the complementary regions of the
// arrangement; disks with two corners are the bigons that the isotopy moves
// remove.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "curveforge/arrangement.hpp"
#include "curveforge/errors.hpp"

namespace cf::arr {

using curves::Coord;
using surface::CellComplex;

namespace {

// ---------------------------------------------------------------------------
// Per-face exact geometry and global cell structure

struct GeoSide {
    bool gap = false;
    int edge = -1, q = -1;   // gap: interval index along the edge (0..n)
    int node = -1;           // chord piece: from-node of the chord
    bool dirAlong = false;   // side direction equals strand direction
    // pivot at the end of this side, in walk order:
    int pivotKind = -1;      // 0 = strand node, 1 = crossing, 2 = polygon corner
    int pivotNode = -1;      // kind 0: node id;  kind 2: complex vertex id
    int pivotA = -1, pivotB = -1;  // kind 1: from-nodes of the crossing chords
};

struct Geometry {
    std::vector<std::vector<GeoSide>> cells;
    std::vector<int> cellFace;
    // gapAt[edge][q][d]: (cell, side index); d = 0 for the face traversing
    // the edge forward, 1 backward.
    std::vector<std::vector<std::array<std::pair<int, int>, 2>>> gapAt;
};

struct V2 {
    long long x = 0, y = 0;
};

__int128 cross(const V2& a, const V2& b) {
    return (__int128)a.x * b.y - (__int128)a.y * b.x;
}

int halfplane(const V2& v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; }

bool angleLess(const V2& a, const V2& b) {
    int ha = halfplane(a), hb = halfplane(b);
    if (ha != hb) return ha < hb;
    __int128 c = cross(a, b);
    check(c != 0, "coincident directions in angular sort");
    return c > 0;
}

long long jitter(long long b, int salt) {
    unsigned long long h = (unsigned long long)b * 0x9e3779b97f4a7c15ull + (unsigned)salt * 0xbf58476d1ce4e5b9ull;
    h ^= h >> 31;
    return (long long)(h % 7);
}

struct FaceBuilder {
    const Arrangement& A;
    const CellComplex& cx;
    int f;
    int salt;

    std::vector<long long> X;               // item -> abscissa
    std::vector<int> itemKind;              // 0 = node, 1 = polygon corner
    std::vector<int> itemRef;               // node id / vertex id
    std::map<int, int> itemOf;              // node id -> item
    std::vector<std::array<int, 2>> gapMeta;  // per item b: (edge, q) of gap b..b+1

    struct Chord {
        int fromNode, b0, b1;
        std::vector<int> xings;  // crossing ids in order along the chord
    };
    std::vector<Chord> chords;
    struct Xing {
        int c1, c2;  // chord indices
    };
    std::vector<Xing> xings;

    FaceBuilder(const Arrangement& a, int face, int salt_)
        : A(a), cx(a.cx()), f(face), salt(salt_) {}

    V2 ptOf(int item) const { return {X[(size_t)item], X[(size_t)item] * X[(size_t)item]}; }

    void buildBoundary() {
        const auto& face = cx.faces()[(size_t)f];
        for (size_t i = 0; i < face.edges.size(); ++i) {
            int e = face.edges[i];
            bool fwd = face.forward[i];
            const auto& eref = cx.edges()[(size_t)e];
            int corner = fwd ? eref.v0 : eref.v1;
            itemKind.push_back(1);
            itemRef.push_back(corner);
            const auto& lst = A.order()[(size_t)e];
            int n = (int)lst.size();
            // gap after the corner item
            gapMeta.push_back({e, fwd ? 0 : n});
            for (int j = 0; j < n; ++j) {
                int id = fwd ? lst[(size_t)j] : lst[(size_t)(n - 1 - j)];
                itemOf[id] = (int)itemKind.size();
                itemKind.push_back(0);
                itemRef.push_back(id);
                gapMeta.push_back({e, fwd ? j + 1 : n - 1 - j});
            }
        }
        int B = (int)itemKind.size();
        check(B <= 4000, "face boundary too large for exact coordinates");
        X.resize((size_t)B);
        for (int b = 0; b < B; ++b) X[(size_t)b] = 8 * b + jitter(b, salt);
    }

    void buildChords() {
        const auto& nodes = A.nodes();
        for (auto& [id, b0] : itemOf) {
            // the chord from node id exists in this face iff the strand
            // enters this face after crossing
            int entered = cx.faceLeftOf(nodes[(size_t)id].edge, nodes[(size_t)id].toLeft);
            if (entered != f) continue;
            int nx = nodes[(size_t)id].next;
            auto it = itemOf.find(nx);
            check(it != itemOf.end(), "chord endpoint missing from face boundary");
            chords.push_back({id, b0, it->second, {}});
        }
        // crossings: strict interleaving of endpoints
        int C = (int)chords.size();
        std::vector<std::vector<std::pair<int, int>>> perChord((size_t)C);
        for (int i = 0; i < C; ++i)
            for (int j = i + 1; j < C; ++j) {
                const Chord &a = chords[(size_t)i], &b = chords[(size_t)j];
                if (a.b0 == b.b0 || a.b0 == b.b1 || a.b1 == b.b0 || a.b1 == b.b1) continue;
                int lo = std::min(a.b0, a.b1), hi = std::max(a.b0, a.b1);
                bool in1 = b.b0 > lo && b.b0 < hi, in2 = b.b1 > lo && b.b1 < hi;
                if (in1 == in2) continue;
                int xid = (int)xings.size();
                xings.push_back({i, j});
                perChord[(size_t)i].push_back({j, xid});
                perChord[(size_t)j].push_back({i, xid});
            }
        // order crossings along each chord by the exact parameter
        for (int i = 0; i < C; ++i) {
            auto& lst = perChord[(size_t)i];
            V2 P0 = ptOf(chords[(size_t)i].b0), P1 = ptOf(chords[(size_t)i].b1);
            V2 dP{P1.x - P0.x, P1.y - P0.y};
            // t(other) = cross(dQ, Q0-P0) / cross(dQ, dP), denominator > 0 after sign fix
            auto param = [&](int j) -> std::pair<__int128, __int128> {
                V2 Q0 = ptOf(chords[(size_t)j].b0), Q1 = ptOf(chords[(size_t)j].b1);
                V2 dQ{Q1.x - Q0.x, Q1.y - Q0.y};
                V2 rel{Q0.x - P0.x, Q0.y - P0.y};
                __int128 num = cross(dQ, rel), den = cross(dQ, dP);
                check(den != 0, "parallel crossing chords");
                if (den < 0) { num = -num; den = -den; }
                return {num, den};
            };
            std::sort(lst.begin(), lst.end(), [&](const auto& a, const auto& b) {
                auto [na, da] = param(a.first);
                auto [nb, db] = param(b.first);
                check(!(na == nb && da == db) || a.first == b.first,
                      "degenerate crossing parameters");
                // compare na/da < nb/db exactly (values bounded well below 2^63)
                long long nA = (long long)na, dA = (long long)da;
                long long nB = (long long)nb, dB = (long long)db;
                __int128 l = (__int128)nA * dB, r = (__int128)nB * dA;
                check(l != r, "tied crossing parameters");
                return l < r;
            });
            for (auto& [j, xid] : lst) chords[(size_t)i].xings.push_back(xid);
        }
    }

    // planar map: vertices = items + crossings; emits cells into geo
    void emitCells(Geometry& geo) {
        int B = (int)itemKind.size();
        int NX = (int)xings.size();
        int NV = B + NX;

        struct Seg {
            int u, v;       // vertices
            bool gap;       // boundary gap?
            int gapItem;    // item b for gap b..b+1
            int chord;      // chord index
        };
        std::vector<Seg> segs;
        for (int b = 0; b < B; ++b) segs.push_back({b, (b + 1) % B, true, b, -1});
        for (int ci = 0; ci < (int)chords.size(); ++ci) {
            const Chord& ch = chords[(size_t)ci];
            int prev = ch.b0;
            for (int xid : ch.xings) {
                segs.push_back({prev, B + xid, false, -1, ci});
                prev = B + xid;
            }
            segs.push_back({prev, ch.b1, false, -1, ci});
        }

        // direction vector of the halfedge (s, fromU?)
        auto dirVec = [&](const Seg& s, bool fromU) -> V2 {
            V2 d;
            if (s.gap) {
                V2 a = ptOf(s.u), b = ptOf(s.v);
                d = {b.x - a.x, b.y - a.y};
            } else {
                V2 a = ptOf(chords[(size_t)s.chord].b0), b = ptOf(chords[(size_t)s.chord].b1);
                d = {b.x - a.x, b.y - a.y};
                // segment u->v follows chord direction iff u comes earlier
                // along the chord; our construction always emits pieces in
                // chord direction, so u->v is the chord direction.
            }
            if (!fromU) d = {-d.x, -d.y};
            return d;
        };

        // outgoing halfedges per vertex, CCW-sorted
        std::vector<std::vector<std::pair<int, bool>>> out((size_t)NV);  // (seg, fromU)
        for (int si = 0; si < (int)segs.size(); ++si) {
            out[(size_t)segs[(size_t)si].u].push_back({si, true});
            out[(size_t)segs[(size_t)si].v].push_back({si, false});
        }
        // A chord piece joining two adjacent boundary items runs exactly on
        // top of the hull gap between them (slivers do this).  Treat chords
        // as bowed infinitesimally into the face interior, which lies left of
        // every forward gap halfedge: that resolves the direction tie.
        for (auto& lst : out)
            std::sort(lst.begin(), lst.end(), [&](const auto& a, const auto& b) {
                V2 da = dirVec(segs[(size_t)a.first], a.second);
                V2 db = dirVec(segs[(size_t)b.first], b.second);
                int ha = halfplane(da), hb = halfplane(db);
                if (ha != hb) return ha < hb;
                __int128 c = cross(da, db);
                if (c != 0) return c > 0;
                const Seg& sa = segs[(size_t)a.first];
                const Seg& sb = segs[(size_t)b.first];
                check(sa.gap != sb.gap, "coincident directions in angular sort");
                bool gapFromU = sa.gap ? a.second : b.second;
                return sa.gap ? gapFromU : !gapFromU;
            });

        // halfedge id: 2*seg + (fromU ? 0 : 1); next = CW-neighbour of the
        // reverse at the head vertex (faces on the left)
        auto headOf = [&](int h) {
            const Seg& s = segs[(size_t)(h / 2)];
            return (h % 2 == 0) ? s.v : s.u;
        };
        std::vector<int> nextHE(2 * segs.size(), -1);
        for (int v = 0; v < NV; ++v) {
            const auto& lst = out[(size_t)v];
            int n = (int)lst.size();
            for (int i = 0; i < n; ++i) {
                // incoming halfedge whose reverse is lst[i]
                int hrev = 2 * lst[(size_t)i].first + (lst[(size_t)i].second ? 0 : 1);
                int hin = hrev ^ 1;
                int hnext = 2 * lst[(size_t)(i + n - 1) % n].first +
                            (lst[(size_t)(i + n - 1) % n].second ? 0 : 1);
                nextHE[(size_t)hin] = hnext;
            }
        }

        // orbits
        std::vector<int> orbitOf(2 * segs.size(), -1);
        std::vector<std::vector<int>> orbits;
        for (int h = 0; h < (int)nextHE.size(); ++h) {
            if (orbitOf[(size_t)h] != -1) continue;
            int id = (int)orbits.size();
            orbits.push_back({});
            int cur = h;
            do {
                orbitOf[(size_t)cur] = id;
                orbits[(size_t)id].push_back(cur);
                cur = nextHE[(size_t)cur];
                check(cur >= 0, "broken halfedge orbit");
            } while (cur != h);
        }
        // outer orbit: contains the reversed hull halfedge of segment 0
        int outer = orbitOf[1];  // seg 0 is gap 0->1, halfedge 1 is 1->0

        for (int oi = 0; oi < (int)orbits.size(); ++oi) {
            if (oi == outer) continue;
            int cell = (int)geo.cells.size();
            geo.cells.push_back({});
            geo.cellFace.push_back(f);
            auto& walk = geo.cells.back();
            for (int h : orbits[(size_t)oi]) {
                const Seg& s = segs[(size_t)(h / 2)];
                bool fromU = (h % 2 == 0);
                GeoSide gs;
                if (s.gap) {
                    check(fromU, "interior cell traverses a hull edge backwards");
                    gs.gap = true;
                    gs.edge = gapMeta[(size_t)s.gapItem][0];
                    gs.q = gapMeta[(size_t)s.gapItem][1];
                    const auto& face = cx.faces()[(size_t)f];
                    bool fwd = false;
                    for (size_t i = 0; i < face.edges.size(); ++i)
                        if (face.edges[i] == gs.edge) fwd = face.forward[i];
                    geo.gapAt[(size_t)gs.edge][(size_t)gs.q][fwd ? 0 : 1] = {cell,
                                                                             (int)walk.size()};
                } else {
                    gs.gap = false;
                    gs.node = chords[(size_t)s.chord].fromNode;
                    gs.dirAlong = fromU;
                }
                int head = headOf(h);
                if (head >= B) {
                    gs.pivotKind = 1;
                    gs.pivotA = chords[(size_t)xings[(size_t)(head - B)].c1].fromNode;
                    gs.pivotB = chords[(size_t)xings[(size_t)(head - B)].c2].fromNode;
                } else if (itemKind[(size_t)head] == 0) {
                    gs.pivotKind = 0;
                    gs.pivotNode = itemRef[(size_t)head];
                } else {
                    gs.pivotKind = 2;
                    gs.pivotNode = itemRef[(size_t)head];
                }
                walk.push_back(gs);
            }
        }
    }
};

Geometry buildGeometry(const Arrangement& A) {
    const CellComplex& cx = A.cx();
    for (int salt = 0; salt < 8; ++salt) {
        try {
            Geometry geo;
            geo.gapAt.resize(cx.edges().size());
            for (int e = 0; e < (int)cx.edges().size(); ++e)
                geo.gapAt[(size_t)e].assign(A.order()[(size_t)e].size() + 1,
                                            {std::pair<int, int>{-1, -1},
                                             std::pair<int, int>{-1, -1}});
            for (int f = 0; f < (int)cx.faces().size(); ++f) {
                FaceBuilder fb(A, f, salt);
                fb.buildBoundary();
                fb.buildChords();
                fb.emitCells(geo);
            }
            // every gap must have both sides
            for (auto& perEdge : geo.gapAt)
                for (auto& g : perEdge)
                    check(g[0].first >= 0 && g[1].first >= 0, "unmatched gap side");
            return geo;
        } catch (const Alarm&) {
            if (salt == 7) throw;
        }
    }
    throw Alarm("face geometry degenerate under all salts");
}

// ---------------------------------------------------------------------------
// Census on top of a geometry, for a given wall set

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p((size_t)n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[(size_t)x] == x ? x : p[(size_t)x] = find(p[(size_t)x]); }
    void unite(int a, int b) { p[(size_t)find(a)] = find(b); }
};

struct Census {
    const Geometry* geo = nullptr;
    std::vector<char> isWall;
    std::vector<int> region;  // cell -> region
    int numRegions = 0;
    std::vector<Arrangement::RegionInfo> info;
    // per region: boundary circles as ordered lists of (cell, side index)
    std::vector<std::vector<std::vector<std::pair<int, int>>>> boundaries;

    bool glued(const GeoSide& s) const {
        return s.gap && !isWall[(size_t)s.edge];
    }
    std::pair<int, int> partner(int cell, int i) const {
        const GeoSide& s = (*geo).cells[(size_t)cell][(size_t)i];
        auto& g = (*geo).gapAt[(size_t)s.edge][(size_t)s.q];
        return g[0] == std::pair<int, int>{cell, i} ? g[1] : g[0];
    }
    std::pair<int, int> succ(int cell, int i) const {
        int n = (int)(*geo).cells[(size_t)cell].size();
        return {cell, (i + 1) % n};
    }
};

Census censusOf(const Arrangement& A, const Geometry& geo, const std::vector<char>& isWall) {
    Census c;
    c.geo = &geo;
    c.isWall = isWall;
    int nCells = (int)geo.cells.size();
    UF uf(nCells);
    long long gluedPairs = 0;
    for (int cell = 0; cell < nCells; ++cell)
        for (int i = 0; i < (int)geo.cells[(size_t)cell].size(); ++i) {
            const GeoSide& s = geo.cells[(size_t)cell][(size_t)i];
            if (!c.glued(s)) continue;
            auto [c2, i2] = c.partner(cell, i);
            if (std::pair<int, int>{cell, i} < std::pair<int, int>{c2, i2}) {
                uf.unite(cell, c2);
                ++gluedPairs;
            }
        }
    (void)gluedPairs;
    std::map<int, int> regId;
    c.region.assign((size_t)nCells, -1);
    for (int cell = 0; cell < nCells; ++cell) {
        int r = uf.find(cell);
        auto [it, fresh] = regId.try_emplace(r, (int)regId.size());
        c.region[(size_t)cell] = it->second;
    }
    c.numRegions = (int)regId.size();
    c.info.assign((size_t)c.numRegions, {});

    // cells / sides / glued counts per region
    std::vector<long long> sides((size_t)c.numRegions, 0), glue((size_t)c.numRegions, 0);
    for (int cell = 0; cell < nCells; ++cell) {
        int r = c.region[(size_t)cell];
        c.info[(size_t)r].cells += 1;
        for (int i = 0; i < (int)geo.cells[(size_t)cell].size(); ++i) {
            ++sides[(size_t)r];
            if (c.glued(geo.cells[(size_t)cell][(size_t)i])) ++glue[(size_t)r];
        }
    }

    // corner orbits for the Euler characteristic: corner (cell,i) lies
    // between side i and side i+1 of the cell walk
    std::vector<int> cornerBase((size_t)nCells + 1, 0);
    for (int cell = 0; cell < nCells; ++cell)
        cornerBase[(size_t)cell + 1] =
            cornerBase[(size_t)cell] + (int)geo.cells[(size_t)cell].size();
    UF cuf(cornerBase[(size_t)nCells]);
    auto cornerAfter = [&](int cell, int i) { return cornerBase[(size_t)cell] + i; };
    auto cornerBefore = [&](int cell, int i) {
        int n = (int)geo.cells[(size_t)cell].size();
        return cornerBase[(size_t)cell] + (i + n - 1) % n;
    };
    for (int cell = 0; cell < nCells; ++cell)
        for (int i = 0; i < (int)geo.cells[(size_t)cell].size(); ++i) {
            if (!c.glued(geo.cells[(size_t)cell][(size_t)i])) continue;
            auto [c2, i2] = c.partner(cell, i);
            cuf.unite(cornerAfter(cell, i), cornerBefore(c2, i2));
            cuf.unite(cornerBefore(cell, i), cornerAfter(c2, i2));
        }
    std::vector<std::set<int>> orbitReps((size_t)c.numRegions);
    for (int cell = 0; cell < nCells; ++cell)
        for (int i = 0; i < (int)geo.cells[(size_t)cell].size(); ++i)
            orbitReps[(size_t)c.region[(size_t)cell]].insert(cuf.find(cornerAfter(cell, i)));
    for (int r = 0; r < c.numRegions; ++r) {
        check(glue[(size_t)r] % 2 == 0, "odd glued side count in region");
        long long E = sides[(size_t)r] - glue[(size_t)r] / 2;
        long long V = (long long)orbitReps[(size_t)r].size();
        c.info[(size_t)r].chi = (int)(V - E + c.info[(size_t)r].cells);
        c.info[(size_t)r].disk = (c.info[(size_t)r].chi == 1);
    }

    // boundary circles: chain free sides, hopping over glued ones
    auto isCorner = [&](const GeoSide& s) {
        if (s.pivotKind == 1) return true;
        if (s.pivotKind == 0)
            return (bool)isWall[(size_t)A.nodes()[(size_t)s.pivotNode].edge];
        return false;
    };
    c.boundaries.assign((size_t)c.numRegions, {});
    std::set<std::pair<int, int>> visited;
    for (int cell = 0; cell < nCells; ++cell)
        for (int i = 0; i < (int)geo.cells[(size_t)cell].size(); ++i) {
            const GeoSide& s0 = geo.cells[(size_t)cell][(size_t)i];
            if (c.glued(s0) || visited.count({cell, i})) continue;
            int r = c.region[(size_t)cell];
            std::vector<std::pair<int, int>> circle;
            std::pair<int, int> cur{cell, i};
            do {
                visited.insert(cur);
                circle.push_back(cur);
                const GeoSide& s = geo.cells[(size_t)cur.first][(size_t)cur.second];
                if (isCorner(s)) c.info[(size_t)r].corners += 1;
                cur = c.succ(cur.first, cur.second);
                while (c.glued(geo.cells[(size_t)cur.first][(size_t)cur.second])) {
                    auto [pc, pi] = c.partner(cur.first, cur.second);
                    cur = c.succ(pc, pi);
                }
            } while (!visited.count(cur));
            c.boundaries[(size_t)r].push_back(std::move(circle));
        }
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mutation helpers (friend-privileged)

struct FaceGeometry {
    static void renormalize(Arrangement& A, int edge) {
        auto& lst = A.order_[(size_t)edge];
        for (int i = 0; i < (int)lst.size(); ++i)
            A.pos_[(size_t)lst[(size_t)i]] = {i + 1, (long long)lst.size() + 1};
    }

    static int indexOn(const Arrangement& A, int node) {
        const auto& lst = A.order_[(size_t)A.nodes_[(size_t)node].edge];
        auto it = std::find(lst.begin(), lst.end(), node);
        check(it != lst.end(), "node missing from its order list");
        return (int)(it - lst.begin());
    }

    // Drop a whole component (all nodes dead), removing its representative.
    static void dropComponent(Arrangement& A, int moving, int rep) {
        auto nodes = A.componentNodes(rep);
        for (int id : nodes) {
            A.eraseFromOrder(A.nodes_[(size_t)id].edge, id);
            A.nodes_[(size_t)id].alive = false;
        }
        auto& reps = A.curveComps_[(size_t)moving];
        auto it = std::find(reps.begin(), reps.end(), rep);
        check(it != reps.end(), "dropped component has no representative");
        reps.erase(it);
        A.validate();
    }
};

namespace {

// cyclic star around a complex vertex: edges[i], faces[i] with faces[i]
// between edges[i] and edges[i+1]
struct Star {
    std::vector<int> edges, faces;
};

Star vertexStar(const CellComplex& cx, int V) {
    // corner records (ea, eb, face) at V from every face walk
    std::vector<std::tuple<int, int, int>> corners;
    for (int f = 0; f < (int)cx.faces().size(); ++f) {
        const auto& face = cx.faces()[(size_t)f];
        int n = (int)face.edges.size();
        for (int i = 0; i < n; ++i) {
            int e = face.edges[(size_t)i];
            bool fwd = face.forward[(size_t)i];
            int head = fwd ? cx.edges()[(size_t)e].v1 : cx.edges()[(size_t)e].v0;
            if (head != V) continue;
            int e2 = face.edges[(size_t)((i + 1) % n)];
            corners.push_back({e, e2, f});
        }
    }
    check(!corners.empty(), "vertex with empty star");
    std::map<int, std::vector<std::pair<int, int>>> adj;  // edge -> (corner idx, other)
    for (int ci = 0; ci < (int)corners.size(); ++ci) {
        auto [a, b, f] = corners[(size_t)ci];
        adj[a].push_back({ci, b});
        adj[b].push_back({ci, a});
    }
    for (auto& [e, lst] : adj)
        check(lst.size() == 2, "vertex star is not a cycle");
    Star st;
    std::set<int> used;
    int e0 = std::get<0>(corners[0]);
    int cur = e0, viaCorner = -1;
    do {
        st.edges.push_back(cur);
        int nextCorner = -1, nxt = -1;
        for (auto& [ci, other] : adj[cur])
            if (ci != viaCorner && !used.count(ci)) { nextCorner = ci; nxt = other; break; }
        check(nextCorner >= 0, "vertex star walk stuck");
        used.insert(nextCorner);
        st.faces.push_back(std::get<2>(corners[(size_t)nextCorner]));
        viaCorner = nextCorner;
        cur = nxt;
    } while (cur != e0);
    check(st.edges.size() == st.faces.size() && st.edges.size() == corners.size(),
          "vertex star size mismatch");
    return st;
}

struct BigonRun {
    std::vector<std::pair<int, int>> sides;  // (cell, idx) in walk order
};

// Split a single boundary circle with exactly two corner pivots into runs.
// Returns corner side positions (i1, i2) in the circle list.
bool splitBigon(const Geometry& geo, const std::vector<std::pair<int, int>>& circle,
                const std::function<bool(const GeoSide&)>& isCorner, int& i1, int& i2) {
    std::vector<int> cs;
    for (int i = 0; i < (int)circle.size(); ++i) {
        const GeoSide& s = geo.cells[(size_t)circle[(size_t)i].first]
                                    [(size_t)circle[(size_t)i].second];
        if (isCorner(s)) cs.push_back(i);
    }
    if (cs.size() != 2) return false;
    i1 = cs[0];
    i2 = cs[1];
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Curve-curve bigon removal

long long Arrangement::removeCurveBigons(int moving, int target) {
    long long removed = 0;
    long long guard = 0;
    const long long guardMax = 16 + 4 * (size(moving) + size(target));
    for (;;) {
        check(++guard < guardMax, "curve bigon removal does not terminate");
        Geometry geo = buildGeometry(*this);
        std::vector<char> walls(cx_->edges().size(), 0);
        Census cen = censusOf(*this, geo, walls);
        bool found = false;
        for (int r = 0; r < cen.numRegions && !found; ++r) {
            if (!cen.info[(size_t)r].disk || cen.info[(size_t)r].corners != 2) continue;
            if (cen.boundaries[(size_t)r].size() != 1) continue;
            const auto& circle = cen.boundaries[(size_t)r][0];
            int i1 = -1, i2 = -1;
            auto isC = [&](const GeoSide& s) { return s.pivotKind == 1; };
            if (!splitBigon(geo, circle, isC, i1, i2)) continue;
            {
                // the two corners must be distinct geometric crossings
                const GeoSide& a = geo.cells[(size_t)circle[(size_t)i1].first]
                                            [(size_t)circle[(size_t)i1].second];
                const GeoSide& b = geo.cells[(size_t)circle[(size_t)i2].first]
                                            [(size_t)circle[(size_t)i2].second];
                if (std::minmax(a.pivotA, a.pivotB) == std::minmax(b.pivotA, b.pivotB))
                    continue;
            }
            int L = (int)circle.size();
            auto runOf = [&](int from, int to) {  // sides from+1 .. to (cyclic, incl.)
                BigonRun run;
                for (int i = (from + 1) % L;; i = (i + 1) % L) {
                    run.sides.push_back(circle[(size_t)i]);
                    if (i == to) break;
                }
                return run;
            };
            BigonRun runA = runOf(i1, i2), runB = runOf(i2, i1);
            auto sideAt = [&](const std::pair<int, int>& ci) -> const GeoSide& {
                return geo.cells[(size_t)ci.first][(size_t)ci.second];
            };
            auto runCurve = [&](const BigonRun& run, int& curve, bool& dirAlong) {
                curve = -1;
                for (auto& ci : run.sides) {
                    const GeoSide& s = sideAt(ci);
                    if (s.gap) return false;
                    int c = nodes_[(size_t)s.node].curve;
                    if (curve == -1) { curve = c; dirAlong = s.dirAlong; }
                    else if (curve != c || dirAlong != s.dirAlong) return false;
                }
                return true;
            };
            int cA, cB;
            bool dA, dB;
            if (!runCurve(runA, cA, dA) || !runCurve(runB, cB, dB)) continue;
            bool okAB = (cA == moving && cB == target);
            bool okBA = (cB == moving && cA == target);
            if (!okAB && !okBA) continue;
            const BigonRun* movingRun;
            const BigonRun* targetRun;
            bool dMov, dTar;
            if (moving == target) {
                bool aShorter = runA.sides.size() <= runB.sides.size();
                movingRun = aShorter ? &runA : &runB;
                targetRun = aShorter ? &runB : &runA;
                dMov = aShorter ? dA : dB;
                dTar = aShorter ? dB : dA;
            } else if (okAB) {
                movingRun = &runA; targetRun = &runB; dMov = dA; dTar = dB;
            } else {
                movingRun = &runB; targetRun = &runA; dMov = dB; dTar = dA;
            }
            // interior pivot nodes (walk order); end pivot of last side is the corner
            auto interior = [&](const BigonRun& run) {
                std::vector<int> out;
                for (size_t i = 0; i + 1 < run.sides.size(); ++i) {
                    const GeoSide& s = sideAt(run.sides[i]);
                    check(s.pivotKind == 0, "bigon run pivot is not a strand node");
                    out.push_back(s.pivotNode);
                }
                return out;
            };
            std::vector<int> pWalk = interior(*movingRun);
            std::vector<int> wWalk = interior(*targetRun);
            std::set<int> removal(pWalk.begin(), pWalk.end());
            bool overlap = false;
            for (int w : wWalk)
                if (removal.count(w)) overlap = true;
            if (overlap) continue;  // pinched self-configuration: skip

            // strand anchors
            int S, E;
            if (pWalk.empty()) {
                int c0 = sideAt(movingRun->sides[0]).node;
                S = c0;
                E = nodes_[(size_t)c0].next;
            } else {
                int first = dMov ? pWalk.front() : pWalk.back();
                int last = dMov ? pWalk.back() : pWalk.front();
                S = nodes_[(size_t)first].prev;
                E = nodes_[(size_t)last].next;
                check(!removal.count(S) && !removal.count(E),
                      "curve bigon run swallows its anchors");
            }

            // insertion plan along the target run.  The strand-direction path
            // passes the target nodes in reversed walk order when the moving
            // run follows its strand, in walk order otherwise.
            struct Ins { int w; bool above; bool tl; };
            std::vector<Ins> plan;
            for (int w : wWalk) {
                int e = nodes_[(size_t)w].edge;
                int idx = FaceGeometry::indexOn(*this, w);
                int rBelow = cen.region[(size_t)geo.gapAt[(size_t)e][(size_t)idx][0].first];
                int rAbove = cen.region[(size_t)geo.gapAt[(size_t)e][(size_t)idx + 1][0].first];
                check((rBelow == r) != (rAbove == r),
                      "bigon does not flank the target crossing");
                bool above = (rBelow == r);
                bool tlWalk = dTar ? nodes_[(size_t)w].toLeft : !nodes_[(size_t)w].toLeft;
                plan.push_back({w, above, dMov ? !tlWalk : tlWalk});
            }
            if (dMov) std::reverse(plan.begin(), plan.end());

            // remove first, then insert with indices re-queried against the
            // already-mutated order lists
            std::vector<int> removedRun =
                dMov ? pWalk : std::vector<int>(pWalk.rbegin(), pWalk.rend());
            {
                std::set<int> touched;
                for (int id : removedRun) {
                    touched.insert(nodes_[(size_t)id].edge);
                    eraseFromOrder(nodes_[(size_t)id].edge, id);
                    nodes_[(size_t)id].alive = false;
                }
                int comp = nodes_[(size_t)S].comp;
                int prev = S;
                for (auto& ins : plan) {
                    int e = nodes_[(size_t)ins.w].edge;
                    int idx = FaceGeometry::indexOn(*this, ins.w);
                    int id = newNode(e, moving, comp, ins.tl);
                    insertInOrder(e, id, ins.above ? idx + 1 : idx);
                    touched.insert(e);
                    nodes_[(size_t)prev].next = id;
                    nodes_[(size_t)id].prev = prev;
                    prev = id;
                }
                nodes_[(size_t)prev].next = E;
                nodes_[(size_t)E].prev = prev;
                for (int& rep : curveComps_[(size_t)moving])
                    if (!nodes_[(size_t)rep].alive) rep = S;
                for (int e : touched) FaceGeometry::renormalize(*this, e);
                validate();
            }
            ++removed;
            found = true;
        }
        if (!found) break;
    }
    return removed;
}

// ---------------------------------------------------------------------------
// Tautening against the decomposing system: wall bigons and slivers

long long Arrangement::tighten(int moving, int* trivialDropped) {
    long long removed = 0;
    int dropped = 0;
    long long guard = 0;
    const long long guardMax = 64 + 8 * size(moving);
    const auto& pd = cx_->pd();
    for (;;) {
        check(++guard < guardMax, "tightening does not terminate");
        Geometry geo = buildGeometry(*this);
        // wall sets: each boundary circle, each core circle, then all edges
        std::vector<std::vector<int>> wallSets;
        for (int k = 0; k < pd.numCurves(); ++k) {
            const auto& g = pd.gluing(k);
            for (auto slot : {g.a, g.b})
                wallSets.push_back({cx_->arcEdge(slot.pants, slot.slot, 0),
                                    cx_->arcEdge(slot.pants, slot.slot, 1)});
            wallSets.push_back({cx_->coreEdge(k, 0), cx_->coreEdge(k, 1)});
        }
        {
            std::vector<int> all((size_t)cx_->edges().size());
            std::iota(all.begin(), all.end(), 0);
            wallSets.push_back(std::move(all));
        }

        bool found = false;
        for (const auto& ws : wallSets) {
            // the everything-is-a-wall pass leaves no glued gaps, so every
            // sub-face is a region; only genuine slivers (a single chord
            // doubling straight back over one edge) count as bigons there
            bool sliversOnly = ((int)ws.size() == (int)cx_->edges().size());
            std::vector<char> walls(cx_->edges().size(), 0);
            for (int e : ws) walls[(size_t)e] = 1;
            Census cen = censusOf(*this, geo, walls);
            for (int r = 0; r < cen.numRegions && !found; ++r) {
                if (!cen.info[(size_t)r].disk || cen.info[(size_t)r].corners != 2) continue;
                if (cen.boundaries[(size_t)r].size() != 1) continue;
                const auto& circle = cen.boundaries[(size_t)r][0];
                auto sideAt = [&](const std::pair<int, int>& ci) -> const GeoSide& {
                    return geo.cells[(size_t)ci.first][(size_t)ci.second];
                };
                int i1 = -1, i2 = -1;
                auto isC = [&](const GeoSide& s) {
                    if (s.pivotKind == 1) return true;
                    return s.pivotKind == 0 && walls[(size_t)nodes_[(size_t)s.pivotNode].edge];
                };
                if (!splitBigon(geo, circle, isC, i1, i2)) continue;
                // both corners must be wall crossings of `moving`
                const GeoSide& c1 = sideAt(circle[(size_t)i1]);
                const GeoSide& c2 = sideAt(circle[(size_t)i2]);
                if (c1.pivotKind != 0 || c2.pivotKind != 0) continue;
                if (c1.pivotNode == c2.pivotNode) continue;  // self-touching region
                if (nodes_[(size_t)c1.pivotNode].curve != moving ||
                    nodes_[(size_t)c2.pivotNode].curve != moving)
                    continue;
                int L = (int)circle.size();
                auto runOf = [&](int from, int to) {
                    BigonRun run;
                    for (int i = (from + 1) % L;; i = (i + 1) % L) {
                        run.sides.push_back(circle[(size_t)i]);
                        if (i == to) break;
                    }
                    return run;
                };
                // identify the chord run (moving) and the wall run
                for (int flip = 0; flip < 2 && !found; ++flip) {
                    int ic1 = flip ? i2 : i1, ic2 = flip ? i1 : i2;
                    BigonRun mRun = runOf(ic1, ic2);
                    BigonRun wRun = runOf(ic2, ic1);
                    bool mChords = true, wGaps = true;
                    int dM = -1;
                    for (auto& ci : mRun.sides) {
                        const GeoSide& s = sideAt(ci);
                        if (s.gap) { mChords = false; break; }
                        if (nodes_[(size_t)s.node].curve != moving) { mChords = false; break; }
                        int d = s.dirAlong ? 1 : 0;
                        if (dM == -1) dM = d;
                        else if (dM != d) { mChords = false; break; }
                    }
                    for (auto& ci : wRun.sides)
                        if (!sideAt(ci).gap) { wGaps = false; break; }
                    if (!mChords || !wGaps) continue;
                    if (sliversOnly && (mRun.sides.size() != 1 || wRun.sides.size() != 1))
                        continue;
                    bool dMov = (dM == 1);
                    int u = c1.pivotNode, v = c2.pivotNode;
                    if (flip) std::swap(u, v);  // u at run start, v at run end

                    std::vector<int> pWalk;
                    for (size_t i = 0; i + 1 < mRun.sides.size(); ++i) {
                        const GeoSide& s = sideAt(mRun.sides[i]);
                        check(s.pivotKind == 0, "wall bigon pivot is not a strand node");
                        pWalk.push_back(s.pivotNode);
                    }
                    std::vector<int> strandRun;  // strand order incl. corners
                    if (dMov) {
                        strandRun.push_back(u);
                        strandRun.insert(strandRun.end(), pWalk.begin(), pWalk.end());
                        strandRun.push_back(v);
                    } else {
                        strandRun.push_back(v);
                        strandRun.insert(strandRun.end(), pWalk.rbegin(), pWalk.rend());
                        strandRun.push_back(u);
                    }
                    // verify the run is a strand path
                    for (size_t i = 0; i + 1 < strandRun.size(); ++i)
                        check(nodes_[(size_t)strandRun[i]].next == strandRun[i + 1],
                              "wall bigon run is not a strand path");
                    std::set<int> removal(strandRun.begin(), strandRun.end());
                    int S = nodes_[(size_t)strandRun.front()].prev;
                    int E = nodes_[(size_t)strandRun.back()].next;
                    if (removal.count(S)) {
                        // the whole component is the bigon: drop it
                        check((long long)componentNodes(strandRun.front()).size() ==
                                  (long long)strandRun.size(),
                              "partial component swallow in wall bigon");
                        int rep = -1;
                        for (int cand : curveComps_[(size_t)moving])
                            if (removal.count(cand)) rep = cand;
                        check(rep >= 0, "swallowed component has no representative");
                        FaceGeometry::dropComponent(*this, moving, rep);
                        ++dropped;
                        ++removed;
                        found = true;
                        break;
                    }

                    // wall-run vertices (walk order X2 -> X1)
                    struct VPass { int vtx; int eIn, eOut; int regionFace; };
                    std::vector<VPass> vWalk;
                    for (size_t i = 0; i + 1 < wRun.sides.size(); ++i) {
                        const GeoSide& s = sideAt(wRun.sides[i]);
                        check(s.pivotKind == 2, "wall run pivot is not a complex vertex");
                        const GeoSide& s2 = sideAt(wRun.sides[i + 1]);
                        check(s2.gap, "wall run continues off the wall");
                        vWalk.push_back({s.pivotNode, s.edge, s2.edge,
                                         geo.cellFace[(size_t)wRun.sides[i].first]});
                    }
                    // the strand path goes from the u end to the v end; the
                    // wall run is walked v -> u, so reverse it for dMov
                    struct Crossing { int edge; int entered; int vtx; };
                    std::vector<Crossing> path;
                    auto crossingsAt = [&](const VPass& vp, bool forwardInOut) {
                        Star st = vertexStar(*cx_, vp.vtx);
                        int d = (int)st.edges.size();
                        int ia = -1, ib = -1;
                        for (int i = 0; i < d; ++i) {
                            if (st.edges[(size_t)i] == vp.eIn) ia = i;
                            if (st.edges[(size_t)i] == vp.eOut) ib = i;
                        }
                        check(ia >= 0 && ib >= 0 && ia != ib, "wall edges missing from star");
                        // walk forward from ia to ib; if the region face shows
                        // up, use the other direction
                        auto collect = [&](int from, int to, int step) {
                            std::vector<int> edges, faces;
                            int i = from;
                            while (true) {
                                int fi = step > 0 ? i : (i + d - 1) % d;
                                faces.push_back(st.faces[(size_t)fi]);
                                i = (i + step + d) % d;
                                if (i == to) break;
                                edges.push_back(st.edges[(size_t)i]);
                            }
                            return std::pair{edges, faces};
                        };
                        auto fwd = collect(ia, ib, +1);
                        auto bwd = collect(ia, ib, -1);
                        auto hasRegion = [&](const std::vector<int>& fs) {
                            return std::find(fs.begin(), fs.end(), vp.regionFace) != fs.end();
                        };
                        bool fwdHasRegion = hasRegion(fwd.second);
                        check(fwdHasRegion != hasRegion(bwd.second),
                              "bigon region face on both sides of the vertex star");
                        auto [edges, faces] = fwdHasRegion ? bwd : fwd;
                        // faces has edges.size()+1 entries; crossing edges[i]
                        // (travelling eIn -> eOut) enters faces[i+1]
                        check(faces.size() == edges.size() + 1, "star arc mismatch");
                        std::vector<Crossing> out;
                        if (forwardInOut) {
                            for (size_t i = 0; i < edges.size(); ++i)
                                out.push_back({edges[i], faces[i + 1], vp.vtx});
                        } else {
                            for (size_t i = edges.size(); i-- > 0;)
                                out.push_back({edges[i], faces[i], vp.vtx});
                        }
                        return out;
                    };
                    if (dMov) {
                        // path passes vertices in reverse walk order, and at
                        // each vertex travels eOut -> eIn
                        for (auto it = vWalk.rbegin(); it != vWalk.rend(); ++it)
                            for (auto& cr : crossingsAt(*it, false)) path.push_back(cr);
                    } else {
                        for (auto& vp : vWalk)
                            for (auto& cr : crossingsAt(vp, true)) path.push_back(cr);
                    }

                    // build inserts: each crossing hugs its vertex end
                    std::set<int> touched;
                    for (int id : strandRun) {
                        touched.insert(nodes_[(size_t)id].edge);
                        eraseFromOrder(nodes_[(size_t)id].edge, id);
                        nodes_[(size_t)id].alive = false;
                    }
                    int comp = nodes_[(size_t)S].comp;
                    int prev = S;
                    for (auto& cr : path) {
                        bool tl = (cx_->faceLeftOf(cr.edge, true) == cr.entered);
                        check(cx_->faceLeftOf(cr.edge, tl) == cr.entered,
                              "reroute entered face not adjacent");
                        int id = newNode(cr.edge, moving, comp, tl);
                        bool atStart = (cx_->edges()[(size_t)cr.edge].v0 == cr.vtx);
                        insertInOrder(cr.edge, id,
                                      atStart ? 0 : (int)order_[(size_t)cr.edge].size());
                        touched.insert(cr.edge);
                        nodes_[(size_t)prev].next = id;
                        nodes_[(size_t)id].prev = prev;
                        prev = id;
                    }
                    nodes_[(size_t)prev].next = E;
                    nodes_[(size_t)E].prev = prev;
                    for (int& rep : curveComps_[(size_t)moving])
                        if (!nodes_[(size_t)rep].alive) rep = S;
                    for (int e : touched) FaceGeometry::renormalize(*this, e);
                    validate();
                    ++removed;
                    found = true;
                }
            }
            if (found) break;
        }
        if (!found) break;
    }
    if (trivialDropped) *trivialDropped = dropped;
    return removed;
}

// ---------------------------------------------------------------------------
// Public census queries

std::vector<Arrangement::RegionInfo> Arrangement::complementRegions() const {
    Geometry geo = buildGeometry(*this);
    std::vector<char> walls(cx_->edges().size(), 0);
    Census c = censusOf(*this, geo, walls);
    return c.info;
}

bool Arrangement::complementAllDisks() const {
    for (const auto& r : complementRegions())
        if (!r.disk) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Coordinate extraction
//
// Requires the curve taut: minimal crossings with circles and cores, pants
// arcs in standard families.  Every strand then reads off directly: circle
// crossings give the per-slot point sequences (which must match the canonical
// per-pants layout position by position), and each collar passage from bottom
// index i to top index j with net signed winding W satisfies
//     t  =  (m - 1 - j)  +  m * W  -  i
// because the canonical top ranks run in reverse circle order under a
// positively oriented gluing and the lift index equals the number of signed
// full turns, i.e. the signed crossings of the x = 0 vertical line.

curves::DT Arrangement::extract(int c) const {
    const auto& pd = cx_->pd();
    require(c >= 0 && c < numCurves(), "extract: no such curve");
    int nP = pd.numPants(), nC = pd.numCurves();
    for (int k = 0; k < nC; ++k)
        check(pd.gluing(k).orientPlus,
              "extraction supports positively oriented gluings only");
    check(selfCrossings(c) == 0, "extraction requires an embedded curve");

    curves::DT out = curves::DT::zero(pd.genus());
    for (int k = 0; k < nC; ++k) out.m[(size_t)k] = coreCrossings(c, k);

    std::vector<curves::PantsModel> models((size_t)nP);
    for (int p = 0; p < nP; ++p)
        models[(size_t)p] = curves::buildPantsModel(
            curves::solvePants(out.m.at((size_t)pd.curveAt(p, 0)),
                               out.m.at((size_t)pd.curveAt(p, 1)),
                               out.m.at((size_t)pd.curveAt(p, 2))));

    // edge classification
    enum Kind { ARC, SEAM, VERT, CORE };
    struct EdgeInfo {
        Kind kind;
        int p = -1, s = -1;  // ARC: pants/slot; SEAM: pants + the two slots
        int s2 = -1;
        bool front = false;  // ARC
        int k = -1, which = -1;  // VERT/CORE
    };
    std::vector<EdgeInfo> einfo(cx_->edges().size());
    for (int p = 0; p < nP; ++p) {
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 2; ++a)
                einfo[(size_t)cx_->arcEdge(p, s, a)] = {ARC, p, s, -1, a == 0, -1, -1};
        const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (auto& pr : pairs)
            einfo[(size_t)cx_->seamEdgeBetween(p, pr[0], pr[1])] =
                {SEAM, p, pr[0], pr[1], false, -1, -1};
    }
    for (int k = 0; k < nC; ++k) {
        for (int w = 0; w < 4; ++w)
            einfo[(size_t)cx_->verticalEdge(k, w)] = {VERT, -1, -1, -1, false, k, w};
        for (int w = 0; w < 2; ++w)
            einfo[(size_t)cx_->coreEdge(k, w)] = {CORE, -1, -1, -1, false, k, w};
    }

    // circle point sequences, in canonical order (front arc then back arc)
    std::vector<std::array<std::vector<int>, 3>> seq((size_t)nP);
    std::map<int, std::pair<int, curves::Coord>> posOf;  // node -> (packed (p,s), idx)
    std::vector<std::array<curves::Coord, 3>> frontCount((size_t)nP, {0, 0, 0});
    for (int p = 0; p < nP; ++p)
        for (int s = 0; s < 3; ++s) {
            auto& lst = seq[(size_t)p][(size_t)s];
            for (int a = 0; a < 2; ++a) {
                for (int id : order_[(size_t)cx_->arcEdge(p, s, a)])
                    if (nodes_[(size_t)id].curve == c) lst.push_back(id);
                if (a == 0) frontCount[(size_t)p][(size_t)s] = (curves::Coord)lst.size();
            }
            curves::Coord m = out.m.at((size_t)pd.curveAt(p, s));
            check((curves::Coord)lst.size() == m,
                  "curve is not taut against a boundary circle");
            check(frontCount[(size_t)p][(size_t)s] ==
                      models[(size_t)p].uCount[(size_t)s],
                  "circle points sit off the canonical arcs");
            for (curves::Coord i = 0; i < (curves::Coord)lst.size(); ++i)
                posOf[lst[(size_t)i]] = {3 * p + s, i};
        }

    std::map<int, std::pair<int, int>> famEnd;  // circle node -> (family, end)
    std::vector<std::set<curves::Coord>> tCand((size_t)nC);

    for (int rep : components(c)) {
        std::vector<int> comp = componentNodes(rep);
        std::vector<size_t> circleAt;
        for (size_t i = 0; i < comp.size(); ++i)
            if (einfo[(size_t)nodes_[(size_t)comp[i]].edge].kind == ARC)
                circleAt.push_back(i);

        if (circleAt.empty()) {
            // a component disjoint from the circles is parallel to a core:
            // either in a half-collar (two vertical crossings) or pushed
            // into a pants (two seam crossings around one slot)
            check(comp.size() == 2, "stray component in nonstandard position");
            const EdgeInfo& a = einfo[(size_t)nodes_[(size_t)comp[0]].edge];
            const EdgeInfo& b = einfo[(size_t)nodes_[(size_t)comp[1]].edge];
            if (a.kind == VERT && b.kind == VERT) {
                check(a.k == b.k, "parallel component straddles two collars");
                check((a.which < 2) != (b.which < 2),
                      "parallel component misses a vertical line");
                out.parallel.at((size_t)a.k) += 1;
            } else if (a.kind == SEAM && b.kind == SEAM) {
                check(a.p == b.p, "parallel component straddles two pants");
                // the shared slot of the two seams is the encircled one
                std::map<int, int> cnt;
                for (int s : {a.s, a.s2, b.s, b.s2}) cnt[s] += 1;
                int slot = -1;
                for (auto& [s, n] : cnt)
                    if (n == 2) slot = s;
                check(slot >= 0 && cnt.size() == 3,
                      "parallel component crosses unrelated seams");
                out.parallel.at((size_t)pd.curveAt(a.p, slot)) += 1;
            } else {
                throw Alarm("component in nonstandard trivial position");
            }
            continue;
        }

        // walk the component, segmenting at circle crossings
        size_t n = comp.size();
        for (size_t ci = 0; ci < circleAt.size(); ++ci) {
            size_t from = circleAt[ci];
            size_t to = circleAt[(ci + 1) % circleAt.size()];
            int n1 = comp[from], n2 = comp[to];
            std::vector<int> mid;
            for (size_t i = (from + 1) % n; i != to; i = (i + 1) % n)
                mid.push_back(comp[i]);
            auto [ps1, i1] = posOf.at(n1);
            auto [ps2, i2] = posOf.at(n2);
            int p1 = ps1 / 3, s1 = ps1 % 3, p2 = ps2 / 3, s2 = ps2 % 3;

            bool pantsSeg = mid.empty() || einfo[(size_t)nodes_[(size_t)mid[0]].edge].kind == SEAM;
            if (pantsSeg) {
                check(p1 == p2, "pants arc joins two different pants");
                int fam, e1, e2;
                if (s1 != s2) {
                    check(mid.empty(), "seam arc in nonstandard position");
                    int lo = std::min(s1, s2), hi = std::max(s1, s2);
                    fam = (lo == 0) ? (hi == 1 ? 0 : 1) : 2;
                    e1 = (s1 == lo) ? 0 : 1;
                    e2 = 1 - e1;
                } else {
                    check(mid.size() == 1, "wave arc in nonstandard position");
                    const EdgeInfo& se = einfo[(size_t)nodes_[(size_t)mid[0]].edge];
                    check(se.kind == SEAM && se.p == p1 && se.s != s1 && se.s2 != s1,
                          "wave arc crosses the wrong seam");
                    fam = 3 + s1;
                    auto endOf = [&](int node) {
                        bool front = einfo[(size_t)nodes_[(size_t)node].edge].front;
                        bool upper = ((s1 == 1) == front);
                        return upper ? 0 : 1;
                    };
                    e1 = endOf(n1);
                    e2 = endOf(n2);
                    check(e1 != e2, "wave arc with equal ends");
                }
                for (auto [nd, fe] : {std::pair{n1, e1}, std::pair{n2, e2}}) {
                    auto [it, fresh] = famEnd.try_emplace(nd, std::pair{fam, fe});
                    check(fresh || it->second == std::pair{fam, fe},
                          "circle point with two pants arcs");
                }
            } else {
                // collar passage
                const EdgeInfo& first = einfo[(size_t)nodes_[(size_t)mid[0]].edge];
                int k = first.k;
                const auto& g = pd.gluing(k);
                curves::Coord m = out.m.at((size_t)k);
                long long wSigned = 0, cores = 0;
                for (int id : mid) {
                    const EdgeInfo& ei = einfo[(size_t)nodes_[(size_t)id].edge];
                    check((ei.kind == VERT || ei.kind == CORE) && ei.k == k,
                          "collar passage leaves its collar");
                    if (ei.kind == CORE) {
                        ++cores;
                    } else if (ei.which == 0 || ei.which == 1) {
                        // v1 lines only; sign + when entering the x > 0 side
                        int plusFace = cx_->squareFace(k, ei.which == 0 ? 2 : 3);
                        int minusFace = cx_->squareFace(k, ei.which == 0 ? 0 : 1);
                        int entered = faceEntered(id);
                        check(entered == plusFace || entered == minusFace,
                              "vertical crossing with foreign face");
                        wSigned += entered == plusFace ? 1 : -1;
                    }
                }
                check(cores == 1, "collar passage is not taut across the core");
                bool upward = (p1 == g.a.pants && s1 == g.a.slot);
                if (upward)
                    check(p2 == g.b.pants && s2 == g.b.slot,
                          "collar passage exits the wrong side");
                else
                    check(p1 == g.b.pants && s1 == g.b.slot && p2 == g.a.pants &&
                              s2 == g.a.slot,
                          "collar passage exits the wrong side");
                curves::Coord i = upward ? i1 : i2;
                curves::Coord j = upward ? i2 : i1;
                long long W = upward ? wSigned : -wSigned;
                tCand[(size_t)k].insert((m - 1 - j) + m * W - i);
            }
        }
    }

    // the strand pattern must match the canonical layout position by position
    for (int p = 0; p < nP; ++p)
        for (int s = 0; s < 3; ++s) {
            const auto& model = models[(size_t)p].circle[s];
            const auto& lst = seq[(size_t)p][(size_t)s];
            for (size_t i = 0; i < lst.size(); ++i) {
                auto it = famEnd.find(lst[i]);
                check(it != famEnd.end(), "circle point without a pants arc");
                check(it->second.first == model[i].family &&
                          it->second.second == model[i].end,
                      "pants arcs disagree with the canonical layout");
            }
        }

    for (int k = 0; k < nC; ++k) {
        if (out.m.at((size_t)k) == 0) {
            check(tCand[(size_t)k].empty(), "collar passage without crossings");
        } else {
            check(tCand[(size_t)k].size() == 1,
                  "collar strands disagree on the twist");
            out.t.at((size_t)k) = *tCand[(size_t)k].begin();
        }
    }

    curves::NormalCurve nc(pd, out);
    check(nc.components() == (int)components(c).size(),
          "extracted coordinates have the wrong component count");
    return out;
}

}  // namespace cf::arr
