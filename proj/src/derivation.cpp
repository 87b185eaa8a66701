#include "curveforge/derivation.hpp"

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>

#include "curveforge/errors.hpp"

namespace cf::derivation {

using tracks::Branch;
using tracks::BranchEnd;
using tracks::CarryDenial;
using tracks::PortRef;
using tracks::Switch;

namespace {

// ---------------------------------------------------------------------------
// Successive unzipping.
//
// A cut segment spans a branch inside one gap of its fiber (gap g of a branch
// of weight w lies between strand g-1 and strand g).  Earlier slits subdivide
// the gaps further, and the moving zipper always occupies one sub-interval of
// that refinement, so cuts can never cross: the interval maps through the
// switch at the far end by interval arithmetic, a real choice arises only
// when the interval spans the naked cusp, and the only fatal event is the
// zipper meeting a resting tip of an earlier path head-on in the same fiber
// component — the collision that stops the procedure.

struct PortGeom {
    BranchEnd be;
    bool rev = false;
    Coord off = 0, span = 0;
};

PortGeom geomOf(const Track& t, const std::vector<Coord>& w, int sw, int port) {
    const Switch& s = t.switches[(size_t)sw];
    Coord A = w[(size_t)s.first.branch];
    Coord B = w[(size_t)s.second.branch];
    Coord W = w[(size_t)s.merged.branch];
    if (port == 0) return {s.merged, s.revM, 0, W};
    if (port == 1) return {s.first, s.rev1, 0, A};
    return {s.second, s.rev2, A, B};
}

Coord localToGamma(Coord g, const PortGeom& pg) { return pg.off + (pg.rev ? pg.span - g : g); }
Coord gammaToLocal(Coord g, const PortGeom& pg) {
    g -= pg.off;
    return pg.rev ? pg.span - g : g;
}

struct Seg {
    int branch = -1;
    Coord gap = 0;
    int dir = 0;  // +1 toward end 1, -1 toward end 0
};

struct Line {
    std::vector<Seg> segs;
    long long omega = 0;
};

struct WallCut {
    Coord gap = 0;
    int path = -1, step = -1, dir = 0;
};

enum class CutSide : uint8_t { Low, Cusp, High, Loose };

struct Unzip {
    const Track& t;
    const std::vector<Coord>& w;
    int nB, nS;
    long long cap, budget, spent = 0;

    std::vector<PortRef> portAt;                // [branch*2+end]
    std::vector<std::vector<WallCut>> cuts;     // per branch, (gap, stack) ordered
    std::vector<Line> lines;
    std::vector<std::vector<char>> covered;     // per path
    std::vector<int> coveredCnt;                // per path

    // failure bookkeeping
    bool budgetOut = false;
    bool sawCollision = false;
    int lastFailZ = 0;
    int collZ = -1, collWith = -1, collBranch = -1;
    Coord collGap = 0;

    Unzip(const Track& t_, const std::vector<Coord>& w_, long long cap_, long long budget_)
        : t(t_), w(w_), nB(t_.numBranches()), nS(t_.numSwitches()), cap(cap_),
          budget(budget_) {
        portAt.assign((size_t)nB * 2, PortRef{});
        for (int s = 0; s < nS; ++s) {
            const Switch& sw = t.switches[(size_t)s];
            portAt[(size_t)(sw.merged.branch * 2 + sw.merged.end)] = {s, 0};
            portAt[(size_t)(sw.first.branch * 2 + sw.first.end)] = {s, 1};
            portAt[(size_t)(sw.second.branch * 2 + sw.second.end)] = {s, 2};
        }
        cuts.resize((size_t)nB);
    }

    PortGeom pg(int s, int p) const { return geomOf(t, w, s, p); }

    // [lo, hi) block of cuts[b] lying in gap g
    std::pair<int, int> gapBlock(int b, Coord g) const {
        const auto& cv = cuts[(size_t)b];
        auto lo = std::lower_bound(cv.begin(), cv.end(), g,
                                   [](const WallCut& c, Coord x) { return c.gap < x; });
        auto hi = std::upper_bound(cv.begin(), cv.end(), g,
                                   [](Coord x, const WallCut& c) { return x < c.gap; });
        return {(int)(lo - cv.begin()), (int)(hi - cv.begin())};
    }

    int indexOf(int b, int path, int step) const {
        const auto& cv = cuts[(size_t)b];
        for (int i = 0; i < (int)cv.size(); ++i)
            if (cv[(size_t)i].path == path && cv[(size_t)i].step == step) return i;
        check(false, "derivation: cut not found in its branch");
        return -1;
    }

    // How the cut c (living in branch b) presents itself at switch s, which
    // sits at end e of b.  side: its position relative to the cusp of s in
    // gamma order; for Low/High continuations gammaOut/neighbor are filled.
    struct CutAtSwitch {
        CutSide side = CutSide::Loose;
        Coord gamma = -1;
        int neighborPort = -1;  // for continuations
        int neighborBranch = -1, neighborStep = -1;
    };

    CutAtSwitch statusAt(const WallCut& c, int b, int e, int s) const {
        CutAtSwitch r;
        const Line& ln = lines[(size_t)c.path];
        int exitEnd = c.dir > 0 ? 1 : 0;
        int nstep;
        if (e == exitEnd) {
            nstep = c.step + 1;
            if (nstep >= (int)ln.segs.size()) {
                // its tip rests at this interface (a loose wall: no constraint)
                r.side = CutSide::Loose;
                r.gamma = localToGamma(c.gap, pg(s, portAt[(size_t)(b * 2 + e)].port));
                return r;
            }
        } else {
            nstep = c.step - 1;
            if (nstep < 0) {
                r.side = CutSide::Cusp;  // its zipper originated at this cusp
                return r;
            }
        }
        const Seg& ns = ln.segs[(size_t)nstep];
        int nEnd;
        if (nstep == c.step + 1)
            nEnd = ns.dir > 0 ? 0 : 1;  // the neighbor entered its branch here
        else
            nEnd = ns.dir > 0 ? 1 : 0;  // the neighbor exited its branch here
        PortRef npr = portAt[(size_t)(ns.branch * 2 + nEnd)];
        check(npr.sw == s, "derivation: neighbor segment crosses the wrong switch");
        r.neighborPort = npr.port;
        r.neighborBranch = ns.branch;
        r.neighborStep = nstep;
        r.gamma = localToGamma(ns.gap, pg(s, npr.port));
        Coord A = w[(size_t)t.switches[(size_t)s].first.branch];
        if (r.gamma < A || (r.gamma == A && npr.port == 1))
            r.side = CutSide::Low;
        else if (r.gamma > A || npr.port == 2)
            r.side = CutSide::High;
        else
            r.side = CutSide::Low;  // port 0 at gamma == A cannot happen
        return r;
    }

    // Does the corridor of the zipper (sitting at index idx of its branch
    // gap block, about to cross switch s at the cusp level) have walls pinned
    // on a side of the cusp?  Returns {forceLow, forceHigh}.
    std::pair<bool, bool> corridorForce(int b, int idx, int e, int s, bool nearRev) {
        bool forceLow = false, forceHigh = false;
        auto [lo, hi] = gapBlock(b, cuts[(size_t)b][(size_t)idx].gap);
        for (int i = lo; i < hi; ++i) {
            if (i == idx) continue;
            CutAtSwitch st = statusAt(cuts[(size_t)b][(size_t)i], b, e, s);
            if (st.side == CutSide::Loose) continue;
            bool gAbove = (i > idx) != nearRev;
            if (gAbove && st.side != CutSide::High) forceLow = true;
            if (!gAbove && st.side != CutSide::Low) forceHigh = true;
        }
        check(!(forceLow && forceHigh), "derivation: walls cross at a cusp");
        return {forceLow, forceHigh};
    }

    // Landing of the zipper into branch fb via port dp of switch s at level
    // gamma, where bSide orders the zipper against walls pinned at the cusp.
    struct Land {
        int branch = -1;
        Coord gap = 0;
        int dir = 0;
        int insertAt = -1;
    };

    // collideWith: set to the owning path of a resting tip that lies inside
    // the zipper's corridor at this crossing, i.e. in the same component of
    // the interface fiber of the current (already slit) track, facing it.
    Land landAt(int s, int dp, Coord gamma, CutSide bSide, int nearPort, int nearIdx,
                int zPath, int zStep, int& collideWith) {
        collideWith = -1;
        PortGeom fg = pg(s, dp);
        Coord A = w[(size_t)t.switches[(size_t)s].first.branch];
        Land l;
        l.branch = fg.be.branch;
        l.gap = gammaToLocal(gamma, fg);
        l.dir = fg.be.end == 0 ? +1 : -1;
        int fe = fg.be.end == 0 ? 0 : 1;
        auto [lo, hi] = gapBlock(l.branch, l.gap);
        int n = hi - lo;
        // classify the far walls in gamma-ascending order: 0 below the
        // zipper, 1 above, 2 a resting tip at our level (order undecided)
        std::vector<std::pair<int8_t, int>> cls;  // (class, owning path)
        cls.reserve((size_t)n);
        for (int q = 0; q < n; ++q) {
            int i = fg.rev ? hi - 1 - q : lo + q;
            const WallCut& c = cuts[(size_t)l.branch][(size_t)i];
            if (c.path == zPath && c.step == zStep) continue;  // our own head
            CutAtSwitch st = statusAt(c, l.branch, fe, s);
            Coord cg = st.side == CutSide::Cusp ? A : st.gamma;
            int8_t k;
            if (cg != gamma) {
                k = cg < gamma ? 0 : 1;
            } else if (st.side == CutSide::Loose) {
                k = 2;
            } else if (st.side == CutSide::Cusp) {
                k = bSide == CutSide::High ? 0 : 1;
            } else if (st.neighborPort != nearPort) {
                k = st.neighborPort == 1 ? 0 : 1;
            } else {
                int nIdx = indexOf(st.neighborBranch, c.path, st.neighborStep);
                bool localBelow = nIdx < nearIdx;
                k = (localBelow != pg(s, nearPort).rev) ? 0 : 1;
            }
            cls.push_back({k, c.path});
        }
        int pLo = -1, pHi = (int)cls.size();
        for (int q = 0; q < (int)cls.size(); ++q)
            if (cls[(size_t)q].first == 0) pLo = q;
        for (int q = (int)cls.size() - 1; q >= 0; --q)
            if (cls[(size_t)q].first == 1) pHi = q;
        check(pLo < pHi, "derivation: walls cross at an interface");
        int below = 0;
        for (int q = 0; q < (int)cls.size(); ++q) {
            if (cls[(size_t)q].first != 2) {
                if (cls[(size_t)q].first == 0) below++;
                continue;
            }
            if (q < pHi && q > pLo)
                collideWith = cls[(size_t)q].second;  // tip inside our corridor
            else if (q <= pLo)
                below++;
        }
        l.insertAt = lo + (fg.rev ? n - below : below);
        return l;
    }

    // ---- the whole system of paths --------------------------------------

    struct Placed {
        int path = -1, branch = -1, idx = -1;
        bool fresh = false;
    };

    // One depth-first search over all corridor choices of all zippers, run in
    // cusp order.  A later zipper that gets boxed in by the particular routes
    // chosen earlier backs the search up into those routes, so the paths are
    // found jointly, not greedily one at a time.
    bool runAll(long long lenCap) {
        lines.assign((size_t)nS, {});
        covered.assign((size_t)nS, std::vector<char>((size_t)nB, 0));
        coveredCnt.assign((size_t)nS, 0);
        for (auto& cv : cuts) cv.clear();

        std::vector<Placed> log;
        struct Frame {
            size_t nlog;
            int z;
            Land alt;
        };
        std::vector<Frame> frames;
        int zc = 0;

        auto place = [&](int z, const Land& l) {
            Line& ln = lines[(size_t)z];
            cuts[(size_t)l.branch].insert(
                cuts[(size_t)l.branch].begin() + l.insertAt,
                WallCut{l.gap, z, (int)ln.segs.size(), l.dir});
            ln.segs.push_back({l.branch, l.gap, l.dir});
            ln.omega += t.branches[(size_t)l.branch].omega;
            bool fresh = !covered[(size_t)z][(size_t)l.branch];
            if (fresh) {
                covered[(size_t)z][(size_t)l.branch] = 1;
                coveredCnt[(size_t)z]++;
            }
            log.push_back({z, l.branch, l.insertAt, fresh});
        };
        auto rollbackTo = [&](size_t nlog) {
            while (log.size() > nlog) {
                const Placed& p = log.back();
                cuts[(size_t)p.branch].erase(cuts[(size_t)p.branch].begin() + p.idx);
                Line& ln = lines[(size_t)p.path];
                if (p.fresh) {
                    covered[(size_t)p.path][(size_t)p.branch] = 0;
                    coveredCnt[(size_t)p.path]--;
                }
                ln.omega -= t.branches[(size_t)p.branch].omega;
                ln.segs.pop_back();
                log.pop_back();
            }
        };
        // a zipper starts at the cusp of its switch, inside the corridor of
        // the merged branch, heading away from the switch
        auto startZipper = [&](int z) {
            PortGeom mg = pg(z, 0);
            Coord A = w[(size_t)t.switches[(size_t)z].first.branch];
            Land l;
            l.branch = mg.be.branch;
            l.gap = gammaToLocal(A, mg);
            l.dir = mg.be.end == 0 ? +1 : -1;
            int e0 = mg.be.end;
            auto [lo, hi] = gapBlock(l.branch, l.gap);
            int below = 0;
            for (int i = lo; i < hi; ++i) {
                CutAtSwitch st = statusAt(cuts[(size_t)l.branch][(size_t)i], l.branch, e0, z);
                if (st.side == CutSide::Low) below++;
                if (st.side == CutSide::Loose && st.gamma <= A) below++;
            }
            l.insertAt = lo + (mg.rev ? (hi - lo) - below : below);
            place(z, l);
        };

        startZipper(0);
        for (;;) {
            Line& ln = lines[(size_t)zc];
            const Seg& cur = ln.segs.back();
            int curIdx = log.back().idx;
            int curStep = (int)ln.segs.size() - 1;
            int e = cur.dir > 0 ? 1 : 0;
            PortRef pr = portAt[(size_t)(cur.branch * 2 + e)];
            int s = pr.sw;
            PortGeom ng = pg(s, pr.port);
            Coord gamma = localToGamma(cur.gap, ng);
            Coord A = w[(size_t)t.switches[(size_t)s].first.branch];
            int coll = -1;
            auto noteColl = [&](int withPath) {
                sawCollision = true;
                collZ = zc;
                collWith = withPath;
                collBranch = cur.branch;
                collGap = cur.gap;
            };
            if (coveredCnt[(size_t)zc] == nB) {
                // rest the tip at the interface ahead, unless an earlier tip
                // shares its fiber component there, facing it
                bool clash = false;
                if (pr.port != 0) {
                    landAt(s, 0, gamma, pr.port == 1 ? CutSide::Low : CutSide::High,
                           pr.port, curIdx, zc, curStep, coll);
                    clash = coll >= 0;
                } else if (gamma != A) {
                    landAt(s, gamma < A ? 1 : 2, gamma, CutSide::Loose, pr.port, curIdx,
                           zc, curStep, coll);
                    clash = coll >= 0;
                } else {
                    auto [fLow, fHigh] = corridorForce(cur.branch, curIdx, e, s, ng.rev);
                    if (fLow) {
                        landAt(s, 1, gamma, CutSide::Low, pr.port, curIdx, zc, curStep,
                               coll);
                        clash = coll >= 0;
                    } else if (fHigh) {
                        landAt(s, 2, gamma, CutSide::High, pr.port, curIdx, zc, curStep,
                               coll);
                        clash = coll >= 0;
                    }
                    // a free corridor: the cusp point itself bounds the
                    // resting component, so no tip can face us across it
                }
                if (!clash) {
                    if (++zc == nS) return true;
                    startZipper(zc);
                    continue;
                }
                noteColl(coll);
            } else if (++spent > budget) {
                budgetOut = true;
                rollbackTo(0);
                return false;
            } else if ((long long)ln.segs.size() < lenCap) {
                if (pr.port != 0) {
                    Land l = landAt(s, 0, gamma, pr.port == 1 ? CutSide::Low : CutSide::High,
                                    pr.port, curIdx, zc, curStep, coll);
                    if (coll < 0) {
                        place(zc, l);
                        continue;
                    }
                    noteColl(coll);
                } else if (gamma != A) {
                    Land l = landAt(s, gamma < A ? 1 : 2, gamma, CutSide::Loose, pr.port,
                                    curIdx, zc, curStep, coll);
                    if (coll < 0) {
                        place(zc, l);
                        continue;
                    }
                    noteColl(coll);
                } else {
                    // the corridor: walls pinned on a side of the cusp force us
                    auto [forceLow, forceHigh] =
                        corridorForce(cur.branch, curIdx, e, s, ng.rev);
                    int cLow = 0, cHigh = 0;
                    Land low, high;
                    if (!forceHigh)
                        low = landAt(s, 1, gamma, CutSide::Low, pr.port, curIdx, zc,
                                     curStep, cLow);
                    else
                        cLow = 0x7fffffff;
                    if (!forceLow)
                        high = landAt(s, 2, gamma, CutSide::High, pr.port, curIdx, zc,
                                      curStep, cHigh);
                    else
                        cHigh = 0x7fffffff;
                    if (cLow < 0 && cHigh < 0) {
                        frames.push_back({log.size(), zc, high});
                        place(zc, low);
                        continue;
                    }
                    if (cLow < 0) {
                        place(zc, low);
                        continue;
                    }
                    if (cHigh < 0) {
                        place(zc, high);
                        continue;
                    }
                    noteColl(cLow != 0x7fffffff ? cLow : cHigh);
                }
            }
            // dead end: back to the latest untried corridor side, possibly
            // abandoning the routes of every zipper started since
            lastFailZ = zc;
            if (frames.empty()) {
                rollbackTo(0);
                return false;
            }
            Frame f = frames.back();
            frames.pop_back();
            rollbackTo(f.nlog);
            zc = f.z;
            place(zc, f.alt);
        }
    }
};

// ---------------------------------------------------------------------------
// Split bookkeeping

struct CutRec {
    Coord gap = 0;
    int path = -1, step = -1, dir = 0;
};

constexpr long long kExt0 = -10, kExtW = -11;

long long packKey(long long a, long long b) {
    return (long long)(((uint64_t)(uint32_t)a << 32) | (uint32_t)b);
}

struct Wall {
    long long key = 0;
    int brLo = -1, itLo = -1;
    int brHi = -1, itHi = -1;
    bool isCut = false;
};

struct EndRec {
    int kind = 0;  // 0 unset, 1 link, 2 junction
    int other = -1, otherEnd = 0, flip = 0;
    int event = -1;
};

struct EvtMember {
    int block = -1;
    int end = 0;
    bool rev = false;
};

struct Event {
    int sw = -1;
    std::vector<EvtMember> near, far;
};

struct TubeEndInfo {
    int tube = -1, whichEnd = 0;
    bool parity = false;
};

}  // namespace

// ---------------------------------------------------------------------------

DeriveResult derive(const Track& t, const std::vector<Coord>& weights,
                    const DeriveOptions& opts) {
    DeriveResult res;
    require((int)weights.size() == t.numBranches(),
            "derive: need one weight per branch of the track");
    require(t.numSwitches() > 0, "derive: track has no switches");
    for (int b = 0; b < t.numBranches(); ++b)
        if (weights[(size_t)b] < 1) {
            DeriveFailure f;
            f.kind = DeriveFailure::Kind::NotPositive;
            f.branch = b;
            f.detail = "branch " + std::to_string(b) + " carries no strand";
            res.failure = f;
            return res;
        }

    int nB = t.numBranches(), nS = t.numSwitches();
    long long cap = opts.maxSteps;
    if (cap <= 0) {
        long long tot = std::accumulate(weights.begin(), weights.end(), 0LL);
        cap = 4 * tot + 4096;
    }

    // Phase 1: unzip the cusps in order, searching over the corridor choices
    // of all zippers jointly (low side tried first, under an iteratively
    // deepened length cap so short paths are preferred and spirals abandoned
    // early).  A collision with a resting tip is a dead end for that set of
    // choices, not necessarily for the system.
    Unzip uz(t, weights, cap, 512 * cap);
    bool done = false;
    long long lenCap = std::min<long long>(cap, std::max(2LL * nB, 32LL));
    for (;;) {
        uz.budgetOut = false;
        uz.sawCollision = false;
        done = uz.runAll(lenCap);
        if (done || uz.budgetOut || lenCap >= cap) break;
        lenCap = std::min(cap, lenCap * 2);
    }
    if (!done) {
        DeriveFailure f;
        if (uz.budgetOut) {
            f.kind = DeriveFailure::Kind::NoCompletion;
            f.cusp = uz.lastFailZ;
            f.detail = "zipper " + std::to_string(uz.lastFailZ) +
                       ": step budget exhausted";
        } else if (uz.sawCollision) {
            f.kind = DeriveFailure::Kind::Collision;
            f.collision = {uz.collZ, uz.collWith, uz.collBranch, uz.collGap};
            f.detail = "zipper " + std::to_string(uz.collZ) +
                       " runs into the tip of zipper " + std::to_string(uz.collWith);
        } else {
            f.kind = DeriveFailure::Kind::NoCompletion;
            f.cusp = uz.lastFailZ;
            f.detail = "zipper " + std::to_string(uz.lastFailZ) +
                       ": no complete unzipping path exists";
        }
        res.failure = f;
        return res;
    }
    std::vector<PathStat> paths;
    for (int z = 0; z < nS; ++z) {
        const Line& ln = uz.lines[(size_t)z];
        PathStat ps;
        ps.cusp = z;
        ps.length = (long long)ln.segs.size();
        ps.omega = ln.omega;
        ps.completed = true;
        if (opts.keepPaths)
            for (const Seg& s : ln.segs) ps.steps.push_back({s.branch, s.gap, s.dir});
        paths.push_back(std::move(ps));
    }

    // Phase 2: the cut stacking is the construction order of the wall lists.
    std::vector<std::vector<CutRec>> cuts((size_t)nB);
    for (int b = 0; b < nB; ++b)
        for (const WallCut& c : uz.cuts[(size_t)b])
            cuts[(size_t)b].push_back({c.gap, c.path, c.step, c.dir});

    // Phase 3: split the track along the cuts.
    std::vector<int> blockOff((size_t)nB + 1, 0);
    for (int b = 0; b < nB; ++b)
        blockOff[(size_t)b + 1] = blockOff[(size_t)b] + (int)cuts[(size_t)b].size() + 1;
    int totalBlocks = blockOff[(size_t)nB];
    std::vector<Coord> blockWidth((size_t)totalBlocks, 0);
    std::vector<int> blockParent((size_t)totalBlocks, -1);
    auto itemGap = [&](int b, int item) -> Coord {
        int n = (int)cuts[(size_t)b].size();
        if (item == 0) return 0;
        if (item == n + 1) return weights[(size_t)b];
        return cuts[(size_t)b][(size_t)item - 1].gap;
    };
    for (int b = 0; b < nB; ++b) {
        int n = (int)cuts[(size_t)b].size();
        for (int i = 0; i <= n; ++i) {
            Coord wd = itemGap(b, i + 1) - itemGap(b, i);
            check(wd >= 0, "derivation: negative block width");
            blockWidth[(size_t)(blockOff[(size_t)b] + i)] = wd;
            blockParent[(size_t)(blockOff[(size_t)b] + i)] = b;
        }
    }

    auto portWalls = [&](const BranchEnd& be, bool rev) {
        int b = be.branch;
        const auto& cv = cuts[(size_t)b];
        int n = (int)cv.size();
        std::vector<Wall> walls;
        walls.reserve((size_t)n + 2);
        for (int j = 0; j <= n + 1; ++j) {
            Wall wl;
            wl.brLo = wl.brHi = b;
            wl.itLo = wl.itHi = j;
            if (j >= 1 && j <= n) {
                const CutRec& c = cv[(size_t)j - 1];
                int exitEnd = c.dir > 0 ? 1 : 0;
                wl.key = exitEnd == be.end ? packKey(c.path, c.step)
                                           : packKey(c.path, c.step - 1);
                wl.isCut = true;
            }
            walls.push_back(wl);
        }
        if (rev) std::reverse(walls.begin(), walls.end());
        walls.front().key = packKey(kExt0, 0);
        walls.back().key = packKey(kExtW, 0);
        return walls;
    };

    std::vector<EndRec> endRec((size_t)totalBlocks * 2);
    std::vector<Event> events;
    int terminalWalls = 0;

    auto blockBetween = [&](const std::vector<Wall>& walls, int i) {
        const Wall& u = walls[(size_t)i];
        const Wall& v = walls[(size_t)i + 1];
        check(u.brHi == v.brLo, "derivation: interface walls straddle branches");
        check(std::abs(u.itHi - v.itLo) == 1, "derivation: interface walls not adjacent");
        return blockOff[(size_t)u.brHi] + std::min(u.itHi, v.itLo);
    };

    for (int s = 0; s < nS; ++s) {
        const Switch& sw = t.switches[(size_t)s];
        auto nearWalls = portWalls(sw.merged, sw.revM);
        auto fw1 = portWalls(sw.first, sw.rev1);
        auto fw2 = portWalls(sw.second, sw.rev2);
        std::vector<Wall> farWalls(fw1.begin(), fw1.end() - 1);
        int cuspIdx = (int)farWalls.size();
        {
            Wall cw;
            cw.key = packKey(s, -1);  // matched by the entry wall of zipper s
            cw.brLo = fw1.back().brLo;
            cw.itLo = fw1.back().itLo;
            cw.brHi = fw2.front().brHi;
            cw.itHi = fw2.front().itHi;
            farWalls.push_back(cw);
        }
        farWalls.insert(farWalls.end(), fw2.begin() + 1, fw2.end());

        std::unordered_map<long long, int> farIdx;
        farIdx.reserve(farWalls.size() * 2);
        for (int i = 0; i < (int)farWalls.size(); ++i)
            check(farIdx.emplace(farWalls[(size_t)i].key, i).second,
                  "derivation: duplicate far wall key");
        std::vector<char> farMatched(farWalls.size(), 0);
        std::vector<std::pair<int, int>> shared;
        for (int i = 0; i < (int)nearWalls.size(); ++i) {
            auto it = farIdx.find(nearWalls[(size_t)i].key);
            if (it == farIdx.end()) {
                check(nearWalls[(size_t)i].isCut, "derivation: unmatched extreme wall");
                terminalWalls++;
                continue;
            }
            check(shared.empty() || it->second > shared.back().second,
                  "derivation: interface wall order mismatch");
            farMatched[(size_t)it->second] = 1;
            shared.push_back({i, it->second});
        }
        for (int i = 0; i < (int)farWalls.size(); ++i)
            if (!farMatched[(size_t)i]) {
                check(farWalls[(size_t)i].isCut || i == cuspIdx,
                      "derivation: unmatched far wall");
                terminalWalls++;
            }
        check(shared.size() >= 2 && shared.front() == std::make_pair(0, 0) &&
                  shared.back() == std::make_pair((int)nearWalls.size() - 1,
                                                  (int)farWalls.size() - 1),
              "derivation: interface extremes must pair up");

        auto farMember = [&](int j) {
            EvtMember m;
            m.block = blockBetween(farWalls, j);
            bool onFirst = j < cuspIdx;
            m.end = onFirst ? sw.first.end : sw.second.end;
            m.rev = onFirst ? sw.rev1 : sw.rev2;
            return m;
        };
        for (size_t q = 0; q + 1 < shared.size(); ++q) {
            int n0 = shared[q].first, f0 = shared[q].second;
            int n1 = shared[q + 1].first, f1 = shared[q + 1].second;
            int k = n1 - n0, l = f1 - f0;
            if (k == 1 && l == 1) {
                int nb = blockBetween(nearWalls, n0);
                EvtMember fm = farMember(f0);
                int flip = (int)sw.revM ^ (int)fm.rev;
                EndRec& a = endRec[(size_t)(nb * 2 + sw.merged.end)];
                EndRec& bq = endRec[(size_t)(fm.block * 2 + fm.end)];
                check(a.kind == 0 && bq.kind == 0, "derivation: block end linked twice");
                a = {1, fm.block, fm.end, flip, -1};
                bq = {1, nb, sw.merged.end, flip, -1};
                check(blockWidth[(size_t)nb] == blockWidth[(size_t)fm.block],
                      "derivation: linked blocks differ in width");
            } else {
                Event ev;
                ev.sw = s;
                for (int i = n0; i < n1; ++i)
                    ev.near.push_back({blockBetween(nearWalls, i), sw.merged.end, sw.revM});
                for (int j = f0; j < f1; ++j) ev.far.push_back(farMember(j));
                int evId = (int)events.size();
                for (const EvtMember& m : ev.near) {
                    EndRec& r = endRec[(size_t)(m.block * 2 + m.end)];
                    check(r.kind == 0, "derivation: block end used twice");
                    r = {2, -1, 0, 0, evId};
                }
                for (const EvtMember& m : ev.far) {
                    EndRec& r = endRec[(size_t)(m.block * 2 + m.end)];
                    check(r.kind == 0, "derivation: block end used twice");
                    r = {2, -1, 0, 0, evId};
                }
                events.push_back(std::move(ev));
            }
        }
    }
    // every cusp wall is consumed by its own zipper's entry, so the only
    // terminal walls are the resting tips, one per path
    check(terminalWalls == nS, "derivation: each zipper must rest exactly once");

    // Walk maximal chains of linked blocks into tubes.
    std::vector<char> visited((size_t)totalBlocks, 0);
    std::vector<std::vector<int>> tubeBlocks;
    std::vector<Coord> tubeWidth;
    std::map<std::pair<int, int>, TubeEndInfo> endInfo;
    auto walkTube = [&](int block, int jEnd) {
        int id = (int)tubeBlocks.size();
        std::vector<int> blocks{block};
        visited[(size_t)block] = 1;
        endInfo[{block, jEnd}] = {id, 0, false};
        bool parity = false;
        int curB = block, arrived = jEnd;
        for (;;) {
            int exitEnd = 1 - arrived;
            const EndRec& r = endRec[(size_t)(curB * 2 + exitEnd)];
            check(r.kind != 0, "derivation: open block end");
            if (r.kind == 2) {
                endInfo[{curB, exitEnd}] = {id, 1, parity};
                break;
            }
            parity = parity ^ (r.flip != 0);
            curB = r.other;
            arrived = r.otherEnd;
            check(!visited[(size_t)curB], "derivation: tube walk revisits a block");
            visited[(size_t)curB] = 1;
            check(blockWidth[(size_t)curB] == blockWidth[(size_t)block],
                  "derivation: tube width is not constant");
            blocks.push_back(curB);
        }
        tubeWidth.push_back(blockWidth[(size_t)block]);
        tubeBlocks.push_back(std::move(blocks));
    };
    for (const Event& ev : events) {
        for (const EvtMember& m : ev.near)
            if (!visited[(size_t)m.block]) walkTube(m.block, m.end);
        for (const EvtMember& m : ev.far)
            if (!visited[(size_t)m.block]) walkTube(m.block, m.end);
    }
    for (int b = 0; b < totalBlocks; ++b)
        check(visited[(size_t)b], "derivation: closed tube without a switch");

    // Assemble the derived track.
    DeriveOutput out;
    out.parentBranches = nB;
    out.parentELength = t.eLength();
    Track& d = out.derived;
    d.genus = t.genus;
    d.collarSign = t.collarSign;
    for (size_t i = 0; i < tubeBlocks.size(); ++i) {
        Branch br;
        br.role = Branch::Role::Derived;
        long long om = 0;
        std::vector<int> chain;
        chain.reserve(tubeBlocks[i].size());
        for (int blk : tubeBlocks[i]) {
            om += t.branches[(size_t)blockParent[(size_t)blk]].omega;
            chain.push_back(blockParent[(size_t)blk]);
        }
        br.omega = om;
        br.coreInterior = om - 2;
        d.branches.push_back(std::move(br));
        out.weights.push_back(tubeWidth[i]);
        out.parents.push_back(opts.keepParents ? std::move(chain) : std::vector<int>{});
    }

    struct TE {
        BranchEnd be;
        bool rev = false;
        Coord width = 0;
    };
    auto newVirtual = [&](Coord wgt) {
        Branch vb;
        vb.role = Branch::Role::Derived;
        vb.omega = 0;
        vb.coreInterior = -2;
        d.branches.push_back(std::move(vb));
        out.weights.push_back(wgt);
        out.parents.push_back({});
        return (int)d.branches.size() - 1;
    };
    auto attachChain = [&](const std::vector<TE>& parts, const TE& merged, int onc) {
        check(parts.size() >= 2, "derivation: degenerate junction");
        TE cur = parts[0];
        Coord acc = parts[0].width;
        for (size_t i = 1; i < parts.size(); ++i) {
            acc += parts[i].width;
            TE tgt = merged;
            int vid = -1;
            if (i + 1 < parts.size()) {
                vid = newVirtual(acc);
                tgt = {{vid, 0}, false, acc};
            }
            Switch s;
            s.merged = tgt.be;
            s.revM = tgt.rev;
            s.first = cur.be;
            s.rev1 = cur.rev;
            s.second = parts[i].be;
            s.rev2 = parts[i].rev;
            s.onCurve = onc;
            check(out.weights[(size_t)s.merged.branch] ==
                      out.weights[(size_t)s.first.branch] +
                          out.weights[(size_t)s.second.branch],
                  "derivation: junction weights unbalanced");
            d.switches.push_back(s);
            if (vid >= 0) cur = {{vid, 1}, false, acc};
        }
    };
    for (const Event& ev : events) {
        int onc = t.switches[(size_t)ev.sw].onCurve;
        auto resolve = [&](const EvtMember& m) {
            auto it = endInfo.find({m.block, m.end});
            check(it != endInfo.end(), "derivation: junction end without a tube");
            const TubeEndInfo& ti = it->second;
            return TE{{ti.tube, ti.whichEnd}, (bool)(ti.parity ^ (int)m.rev),
                      out.weights[(size_t)ti.tube]};
        };
        std::vector<TE> near, far;
        for (const EvtMember& m : ev.near) near.push_back(resolve(m));
        for (const EvtMember& m : ev.far) far.push_back(resolve(m));
        if (far.size() == 1) {
            attachChain(near, far[0], onc);
        } else if (near.size() == 1) {
            attachChain(far, near[0], onc);
        } else {
            Coord W = 0;
            for (const TE& p : near) W += p.width;
            Coord W2 = 0;
            for (const TE& p : far) W2 += p.width;
            check(W == W2, "derivation: junction band widths disagree");
            int v = newVirtual(W);
            attachChain(near, {{v, 0}, false, W}, onc);
            attachChain(far, {{v, 1}, false, W}, onc);
        }
    }

    d.validate();
    // Exact length law: |tau'| = |tau| + sum of the path lengths.
    long long expected = out.parentELength;
    for (const PathStat& ps : paths) expected += ps.omega;
    check(d.eLength() == expected, "derivation: length law violated");
    d.flagFat = false;
    d.flagComplete = false;
    d.flagMaximal = true;
    for (const auto& wk : d.boundaryWalks())
        if (wk.cusps != 3) d.flagMaximal = false;

    out.paths = std::move(paths);
    res.out = std::move(out);
    return res;
}

std::vector<Coord> pushForward(const DeriveOutput& step, const std::vector<Coord>& measure) {
    require((int)measure.size() == step.derived.numBranches(),
            "pushForward: one entry per derived branch expected");
    require((int)step.parents.size() == step.derived.numBranches() &&
                (step.parents.empty() || step.parentBranches > 0),
            "pushForward: this derivation kept no parent chains");
    bool anyChain = false;
    for (const auto& ch : step.parents) anyChain = anyChain || !ch.empty();
    require(anyChain, "pushForward: this derivation kept no parent chains");
    std::vector<Coord> out((size_t)step.parentBranches, 0);
    for (size_t i = 0; i < step.parents.size(); ++i)
        for (int pb : step.parents[i]) out[(size_t)pb] += measure[i];
    return out;
}

// ---------------------------------------------------------------------------

TowerResult buildTower(const Track& base, const std::vector<Coord>& weights, int depth,
                       const DeriveOptions& opts) {
    require(depth >= 0, "tower depth must be non-negative");
    TowerResult tr;
    tr.tower.base = base;
    tr.tower.baseWeights = weights;
    const Track* cur = &base;
    const std::vector<Coord>* curW = &weights;
    for (int i = 0; i < depth; ++i) {
        DeriveResult r = derive(*cur, *curW, opts);
        if (!r.ok()) {
            tr.failure = r.failure;
            tr.failedAtDepth = i + 1;
            return tr;
        }
        tr.tower.steps.push_back({std::move(*r.out)});
        cur = &tr.tower.steps.back().out.derived;
        curW = &tr.tower.steps.back().out.weights;
    }
    return tr;
}

GregariousResult isNGregarious(const surface::PantsDecomposition& pd,
                               const curves::NormalCurve& c, int n,
                               const DeriveOptions& opts) {
    require(n >= 0, "gregariousness order must be non-negative");
    GregariousResult g;
    Track t;
    try {
        t = tracks::buildCompleteFatTrack(pd, c);
    } catch (const Refusal& r) {
        CarryDenial d;
        if (c.waves().any()) {
            d.kind = CarryDenial::Kind::Wave;
            d.waves = c.waves();
        } else {
            d.kind = CarryDenial::Kind::ParallelToSystem;
            d.detail = r.what();
        }
        g.denial = d;
        return g;
    }
    auto cr = tracks::carries(t, c);
    if (!cr.carried()) {
        g.denial = cr.denial;
        return g;
    }
    auto tr = buildTower(t, cr.witness->weights, n, opts);
    g.reachedDepth = tr.tower.depth();
    g.failure = tr.failure;
    g.gregarious = tr.reached(n);
    return g;
}

// ---------------------------------------------------------------------------
// Serialization

void save(const Tower& tw, std::ostream& out) {
    out << "format=1\n";
    out << "tower genus=" << tw.base.genus << " depth=" << tw.depth() << "\n";
    out << "base branches=" << tw.base.numBranches() << " elength=" << tw.base.eLength()
        << "\n";
    for (int i = 0; i < tw.depth(); ++i) {
        const DeriveOutput& st = tw.steps[(size_t)i].out;
        out << "--- step " << (i + 1) << "\n";
        out << "track branches=" << st.derived.numBranches()
            << " switches=" << st.derived.numSwitches()
            << " elength=" << st.derived.eLength() << "\n";
        for (size_t j = 0; j < st.paths.size(); ++j) {
            const PathStat& ps = st.paths[j];
            out << "path " << j << " cusp=" << ps.cusp << " length=" << ps.length
                << " omega=" << ps.omega << " branches=";
            if (ps.steps.empty()) {
                out << "-";
            } else {
                for (size_t q = 0; q < ps.steps.size(); ++q)
                    out << (q ? "," : "") << ps.steps[q].branch;
            }
            out << "\n";
        }
    }
}

TowerSummary loadSummary(std::istream& in) {
    TowerSummary ts;
    std::string line;
    int lineNo = 0;
    bool sawFormat = false, sawHeader = false;
    int curStep = 0;
    auto kvOf = [](std::istringstream& is) {
        std::map<std::string, std::string> kv;
        std::string tok;
        while (is >> tok) {
            auto eq = tok.find('=');
            if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        return kv;
    };
    auto toLL = [&](const std::string& s) {
        try {
            return std::stoll(s);
        } catch (...) {
            throw ParseError(lineNo, "bad integer '" + s + "'");
        }
    };
    while (std::getline(in, line)) {
        lineNo++;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string head;
        is >> head;
        if (!sawFormat) {
            require(head == "format=1", "tower file must start with format=1");
            sawFormat = true;
            continue;
        }
        if (head == "tower") {
            auto kv = kvOf(is);
            require(kv.count("genus") && kv.count("depth"), "tower header needs genus= depth=");
            ts.genus = (int)toLL(kv["genus"]);
            ts.depth = (int)toLL(kv["depth"]);
            ts.pathLengths.resize((size_t)ts.depth);
            sawHeader = true;
        } else if (head == "base") {
            require(sawHeader, "base line before tower header");
            auto kv = kvOf(is);
            require(kv.count("elength"), "base line needs elength=");
            ts.trackLengths.push_back(toLL(kv["elength"]));
        } else if (head == "---") {
            std::string w;
            is >> w;
            int n = 0;
            is >> n;
            if (w != "step" || n != curStep + 1)
                throw ParseError(lineNo, "steps must be numbered consecutively");
            curStep = n;
        } else if (head == "track") {
            require(curStep >= 1, "track line outside a step");
            auto kv = kvOf(is);
            require(kv.count("elength"), "track line needs elength=");
            ts.trackLengths.push_back(toLL(kv["elength"]));
        } else if (head == "path") {
            require(curStep >= 1 && curStep <= ts.depth, "path line outside a step");
            int id = 0;
            is >> id;
            auto kv = kvOf(is);
            require(kv.count("length"), "path line needs length=");
            ts.pathLengths[(size_t)curStep - 1].push_back(toLL(kv["length"]));
        } else {
            throw ParseError(lineNo, "unknown tower line '" + head + "'");
        }
    }
    require(sawHeader, "missing tower header");
    require((int)ts.trackLengths.size() == ts.depth + 1,
            "tower file must list the base and every step");
    return ts;
}

}  // namespace cf::derivation
