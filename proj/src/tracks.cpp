#include "curveforge/tracks.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "curveforge/errors.hpp"

namespace cf::tracks {

namespace {

using curves::NormalCurve;
using curves::PantsArcs;
using surface::PantsDecomposition;

// seam family tags match curves::CirclePoint: 0=seam01, 1=seam02, 2=seam12
constexpr int kSlotsOfFam[3][2] = {{0, 1}, {0, 2}, {1, 2}};

int famBetween(int s1, int s2) {
    if (s1 > s2) std::swap(s1, s2);
    if (s1 == 0 && s2 == 1) return 0;
    if (s1 == 0 && s2 == 2) return 1;
    return 2;
}

// Which boundary arc of the cuff carries the seam endpoints: the canonical
// layout puts all seam blocks on the w-arc for slots 0 and 2 and on the
// u-arc for slot 1.
int arcSideOfSlot(int slot) { return slot == 1 ? 0 : 1; }

// Conventions of the canonical in-pants layout, read off a reference tight
// solution with every seam family present twice.
struct RefLayout {
    int famAt[3][2];     // family order around each cuff circle
    bool revEnd[3][2];   // seam fiber reversal at end 0 / end 1
};

RefLayout referenceLayout() {
    static const RefLayout cached = [] {
        RefLayout r{};
        auto model = curves::buildPantsModel(curves::solvePants(4, 4, 4));
        for (int s = 0; s < 3; ++s) {
            std::vector<int> fams;
            for (const auto& pt : model.circle[s])
                if (fams.empty() || fams.back() != pt.family) fams.push_back(pt.family);
            check(fams.size() == 2, "reference layout: cuff must see two seam families");
            r.famAt[s][0] = fams[0];
            r.famAt[s][1] = fams[1];
        }
        for (int f = 0; f < 3; ++f) {
            int sa = kSlotsOfFam[f][0];
            std::vector<curves::Coord> ia;
            for (curves::Coord i = 0; i < (curves::Coord)model.circle[sa].size(); ++i)
                if (model.circle[sa][(size_t)i].family == f) ia.push_back(i);
            check(ia.size() == 2, "reference layout: family block of width two expected");
            auto [sb0, q0] = model.partner(sa, ia[0]);
            auto [sb1, q1] = model.partner(sa, ia[1]);
            check(sb0 == kSlotsOfFam[f][1] && sb1 == sb0,
                  "reference layout: partner slot mismatch");
            r.revEnd[f][0] = false;
            // the attach fiber lists block strands from the radially outer
            // side; the far end is co-aligned exactly when partners ascend
            r.revEnd[f][1] = (q0 > q1);
        }
        return r;
    }();
    return cached;
}

int seamBranchId(int p, int fam) { return 3 * p + fam; }
int arcBranchId(int nPants, int k, int j) { return 3 * nPants + 4 * k + j; }

// side endpoint index for the boundary-walk pairing
int epIndex(int branch, int end, int side) { return (branch * 2 + end) * 2 + side; }

}  // namespace

PortRef Track::portOf(int branch, int end) const {
    for (int s = 0; s < (int)switches.size(); ++s) {
        const Switch& sw = switches[(size_t)s];
        if (sw.merged == BranchEnd{branch, end}) return {s, 0};
        if (sw.first == BranchEnd{branch, end}) return {s, 1};
        if (sw.second == BranchEnd{branch, end}) return {s, 2};
    }
    return {};
}

void Track::validate() const {
    std::vector<int> plugged((size_t)numBranches() * 2, 0);
    auto touch = [&](const BranchEnd& be) {
        check(be.branch >= 0 && be.branch < numBranches(), "track: dangling branch end");
        check(be.end == 0 || be.end == 1, "track: bad end index");
        plugged[(size_t)(be.branch * 2 + be.end)]++;
    };
    for (const Switch& sw : switches) {
        touch(sw.merged);
        touch(sw.first);
        touch(sw.second);
    }
    for (int v : plugged) check(v == 1, "track: every branch end must plug into exactly one switch port");
    for (const auto& cyc : exceptional)
        for (int b : cyc)
            check(b >= 0 && b < numBranches(), "track: exceptional fiber names unknown branch");
}

std::vector<RegionWalk> Track::boundaryWalks() const {
    // endpoints of branch boundary sides, paired smoothly or across a cusp
    int n = numBranches() * 4;
    std::vector<int> mate((size_t)n, -1);
    std::vector<char> cusp((size_t)n, 0);
    auto localSide = [&](const BranchEnd& be, bool rev, int fiberSide) {
        return epIndex(be.branch, be.end, rev ? 1 - fiberSide : fiberSide);
    };
    auto tie = [&](int a, int b, bool isCusp) {
        check(mate[(size_t)a] == -1 && mate[(size_t)b] == -1,
              "track: boundary side paired twice");
        mate[(size_t)a] = b;
        mate[(size_t)b] = a;
        if (isCusp) cusp[(size_t)a] = cusp[(size_t)b] = 1;
    };
    for (const Switch& sw : switches) {
        tie(localSide(sw.merged, sw.revM, 0), localSide(sw.first, sw.rev1, 0), false);
        tie(localSide(sw.merged, sw.revM, 1), localSide(sw.second, sw.rev2, 1), false);
        tie(localSide(sw.first, sw.rev1, 1), localSide(sw.second, sw.rev2, 0), true);
    }
    std::vector<RegionWalk> out;
    std::vector<char> seen((size_t)n, 0);
    for (int start = 0; start < n; ++start) {
        if (seen[(size_t)start]) continue;
        RegionWalk w;
        int at = start;
        do {
            seen[(size_t)at] = 1;
            // cross the branch to the other end, same side
            int branch = at / 4, rest = at % 4, end = rest / 2, side = rest % 2;
            int other = epIndex(branch, 1 - end, side);
            seen[(size_t)other] = 1;
            w.sides++;
            check(mate[(size_t)other] >= 0, "track: open boundary side");
            if (cusp[(size_t)other]) w.cusps++;
            at = mate[(size_t)other];
        } while (at != start);
        out.push_back(w);
    }
    return out;
}

long long Track::eLength() const {
    long long total = 0;
    for (const Branch& b : branches) total += b.omega;
    return total;
}

long long Track::eLengthFromWords(const surface::CellComplex& cx) const {
    long long total = 0;
    for (const Branch& b : branches) {
        if (b.word.empty()) {
            total += b.coreInterior + 2;
            continue;
        }
        long long interior = 0;
        for (int e : b.word) {
            check(e >= 0 && e < (int)cx.edges().size(), "track word names unknown edge");
            if (cx.edges()[(size_t)e].kind == surface::EdgeKind::Core) interior++;
        }
        total += interior + 2;
    }
    return total;
}

// ---------------------------------------------------------------------------

Track buildCompleteFatTrackSigned(const PantsDecomposition& pd,
                                  const std::vector<int>& collarSign) {
    require((int)collarSign.size() == pd.numCurves(),
            "collar sign vector must have one entry per decomposing curve");
    for (int s : collarSign) require(s == 1 || s == -1, "collar signs must be +1 or -1");

    Track t;
    t.genus = pd.genus();
    t.collarSign = collarSign;
    int nP = pd.numPants(), nC = pd.numCurves();
    RefLayout R = referenceLayout();
    surface::CellComplex cx(pd);

    t.branches.resize((size_t)(3 * nP + 4 * nC));
    for (int p = 0; p < nP; ++p)
        for (int f = 0; f < 3; ++f) {
            Branch& b = t.branches[(size_t)seamBranchId(p, f)];
            b.role = Branch::Role::Seam;
            b.pants = p;
            b.seamPair = f;
            b.omega = 2;
            b.coreInterior = 0;
            int s1 = kSlotsOfFam[f][0], s2 = kSlotsOfFam[f][1];
            b.word = {cx.arcEdge(p, s1, arcSideOfSlot(s1)), cx.arcEdge(p, s2, arcSideOfSlot(s2))};
        }
    for (int k = 0; k < nC; ++k)
        for (int j = 0; j < 4; ++j) {
            Branch& b = t.branches[(size_t)arcBranchId(nP, k, j)];
            b.role = Branch::Role::CollarArc;
            b.collar = k;
            b.arcIdx = j;
            b.omega = 2;
            b.coreInterior = 0;
            b.word = {cx.verticalEdge(k, j)};
        }

    auto seamEndAt = [&](int p, int fam, int slot) {
        return slot == kSlotsOfFam[fam][0] ? 0 : 1;
    };

    t.switches.resize((size_t)(4 * nC));
    for (int k = 0; k < nC; ++k) {
        const surface::Gluing& g = pd.gluing(k);
        int pA = g.a.pants, sA = g.a.slot, pB = g.b.pants, sB = g.b.slot;
        int famA0 = R.famAt[sA][0], famA1 = R.famAt[sA][1];
        int famB0 = R.famAt[sB][0], famB1 = R.famAt[sB][1];
        int eA0 = seamEndAt(pA, famA0, sA), eA1 = seamEndAt(pA, famA1, sA);
        int eB0 = seamEndAt(pB, famB0, sB), eB1 = seamEndAt(pB, famB1, sB);
        auto arc = [&](int j) { return arcBranchId(nP, k, j); };

        Switch& a0 = t.switches[(size_t)(4 * k + 0)];
        a0.merged = {arc(0), 0};
        a0.first = {seamBranchId(pA, famA0), eA0};
        a0.second = {arc(3), 1};
        a0.rev1 = R.revEnd[famA0][eA0];
        a0.onCurve = k;

        Switch& b0 = t.switches[(size_t)(4 * k + 1)];
        b0.merged = {arc(0), 1};
        b0.first = {arc(1), 0};
        b0.second = {seamBranchId(pB, famB0), eB0};
        b0.rev2 = R.revEnd[famB0][eB0];
        b0.onCurve = k;

        Switch& a1 = t.switches[(size_t)(4 * k + 2)];
        a1.merged = {arc(2), 0};
        a1.first = {seamBranchId(pA, famA1), eA1};
        a1.second = {arc(1), 1};
        a1.rev1 = R.revEnd[famA1][eA1];
        a1.onCurve = k;

        Switch& b1 = t.switches[(size_t)(4 * k + 3)];
        b1.merged = {arc(2), 1};
        b1.first = {arc(3), 0};
        b1.second = {seamBranchId(pB, famB1), eB1};
        b1.rev2 = R.revEnd[famB1][eB1];
        b1.onCurve = k;

        t.exceptional.push_back({arc(0), arc(1), arc(2), arc(3)});
    }

    t.validate();
    auto walks = t.boundaryWalks();
    bool allTriangles = (int)walks.size() == 4 * pd.genus() - 4;
    for (const RegionWalk& w : walks) allTriangles = allTriangles && w.cusps == 3;
    check(allTriangles, "complete fat track construction: complement is not all triangles");
    t.flagFat = true;
    t.flagMaximal = true;
    t.flagComplete = true;
    return t;
}

Track buildCompleteFatTrack(const PantsDecomposition& pd, const NormalCurve& d) {
    require(d.genus() == pd.genus(), "curve genus does not match the decomposition");
    if (d.isEmpty()) throw Refusal("empty multicurve is not carried by any track");
    auto wr = d.waves();
    if (!wr.sites.empty()) {
        std::ostringstream os;
        os << "curve has a wave at pants " << wr.sites[0].pants << " side "
           << wr.sites[0].side << "; no complete fat track carries it";
        throw Refusal(os.str());
    }
    bool anyCrossing = false;
    for (int k = 0; k < pd.numCurves(); ++k) anyCrossing = anyCrossing || d.m(k) > 0;
    if (!anyCrossing)
        throw Refusal("curve is parallel to the decomposing system; build a track from a transverse curve");

    std::vector<int> signs((size_t)pd.numCurves(), 1);
    for (int k = 0; k < pd.numCurves(); ++k) signs[(size_t)k] = d.t(k) >= 0 ? 1 : -1;
    Track t = buildCompleteFatTrackSigned(pd, signs);
    CarryResult cr = carries(t, d);
    check(cr.carried(), "freshly built track fails to carry its defining curve");
    return t;
}

// ---------------------------------------------------------------------------

bool CarryingWitness::allPositive() const {
    for (Coord w : weights)
        if (w < 1) return false;
    return !weights.empty();
}

CarryResult carries(const Track& t, const NormalCurve& c) {
    require(t.genus == c.genus(), "track and curve live on different surfaces");
    CarryResult out;
    auto wr = c.waves();
    if (!wr.sites.empty()) {
        CarryDenial d;
        d.kind = CarryDenial::Kind::Wave;
        d.waves = wr;
        d.detail = "curve has a wave; it is not carried by any tight track over the system";
        out.denial = d;
        return out;
    }
    const PantsDecomposition& pd = c.pd();
    int nP = pd.numPants(), nC = pd.numCurves();
    RefLayout R = referenceLayout();

    CarryingWitness w;
    w.target = c.dt();
    w.weights.assign(t.branches.size(), 0);
    w.lambda.assign((size_t)nC, 0);

    for (int p = 0; p < nP; ++p) {
        PantsArcs a = c.arcs(p);
        w.weights[(size_t)seamBranchId(p, 0)] = a.seam01;
        w.weights[(size_t)seamBranchId(p, 1)] = a.seam02;
        w.weights[(size_t)seamBranchId(p, 2)] = a.seam12;
    }
    for (int k = 0; k < nC; ++k) {
        Coord m = c.m(k);
        if (m == 0) continue;
        int s = t.collarSign.empty() ? 1 : t.collarSign[(size_t)k];
        Coord lam = s > 0 ? c.t(k) : (-1 - c.t(k));
        if (lam < 0) {
            CarryDenial d;
            d.kind = CarryDenial::Kind::TwistSign;
            d.collar = k;
            std::ostringstream os;
            os << "twist " << c.t(k) << " at collar " << k
               << " points against the track winding";
            d.detail = os.str();
            out.denial = d;
            return out;
        }
        const surface::Gluing& g = pd.gluing(k);
        PantsArcs aA = c.arcs(g.a.pants), aB = c.arcs(g.b.pants);
        auto cnt = [&](const PantsArcs& a, int fam) {
            return a.seamBetween(kSlotsOfFam[fam][0], kSlotsOfFam[fam][1]);
        };
        Coord cntA0 = cnt(aA, R.famAt[g.a.slot][0]);
        Coord cntA1 = cnt(aA, R.famAt[g.a.slot][1]);
        Coord cntB0 = cnt(aB, R.famAt[g.b.slot][0]);
        Coord cntB1 = cnt(aB, R.famAt[g.b.slot][1]);
        check(cntA0 + cntA1 == m && cntB0 + cntB1 == m,
              "collar crossing counts disagree with the pants solutions");
        Coord v[4];
        v[0] = cntA0;
        v[1] = v[0] - cntB0;
        v[2] = v[1] + cntA1;
        v[3] = v[2] - cntB1;
        check(v[3] == 0, "collar arc weight propagation must close up");
        Coord mn = std::min({v[0], v[1], v[2], v[3]});
        for (int j = 0; j < 4; ++j)
            w.weights[(size_t)arcBranchId(nP, k, j)] = v[j] - mn + lam;
        w.lambda[(size_t)k] = lam;
    }

    for (const Switch& sw : t.switches) {
        Coord wm = w.weights[(size_t)sw.merged.branch];
        Coord w1 = w.weights[(size_t)sw.first.branch];
        Coord w2 = w.weights[(size_t)sw.second.branch];
        check(wm == w1 + w2, "carried weights violate a switch balance");
    }
    out.witness = std::move(w);
    return out;
}

bool covers(const Track& t, const CarryingWitness& w) {
    require(w.weights.size() == t.branches.size(), "witness does not match the track");
    for (Coord x : w.weights)
        if (x < 1) return false;
    return true;
}

CarryingWitness carryTightenedCurve(const Track& t, const NormalCurve& c,
                                    const std::vector<int>& betaBranches) {
    require(!t.branches.empty(), "empty track");
    std::vector<char> hit(t.branches.size(), 0);
    for (int b : betaBranches) {
        require(b >= 0 && b < t.numBranches(), "covering arc names unknown branch");
        hit[(size_t)b] = 1;
    }
    for (char h : hit)
        if (!h) throw Refusal("supplied arc does not cover the track");
    CarryResult r = carries(t, c);
    check(r.carried(),
          "covering arc supplied but the curve is not carried: " +
              (r.denial ? r.denial->detail : std::string("unknown")));
    return *r.witness;
}

TightReport isTightTrack(const Track& t, const PantsDecomposition& pd) {
    TightReport rep;
    int nC = pd.numCurves();
    // (1) the system meets the track in fibers only: every collar is covered
    // by a cyclic exceptional fiber of collar arcs and no branch crosses a
    // core in its interior except where recorded.
    std::vector<char> covered((size_t)nC, 0);
    bool arcsClean = true;
    for (const auto& cyc : t.exceptional) {
        if (cyc.empty()) continue;
        int k = -1;
        bool cyclic = true;
        for (int b : cyc) {
            const Branch& br = t.branches[(size_t)b];
            if (br.role != Branch::Role::CollarArc) cyclic = false;
            if (k == -1) k = br.collar;
            if (br.collar != k) cyclic = false;
        }
        if (cyclic && k >= 0 && (int)cyc.size() == 4) covered[(size_t)k] = 1;
    }
    for (char cvd : covered) arcsClean = arcsClean && cvd;
    rep.fibersOnCores = arcsClean;
    // (3) every cusp (switch) sits on a core circle
    rep.cuspsOnCores = !t.switches.empty();
    for (const Switch& sw : t.switches)
        rep.cuspsOnCores = rep.cuspsOnCores && sw.onCurve >= 0 && sw.onCurve < nC;
    // (2) complementary segments join distinct sides: with every core covered
    // there are no complementary segments on the system, and each seam branch
    // runs between two honest switch attachments.
    bool seamsFine = true;
    for (const Branch& b : t.branches)
        if (b.role == Branch::Role::Seam) seamsFine = seamsFine && b.coreInterior == 0;
    rep.segmentsJoinSides = arcsClean && seamsFine;
    return rep;
}

long long trackELength(const Track& t, const surface::CellComplex& cx) {
    require(!t.branches.empty(), "empty track has no length");
    long long direct = t.eLength();
    long long fromWords = t.eLengthFromWords(cx);
    check(direct == fromWords,
          "track length disagreement between branch records and embedding words");
    return direct;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string joinInts(const std::vector<int>& v, char sep) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        os << v[i];
    }
    return os.str();
}

std::vector<int> splitInts(const std::string& s, char sep, int line) {
    std::vector<int> out;
    if (s.empty() || s == "-") return out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) {
        try {
            out.push_back(std::stoi(tok));
        } catch (...) {
            throw ParseError(line, "bad integer list entry '" + tok + "'");
        }
    }
    return out;
}

std::map<std::string, std::string> kvTokens(std::istringstream& is) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

}  // namespace

void save(const Track& t, std::ostream& out) {
    out << "format=1\n";
    out << "track genus=" << t.genus << " branches=" << t.numBranches()
        << " switches=" << t.numSwitches() << "\n";
    if (!t.collarSign.empty()) {
        out << "signs ";
        for (size_t i = 0; i < t.collarSign.size(); ++i)
            out << (i ? "," : "") << t.collarSign[i];
        out << "\n";
    }
    for (int i = 0; i < t.numBranches(); ++i) {
        const Branch& b = t.branches[(size_t)i];
        out << "branch " << i << " word=" << (b.word.empty() ? "-" : joinInts(b.word, '.'));
        switch (b.role) {
            case Branch::Role::Seam:
                out << " role=seam loc=" << b.pants << "," << b.seamPair;
                break;
            case Branch::Role::CollarArc:
                out << " role=arc loc=" << b.collar << "," << b.arcIdx;
                break;
            case Branch::Role::Derived:
                out << " role=derived loc=-1,-1";
                break;
        }
        out << " omega=" << b.omega << " coreint=" << b.coreInterior << "\n";
    }
    for (int i = 0; i < t.numSwitches(); ++i) {
        const Switch& s = t.switches[(size_t)i];
        out << "switch " << i << " left=" << s.merged.branch << " right=" << s.first.branch
            << "," << s.second.branch << " ends=" << s.merged.end << "," << s.first.end << ","
            << s.second.end << " rev=" << (int)s.revM << (int)s.rev1 << (int)s.rev2
            << " core=" << s.onCurve << "\n";
    }
    for (const auto& cyc : t.exceptional)
        out << "exceptional cycle " << joinInts(cyc, ',') << "\n";
    out << "flags fat=" << (int)t.flagFat << " maximal=" << (int)t.flagMaximal
        << " complete=" << (int)t.flagComplete << "\n";
}

Track load(const PantsDecomposition& pd, std::istream& in) {
    Track t;
    std::string line;
    int lineNo = 0;
    bool sawFormat = false, sawHeader = false;
    int nBranches = -1, nSwitches = -1;
    while (std::getline(in, line)) {
        lineNo++;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string head;
        is >> head;
        if (!sawFormat) {
            require(head == "format=1", "track file must start with format=1");
            sawFormat = true;
            continue;
        }
        if (head == "track") {
            auto kv = kvTokens(is);
            require(kv.count("genus"), "track header needs genus=");
            t.genus = std::stoi(kv["genus"]);
            require(t.genus == pd.genus(), "track genus does not match the decomposition");
            if (kv.count("branches")) nBranches = std::stoi(kv["branches"]);
            if (kv.count("switches")) nSwitches = std::stoi(kv["switches"]);
            if (nBranches >= 0) t.branches.resize((size_t)nBranches);
            if (nSwitches >= 0) t.switches.resize((size_t)nSwitches);
            sawHeader = true;
        } else if (head == "signs") {
            std::string rest;
            is >> rest;
            t.collarSign = splitInts(rest, ',', lineNo);
        } else if (head == "branch") {
            require(sawHeader, "branch line before track header");
            int id = -1;
            is >> id;
            if (id < 0 || (nBranches >= 0 && id >= nBranches))
                throw ParseError(lineNo, "branch id out of range");
            if (id >= (int)t.branches.size()) t.branches.resize((size_t)id + 1);
            Branch& b = t.branches[(size_t)id];
            auto kv = kvTokens(is);
            require(kv.count("word"), "branch line needs word=");
            b.word = splitInts(kv["word"], '.', lineNo);
            std::string role = kv.count("role") ? kv["role"] : "derived";
            auto loc = kv.count("loc") ? splitInts(kv["loc"], ',', lineNo) : std::vector<int>{-1, -1};
            if (loc.size() != 2) throw ParseError(lineNo, "loc needs two entries");
            if (role == "seam") {
                b.role = Branch::Role::Seam;
                b.pants = loc[0];
                b.seamPair = loc[1];
            } else if (role == "arc") {
                b.role = Branch::Role::CollarArc;
                b.collar = loc[0];
                b.arcIdx = loc[1];
            } else {
                b.role = Branch::Role::Derived;
            }
            if (kv.count("omega")) b.omega = std::stoll(kv["omega"]);
            if (kv.count("coreint")) b.coreInterior = std::stoll(kv["coreint"]);
        } else if (head == "switch") {
            require(sawHeader, "switch line before track header");
            int id = -1;
            is >> id;
            if (id < 0 || (nSwitches >= 0 && id >= nSwitches))
                throw ParseError(lineNo, "switch id out of range");
            if (id >= (int)t.switches.size()) t.switches.resize((size_t)id + 1);
            Switch& s = t.switches[(size_t)id];
            auto kv = kvTokens(is);
            require(kv.count("left") && kv.count("right") && kv.count("ends"),
                    "switch line needs left=, right=, ends=");
            auto left = splitInts(kv["left"], ',', lineNo);
            auto right = splitInts(kv["right"], ',', lineNo);
            auto ends = splitInts(kv["ends"], ',', lineNo);
            if (left.size() != 1 || right.size() != 2 || ends.size() != 3)
                throw ParseError(lineNo, "switch line arity mismatch");
            s.merged = {left[0], ends[0]};
            s.first = {right[0], ends[1]};
            s.second = {right[1], ends[2]};
            if (kv.count("rev")) {
                const std::string& r = kv["rev"];
                if (r.size() != 3) throw ParseError(lineNo, "rev= needs three bits");
                s.revM = r[0] == '1';
                s.rev1 = r[1] == '1';
                s.rev2 = r[2] == '1';
            }
            if (kv.count("core")) s.onCurve = std::stoi(kv["core"]);
        } else if (head == "exceptional") {
            std::string kind, rest;
            is >> kind >> rest;
            require(kind == "cycle" || kind == "interval", "exceptional kind must be cycle or interval");
            if (kind == "cycle") t.exceptional.push_back(splitInts(rest, ',', lineNo));
        } else if (head == "flags") {
            auto kv = kvTokens(is);
            if (kv.count("fat")) t.flagFat = kv["fat"] == "1";
            if (kv.count("maximal")) t.flagMaximal = kv["maximal"] == "1";
            if (kv.count("complete")) t.flagComplete = kv["complete"] == "1";
        } else {
            throw ParseError(lineNo, "unknown track line '" + head + "'");
        }
    }
    require(sawFormat && sawHeader, "truncated track file");
    t.validate();
    return t;
}

}  // namespace cf::tracks
