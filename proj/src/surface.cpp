#include "curveforge/surface.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

#include "curveforge/errors.hpp"

namespace cf::surface {

// ---------------------------------------------------------------------------
// PantsDecomposition

PantsDecomposition PantsDecomposition::standard(int genus) {
    require(genus >= 2, "genus must be at least 2, got " + std::to_string(genus));
    PantsDecomposition pd;
    pd.genus_ = genus;
    // Linear chain: an end handle, g-2 middle handles (two pants each), an
    // end handle.  Curves 0 and 3g-4 are the end-handle curves glued to the
    // same pants twice.
    pd.pants_.push_back({0, 0, 1});
    for (int h = 1; h <= genus - 2; ++h) {
        pd.pants_.push_back({3 * h - 2, 3 * h - 1, 3 * h});
        pd.pants_.push_back({3 * h + 1, 3 * h - 1, 3 * h});
    }
    pd.pants_.push_back({3 * genus - 4, 3 * genus - 4, 3 * genus - 5});

    pd.gluings_.assign(pd.numCurves(), Gluing{});
    for (int k = 0; k < pd.numCurves(); ++k) pd.gluings_[k].curve = k;
    for (int p = 0; p < pd.numPants(); ++p)
        for (int s = 0; s < 3; ++s) {
            Gluing& g = pd.gluings_.at(pd.pants_[p][s]);
            if (g.a.pants < 0) g.a = {p, s};
            else if (g.b.pants < 0) g.b = {p, s};
            else throw Alarm("curve glued more than twice in standard decomposition");
        }
    pd.validate();
    return pd;
}

Slot PantsDecomposition::oppositeSlot(const Slot& s) const {
    const Gluing& g = gluings_.at(curveAt(s.pants, s.slot));
    return (g.a == s) ? g.b : g.a;
}

void PantsDecomposition::validate() const {
    require(genus_ >= 2, "invariant violated: genus must be >= 2");
    require((int)pants_.size() == numPants(),
            "invariant violated: expected " + std::to_string(numPants()) + " pants, found " +
                std::to_string(pants_.size()));
    require((int)gluings_.size() == numCurves(),
            "invariant violated: expected " + std::to_string(numCurves()) + " curves, found " +
                std::to_string(gluings_.size()));
    // Every curve appears in exactly two slots and the gluing matches the table.
    std::vector<int> seen(numCurves(), 0);
    for (int p = 0; p < numPants(); ++p)
        for (int s = 0; s < 3; ++s) {
            int k = pants_[p][s];
            require(k >= 0 && k < numCurves(), "invariant violated: slot names unknown curve");
            ++seen[k];
        }
    for (int k = 0; k < numCurves(); ++k) {
        require(seen[k] == 2, "invariant violated: curve " + std::to_string(k) +
                                  " appears in " + std::to_string(seen[k]) + " slots, not 2");
        const Gluing& g = gluings_[k];
        require(g.curve >= 0 && g.a.pants >= 0 && g.b.pants >= 0,
                "invariant violated: curve " + std::to_string(k) + " has an unglued slot");
        require(g.curve == k, "invariant violated: gluing record mislabeled");
        require(!(g.a == g.b), "invariant violated: slot glued to itself");
        for (const Slot* sl : {&g.a, &g.b}) {
            require(sl->pants >= 0 && sl->pants < numPants() && sl->slot >= 0 && sl->slot < 3,
                    "invariant violated: gluing names unknown slot");
            require(pants_[sl->pants][sl->slot] == k,
                    "invariant violated: gluing disagrees with pants table for curve " +
                        std::to_string(k));
        }
    }
    // Connectivity of the gluing graph.
    std::vector<char> vis(numPants(), 0);
    std::queue<int> q;
    q.push(0);
    vis[0] = 1;
    while (!q.empty()) {
        int p = q.front();
        q.pop();
        for (int s = 0; s < 3; ++s) {
            Slot other = oppositeSlot({p, s});
            if (!vis[other.pants]) {
                vis[other.pants] = 1;
                q.push(other.pants);
            }
        }
    }
    require(std::all_of(vis.begin(), vis.end(), [](char c) { return c; }),
            "invariant violated: gluing graph is not connected");
}

bool PantsDecomposition::operator==(const PantsDecomposition& o) const {
    if (genus_ != o.genus_ || pants_ != o.pants_) return false;
    for (int k = 0; k < numCurves(); ++k) {
        const Gluing &g = gluings_[k], &h = o.gluings_[k];
        if (!(g.a == h.a) || !(g.b == h.b) || g.orientPlus != h.orientPlus) return false;
    }
    return true;
}

void PantsDecomposition::save(std::ostream& out) const {
    out << "format=1\n";
    out << "surface genus=" << genus_ << "\n";
    for (int p = 0; p < numPants(); ++p)
        out << "pants " << p << " " << pants_[p][0] << " " << pants_[p][1] << " " << pants_[p][2]
            << "\n";
    for (const Gluing& g : gluings_)
        out << "glue " << g.curve << " " << g.a.pants << "." << g.a.slot << " " << g.b.pants << "."
            << g.b.slot << " orient=" << (g.orientPlus ? "+" : "-") << "\n";
}

namespace {

Slot parseSlot(const std::string& tok, int line) {
    auto dot = tok.find('.');
    if (dot == std::string::npos) throw ParseError(line, "expected pants.slot, got '" + tok + "'");
    try {
        Slot s{std::stoi(tok.substr(0, dot)), std::stoi(tok.substr(dot + 1))};
        return s;
    } catch (const std::exception&) {
        throw ParseError(line, "bad slot token '" + tok + "'");
    }
}

}  // namespace

PantsDecomposition PantsDecomposition::load(std::istream& in) {
    PantsDecomposition pd;
    std::string line;
    int lineno = 0;
    bool sawFormat = false, sawHeader = false;
    std::map<int, std::array<int, 3>> pantsRows;
    std::map<int, Gluing> glueRows;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (!sawFormat) {
            if (tok != "format=1")
                throw ParseError(lineno, "expected version line 'format=1', got '" + tok + "'");
            sawFormat = true;
            continue;
        }
        if (tok == "surface") {
            std::string g;
            if (!(ss >> g) || g.rfind("genus=", 0) != 0)
                throw ParseError(lineno, "expected 'surface genus=<g>'");
            try {
                pd.genus_ = std::stoi(g.substr(6));
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad genus value");
            }
            sawHeader = true;
        } else if (tok == "pants") {
            if (!sawHeader) throw ParseError(lineno, "pants line before surface header");
            int id;
            std::array<int, 3> row{};
            if (!(ss >> id >> row[0] >> row[1] >> row[2]))
                throw ParseError(lineno, "expected 'pants <id> <c> <c> <c>'");
            if (pantsRows.count(id)) throw ParseError(lineno, "duplicate pants id");
            pantsRows[id] = row;
        } else if (tok == "glue") {
            if (!sawHeader) throw ParseError(lineno, "glue line before surface header");
            int k;
            std::string sa, sb, orient;
            if (!(ss >> k >> sa >> sb >> orient))
                throw ParseError(lineno, "expected 'glue <curve> <p.s> <p.s> orient=<+|->'");
            Gluing g;
            g.curve = k;
            g.a = parseSlot(sa, lineno);
            g.b = parseSlot(sb, lineno);
            if (orient == "orient=+") g.orientPlus = true;
            else if (orient == "orient=-") g.orientPlus = false;
            else throw ParseError(lineno, "bad orient token '" + orient + "'");
            if (glueRows.count(k)) throw ParseError(lineno, "duplicate glue line for curve");
            glueRows[k] = g;
        } else {
            throw ParseError(lineno, "unknown directive '" + tok + "'");
        }
    }
    if (!sawHeader) throw ParseError(lineno, "missing surface header");
    require(pd.genus_ >= 2, "invariant violated: genus must be >= 2");
    pd.pants_.assign(pd.numPants(), {-1, -1, -1});
    for (auto& [id, row] : pantsRows) {
        require(id >= 0 && id < pd.numPants(),
                "invariant violated: pants id " + std::to_string(id) + " out of range (expected " +
                    std::to_string(pd.numPants()) + " pants for genus " +
                    std::to_string(pd.genus_) + ")");
        pd.pants_[id] = row;
    }
    for (int p = 0; p < pd.numPants(); ++p)
        require(pd.pants_[p][0] >= 0, "invariant violated: missing pants " + std::to_string(p));
    pd.gluings_.assign(pd.numCurves(), Gluing{});
    for (auto& [k, g] : glueRows) {
        require(k >= 0 && k < pd.numCurves(),
                "invariant violated: curve id " + std::to_string(k) + " out of range (expected " +
                    std::to_string(pd.numCurves()) + " curves for genus " +
                    std::to_string(pd.genus_) + ")");
        pd.gluings_[k] = g;
    }
    pd.validate();
    return pd;
}

PantsDecomposition PantsDecomposition::loadFile(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open '" + path + "'");
    return load(in);
}

// ---------------------------------------------------------------------------
// CellComplex

CellComplex::CellComplex(const PantsDecomposition& pd) : pd_(&pd) {
    build();
    orientFacesCoherently();
    indexFaces();
}

int CellComplex::pantsVertex(int p, int s, int which) const { return p * 6 + s * 2 + which; }

namespace {
// Edge-count bases are computed from the decomposition sizes; the layout is
//   [seams | boundary arcs | verticals | cores]
struct Bases {
    int seam, arc, vert, core;
};
Bases edgeBases(const PantsDecomposition& pd) {
    Bases b{};
    b.seam = 0;
    b.arc = b.seam + 3 * pd.numPants();
    b.vert = b.arc + 6 * pd.numPants();
    b.core = b.vert + 4 * pd.numCurves();
    return b;
}
}  // namespace

int CellComplex::seamEdge(int p, int pairIdx) const {
    return edgeBases(*pd_).seam + p * 3 + pairIdx;
}

int CellComplex::seamEdgeBetween(int p, int s1, int s2) const {
    if (s1 > s2) std::swap(s1, s2);
    int pairIdx = (s1 == 0) ? (s2 == 1 ? 0 : 1) : 2;
    return seamEdge(p, pairIdx);
}

int CellComplex::arcEdge(int p, int s, int side) const {
    return edgeBases(*pd_).arc + p * 6 + s * 2 + side;
}

int CellComplex::verticalEdge(int k, int which) const {
    return edgeBases(*pd_).vert + k * 4 + which;
}

int CellComplex::coreEdge(int k, int which) const { return edgeBases(*pd_).core + k * 2 + which; }

int CellComplex::hexFace(int p, int side) const { return p * 2 + side; }

int CellComplex::squareFace(int k, int which) const {
    return 2 * pd_->numPants() + k * 4 + which;
}

void CellComplex::build() {
    const PantsDecomposition& pd = *pd_;
    const int nP = pd.numPants(), nC = pd.numCurves();
    vBase_ = 0;
    coreVBase_ = nP * 6;
    numVertices_ = coreVBase_ + nC * 2;
    auto coreVertex = [&](int k, int which) { return coreVBase_ + k * 2 + which; };

    edges_.assign(3 * nP + 6 * nP + 4 * nC + 2 * nC, Edge{});
    // Vertex convention per pants slot s: A = pantsVertex(p,s,0) is the
    // endpoint of the seam to the lower-indexed other slot, B = (p,s,1) the
    // higher.  Seam (s1,s2), s1<s2: connects endpoint-on-s1 to endpoint-on-s2.
    auto endOn = [&](int p, int s, int other) {
        // seam endpoint on slot s of the seam joining s and other
        int lower = -1, higher = -1;
        for (int t = 0; t < 3; ++t)
            if (t != s) (lower < 0 ? lower : higher) = t;
        return pantsVertex(p, s, other == lower ? 0 : 1);
    };

    for (int p = 0; p < nP; ++p) {
        const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (int i = 0; i < 3; ++i) {
            Edge& e = edges_[seamEdge(p, i)];
            e.kind = EdgeKind::Seam;
            e.pants = p;
            e.v0 = endOn(p, pairs[i][0], pairs[i][1]);
            e.v1 = endOn(p, pairs[i][1], pairs[i][0]);
        }
        for (int s = 0; s < 3; ++s) {
            int A = pantsVertex(p, s, 0), B = pantsVertex(p, s, 1);
            Edge& f = edges_[arcEdge(p, s, 0)];
            f.kind = EdgeKind::BoundaryArc;
            f.pants = p;
            f.curve = pd.curveAt(p, s);
            f.v0 = A;
            f.v1 = B;
            Edge& b = edges_[arcEdge(p, s, 1)];
            b.kind = EdgeKind::BoundaryArc;
            b.pants = p;
            b.curve = pd.curveAt(p, s);
            b.v0 = B;
            b.v1 = A;
        }
    }
    for (int k = 0; k < nC; ++k) {
        const Gluing& g = pd.gluing(k);
        int p1 = g.a.pants, s1 = g.a.slot, p2 = g.b.pants, s2 = g.b.slot;
        int A1 = pantsVertex(p1, s1, 0), B1 = pantsVertex(p1, s1, 1);
        int A2 = pantsVertex(p2, s2, 0), B2 = pantsVertex(p2, s2, 1);
        int P2 = g.orientPlus ? A2 : B2;  // partner of A1 across the collar
        int Q2 = g.orientPlus ? B2 : A2;
        int c1 = coreVertex(k, 0), c2 = coreVertex(k, 1);
        auto setEdge = [&](int id, EdgeKind kind, int v0, int v1) {
            edges_[id] = Edge{v0, v1, kind, -1, k};
        };
        setEdge(verticalEdge(k, 0), EdgeKind::Vertical, A1, c1);  // v1 lower half
        setEdge(verticalEdge(k, 1), EdgeKind::Vertical, c1, P2);  // v1 upper half
        setEdge(verticalEdge(k, 2), EdgeKind::Vertical, B1, c2);  // v2 lower half
        setEdge(verticalEdge(k, 3), EdgeKind::Vertical, c2, Q2);  // v2 upper half
        setEdge(coreEdge(k, 0), EdgeKind::Core, c1, c2);          // front half "cu"
        setEdge(coreEdge(k, 1), EdgeKind::Core, c2, c1);          // back half "cv"
    }

    // Faces as closed walks of directed edges.
    faces_.clear();
    auto addFace = [&](FaceKind kind, int owner, std::vector<std::pair<int, bool>> walk) {
        Face f;
        f.kind = kind;
        f.owner = owner;
        for (auto& [e, fwd] : walk) {
            f.edges.push_back(e);
            f.forward.push_back(fwd);
        }
        faces_.push_back(std::move(f));
    };
    // Arc naming: side 0 ("u") runs A->B, side 1 ("w") runs B->A; the
    // boundary cycle of a slot circle with the pants on its left is u,w.
    // All walks below are counterclockwise for one global orientation of the
    // surface, so every edge is traversed once forward and once backward.
    for (int p = 0; p < nP; ++p) {
        // upper ("front") hexagon
        addFace(FaceKind::Hexagon, p,
                {{arcEdge(p, 0, 1), true},   // B0 -> A0
                 {seamEdge(p, 0), true},     // A0 -> A1
                 {arcEdge(p, 1, 0), true},   // A1 -> B1
                 {seamEdge(p, 2), true},     // B1 -> B2
                 {arcEdge(p, 2, 1), true},   // B2 -> A2
                 {seamEdge(p, 1), false}});  // A2 -> B0
        // lower ("back") hexagon
        addFace(FaceKind::Hexagon, p,
                {{arcEdge(p, 0, 0), true},   // A0 -> B0
                 {seamEdge(p, 1), true},     // B0 -> A2
                 {arcEdge(p, 2, 0), true},   // A2 -> B2
                 {seamEdge(p, 2), false},    // B2 -> B1
                 {arcEdge(p, 1, 1), true},   // B1 -> A1
                 {seamEdge(p, 0), false}});  // A1 -> A0
    }
    for (int k = 0; k < nC; ++k) {
        const Gluing& g = pd.gluing(k);
        int p1 = g.a.pants, s1 = g.a.slot, p2 = g.b.pants, s2 = g.b.slot;
        int u1 = arcEdge(p1, s1, 0), w1 = arcEdge(p1, s1, 1);
        int u2 = arcEdge(p2, s2, 0), w2 = arcEdge(p2, s2, 1);
        int v1a = verticalEdge(k, 0), v1b = verticalEdge(k, 1);
        int v2a = verticalEdge(k, 2), v2b = verticalEdge(k, 3);
        int cu = coreEdge(k, 0), cv = coreEdge(k, 1);
        // The collar traverses both boundary circles against their pants
        // orientation; which far-side arc closes each square depends on the
        // marked orientation of the gluing.
        int Ta = g.orientPlus ? u2 : w2;  // Q2 -> P2 when reversed
        int Tb = g.orientPlus ? w2 : u2;  // P2 -> Q2 when reversed
        addFace(FaceKind::Square, k, {{w1, false}, {v2a, true}, {cu, false}, {v1a, false}});
        addFace(FaceKind::Square, k, {{cu, true}, {v2b, true}, {Ta, false}, {v1b, false}});
        addFace(FaceKind::Square, k, {{u1, false}, {v1a, true}, {cv, false}, {v2a, false}});
        addFace(FaceKind::Square, k, {{cv, true}, {v1b, true}, {Tb, false}, {v2b, false}});
    }

    // Validate that every face walk closes head-to-tail.
    for (const Face& f : faces_) {
        for (size_t i = 0; i < f.edges.size(); ++i) {
            const Edge& e = edges_[f.edges[i]];
            const Edge& n = edges_[f.edges[(i + 1) % f.edges.size()]];
            int head = f.forward[i] ? e.v1 : e.v0;
            int tail = f.forward[(i + 1) % f.edges.size()] ? n.v0 : n.v1;
            check(head == tail, "cell complex face walk does not close");
        }
    }
}

void CellComplex::orientFacesCoherently() {
    // Flip whole face cycles so that every edge is traversed exactly once
    // forward and once backward across all faces (possible since the surface
    // is orientable).
    std::vector<std::vector<std::pair<int, int>>> uses(edges_.size());  // (face, entry)
    for (int f = 0; f < (int)faces_.size(); ++f)
        for (int i = 0; i < (int)faces_[f].edges.size(); ++i)
            uses[faces_[f].edges[i]].push_back({f, i});
    for (auto& u : uses) check(u.size() == 2, "edge not used exactly twice by faces");

    std::vector<int> state(faces_.size(), 0);  // 0 unseen, 1 keep, 2 flipped
    std::queue<int> q;
    for (int start = 0; start < (int)faces_.size(); ++start) {
        if (state[start]) continue;
        state[start] = 1;
        q.push(start);
        while (!q.empty()) {
            int f = q.front();
            q.pop();
            bool fFlip = state[f] == 2;
            for (int i = 0; i < (int)faces_[f].edges.size(); ++i) {
                int e = faces_[f].edges[i];
                auto [g1, j1] = uses[e][0];
                auto [g2, j2] = uses[e][1];
                int g = (g1 == f && j1 == i) ? g2 : g1;
                int j = (g1 == f && j1 == i) ? j2 : j1;
                bool mine = faces_[f].forward[i] != fFlip;
                bool needGFlip = (faces_[g].forward[j] == mine);
                int want = needGFlip ? 2 : 1;
                if (!state[g]) {
                    state[g] = want;
                    q.push(g);
                } else {
                    check(state[g] == want || g == f, "cell complex is not orientable");
                }
            }
        }
    }
    for (int f = 0; f < (int)faces_.size(); ++f) {
        if (state[f] != 2) continue;
        Face& fc = faces_[f];
        std::reverse(fc.edges.begin(), fc.edges.end());
        std::reverse(fc.forward.begin(), fc.forward.end());
        for (size_t i = 0; i < fc.forward.size(); ++i) fc.forward[i] = !fc.forward[i];
    }
}

void CellComplex::indexFaces() {
    faceOfEdge_.assign(edges_.size(), {-1, -1});
    for (int f = 0; f < (int)faces_.size(); ++f)
        for (int i = 0; i < (int)faces_[f].edges.size(); ++i) {
            int e = faces_[f].edges[i];
            int slot = faces_[f].forward[i] ? 0 : 1;
            check(faceOfEdge_[e][slot] == -1, "incoherent face orientations");
            faceOfEdge_[e][slot] = f;
        }
    for (auto& pr : faceOfEdge_) check(pr[0] >= 0 && pr[1] >= 0, "edge missing a face side");
}

int CellComplex::faceLeftOf(int edge, bool forward) const {
    return faceOfEdge_.at(edge)[forward ? 0 : 1];
}

int CellComplex::cyclePosition(int face, int edge) const {
    const Face& f = faces_.at(face);
    for (int i = 0; i < (int)f.edges.size(); ++i)
        if (f.edges[i] == edge) return i;
    return -1;
}

int CellComplex::eulerCharacteristic() const {
    return numVertices_ - (int)edges_.size() + (int)faces_.size();
}

}  // namespace cf::surface
