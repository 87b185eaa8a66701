#pragma once

// Combinatorial model of a closed orientable genus-g surface (g >= 2) cut
// along a system of 3g-3 disjoint curves into 2g-2 pairs of pants, plus the
// polygonal cell structure induced by a fixed seam triple in every pants and
// an annular collar around every decomposing curve.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cf::surface {

// A boundary slot of a pants: (pants index, slot index 0..2).
struct Slot {
    int pants = -1;
    int slot = -1;
    bool operator==(const Slot& o) const { return pants == o.pants && slot == o.slot; }
};

// One decomposing curve together with the two pants slots glued along it.
struct Gluing {
    int curve = -1;
    Slot a, b;
    bool orientPlus = true;  // marked orientation of the identification
};

class PantsDecomposition {
public:
    // The fixed "linear chain" decomposition for the given genus.
    static PantsDecomposition standard(int genus);

    static PantsDecomposition load(std::istream& in);
    static PantsDecomposition loadFile(const std::string& path);
    void save(std::ostream& out) const;

    int genus() const { return genus_; }
    int numCurves() const { return 3 * genus_ - 3; }
    int numPants() const { return 2 * genus_ - 2; }

    // curveAt(p, s): index of the curve glued at slot s of pants p.
    int curveAt(int p, int s) const { return pants_.at(p)[s]; }
    const Gluing& gluing(int curve) const { return gluings_.at(curve); }

    // The slot on the far side of the given slot's curve.
    Slot oppositeSlot(const Slot& s) const;

    // Throws UsageError naming the violated invariant.
    void validate() const;

    bool operator==(const PantsDecomposition& o) const;

private:
    PantsDecomposition() = default;
    int genus_ = 0;
    std::vector<std::array<int, 3>> pants_;  // pants_[p][s] = curve index
    std::vector<Gluing> gluings_;            // indexed by curve
};

// ---------------------------------------------------------------------------
// Cell complex
//
// Every pants is cut by three seams into two hexagons; every decomposing
// curve gets an annular collar subdivided by two vertical arcs and its core
// circle into four squares.  The core-circle edges are the only edges "on E":
// a transverse crossing of the curve system is exactly a crossing of a core
// edge.  The first vertical arc of each collar is the marked basepoint arc
// that pins the zero of the twist coordinate.

enum class EdgeKind : uint8_t {
    Seam,         // one of the three seams inside a pants
    BoundaryArc,  // half of a pants boundary circle (collar boundary)
    Vertical,     // half of a vertical arc in a collar
    Core,         // half of the core circle of a collar ("on E")
};

struct Edge {
    int v0 = -1, v1 = -1;
    EdgeKind kind{};
    int pants = -1;  // owning pants for Seam/BoundaryArc
    int curve = -1;  // owning curve for Vertical/Core, and for BoundaryArc the glued curve
};

enum class FaceKind : uint8_t { Hexagon, Square };

struct Face {
    FaceKind kind{};
    int owner = -1;                 // pants index (hexagon) or curve index (square)
    std::vector<int> edges;         // boundary cycle, edge ids
    std::vector<bool> forward;      // traversal direction per cycle entry
};

class CellComplex {
public:
    explicit CellComplex(const PantsDecomposition& pd);

    const PantsDecomposition& pd() const { return *pd_; }
    int numVertices() const { return numVertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }
    int eulerCharacteristic() const;

    // Index helpers -------------------------------------------------------
    // which: 0 = endpoint of the seam to the lower other slot, 1 = higher.
    int pantsVertex(int p, int s, int which) const;
    int seamEdge(int p, int pairIdx) const;  // pairIdx: 0=(0,1) 1=(0,2) 2=(1,2)
    int seamEdgeBetween(int p, int s1, int s2) const;
    // side: 0 = front arc (A->B), 1 = back arc (B->A)
    int arcEdge(int p, int s, int side) const;
    // vertical half-edges of collar k: 0=v1 lower half, 1=v1 upper, 2=v2 lower, 3=v2 upper
    int verticalEdge(int k, int which) const;
    int coreEdge(int k, int which) const;  // which: 0 = front half, 1 = back half
    int hexFace(int p, int side) const;    // side: 0 front, 1 back
    int squareFace(int k, int which) const;

    // For a directed edge (edge id, forward?) the face on its left.
    int faceLeftOf(int edge, bool forward) const;

    // Position of edge e in face f's cycle, -1 if absent (first occurrence).
    int cyclePosition(int face, int edge) const;

private:
    const PantsDecomposition* pd_;
    int numVertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    std::vector<std::array<int, 2>> faceOfEdge_;  // [edge] = {left-of-forward, left-of-backward}

    int vBase_ = 0, coreVBase_ = 0;
    void build();
    void orientFacesCoherently();
    void indexFaces();
};

}  // namespace cf::surface
