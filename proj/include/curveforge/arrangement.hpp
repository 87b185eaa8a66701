#pragma once

// Strand-level arrangements of curves on the cell complex.
//
// A placed curve is a family of closed strands, each a cyclic sequence of
// transverse crossings ("nodes") of cell edges.  Per edge, the crossing
// points are kept in an ordered list; inside every face the strand segments
// are chords of a convex polygon, realized with exact integer coordinates so
// that crossings, their order along chords, and the induced subdivision of
// the face are computed exactly.  On top of that sit the census of
// complementary regions, disk/bigon recognition, the isotopy moves that
// remove bigons, and the read-off of Dehn-Thurston coordinates.

#include <array>
#include <cstdint>
#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/surface.hpp"

namespace cf::arr {

class Arrangement {
public:
    explicit Arrangement(const surface::CellComplex& cx);

    const surface::CellComplex& cx() const { return *cx_; }

    // -- construction ------------------------------------------------------
    // Canonical placement of a Dehn-Thurston curve; returns a curve id.
    int addCanonical(const curves::NormalCurve& c);
    // A single circle parallel to decomposing curve k (useful as a probe).
    int addParallelCore(int k);

    // Raw placement: per component, the cyclic list of crossings with exact
    // positions (num/den in (0,1) along the edge) and crossing sense (does the
    // strand enter the face left of the directed edge?).
    struct RawVisit {
        int edge;
        long long num, den;
        bool toLeft;
    };
    int addRaw(const std::vector<std::vector<RawVisit>>& components);

    // -- queries -----------------------------------------------------------
    int numCurves() const { return (int)curveComps_.size(); }
    long long size(int c) const;             // total edge crossings of curve c
    long long crossings(int a, int b) const; // geometric crossings a vs b (a != b)
    long long selfCrossings(int a) const;
    long long coreCrossings(int c, int k) const;  // crossings with core of E_k

    // -- moves -------------------------------------------------------------
    // Remove all removable disks between `moving` and `target`, isotoping
    // `moving`; returns the number of bigons removed.
    long long removeCurveBigons(int moving, int target);
    // Make `moving` taut against the decomposing system: removes disks
    // pinched between `moving` and any boundary circle or core circle of the
    // complex (including one-face slivers against arbitrary edges).  Drops
    // components that shrink to nothing; their count is returned in
    // `trivialDropped` if non-null.
    long long tighten(int moving, int* trivialDropped = nullptr);

    // -- census ------------------------------------------------------------
    struct RegionInfo {
        int cells = 0;     // sub-faces in the region
        int chi = 0;       // Euler characteristic (cut-surface computation)
        int corners = 0;   // crossing corners on the region boundary
        bool disk = false;
    };
    // Complement regions of the union of all placed curves.
    std::vector<RegionInfo> complementRegions() const;
    bool complementAllDisks() const;

    // -- extraction --------------------------------------------------------
    // Dehn-Thurston coordinates of curve c.  Requires c tightened; every
    // internal consistency check failing raises Alarm.
    curves::DT extract(int c) const;

    // -- raw access (twist engine, tests) ----------------------------------
    struct Node {
        int edge = -1;
        int curve = -1, comp = -1;
        int next = -1, prev = -1;
        bool toLeft = false;  // strand enters faceLeftOf(edge, true) after crossing
        bool alive = true;
    };
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::vector<int>>& order() const { return order_; }
    // One representative node id per component of curve c.
    const std::vector<int>& components(int c) const {
        return curveComps_.at((size_t)c);
    }
    // All node ids of one component, in cyclic order starting at `rep`.
    std::vector<int> componentNodes(int rep) const;
    // Re-register a hand-built curve (twist engine): one representative node
    // per component; nodes must already be linked and in the order lists.
    int adoptCurve(std::vector<int> componentReps);

    // Internal invariants (linked lists vs order lists vs face adjacency).
    void validate() const;

private:
    const surface::CellComplex* cx_;
    std::vector<Node> nodes_;
    std::vector<std::array<long long, 2>> pos_;  // exact num/den position per node
    std::vector<std::vector<int>> order_;    // per edge, in edge direction
    std::vector<std::vector<int>> curveComps_;  // curve -> representative node per component

    friend struct FaceGeometry;
    friend class Splicer;

    int newNode(int edge, int curve, int comp, bool toLeft);
    void insertInOrder(int edge, int nodeId, int position);
    void eraseFromOrder(int edge, int nodeId);
    int faceEntered(int nodeId) const;
    int faceApproach(int nodeId) const;
};

}  // namespace cf::arr
