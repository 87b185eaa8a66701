#pragma once

// Train tracks as branched 1-complexes with trivalent switches.
//
// The tracks built here all arise from the decomposing system: around every
// decomposing curve sits a circle of four "collar arc" branches joined by
// four trivalent switches, two of which feed the circle from each adjacent
// pants through the seam branches of that pants.  Every switch point lies on
// a core circle, every cusp sits at a switch, and the collar circles are the
// cyclic exceptional fibers that make the track fat.  Derived tracks (see
// derivation.hpp) reuse the same switch structure, so one engine serves the
// whole tower.
//
// Fiber conventions: the fiber of a switch is indexed from the "first" port
// side; fiber(merged) = fiber(first) ++ fiber(second) and the cusp sits at
// the boundary index between them.  Per-branch fibers are indexed 0..w-1
// from the branch's own orientation; a port with rev=true plugs the branch
// in with its fiber order reversed relative to the switch fiber.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curveforge/curves.hpp"
#include "curveforge/surface.hpp"

namespace cf::tracks {

using curves::Coord;

struct BranchEnd {
    int branch = -1;
    int end = 0;  // 0 or 1
    bool operator==(const BranchEnd&) const = default;
};

struct Switch {
    BranchEnd merged, first, second;
    bool revM = false, rev1 = false, rev2 = false;
    int onCurve = -1;  // decomposing curve of the frame holding this switch
};

struct Branch {
    // role is descriptive only (serialization, debugging)
    enum class Role { Seam, CollarArc, Derived };
    Role role = Role::Derived;
    int pants = -1, seamPair = -1;  // Seam: owning pants + pair index 0..2
    int collar = -1, arcIdx = -1;   // CollarArc: collar + position 0..3
    long long omega = 2;            // E-length weight of one covering arc
    long long coreInterior = 0;     // transverse core crossings in the interior
    std::vector<int> word;          // embedding arc-word (edge ids), base tracks
};

// Attachment of one branch end: (switch index, port 0=merged 1=first 2=second).
struct PortRef {
    int sw = -1;
    int port = -1;
};

struct RegionWalk {
    int cusps = 0;
    int sides = 0;  // branch sides traversed
};

class Track {
public:
    int genus = 0;
    std::vector<Branch> branches;
    std::vector<Switch> switches;
    std::vector<int> collarSign;            // per decomposing curve, +1/-1 (base tracks)
    std::vector<std::vector<int>> exceptional;  // cyclic exceptional fibers: branch ids
    bool flagFat = false, flagMaximal = false, flagComplete = false;

    int numBranches() const { return (int)branches.size(); }
    int numSwitches() const { return (int)switches.size(); }
    int numCusps() const { return (int)switches.size(); }

    // port lookup: where does (branch, end) plug in?
    PortRef portOf(int branch, int end) const;

    // Boundary walk of the fattened track: one entry per complementary
    // region boundary circle, with its cusp count.
    std::vector<RegionWalk> boundaryWalks() const;

    // Structural validation: every end plugged exactly once, switch fiber
    // arithmetic consistent.  Throws Alarm on violation.
    void validate() const;

    // |tau|_E under the one-covering-arc-per-branch normalization.
    long long eLength() const;
    // The same value recomputed from the embedding words (base tracks);
    // derived tracks recompute from the recorded per-branch weights.
    long long eLengthFromWords(const surface::CellComplex& cx) const;
};

// ---------------------------------------------------------------------------
// Carrying

struct CarryingWitness {
    curves::DT target;
    std::vector<Coord> weights;   // per branch of the carrying track
    std::vector<Coord> lambda;    // per collar: winding surplus above minimal
    bool allPositive() const;
};

struct CarryDenial {
    enum class Kind { Wave, ParallelToSystem, TwistSign, NotBalanced };
    Kind kind{};
    curves::WaveReport waves;     // Wave case: the offending sites
    int collar = -1;              // TwistSign case
    std::string detail;
};

struct CarryResult {
    std::optional<CarryingWitness> witness;
    std::optional<CarryDenial> denial;
    bool carried() const { return witness.has_value(); }
};

// The complete fat track over the standard system that carries d, with the
// per-collar winding direction read off from d's twists.  Throws Refusal when
// d has a wave, is parallel to a decomposing curve, or is empty.
Track buildCompleteFatTrack(const surface::PantsDecomposition& pd,
                            const curves::NormalCurve& d);

// Same construction from an explicit sign vector (the candidate enumeration
// used by the derivation engine).
Track buildCompleteFatTrackSigned(const surface::PantsDecomposition& pd,
                                  const std::vector<int>& collarSign);

// Does t carry c?  Positive answers come with balanced weights whose
// reassembled collar pairings equal the canonical ones of c.
CarryResult carries(const Track& t, const curves::NormalCurve& c);

// Covering test: every branch weight >= 1.
bool covers(const Track& t, const CarryingWitness& w);

// Tightness report for maximal tracks over the standard system.
struct TightReport {
    bool fibersOnCores = false;      // (1) E_k meets the track in fibers only
    bool segmentsJoinSides = false;  // (2) complementary segments join distinct sides
    bool cuspsOnCores = false;       // (3) every cusp lies on a core circle
    bool tight() const { return fibersOnCores && segmentsJoinSides && cuspsOnCores; }
};
TightReport isTightTrack(const Track& t, const surface::PantsDecomposition& pd);

// |tau|_E with the two-way consistency assertion (throws Alarm on mismatch,
// UsageError on an empty track).
long long trackELength(const Track& t, const surface::CellComplex& cx);

// Witness production via a covering arc: beta must name branches covering t
// (every branch at least once); the carrying itself is solved directly and
// any failure despite a covering beta is raised as Alarm.
CarryingWitness carryTightenedCurve(const Track& t, const curves::NormalCurve& c,
                                    const std::vector<int>& betaBranches);

// ---------------------------------------------------------------------------
// Serialization (track file format)

void save(const Track& t, std::ostream& out);
Track load(const surface::PantsDecomposition& pd, std::istream& in);

}  // namespace cf::tracks
