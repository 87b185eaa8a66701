#pragma once

// Derivation of train tracks: unzip every cusp along the carried curve until
// each unzipping path has covered the whole track, then split the track along
// the resulting cut system.  The same gap dynamics runs on the base track and
// on every derived level, so towers are built by iterating one engine.
//
// A zipper state is (branch, gap, direction): the cut advances along a gap of
// the branch fiber and maps through the switch at the far end by plain
// interval arithmetic on fiber indices.  Slits already made subdivide the
// gaps further, so each landing has a definite slot among the earlier cuts;
// a real choice arises only when the corridor spans a naked cusp, and the
// paths of all zippers are searched jointly over those corridor choices,
// shortest first.  A zipper that meets the resting tip of an earlier path
// head-on in its fiber component has to join it, which kills that set of
// choices; if every set of choices dies this way the derivation reports the
// collision, naming both zippers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curveforge/tracks.hpp"

namespace cf::derivation {

using curves::Coord;
using tracks::Track;

struct Traversal {
    int branch = -1;
    Coord gap = 0;
    int dir = 0;  // +1 toward end 1, -1 toward end 0
};

struct PathStat {
    int cusp = -1;           // switch index the zipper starts from
    long long length = 0;    // branch traversals
    long long omega = 0;     // sum of branch omegas along the path
    bool completed = false;
    std::vector<Traversal> steps;  // kept only when requested
};

struct CollisionReport {
    int zipA = -1, zipB = -1;  // switch indices of the colliding zippers
    int branch = -1;
    Coord gap = 0;
};

struct DeriveFailure {
    enum class Kind { NotPositive, Collision, NoCompletion };
    Kind kind{};
    CollisionReport collision;  // Collision
    int branch = -1;            // NotPositive: first unweighted branch
    int cusp = -1;              // NoCompletion: the capped zipper
    std::string detail;
};

struct DeriveOptions {
    long long maxSteps = 0;    // per-path length cap; 0: 4 * total weight + 4096
    bool keepPaths = false;    // retain full traversal sequences
    bool keepParents = true;   // retain per-branch parent chains
};

struct DeriveOutput {
    Track derived;
    std::vector<Coord> weights;              // tube widths, may contain zeros
    std::vector<PathStat> paths;             // 12g-12 entries
    std::vector<std::vector<int>> parents;   // per derived branch: parent branch chain
    int parentBranches = 0;                  // branch count of the input track
    long long parentELength = 0;             // |tau| of the input
};

struct DeriveResult {
    std::optional<DeriveOutput> out;
    std::optional<DeriveFailure> failure;
    bool ok() const { return out.has_value(); }
};

// One derivation step of (t, weights).  Requires every branch weight >= 1
// (the carried curve covers t); failure reports are returned, not thrown.
DeriveResult derive(const Track& t, const std::vector<Coord>& weights,
                    const DeriveOptions& opts = {});

// Push a measure on the derived track down to the parent track.
std::vector<Coord> pushForward(const DeriveOutput& step, const std::vector<Coord>& measure);

// ---------------------------------------------------------------------------
// Towers

struct TowerStep {
    DeriveOutput out;
};

struct Tower {
    Track base;
    std::vector<Coord> baseWeights;
    std::vector<TowerStep> steps;
    int depth() const { return (int)steps.size(); }
};

struct TowerResult {
    Tower tower;                 // steps that succeeded
    std::optional<DeriveFailure> failure;
    int failedAtDepth = -1;      // 1-based depth of the failed step, -1 if none
    bool reached(int depth) const { return (int)tower.steps.size() >= depth; }
};

TowerResult buildTower(const Track& base, const std::vector<Coord>& weights, int depth,
                       const DeriveOptions& opts = {});

// n-gregarious: the curve is carried by its complete fat track, covers it,
// and the tower of derived tracks reaches depth n with the curve covering
// every level.  Wave curves and curves parallel to the system yield false.
struct GregariousResult {
    bool gregarious = false;
    int reachedDepth = 0;
    std::optional<DeriveFailure> failure;
    std::optional<tracks::CarryDenial> denial;
};
GregariousResult isNGregarious(const surface::PantsDecomposition& pd,
                               const curves::NormalCurve& c, int n,
                               const DeriveOptions& opts = {});

// ---------------------------------------------------------------------------
// Serialization (tower file format)

void save(const Tower& tw, std::ostream& out);
// Summaries only: towers are re-derived for verification, so loading returns
// the recorded statistics rather than a full tower.
struct TowerSummary {
    int genus = 0;
    int depth = 0;
    std::vector<std::vector<long long>> pathLengths;  // per step, per path
    std::vector<long long> trackLengths;              // |tau_i| per step
};
TowerSummary loadSummary(std::istream& in);

}  // namespace cf::derivation
