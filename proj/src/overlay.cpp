#include "curveforge/overlay.hpp"

#include "curveforge/errors.hpp"

namespace cf::overlay {

using curves::NormalCurve;

Mutual::Mutual(const surface::PantsDecomposition& pd, const NormalCurve& a,
               const NormalCurve& b) {
    require(&a.pd() == &pd || a.pd() == pd, "curve a belongs to a different surface");
    require(&b.pd() == &pd || b.pd() == pd, "curve b belongs to a different surface");
    cx_ = std::make_unique<surface::CellComplex>(pd);
    arr_ = std::make_unique<arr::Arrangement>(*cx_);
    idB_ = arr_->addCanonical(b);
    idA_ = arr_->addCanonical(a);
    // Canonical placements are taut against the system, but not against each
    // other; alternate bigon removal and re-tightening until stable.
    for (int round = 0;; ++round) {
        check(round < 64, "minimal position did not stabilize");
        long long step = arr_->removeCurveBigons(idA_, idB_);
        step += arr_->tighten(idA_);
        moves_ += step;
        if (step == 0) break;
    }
}

long long Mutual::crossings() const { return arr_->crossings(idA_, idB_); }

long long intersectionNumber(const NormalCurve& a, const NormalCurve& b) {
    require(a.pd() == b.pd(), "curves live on different surfaces");
    if (a.dt() == b.dt()) return 0;  // parallel copies of one simple multicurve
    Mutual m(a.pd(), a, b);
    return m.crossings();
}

bool fills(const NormalCurve& a, const NormalCurve& b) {
    require(a.pd() == b.pd(), "curves live on different surfaces");
    if (a.dt() == b.dt()) return false;
    Mutual m(a.pd(), a, b);
    return m.arrangement().complementAllDisks();
}

}  // namespace cf::overlay
