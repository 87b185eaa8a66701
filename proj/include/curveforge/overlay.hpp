#pragma once

// Two curves overlaid on the cell complex and isotoped into minimal mutual
// position.  Everything that depends on how a *pair* of curves sits on the
// surface (geometric intersection number, the filling test, the twist
// engine's crossing bookkeeping) starts from a Mutual.

#include <memory>

#include "curveforge/arrangement.hpp"

namespace cf::overlay {

class Mutual {
public:
    // Places b canonically, then a, and isotopes a until no bigon between
    // the two curves or against the decomposing system survives.
    Mutual(const surface::PantsDecomposition& pd, const curves::NormalCurve& a,
           const curves::NormalCurve& b);

    arr::Arrangement& arrangement() { return *arr_; }
    const arr::Arrangement& arrangement() const { return *arr_; }
    const surface::CellComplex& cx() const { return *cx_; }
    int a() const { return idA_; }
    int b() const { return idB_; }
    long long crossings() const;           // geometric crossings of a with b
    long long moves() const { return moves_; }  // isotopy moves spent getting here

private:
    std::unique_ptr<surface::CellComplex> cx_;
    std::unique_ptr<arr::Arrangement> arr_;
    int idA_ = -1, idB_ = -1;
    long long moves_ = 0;
};

// Geometric (minimal) intersection number.  Symmetric; i(a, a) = 0.
long long intersectionNumber(const curves::NormalCurve& a, const curves::NormalCurve& b);

// True iff every complementary component of a ∪ b is a disk.
bool fills(const curves::NormalCurve& a, const curves::NormalCurve& b);

}  // namespace cf::overlay
