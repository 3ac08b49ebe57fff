#pragma once

#include "chc/isometry.hpp"

namespace chc {

// An element (T, b, c) of U(n-1) x N, the stabilizer of the boundary point
// [f1]: T a unitary of size n-1, b a translation part in C^{n-1}, c a real
// center coordinate. Composition follows
//   (T,b,c) (T',b',c') = (T T', b + T b', c + c' + Im<b, T b'>),
// with <.,.> linear in the first argument. N is the subgroup with T = Id
// (the Heisenberg group of real dimension 2n-1), and Z(N) the elements
// (Id, 0, c).
struct HeisenbergElement {
    MatC T;
    VecC b;
    double c = 0.0;

    int ball_dim() const { return static_cast<int>(b.size()) + 1; }  // n

    static HeisenbergElement identity(int n);

    bool well_formed(double tol = 1e-10) const;  // T unitary, sizes match
    bool is_identity(double tol = 1e-10) const;
    bool is_central(double tol = 1e-10) const;   // T = Id, b = 0, |c| > tol
};

HeisenbergElement compose(const HeisenbergElement& g, const HeisenbergElement& h);
HeisenbergElement inverse(const HeisenbergElement& g);
HeisenbergElement commutator(const HeisenbergElement& g, const HeisenbergElement& h);
HeisenbergElement conjugate(const HeisenbergElement& h, const HeisenbergElement& g);  // h g h^{-1}

// The (n+1)x(n+1) matrix of (T,b,c) in the siegel basis:
//   [ 1   -||b||^2/2 + ic   -b^* T ]
//   [ 0          1             0   ]
//   [ 0          b             T   ]
// A group homomorphism into PU(n,1) preserving the siegel Gram matrix.
Isometry embed(const HermitianModel& model, const HeisenbergElement& g);

double max_difference(const HeisenbergElement& g, const HeisenbergElement& h);

// Do Pi(g) and Pi(h) commute, i.e. do the affine maps z -> Tz + b commute?
// Equivalent to [T,T'] = 0 and (Id - T') b - (Id - T) b' = 0.
bool pi_images_commute(const HeisenbergElement& g, const HeisenbergElement& h,
                       double tol = 1e-10);

}  // namespace chc
