#pragma once

#include "chc/linalg.hpp"

#include <stdexcept>

namespace chc {

// Two coordinate systems for the same signature-(n,1) Hermitian form on
// C^{n+1}:
//   ball:   q(z) = -|z_1|^2 + sum_{i>=2} |z_i|^2
//   siegel: q(a f1 + b f2 + sum u_i e_i) = 2 Re(a conj(b)) + ||u||^2
// The ball of C^n sits inside CP^n as {[v] : q(v) < 0}; the siegel basis is
// adapted to the boundary point xi = [f1].
enum class Basis { Ball, Siegel };

enum class PointClass { Interior, Boundary, Exterior };

enum class IsometryClass { Identity, Elliptic, Parabolic, Loxodromic };

class HermitianModel {
public:
    HermitianModel(int n, Basis basis);

    int n() const { return n_; }            // complex dimension of the ball
    int dim() const { return n_ + 1; }      // ambient vectors
    Basis basis() const { return basis_; }

    const MatC& gram() const { return gram_; }

    // Change of basis: siegel coordinates -> ball coordinates. Columns are
    // (f1, f2, e_1, ..., e_{n-1}) expressed in the ball basis. Real
    // orthogonal, and conjugates one Gram matrix exactly to the other.
    static MatC siegel_to_ball_matrix(int n);

    HermitianModel with_basis(Basis b) const { return HermitianModel(n_, b); }

    // h(v, w): linear in v, conjugate-linear in w. h(v, v) is real.
    cplx form(const VecC& v, const VecC& w) const;
    double form_self(const VecC& v) const { return form(v, v).real(); }

    PointClass classify_vector(const VecC& v, double tol = 1e-9) const;

private:
    int n_;
    Basis basis_;
    MatC gram_;
};

// A point of CP^n carried by a nonzero lift; interior iff q < 0.
struct ProjectivePoint {
    VecC lift;

    bool projectively_equal(const ProjectivePoint& other, double tol = 1e-9) const;
};

// Siegel chart coordinates (a, u), interior iff 2 Re(a) + ||u||^2 < 0.
struct SiegelPoint {
    cplx a;
    VecC u;  // length n-1

    double domain_value() const { return 2.0 * a.real() + u.squaredNorm(); }
    bool interior() const { return domain_value() < 0.0; }
};

// (a, u) |-> [a f1 + f2 + u] and its inverse. The inverse requires an
// interior point with nonzero f2-coefficient.
ProjectivePoint siegel_to_projective(const HermitianModel& model, const SiegelPoint& p);
SiegelPoint projective_to_siegel(const HermitianModel& model, const ProjectivePoint& p);

// Affine ball coordinates z_i = v_{i+1}/v_1 of an interior point (ball basis).
VecC ball_coords(const HermitianModel& model, const ProjectivePoint& p);
ProjectivePoint from_ball_coords(const HermitianModel& model, const VecC& z);

// The ball origin [1:0:...:0] (ball basis) == siegel point (-1, 0).
ProjectivePoint origin(const HermitianModel& model);

}  // namespace chc
