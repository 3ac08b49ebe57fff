#pragma once

#include "chc/model.hpp"

namespace chc {

// An element of PU(n,1): a matrix preserving the Hermitian form, considered
// up to a unit scalar. The matrix is stored as given; canonical_form() fixes
// the scalar for hashing and comparison.
struct Isometry {
    MatC m;

    int dim() const { return static_cast<int>(m.rows()); }

    Isometry operator*(const Isometry& other) const { return {m * other.m}; }
    Isometry inverse_against(const HermitianModel& model) const;
};

// ||g^* H g - H||_inf, the form-preservation defect.
double form_defect(const HermitianModel& model, const Isometry& g);
bool preserves_form(const HermitianModel& model, const Isometry& g, double tol = 1e-8);

// Scalar-normalized representative: rescaled to unit determinant modulus,
// then phase-rotated so the largest-modulus entry (first such, row-major,
// with a small stability band for ties) is real positive. A fixed point of
// itself.
MatC canonical_form(const MatC& g);

// Elliptic / parabolic / loxodromic trichotomy, plus Identity for scalars.
// Loxodromic iff some eigenvalue modulus differs from 1; within the
// unit-modulus case, parabolic means non-diagonalizable (Jordan structure
// detected by numerical rank with tolerance).
IsometryClass classify(const HermitianModel& model, const Isometry& g,
                       double tol = 1e-8);

const char* to_string(IsometryClass c);

}  // namespace chc
