#pragma once

#include "chc/isometry.hpp"

namespace chc {

// Hyperbolic distance from cosh^2 d(x,y) = h(x,y) h(y,x) / (h(x,x) h(y,y)),
// in the normalization with sectional curvature pinched in [-4, -1].
double distance(const HermitianModel& model, const ProjectivePoint& x,
                const ProjectivePoint& y);

// cosh^2 of the distance (the raw invariant; >= 1 for interior pairs).
double cosh2_distance(const HermitianModel& model, const ProjectivePoint& x,
                      const ProjectivePoint& y);

// Busemann function at [f1] in the siegel chart, vanishing at (-1, 0):
// b(a,u) = (1/2) ln( -2 / (2 Re a + ||u||^2) ). Horoballs at [f1] are its
// sublevel sets.
double busemann_siegel(const SiegelPoint& p);

// L_t in the siegel basis (upper triangular, t in entry (1,2)), with
// t = e^{-2 lambda} - e^{-2 mu}: carries the horoball {b < lambda} onto
// {b < mu} and commutes with the whole stabilizer U(n-1) x N.
Isometry horoball_translate(const HermitianModel& model, double lambda, double mu);

// Form-preserving transvection carrying the ball origin to x (ball basis).
Isometry transvection_to(const HermitianModel& model, const ProjectivePoint& x);

// Walk arclength t along the unit-speed geodesic from x toward the point
// `direction` (which only marks the direction). Works by conjugating x to
// the origin, following the radial tanh line, and conjugating back.
ProjectivePoint geodesic_step(const HermitianModel& model, const ProjectivePoint& x,
                              const ProjectivePoint& direction, double t);

// The direction point obtained by applying the complex structure J at x to
// the direction x -> direction (multiplication by i in the chart centered
// at x). Same distance from x as `direction`'s transported representative.
ProjectivePoint j_direction(const HermitianModel& model, const ProjectivePoint& x,
                            const ProjectivePoint& direction);

}  // namespace chc
