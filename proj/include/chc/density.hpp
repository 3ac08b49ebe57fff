#pragma once

#include "chc/orbit.hpp"

#include <functional>

namespace chc {

// Finite atomic stand-in for the Patterson-Sullivan density: orbit atoms
// gamma.o weighted by e^{-s d(o, gamma o)} / Phi(s), with s slightly above
// the critical exponent estimate. Everything lives in the ball basis.
class DensityApprox {
public:
    double s = 0.0;
    double phi = 0.0;  // Phi(s), the normalization at the basepoint
    int dim = 0;
    VecC basepoint_lift;
    kernels::AtomArray atoms;
    std::vector<double> displacements;  // d(o, gamma o) per atom
    std::vector<double> weights;        // e^{-s d}/Phi per atom

    std::size_t size() const { return atoms.count; }

    // weight share of atoms with displacement >= radius
    double tail_weight_share(double radius) const;
};

// s defaults to (delta estimate) + 0.05; the construction needs s above the
// critical exponent to keep Phi finite in the limit.
DensityApprox build_density(const OrbitCloud& cloud, double s);

constexpr double kDensityExponentOffset = 0.05;

// mu_x-mass of the atomic density: sum_gamma e^{-s d(x, gamma o)} / Phi(s).
// Equals 1 at the basepoint. x is a ball-basis interior point.
double mass_at(const DensityApprox& density, const ProjectivePoint& x);

// f(x) = -ln ||mu_x||; f(o) = 0.
double log_mass(const DensityApprox& density, const ProjectivePoint& x);

// Second-difference stencil for i del delbar f(v, Jv) at x along a unit
// direction v (realized by a nearby direction point) and its J-partner.
struct LeviProbe {
    ProjectivePoint x;
    ProjectivePoint dir;    // marks v
    ProjectivePoint jdir;   // marks Jv
    double h = 1e-3;        // step in length units
};

constexpr double kDefaultLeviStep = 1e-3;

// Builds the probe, transporting J through the transvection that centers x.
// Validates that the whole stencil stays interior and h < 0.5.
LeviProbe make_probe(const HermitianModel& ball, const ProjectivePoint& x,
                     const ProjectivePoint& direction, double h = kDefaultLeviStep);

// [f(exp(hv)) - 2f(x) + f(exp(-hv)) + f(exp(hJv)) - 2f(x) + f(exp(-hJv))] / (2h^2),
// the finite-difference i del delbar phi(v, Jv) of an arbitrary function.
double levi_finite_difference(const HermitianModel& ball, const LeviProbe& probe,
                              const std::function<double(const ProjectivePoint&)>& f);

// The same stencil applied to the log-mass function of the density.
double levi_lower_bound(const DensityApprox& density, const LeviProbe& probe);

// Probe grid for the strict-plurisubharmonicity check of the log-mass
// function: n_points random interior points within hyperbolic radius
// `radius` of the basepoint, n_dirs random directions each.
struct LeviGridRow {
    int point = 0;
    int direction = 0;
    VecC point_coords;  // ball affine coordinates
    double estimate = 0.0;
};

struct LeviGridResult {
    std::vector<LeviGridRow> rows;
    double min_estimate = 0.0;
    double threshold = 0.0;  // delta_hat (1 - delta_hat/2) - tolerance
    bool pass = false;
    double delta_hat = 0.0;
    double h = kDefaultLeviStep;
    std::uint64_t seed = 0;
};

LeviGridResult levi_grid(const DensityApprox& density, int n_points, int n_dirs,
                         double h, double radius, std::uint64_t seed, double delta_hat,
                         double tolerance);

std::string levi_grid_csv(const LeviGridResult& grid);

// Rigorous bound on |f(gamma x) - f(x)| from the truncation: the symmetric
// difference of the cloud and its gamma-translate sits in the outermost
// displacement band of width ell = d(o, gamma o). Valid for radius-truncated
// clouds whose word depth covers the radius.
struct InvarianceBound {
    double bound = 0.0;
    double band_share = 0.0;  // weight share of the outer band
    double band_width = 0.0;  // ell
};

InvarianceBound log_mass_invariance_bound(const DensityApprox& density,
                                          const ProjectivePoint& x, double gen_displacement);

}  // namespace chc
