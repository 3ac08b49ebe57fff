#include "chc/geometry.hpp"

namespace chc {

double cosh2_distance(const HermitianModel& model, const ProjectivePoint& x,
                      const ProjectivePoint& y) {
    const cplx hxy = model.form(x.lift, y.lift);
    const double hxx = model.form_self(x.lift);
    const double hyy = model.form_self(y.lift);
    if (hxx >= 0.0 || hyy >= 0.0)
        throw std::domain_error("distance: points must be interior (q < 0)");
    return std::norm(hxy) / (hxx * hyy);
}

double distance(const HermitianModel& model, const ProjectivePoint& x,
                const ProjectivePoint& y) {
    const double c2 = cosh2_distance(model, x, y);
    // The invariant cannot dip below 1 except through rounding.
    const double c = std::sqrt(std::max(1.0, c2));
    return std::acosh(c);
}

double busemann_siegel(const SiegelPoint& p) {
    const double q = p.domain_value();
    if (q >= 0.0) throw std::domain_error("busemann_siegel: point not interior");
    return 0.5 * std::log(-2.0 / q);
}

Isometry horoball_translate(const HermitianModel& model, double lambda, double mu) {
    const double t = std::exp(-2.0 * lambda) - std::exp(-2.0 * mu);
    MatC m = MatC::Identity(model.dim(), model.dim());
    if (model.basis() == Basis::Siegel) {
        m(0, 1) = t;
    } else {
        MatC c = HermitianModel::siegel_to_ball_matrix(model.n());
        MatC s = MatC::Identity(model.dim(), model.dim());
        s(0, 1) = t;
        m = c * s * c.adjoint();
    }
    return {m};
}

Isometry transvection_to(const HermitianModel& model, const ProjectivePoint& x) {
    const VecC z = ball_coords(model, x);
    const double r = z.norm();
    const int d = model.dim();
    if (r < 1e-15) return {MatC::Identity(d, d)};
    if (r >= 1.0) throw std::domain_error("transvection_to: point not interior");
    const double s = std::atanh(r);
    MatC boost = MatC::Identity(d, d);
    boost(0, 0) = std::cosh(s);
    boost(0, 1) = std::sinh(s);
    boost(1, 0) = std::sinh(s);
    boost(1, 1) = std::cosh(s);
    MatC v = MatC::Identity(d, d);
    v.block(1, 1, d - 1, d - 1) = unitary_completion(z / r);
    MatC m = v * boost * v.adjoint();
    if (model.basis() == Basis::Siegel) {
        MatC c = HermitianModel::siegel_to_ball_matrix(model.n());
        m = c.adjoint() * m * c;
    }
    return {m};
}

namespace {

// Direction of `target` seen from the origin of the chart centered at x:
// the unit vector of the affine coordinates of M_x^{-1} target.
VecC centered_direction(const HermitianModel& model, const Isometry& to_x,
                        const ProjectivePoint& target) {
    const MatC inv = to_x.inverse_against(model).m;
    const VecC z = ball_coords(model, ProjectivePoint{inv * target.lift});
    const double r = z.norm();
    if (r < 1e-14)
        throw std::invalid_argument("geodesic direction: direction point coincides with x");
    return z / r;
}

}  // namespace

ProjectivePoint geodesic_step(const HermitianModel& model, const ProjectivePoint& x,
                              const ProjectivePoint& direction, double t) {
    const Isometry mx = transvection_to(model, x);
    const VecC u = centered_direction(model, mx, direction);
    // Unit-speed radial geodesic through the origin: s |-> tanh(s) u.
    const ProjectivePoint stepped = from_ball_coords(model, std::tanh(t) * u);
    return {mx.m * stepped.lift};
}

ProjectivePoint j_direction(const HermitianModel& model, const ProjectivePoint& x,
                            const ProjectivePoint& direction) {
    const Isometry mx = transvection_to(model, x);
    const MatC inv = mx.inverse_against(model).m;
    const VecC z = ball_coords(model, ProjectivePoint{inv * direction.lift});
    // J is multiplication by i in the chart centered at x.
    const ProjectivePoint rotated = from_ball_coords(model, cplx(0.0, 1.0) * z);
    return {mx.m * rotated.lift};
}

}  // namespace chc
