#include "chc/model.hpp"

namespace chc {

HermitianModel::HermitianModel(int n, Basis basis) : n_(n), basis_(basis) {
    if (n < 1) throw std::invalid_argument("HermitianModel: need n >= 1");
    const int d = n + 1;
    gram_ = MatC::Zero(d, d);
    if (basis == Basis::Ball) {
        gram_(0, 0) = -1.0;
        for (int i = 1; i < d; ++i) gram_(i, i) = 1.0;
    } else {
        gram_(0, 1) = 1.0;
        gram_(1, 0) = 1.0;
        for (int i = 2; i < d; ++i) gram_(i, i) = 1.0;
    }
}

MatC HermitianModel::siegel_to_ball_matrix(int n) {
    const int d = n + 1;
    const double r = 1.0 / std::sqrt(2.0);
    MatC c = MatC::Identity(d, d);
    // f1 = (v1 + v2)/sqrt2, f2 = (v2 - v1)/sqrt2
    c(0, 0) = r;  c(0, 1) = -r;
    c(1, 0) = r;  c(1, 1) = r;
    return c;
}

cplx HermitianModel::form(const VecC& v, const VecC& w) const {
    if (v.size() != dim() || w.size() != dim())
        throw std::invalid_argument("form: vector length must be n+1");
    // linear in v, conjugate-linear in w
    return (w.adjoint() * gram_ * v)(0, 0);
}

PointClass HermitianModel::classify_vector(const VecC& v, double tol) const {
    const double q = form_self(v);
    const double scale = v.squaredNorm();
    if (scale == 0.0) throw std::invalid_argument("classify_vector: zero vector");
    if (std::abs(q) / scale < tol) return PointClass::Boundary;
    return q < 0.0 ? PointClass::Interior : PointClass::Exterior;
}

bool ProjectivePoint::projectively_equal(const ProjectivePoint& other, double tol) const {
    // [v] == [w] iff the unit lifts overlap fully: 1 - |<v,w>| ~ sin^2(angle)/2.
    const double n1 = lift.norm(), n2 = other.lift.norm();
    if (n1 == 0.0 || n2 == 0.0) return false;
    const double overlap = std::abs(lift.dot(other.lift)) / (n1 * n2);
    return 1.0 - overlap < tol;
}

ProjectivePoint siegel_to_projective(const HermitianModel& model, const SiegelPoint& p) {
    if (p.u.size() != model.n() - 1)
        throw std::invalid_argument("siegel_to_projective: u must have length n-1");
    if (!p.interior())
        throw std::domain_error("siegel_to_projective: point not in the siegel domain");
    VecC v(model.dim());
    v(0) = p.a;
    v(1) = 1.0;
    v.tail(model.n() - 1) = p.u;
    if (model.basis() == Basis::Ball) v = HermitianModel::siegel_to_ball_matrix(model.n()) * v;
    return {v};
}

SiegelPoint projective_to_siegel(const HermitianModel& model, const ProjectivePoint& p) {
    VecC v = p.lift;
    if (v.size() != model.dim())
        throw std::invalid_argument("projective_to_siegel: lift length must be n+1");
    if (model.basis() == Basis::Ball)
        v = HermitianModel::siegel_to_ball_matrix(model.n()).adjoint() * v;
    if (std::abs(v(1)) < 1e-14 * v.norm())
        throw std::domain_error("projective_to_siegel: zero f2-coefficient");
    v /= v(1);
    SiegelPoint s{v(0), v.tail(model.n() - 1)};
    if (!s.interior())
        throw std::domain_error("projective_to_siegel: point not interior");
    return s;
}

VecC ball_coords(const HermitianModel& model, const ProjectivePoint& p) {
    VecC v = p.lift;
    if (model.basis() == Basis::Siegel)
        v = HermitianModel::siegel_to_ball_matrix(model.n()) * v;
    if (std::abs(v(0)) < 1e-14 * v.norm())
        throw std::domain_error("ball_coords: point at infinity of the chart");
    return v.tail(model.n()) / v(0);
}

ProjectivePoint from_ball_coords(const HermitianModel& model, const VecC& z) {
    if (z.size() != model.n())
        throw std::invalid_argument("from_ball_coords: need n coordinates");
    VecC v(model.dim());
    v(0) = 1.0;
    v.tail(model.n()) = z;
    if (model.basis() == Basis::Siegel)
        v = HermitianModel::siegel_to_ball_matrix(model.n()).adjoint() * v;
    return {v};
}

ProjectivePoint origin(const HermitianModel& model) {
    return from_ball_coords(model, VecC::Zero(model.n()));
}

}  // namespace chc
