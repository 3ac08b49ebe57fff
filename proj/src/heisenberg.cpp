#include "chc/heisenberg.hpp"

namespace chc {

HeisenbergElement HeisenbergElement::identity(int n) {
    return {MatC::Identity(n - 1, n - 1), VecC::Zero(n - 1), 0.0};
}

namespace {

double max_abs(const MatC& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const VecC& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

bool HeisenbergElement::well_formed(double tol) const {
    if (T.rows() != T.cols() || T.rows() != b.size()) return false;
    const int m = static_cast<int>(T.rows());
    return max_abs(MatC(T.adjoint() * T - MatC::Identity(m, m))) <= tol;
}

bool HeisenbergElement::is_identity(double tol) const {
    const int m = static_cast<int>(T.rows());
    return max_abs(MatC(T - MatC::Identity(m, m))) <= tol && max_abs(b) <= tol &&
           std::abs(c) <= tol;
}

bool HeisenbergElement::is_central(double tol) const {
    const int m = static_cast<int>(T.rows());
    return max_abs(MatC(T - MatC::Identity(m, m))) <= tol && max_abs(b) <= tol &&
           std::abs(c) > tol;
}

HeisenbergElement compose(const HeisenbergElement& g, const HeisenbergElement& h) {
    if (g.b.size() != h.b.size())
        throw std::invalid_argument("compose: dimension mismatch");
    const VecC tb = g.T * h.b;
    return {g.T * h.T, g.b + tb, g.c + h.c + hermitian_dot(g.b, tb).imag()};
}

HeisenbergElement inverse(const HeisenbergElement& g) {
    const MatC tinv = g.T.adjoint();
    return {tinv, -(tinv * g.b), -g.c};
}

HeisenbergElement commutator(const HeisenbergElement& g, const HeisenbergElement& h) {
    return compose(compose(g, h), compose(inverse(g), inverse(h)));
}

HeisenbergElement conjugate(const HeisenbergElement& h, const HeisenbergElement& g) {
    return compose(compose(h, g), inverse(h));
}

Isometry embed(const HermitianModel& model, const HeisenbergElement& g) {
    if (g.ball_dim() != model.n())
        throw std::invalid_argument("embed: element dimension does not match model");
    const int d = model.dim();
    const int m = d - 2;
    MatC mat = MatC::Zero(d, d);
    mat(0, 0) = 1.0;
    mat(1, 1) = 1.0;
    mat(0, 1) = cplx(-0.5 * g.b.squaredNorm(), g.c);
    mat.block(0, 2, 1, m) = -(g.b.adjoint() * g.T);
    mat.block(2, 1, m, 1) = g.b;
    mat.block(2, 2, m, m) = g.T;
    if (model.basis() == Basis::Ball) {
        const MatC c = HermitianModel::siegel_to_ball_matrix(model.n());
        mat = c * mat * c.adjoint();
    }
    return {mat};
}

double max_difference(const HeisenbergElement& g, const HeisenbergElement& h) {
    double worst = std::abs(g.c - h.c);
    worst = std::max(worst, max_abs(MatC(g.T - h.T)));
    worst = std::max(worst, max_abs(VecC(g.b - h.b)));
    return worst;
}

bool pi_images_commute(const HeisenbergElement& g, const HeisenbergElement& h, double tol) {
    if (max_abs(MatC(g.T * h.T - h.T * g.T)) > tol) return false;
    const int m = static_cast<int>(g.T.rows());
    const VecC defect =
        (MatC::Identity(m, m) - h.T) * g.b - (MatC::Identity(m, m) - g.T) * h.b;
    return max_abs(defect) <= tol;
}

}  // namespace chc
