#include "chc/isometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace chc {

Isometry Isometry::inverse_against(const HermitianModel& model) const {
    // g^{-1} = H^{-1} g^* H for form-preserving g; cheaper and better
    // conditioned than a generic inverse.
    const MatC& h = model.gram();
    return {h.inverse() * m.adjoint() * h};
}

double form_defect(const HermitianModel& model, const Isometry& g) {
    const MatC& h = model.gram();
    return (g.m.adjoint() * h * g.m - h).cwiseAbs().maxCoeff();
}

bool preserves_form(const HermitianModel& model, const Isometry& g, double tol) {
    const double scale = std::max(1.0, g.m.cwiseAbs().maxCoeff());
    return form_defect(model, g) <= tol * scale * scale;
}

MatC canonical_form(const MatC& g) {
    const int d = static_cast<int>(g.rows());
    MatC m = g;
    const double dm = std::abs(m.determinant());
    if (dm > 0.0) m /= std::pow(dm, 1.0 / d);
    // Pick the pivot: first entry (row-major) whose modulus is within a
    // relative band of the maximum, so fp jitter cannot flip the choice.
    const double maxmod = m.cwiseAbs().maxCoeff();
    cplx pivot = 0.0;
    for (int i = 0; i < d && pivot == 0.0; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(m(i, j)) >= maxmod * (1.0 - 1e-7)) {
                pivot = m(i, j);
                break;
            }
    if (pivot != 0.0) m *= std::conj(pivot) / std::abs(pivot);
    return m;
}

namespace {

bool is_scalar_matrix(const MatC& m, double tol) {
    const int d = static_cast<int>(m.rows());
    const cplx lambda = m.trace() / static_cast<double>(d);
    return (m - lambda * MatC::Identity(d, d)).cwiseAbs().maxCoeff() <= tol * std::max(1.0, std::abs(lambda));
}

}  // namespace

IsometryClass classify(const HermitianModel& model, const Isometry& g, double tol) {
    if (!preserves_form(model, g, 1e-6))
        throw std::invalid_argument("classify: matrix does not preserve the form");
    if (is_scalar_matrix(g.m, tol)) return IsometryClass::Identity;

    Eigen::ComplexEigenSolver<MatC> es(g.m, /*computeEigenvectors=*/false);
    const VecC ev = es.eigenvalues();
    const int d = static_cast<int>(g.m.rows());

    double worst = 0.0;
    for (int i = 0; i < d; ++i) worst = std::max(worst, std::abs(std::abs(ev(i)) - 1.0));
    if (worst > tol) return IsometryClass::Loxodromic;

    // All eigenvalues on the unit circle: elliptic iff diagonalizable.
    // Cluster the spectrum, then compare geometric and algebraic
    // multiplicities via the numerical rank of g - lambda I.
    std::vector<bool> used(d, false);
    for (int i = 0; i < d; ++i) {
        if (used[i]) continue;
        int mult = 0;
        cplx lambda = ev(i);
        for (int j = 0; j < d; ++j)
            if (!used[j] && std::abs(ev(j) - lambda) <= 10 * tol) {
                used[j] = true;
                ++mult;
            }
        Eigen::JacobiSVD<MatC> svd(g.m - lambda * MatC::Identity(d, d));
        const auto& sv = svd.singularValues();
        const double cutoff = std::max(sv(0) * tol, tol);
        int rank = 0;
        for (int k = 0; k < sv.size(); ++k)
            if (sv(k) > cutoff) ++rank;
        const int nullity = d - rank;
        if (nullity < mult) return IsometryClass::Parabolic;
    }
    return IsometryClass::Elliptic;
}

const char* to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::Identity: return "identity";
        case IsometryClass::Elliptic: return "elliptic";
        case IsometryClass::Parabolic: return "parabolic";
        case IsometryClass::Loxodromic: return "loxodromic";
    }
    return "?";
}

}  // namespace chc
