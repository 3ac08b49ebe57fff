#pragma once

#include "chc/density.hpp"
#include "chc/groupfile.hpp"
#include "chc/parabolic.hpp"

#include <random>

namespace chc::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    return {g(rng), g(rng)};
}

inline VecC random_cvec(std::mt19937_64& rng, int m, double scale = 1.0) {
    VecC v(m);
    for (int i = 0; i < m; ++i) v(i) = random_cplx(rng, scale);
    return v;
}

// Haar-ish random unitary via QR of a complex gaussian matrix.
inline MatC random_unitary(std::mt19937_64& rng, int m) {
    if (m == 0) return MatC(0, 0);
    MatC a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = random_cplx(rng);
    Eigen::HouseholderQR<MatC> qr(a);
    MatC q = qr.householderQ();
    MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i) {
        const cplx d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

// Random interior point of the ball, euclidean radius <= rmax.
inline ProjectivePoint random_interior(std::mt19937_64& rng, const HermitianModel& model,
                                       double rmax = 0.8) {
    std::uniform_real_distribution<double> ur(0.0, rmax);
    VecC z = random_cvec(rng, model.n());
    z *= ur(rng) / z.norm();
    return from_ball_coords(model, z);
}

// Random element of PU(n,1): unitary rotation times a transvection.
inline Isometry random_isometry(std::mt19937_64& rng, const HermitianModel& model) {
    const HermitianModel ball(model.n(), Basis::Ball);
    MatC u = MatC::Identity(model.dim(), model.dim());
    u.block(1, 1, model.n(), model.n()) = random_unitary(rng, model.n());
    const Isometry trans = transvection_to(ball, random_interior(rng, ball));
    MatC m = trans.m * u;
    if (model.basis() == Basis::Siegel) {
        const MatC c = HermitianModel::siegel_to_ball_matrix(model.n());
        m = c.adjoint() * m * c;
    }
    return {m};
}

inline HeisenbergElement random_heisenberg(std::mt19937_64& rng, int n, double scale = 1.0) {
    return {random_unitary(rng, n - 1), random_cvec(rng, n - 1, scale),
            std::normal_distribution<double>(0.0, scale)(rng)};
}

inline HeisenbergElement random_unipotent(std::mt19937_64& rng, int n, double scale = 1.0) {
    return {MatC::Identity(n - 1, n - 1), random_cvec(rng, n - 1, scale),
            std::normal_distribution<double>(0.0, scale)(rng)};
}

// Random generating set with abelian Pi-image: commuting unitary parts in a
// shared frame, translation parts b = (I - T) Lambda + (V1 component), free
// center coordinates. n_fix directions are fixed by every generator.
inline ParabolicGroupInput random_pi_abelian_input(std::mt19937_64& rng, int n, int n_gens,
                                                   int n_fix) {
    const int m = n - 1;
    const MatC frame = random_unitary(rng, m);
    const VecC lambda_eig = [&] {
        VecC l = random_cvec(rng, m);
        for (int i = 0; i < n_fix; ++i) l(i) = 0.0;  // first n_fix = fixed directions
        return l;
    }();
    std::uniform_real_distribution<double> theta(0.35, 2.0 * 3.14159265358979 - 0.35);
    std::bernoulli_distribution fix_this(0.4);

    ParabolicGroupInput input;
    std::vector<VecC> eigs(n_gens);
    for (auto& e : eigs) e = VecC::Ones(m);
    for (int i = n_fix; i < m; ++i) {
        bool some_moving = false;
        while (!some_moving)
            for (int j = 0; j < n_gens; ++j) {
                const bool fixed_here = fix_this(rng);
                eigs[j](i) = fixed_here ? cplx(1.0) : std::polar(1.0, theta(rng));
                some_moving = some_moving || !fixed_here;
            }
    }
    for (int j = 0; j < n_gens; ++j) {
        const MatC t = frame * eigs[j].asDiagonal() * frame.adjoint();
        VecC v_eig = VecC::Zero(m);
        for (int i = 0; i < n_fix; ++i) v_eig(i) = random_cplx(rng);
        const VecC b = (MatC::Identity(m, m) - t) * (frame * lambda_eig) + frame * v_eig;
        input.generators.push_back(
            {t, b, std::normal_distribution<double>(0.0, 1.0)(rng)});
    }
    return input;
}

// The two unipotent generators of the punctured-disk bundle over the square
// torus: translations by e1 and i e1.
inline ParabolicGroupInput square_lattice_input(int n = 2) {
    VecC e1 = VecC::Zero(n - 1);
    e1(0) = 1.0;
    ParabolicGroupInput input;
    input.generators.push_back({MatC::Identity(n - 1, n - 1), e1, 0.0});
    input.generators.push_back({MatC::Identity(n - 1, n - 1), cplx(0, 1) * e1, 0.0});
    return input;
}

inline GroupSpec to_spec(const ParabolicGroupInput& input, int n) {
    const HermitianModel siegel(n, Basis::Siegel);
    GroupSpec spec{siegel, {}, std::nullopt};
    for (const auto& g : input.generators) spec.generators.push_back(embed(siegel, g));
    return spec;
}

// Loxodromic boost along ball axis k with translation length t.
inline Isometry boost_along(const HermitianModel& ball, int axis, double t) {
    MatC m = MatC::Identity(ball.dim(), ball.dim());
    m(0, 0) = std::cosh(t);
    m(0, axis + 1) = std::sinh(t);
    m(axis + 1, 0) = std::sinh(t);
    m(axis + 1, axis + 1) = std::cosh(t);
    return {m};
}

}  // namespace chc::testing
