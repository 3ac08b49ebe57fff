#include "helpers.hpp"

#include <doctest.h>

using namespace chc;
using namespace chc::testing;

TEST_CASE("form evaluation in both bases") {
    const HermitianModel ball(2, Basis::Ball);
    const HermitianModel siegel(2, Basis::Siegel);

    VecC e0 = VecC::Unit(3, 0), e1 = VecC::Unit(3, 1);
    CHECK(ball.form(e0, e0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(ball.form(e0, e1)) < 1e-15);

    // f1 is null: q(f1) = 2 Re(1 * conj(0)) = 0
    CHECK(std::abs(siegel.form(e0, e0)) < 1e-15);

    CHECK_THROWS_AS(ball.form(VecC::Zero(2), e0), std::invalid_argument);
}

TEST_CASE("change of basis conjugates one Gram matrix to the other") {
    for (int n : {1, 2, 3, 5}) {
        const HermitianModel ball(n, Basis::Ball);
        const HermitianModel siegel(n, Basis::Siegel);
        const MatC c = HermitianModel::siegel_to_ball_matrix(n);
        CHECK((c.adjoint() * ball.gram() * c - siegel.gram()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("form values agree across the basis change") {
    auto rng = make_rng(3);
    const HermitianModel ball(3, Basis::Ball);
    const HermitianModel siegel(3, Basis::Siegel);
    const MatC c = HermitianModel::siegel_to_ball_matrix(3);
    for (int rep = 0; rep < 50; ++rep) {
        const VecC v = random_cvec(rng, 4), w = random_cvec(rng, 4);
        CHECK(std::abs(siegel.form(v, w) - ball.form(c * v, c * w)) < 1e-12);
    }
}

TEST_CASE("vector classification by sign of q") {
    const HermitianModel ball(2, Basis::Ball);
    VecC v(3);
    v << 1.0, 0.3, 0.2;
    CHECK(ball.classify_vector(v) == PointClass::Interior);
    v << 1.0, 1.0, 0.0;
    CHECK(ball.classify_vector(v) == PointClass::Boundary);
    v << 0.1, 1.0, 0.0;
    CHECK(ball.classify_vector(v) == PointClass::Exterior);
    // scale invariance of the boundary tolerance
    v << 1.0, 1.0, 0.0;
    CHECK(ball.classify_vector(1e8 * v) == PointClass::Boundary);
}

TEST_CASE("siegel chart: examples and round trip") {
    const HermitianModel siegel(3, Basis::Siegel);

    // (-1, 0) -> [-f1 + f2]
    const SiegelPoint base{cplx(-1.0, 0.0), VecC::Zero(2)};
    const ProjectivePoint p = siegel_to_projective(siegel, base);
    VecC expect(4);
    expect << -1.0, 1.0, 0.0, 0.0;
    CHECK(p.projectively_equal({expect}, 1e-14));

    // inverse of [f2] is the boundary point (0,0): rejected
    VecC f2 = VecC::Unit(4, 1);
    CHECK_THROWS_AS(projective_to_siegel(siegel, {f2}), std::domain_error);

    // boundary forward direction rejected too
    CHECK_THROWS_AS(siegel_to_projective(siegel, SiegelPoint{cplx(0, 0), VecC::Zero(2)}),
                    std::domain_error);

    auto rng = make_rng(5);
    std::uniform_real_distribution<double> u01(0.05, 3.0);
    for (int rep = 0; rep < 1000; ++rep) {
        VecC u = random_cvec(rng, 2);
        const double need = -0.5 * (u.squaredNorm() + u01(rng));
        const SiegelPoint s{cplx(need, 10.0 * (u01(rng) - 1.5)), u};
        REQUIRE(s.interior());
        const SiegelPoint back = projective_to_siegel(siegel, siegel_to_projective(siegel, s));
        CHECK(std::abs(back.a - s.a) < 1e-12 * std::max(1.0, std::abs(s.a)));
        CHECK((back.u - s.u).norm() < 1e-12);
    }
}

TEST_CASE("ball coordinates round trip and origin consistency") {
    auto rng = make_rng(7);
    for (Basis basis : {Basis::Ball, Basis::Siegel}) {
        const HermitianModel model(2, basis);
        const ProjectivePoint o = origin(model);
        CHECK(ball_coords(model, o).norm() < 1e-14);
        for (int rep = 0; rep < 100; ++rep) {
            const ProjectivePoint x = random_interior(rng, model);
            const VecC z = ball_coords(model, x);
            CHECK(z.norm() < 1.0);
            CHECK(from_ball_coords(model, z).projectively_equal(x, 1e-12));
        }
    }
    // the ball origin is the siegel point (-1, 0)
    const HermitianModel siegel(2, Basis::Siegel);
    const SiegelPoint s = projective_to_siegel(siegel, origin(siegel));
    CHECK(std::abs(s.a - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(s.u.norm() < 1e-14);
}
