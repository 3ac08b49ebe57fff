#include "helpers.hpp"

#include <doctest.h>

using namespace chc;
using namespace chc::testing;

TEST_CASE("unitary_completion maps e1 to u and is unitary") {
    auto rng = make_rng(11);
    for (int m : {1, 2, 3, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            VecC u = random_cvec(rng, m);
            u /= u.norm();
            const MatC v = unitary_completion(u);
            CHECK((v * VecC::Unit(m, 0) - u).norm() < 1e-12);
            CHECK((v.adjoint() * v - MatC::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    const MatC v = unitary_completion(VecC::Unit(3, 0));
    CHECK((v - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("real_rank on hand-built spans") {
    MatR cols(4, 3);
    cols.col(0) << 1, 0, 0, 0;
    cols.col(1) << 0, 1, 0, 0;
    cols.col(2) << 1, 1, 0, 0;  // dependent
    CHECK(real_rank(cols) == 2);
    CHECK(real_rank(MatR::Zero(4, 2)) == 0);
}

TEST_CASE("simultaneous_diagonalize handles commuting families with repeats") {
    auto rng = make_rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % 3);
        const MatC frame = random_unitary(rng, m);
        std::vector<MatC> family;
        std::uniform_real_distribution<double> th(0.0, 6.28);
        std::bernoulli_distribution repeat(0.5);
        for (int j = 0; j < k; ++j) {
            VecC eig(m);
            for (int i = 0; i < m; ++i)
                eig(i) = (repeat(rng) && i > 0) ? eig(i - 1) : std::polar(1.0, th(rng));
            family.push_back(frame * eig.asDiagonal() * frame.adjoint());
        }
        const MatC q = simultaneous_diagonalize(family, 5 + rep);
        CHECK((q.adjoint() * q - MatC::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
        for (const auto& t : family) {
            MatC d = q.adjoint() * t * q;
            d.diagonal().setZero();
            CHECK(d.cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("simultaneous_diagonalize is deterministic in the seed") {
    auto rng = make_rng(23);
    const MatC frame = random_unitary(rng, 3);
    std::vector<MatC> family;
    for (int j = 0; j < 2; ++j) {
        VecC eig(3);
        for (int i = 0; i < 3; ++i) eig(i) = std::polar(1.0, 0.7 * (i + 1) * (j + 1));
        family.push_back(frame * eig.asDiagonal() * frame.adjoint());
    }
    const MatC a = simultaneous_diagonalize(family, 42);
    const MatC b = simultaneous_diagonalize(family, 42);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simultaneous_diagonalize rejects a non-commuting family") {
    MatC swap(2, 2), diag(2, 2);
    swap << 0, 1, 1, 0;
    diag << 1, 0, 0, -1;
    CHECK_THROWS_AS(simultaneous_diagonalize({swap, diag}, 1), std::runtime_error);
}
