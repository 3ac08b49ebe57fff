#include "helpers.hpp"

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

using namespace chc;
using namespace chc::testing;

namespace {

GroupSpec cyclic_loxodromic_spec(double t) {
    const HermitianModel siegel(2, Basis::Siegel);
    MatC a = MatC::Identity(3, 3);
    a(0, 0) = std::exp(t);
    a(1, 1) = std::exp(-t);
    return {siegel, {Isometry{a}}, std::nullopt};
}

// Exact integer model of the square-torus lattice group for oracle counts:
// state (k1, k2, c), right multiplication by the four letters.
std::set<std::array<int, 3>> lattice_ball(int depth) {
    std::set<std::array<int, 3>> seen{{0, 0, 0}};
    std::vector<std::array<int, 3>> frontier{{0, 0, 0}};
    for (int len = 1; len <= depth; ++len) {
        std::vector<std::array<int, 3>> next;
        for (const auto& st : frontier) {
            const auto [k1, k2, c] = st;
            const std::array<std::array<int, 3>, 4> steps = {
                std::array<int, 3>{k1 + 1, k2, c + k2},
                std::array<int, 3>{k1 - 1, k2, c - k2},
                std::array<int, 3>{k1, k2 + 1, c - k1},
                std::array<int, 3>{k1, k2 - 1, c + k1}};
            for (const auto& s : steps)
                if (seen.insert(s).second) next.push_back(s);
        }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

TEST_CASE("orbit of a cyclic loxodromic group") {
    const GroupSpec spec = cyclic_loxodromic_spec(1.0);

    SUBCASE("depth 0 is just the identity") {
        const OrbitCloud cloud = enumerate_orbit(spec, 0, 100);
        CHECK(cloud.size() == 1);
        CHECK(cloud.records[0].displacement == 0.0);
        CHECK(cloud.records[0].word_length == 0);
    }

    SUBCASE("depth 5 gives the 11 powers g^-5..g^5 at displacement |k|") {
        const OrbitCloud cloud = enumerate_orbit(spec, 5, 1000);
        REQUIRE(cloud.size() == 11);
        std::multiset<int> got;
        for (const auto& r : cloud.records)
            got.insert(static_cast<int>(std::llround(r.displacement)));
        const std::multiset<int> expect{0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
        CHECK(got == expect);
        for (const auto& r : cloud.records)
            CHECK(std::abs(r.displacement - std::llround(r.displacement)) < 1e-10);
        CHECK(cloud.hit_word_cap);
        CHECK_FALSE(cloud.hit_point_cap);
    }

    SUBCASE("the point cap truncates and is reported") {
        const OrbitCloud cloud = enumerate_orbit(spec, 50, 7);
        CHECK(cloud.size() == 7);
        CHECK(cloud.hit_point_cap);
    }
}

TEST_CASE("orbit of the square-torus lattice matches the integer oracle") {
    const GroupSpec spec = to_spec(square_lattice_input(2), 2);
    for (int depth : {1, 2, 3, 4}) {
        const OrbitCloud cloud = enumerate_orbit(spec, depth, 1 << 20);
        const auto oracle = lattice_ball(depth);
        CHECK(cloud.size() == oracle.size());
    }
    // gamma1 gamma2 and gamma2 gamma1 are distinct matrices
    const OrbitCloud cloud = enumerate_orbit(spec, 2, 1 << 20);
    CHECK_FALSE(cloud.relation_warning);
}

TEST_CASE("dedup soundness: canonical keys stay far apart") {
    const GroupSpec spec = to_spec(square_lattice_input(2), 2);
    const OrbitCloud cloud = enumerate_orbit(spec, 4, 1 << 20);
    const HermitianModel ball(2, Basis::Ball);
    // replay the words to recover canonical matrices
    std::vector<MatC> mats;
    const MatC to_ball = HermitianModel::siegel_to_ball_matrix(2);
    std::vector<MatC> alphabet;
    for (const auto& g : spec.generators)
        alphabet.push_back(to_ball * g.m * to_ball.adjoint());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::istringstream is(cloud.word(i));
        MatC m = MatC::Identity(3, 3);
        int letter = 0;
        while (is >> letter) {
            const MatC& a = alphabet[std::abs(letter) - 1];
            m = letter > 0 ? MatC(m * a) : MatC(m * Isometry{a}.inverse_against(ball).m);
        }
        mats.push_back(canonical_form(m));
    }
    double closest = 1e9;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j)
            closest = std::min(closest, (mats[i] - mats[j]).cwiseAbs().maxCoeff());
    CHECK(closest >= 1e-6);
}

TEST_CASE("torsion generators trip the relation warning") {
    const HermitianModel ball(2, Basis::Ball);
    MatC u = MatC::Identity(3, 3);
    u(1, 1) = -1.0;  // elliptic involution fixing the origin
    const GroupSpec spec{ball, {Isometry{u}}, std::nullopt};
    const OrbitCloud cloud = enumerate_orbit(spec, 3, 100);
    CHECK(cloud.size() == 2);
    CHECK(cloud.relation_warning);
    CHECK(cloud.relation_detail.find("abelianization") != std::string::npos);
}

TEST_CASE("non form-preserving generators are rejected") {
    const HermitianModel ball(2, Basis::Ball);
    MatC bad = MatC::Identity(3, 3);
    bad(1, 1) = 1.5;
    CHECK_THROWS_AS(enumerate_orbit({ball, {Isometry{bad}}, std::nullopt}, 2, 10),
                    std::invalid_argument);
}

TEST_CASE("radius filter marks far records and displacement lists respect caps") {
    const GroupSpec spec = cyclic_loxodromic_spec(1.0);
    const OrbitCloud cloud = enumerate_orbit(spec, 6, 1000, 3.5);
    CHECK(cloud.size() == 13);  // all visited
    const auto ds = cloud.displacements();
    CHECK(ds.size() == 7);  // |k| <= 3 pass the filter
    CHECK(ds.back() <= 3.5);
    const auto ds2 = cloud.displacements(1.5);
    CHECK(ds2.size() == 3);
}

TEST_CASE("threaded enumeration matches the sequential result exactly") {
    const GroupSpec spec = to_spec(square_lattice_input(2), 2);
    const double inf = std::numeric_limits<double>::infinity();
    const OrbitCloud seq = enumerate_orbit(spec, 5, 1 << 20, inf, 1);
    const OrbitCloud par = enumerate_orbit(spec, 5, 1 << 20, inf, 2);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq.records[i].key_hash == par.records[i].key_hash);
        CHECK(seq.records[i].parent == par.records[i].parent);
        CHECK(seq.records[i].letter == par.records[i].letter);
        CHECK(seq.records[i].displacement == par.records[i].displacement);
    }
}

TEST_CASE("poincare partial sums") {
    // translation length 2: sum at s is 1 + 2 sum_k e^{-2ks}
    const GroupSpec spec = cyclic_loxodromic_spec(2.0);
    const OrbitCloud cloud = enumerate_orbit(spec, 5, 100);
    double expect = 1.0;
    for (int k = 1; k <= 5; ++k) expect += 2.0 * std::exp(-2.0 * k);
    CHECK(poincare_partial_sum(cloud, 1.0) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(poincare_partial_sum(cloud, 0.0) == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(poincare_partial_sum(cloud, 60.0) == doctest::Approx(1.0).epsilon(1e-10));
    // monotone in s and in the cloud
    const OrbitCloud bigger = enumerate_orbit(spec, 7, 100);
    double prev = 1e300;
    for (double s = 0.0; s <= 3.0; s += 0.25) {
        const double val = poincare_partial_sum(cloud, s);
        CHECK(val <= prev);
        CHECK(poincare_partial_sum(bigger, s) >= val);
        prev = val;
    }
    CHECK_THROWS_AS(poincare_partial_sum(cloud, -0.1), std::invalid_argument);
}

TEST_CASE("delta estimates on groups with known exponents") {
    SUBCASE("cyclic loxodromic: delta = 0") {
        const OrbitCloud cloud = enumerate_orbit(cyclic_loxodromic_spec(1.0), 120, 1000);
        const DeltaEstimate est = estimate_delta(cloud);
        CHECK(est.estimate <= 0.1);
        CHECK(std::abs(est.shell_estimate - est.bisection_estimate) <= 0.3);
    }

    SUBCASE("single unipotent translation: delta = 1/2") {
        VecC e1 = VecC::Unit(1, 0);
        ParabolicGroupInput input;
        input.generators.push_back({MatC::Identity(1, 1), e1, 0.0});
        const OrbitCloud cloud = enumerate_orbit(to_spec(input, 2), 500, 2000);
        const DeltaEstimate est = estimate_delta(cloud);
        CHECK(est.estimate >= 0.3);
        CHECK(est.estimate <= 0.7);
        CHECK(std::abs(est.shell_estimate - est.bisection_estimate) <= 0.3);
    }

    SUBCASE("square-torus lattice at moderate depth: near 2 and estimators agree") {
        const GroupSpec spec = to_spec(square_lattice_input(2), 2);
        const OrbitCloud cloud = enumerate_orbit(spec, 40, 120000);
        const DeltaEstimate est = estimate_delta(cloud);
        CHECK(est.estimate >= 1.5);
        CHECK(est.estimate <= 2.5);
        CHECK(std::abs(est.shell_estimate - est.bisection_estimate) <= 0.3);
    }
}

TEST_CASE("delta estimate diagnostics and errors") {
    SUBCASE("insufficient data") {
        const OrbitCloud cloud = enumerate_orbit(cyclic_loxodromic_spec(1.0), 3, 1000);
        CHECK_THROWS_AS(estimate_delta(cloud), InsufficientOrbitError);
    }

    SUBCASE("degenerate displacements") {
        const HermitianModel ball(2, Basis::Ball);
        MatC u = MatC::Identity(3, 3);
        u(1, 1) = std::polar(1.0, 2.2);  // elliptic fixing the basepoint
        const OrbitCloud cloud = enumerate_orbit({ball, {Isometry{u}}, std::nullopt}, 6, 40);
        CHECK_THROWS_AS(estimate_delta(cloud, std::numeric_limits<double>::infinity(), 1),
                        DegenerateOrbitError);
    }

    SUBCASE("shell diagnostics are cumulative and consistent") {
        const OrbitCloud cloud = enumerate_orbit(cyclic_loxodromic_spec(1.0), 80, 1000);
        const DeltaEstimate est = estimate_delta(cloud);
        REQUIRE(!est.shell_counts.empty());
        CHECK(est.shell_counts.back() == est.points_used);
        CHECK(est.shell_radii.size() == est.shell_counts.size());
        for (std::size_t i = 1; i < est.shell_counts.size(); ++i) {
            CHECK(est.shell_counts[i] > est.shell_counts[i - 1]);
            CHECK(est.shell_radii[i] > est.shell_radii[i - 1]);
        }
    }
}

TEST_CASE("basepoint robustness of the estimate") {
    VecC e1 = VecC::Unit(1, 0);
    ParabolicGroupInput input;
    input.generators.push_back({MatC::Identity(1, 1), e1, 0.0});
    GroupSpec spec = to_spec(input, 2);
    const DeltaEstimate a = estimate_delta(enumerate_orbit(spec, 400, 2000));
    const HermitianModel siegel(2, Basis::Siegel);
    spec.basepoint = siegel_to_projective(siegel, {cplx(-1.7, 0.4), 0.3 * VecC::Ones(1)});
    const DeltaEstimate b = estimate_delta(enumerate_orbit(spec, 400, 2000));
    CHECK(std::abs(a.estimate - b.estimate) <= 0.2);
}

TEST_CASE("orbit csv export") {
    const OrbitCloud cloud = enumerate_orbit(cyclic_loxodromic_spec(1.0), 3, 100);
    const std::string csv = orbit_csv(cloud);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "key_hash,word,word_length,displacement");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == cloud.size());
    // words reconstruct: g g g has length 3
    bool found = false;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (cloud.word(i) == "1 1 1") found = true;
    CHECK(found);
}
