#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace chc;
using namespace chc::testing;

namespace {

struct Fixture {
    HermitianModel ball{2, Basis::Ball};
    std::vector<VecC> lifts;
    kernels::AtomArray atoms;
    VecC probe;

    explicit Fixture(std::size_t count, std::uint64_t seed = 211) {
        auto rng = make_rng(seed);
        for (std::size_t i = 0; i < count; ++i) {
            VecC lift = random_interior(rng, ball, 0.97).lift;
            lift *= random_cplx(rng);  // exercise non-normalized, rotated lifts
            lifts.push_back(lift);
        }
        atoms = kernels::AtomArray::build(lifts);
        probe = random_interior(rng, ball, 0.5).lift;
        probe /= std::sqrt(-ball.form_self(probe));
    }
};

}  // namespace

TEST_CASE("AtomArray normalizes lifts to h = -1") {
    Fixture f(37);
    CHECK(f.atoms.count == 37);
    CHECK(f.atoms.stride % 4 == 0);
    for (std::size_t i = 0; i < f.atoms.count; ++i) {
        double h = 0.0;
        for (int j = 0; j < f.atoms.dim; ++j) {
            const double re = f.atoms.re_plane(j)[i], im = f.atoms.im_plane(j)[i];
            h += (j == 0 ? -1.0 : 1.0) * (re * re + im * im);
        }
        CHECK(h == doctest::Approx(-1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernels::AtomArray::build({VecC::Unit(3, 1)}), std::invalid_argument);
}

TEST_CASE("scalar batch_cosh2 matches the geometry-level distance") {
    Fixture f(101);
    std::vector<double> c2(f.atoms.count);
    kernels::scalar::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, c2.data());
    for (std::size_t i = 0; i < f.atoms.count; ++i) {
        const double expect =
            cosh2_distance(f.ball, ProjectivePoint{f.probe}, ProjectivePoint{f.lifts[i]});
        CHECK(c2[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("scalar weight_sum and batch_dist against std") {
    Fixture f(53);
    std::vector<double> c2(f.atoms.count), d(f.atoms.count);
    kernels::scalar::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, c2.data());
    kernels::scalar::batch_dist(c2.data(), c2.size(), d.data());
    const double s = 1.7;
    double expect = 0.0;
    for (std::size_t i = 0; i < c2.size(); ++i) {
        CHECK(d[i] == doctest::Approx(std::acosh(std::sqrt(std::max(1.0, c2[i])))));
        expect += std::exp(-s * d[i]);
    }
    CHECK(kernels::scalar::weight_sum(c2.data(), c2.size(), s) ==
          doctest::Approx(expect).epsilon(1e-13));
    CHECK(kernels::scalar::exp_sum(d.data(), d.size(), s) ==
          doctest::Approx(expect).epsilon(1e-13));
}

#ifdef CHC_BUILD_AVX2
TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available on this host; skipping");
        return;
    }
    for (std::size_t count : {1, 2, 3, 4, 5, 63, 64, 1000, 20011}) {
        Fixture f(count, 300 + count);
        std::vector<double> c2a(count), c2b(count), da(count), db(count);
        kernels::scalar::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, c2a.data());
        kernels::avx2::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, c2b.data());
        for (std::size_t i = 0; i < count; ++i)
            CHECK(c2b[i] == doctest::Approx(c2a[i]).epsilon(1e-12));

        kernels::scalar::batch_dist(c2a.data(), count, da.data());
        kernels::avx2::batch_dist(c2a.data(), count, db.data());
        for (std::size_t i = 0; i < count; ++i)
            CHECK(db[i] == doctest::Approx(da[i]).epsilon(1e-12));

        for (double s : {0.0, 0.31, 1.0, 2.5, 7.0}) {
            const double ws = kernels::scalar::weight_sum(c2a.data(), count, s);
            const double wa = kernels::avx2::weight_sum(c2a.data(), count, s);
            CHECK(wa == doctest::Approx(ws).epsilon(1e-10));
            const double es = kernels::scalar::exp_sum(da.data(), count, s);
            const double ea = kernels::avx2::exp_sum(da.data(), count, s);
            CHECK(ea == doctest::Approx(es).epsilon(1e-10));
        }
    }
}

TEST_CASE("avx2 transcendental accuracy across magnitudes") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available on this host; skipping");
        return;
    }
    // distances spanning cosh^2 in [1, 1e12]
    std::vector<double> c2;
    for (double e = 0.0; e <= 12.0; e += 0.03125) c2.push_back(std::pow(10.0, e));
    c2.push_back(1.0 + 1e-12);
    c2.push_back(1.0);
    std::vector<double> got(c2.size());
    kernels::avx2::batch_dist(c2.data(), c2.size(), got.data());
    for (std::size_t i = 0; i < c2.size(); ++i) {
        const double expect = std::acosh(std::sqrt(c2[i]));
        CHECK(std::abs(got[i] - expect) <= 1e-11 * std::max(1.0, expect));
    }
    // exp over a wide negative range via singleton sums
    for (double x : {1e-9, 0.1, 1.0, 3.0, 17.0, 120.0, 500.0}) {
        const double d[1] = {x};
        const double got_e = kernels::avx2::exp_sum(d, 1, 1.0);
        CHECK(got_e == doctest::Approx(std::exp(-x)).epsilon(1e-11));
    }
}
#endif

TEST_CASE("dispatch honors set_impl") {
    const kernels::Impl before = kernels::active_impl();
    kernels::set_impl(kernels::Impl::Scalar);
    CHECK(kernels::active_impl() == kernels::Impl::Scalar);
    Fixture f(17);
    std::vector<double> c2(17);
    kernels::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, c2.data());
    std::vector<double> ref(17);
    kernels::scalar::batch_cosh2(f.probe.data(), f.atoms.dim, f.atoms, ref.data());
    for (int i = 0; i < 17; ++i) CHECK(c2[i] == ref[i]);
    if (kernels::avx2_available()) {
        kernels::set_impl(kernels::Impl::Avx2);
        CHECK(kernels::active_impl() == kernels::Impl::Avx2);
    }
    kernels::set_impl(before);
}
