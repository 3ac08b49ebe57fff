#include "chc/density.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace chc {

double DensityApprox::tail_weight_share(double radius) const {
    double share = 0.0;
    for (std::size_t i = 0; i < displacements.size(); ++i)
        if (displacements[i] >= radius) share += weights[i];
    return share;
}

DensityApprox build_density(const OrbitCloud& cloud, double s) {
    if (s <= 0.0) throw std::invalid_argument("build_density: s must be positive");
    DensityApprox d;
    d.s = s;
    d.dim = cloud.dim;
    d.basepoint_lift = cloud.basepoint_lift;

    std::vector<VecC> lifts;
    lifts.reserve(cloud.size());
    d.displacements.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (cloud.records[i].in_radius == 0.0f) continue;
        lifts.emplace_back(Eigen::Map<const VecC>(cloud.atom_lift(i), cloud.dim));
        d.displacements.push_back(cloud.records[i].displacement);
    }
    d.atoms = kernels::AtomArray::build(lifts);
    d.phi = kernels::exp_sum(d.displacements.data(), d.displacements.size(), s);
    d.weights.resize(d.displacements.size());
    for (std::size_t i = 0; i < d.weights.size(); ++i)
        d.weights[i] = std::exp(-s * d.displacements[i]) / d.phi;
    return d;
}

namespace {

VecC normalized_interior_lift(const DensityApprox& density, const ProjectivePoint& x) {
    VecC v = x.lift;
    if (v.size() != density.dim)
        throw std::invalid_argument("mass_at: wrong ambient dimension");
    double h = -std::norm(v(0));
    for (int j = 1; j < density.dim; ++j) h += std::norm(v(j));
    if (h >= 0.0) throw std::domain_error("mass_at: point not interior");
    return v / std::sqrt(-h);
}

}  // namespace

double mass_at(const DensityApprox& density, const ProjectivePoint& x) {
    const VecC v = normalized_interior_lift(density, x);
    std::vector<double> cosh2(density.size());
    kernels::batch_cosh2(v.data(), density.dim, density.atoms, cosh2.data());
    return kernels::weight_sum(cosh2.data(), cosh2.size(), density.s) / density.phi;
}

double log_mass(const DensityApprox& density, const ProjectivePoint& x) {
    return -std::log(mass_at(density, x));
}

LeviProbe make_probe(const HermitianModel& ball, const ProjectivePoint& x,
                     const ProjectivePoint& direction, double h) {
    if (h <= 0.0 || h >= 0.5)
        throw std::invalid_argument("make_probe: step must lie in (0, 0.5)");
    LeviProbe p{x, direction, j_direction(ball, x, direction), h};
    for (const auto* dirpt : {&p.dir, &p.jdir})
        for (double t : {h, -h}) {
            const ProjectivePoint q = geodesic_step(ball, x, *dirpt, t);
            if (ball.classify_vector(q.lift) != PointClass::Interior)
                throw std::domain_error("make_probe: stencil leaves the interior");
        }
    return p;
}

double levi_finite_difference(const HermitianModel& ball, const LeviProbe& probe,
                              const std::function<double(const ProjectivePoint&)>& f) {
    const double fx = f(probe.x);
    double acc = 0.0;
    for (const auto* dirpt : {&probe.dir, &probe.jdir}) {
        acc += f(geodesic_step(ball, probe.x, *dirpt, probe.h)) - 2.0 * fx +
               f(geodesic_step(ball, probe.x, *dirpt, -probe.h));
    }
    return acc / (2.0 * probe.h * probe.h);
}

double levi_lower_bound(const DensityApprox& density, const LeviProbe& probe) {
    const HermitianModel ball(density.dim - 1, Basis::Ball);
    return levi_finite_difference(
        ball, probe, [&](const ProjectivePoint& p) { return log_mass(density, p); });
}

LeviGridResult levi_grid(const DensityApprox& density, int n_points, int n_dirs, double h,
                         double radius, std::uint64_t seed, double delta_hat,
                         double tolerance) {
    if (n_points < 1 || n_dirs < 1)
        throw std::invalid_argument("levi_grid: need at least one point and direction");
    const int n = density.dim - 1;
    const HermitianModel ball(n, Basis::Ball);
    LeviGridResult out;
    out.delta_hat = delta_hat;
    out.h = h;
    out.seed = seed;
    out.threshold = delta_hat * (1.0 - 0.5 * delta_hat) - tolerance;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto random_unit = [&]() {
        VecC u(n);
        double norm2 = 0.0;
        do {
            for (int i = 0; i < n; ++i) u(i) = cplx(gauss(rng), gauss(rng));
            norm2 = u.squaredNorm();
        } while (norm2 < 1e-12);
        return VecC(u / std::sqrt(norm2));
    };

    out.min_estimate = std::numeric_limits<double>::infinity();
    for (int p = 0; p < n_points; ++p) {
        // radial sampling keeps probes away from the basepoint atom's cone point
        const double r = 0.15 + (radius - 0.15) * unif(rng);
        const VecC z = std::tanh(r) * random_unit();
        const ProjectivePoint x = from_ball_coords(ball, z);
        const Isometry mx = transvection_to(ball, x);
        for (int didx = 0; didx < n_dirs; ++didx) {
            // direction point: a short move from x inside its centered chart
            const ProjectivePoint dir{
                mx.m * from_ball_coords(ball, 0.3 * std::tanh(1.0) * random_unit()).lift};
            const LeviProbe probe = make_probe(ball, x, dir, h);
            LeviGridRow row;
            row.point = p;
            row.direction = didx;
            row.point_coords = z;
            row.estimate = levi_lower_bound(density, probe);
            out.min_estimate = std::min(out.min_estimate, row.estimate);
            out.rows.push_back(std::move(row));
        }
    }
    out.pass = out.min_estimate >= out.threshold;
    return out;
}

std::string levi_grid_csv(const LeviGridResult& grid) {
    std::ostringstream os;
    os << "point,direction,coords,levi_estimate,threshold,pass\n";
    char buf[64];
    for (const auto& row : grid.rows) {
        os << row.point << ',' << row.direction << ',';
        os << '"';
        for (int i = 0; i < row.point_coords.size(); ++i) {
            if (i) os << ' ';
            std::snprintf(buf, sizeof buf, "%.9g%+.9gi", row.point_coords(i).real(),
                          row.point_coords(i).imag());
            os << buf;
        }
        os << "\",";
        std::snprintf(buf, sizeof buf, "%.12g", row.estimate);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.12g", grid.threshold);
        os << buf << ',' << (row.estimate >= grid.threshold ? "pass" : "fail") << '\n';
    }
    return os.str();
}

InvarianceBound log_mass_invariance_bound(const DensityApprox& density,
                                          const ProjectivePoint& x,
                                          double gen_displacement) {
    InvarianceBound b;
    b.band_width = gen_displacement;
    double r_max = 0.0;
    for (double d : density.displacements) r_max = std::max(r_max, d);
    b.band_share = density.tail_weight_share(r_max - gen_displacement);
    const ProjectivePoint o{density.basepoint_lift};
    const HermitianModel ball(density.dim - 1, Basis::Ball);
    const double dx = distance(ball, o, x);
    const double m_x = mass_at(density, x);
    // |m(gx) - m(x)| <= band_share e^{s d(o,x)} (1 + e^{s ell}); divide by a
    // lower bound for the masses (identity atom alone, at distance <= dx + ell).
    const double mass_floor =
        std::min(m_x, std::exp(-density.s * (dx + gen_displacement)) / density.phi);
    b.bound = b.band_share * std::exp(density.s * dx) *
              (1.0 + std::exp(density.s * gen_displacement)) / std::max(mass_floor, 1e-300);
    return b;
}

}  // namespace chc
