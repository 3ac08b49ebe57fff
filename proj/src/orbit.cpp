#include "chc/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace chc {

namespace {

constexpr double kKeyGrid = 1e5;        // quantization cells of 1e-5
constexpr double kBoundaryBand = 1e-3;  // probe the neighbor cell this close to it
constexpr double kConfirmTol = 1e-6;    // exact duplicate confirmation

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// Quantized cells of the canonical matrix plus, for entries sitting close to
// a cell wall, the hashes of the neighboring cells an fp-noise twin could
// land in. Almost always a single hash.
void candidate_hashes(const double* vals, int count, std::uint64_t& base,
                      std::vector<std::uint64_t>& all) {
    all.clear();
    static thread_local std::vector<std::int64_t> cells;
    static thread_local std::vector<int> wobble_idx;
    static thread_local std::vector<std::int64_t> wobble_shift;
    cells.clear();
    wobble_idx.clear();
    wobble_shift.clear();
    for (int i = 0; i < count; ++i) {
        const double scaled = vals[i] * kKeyGrid;
        const double cell = std::nearbyint(scaled);
        cells.push_back(static_cast<std::int64_t>(cell));
        const double frac = scaled - cell;
        if (std::abs(frac) > 0.5 - kBoundaryBand && wobble_idx.size() < 6) {
            wobble_idx.push_back(i);
            wobble_shift.push_back(frac > 0 ? 1 : -1);
        }
    }
    const auto hash_cells = [&]() {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto c : cells) h = mix(h, static_cast<std::uint64_t>(c));
        return h;
    };
    base = hash_cells();
    all.push_back(base);
    const std::size_t combos = std::size_t(1) << wobble_idx.size();
    for (std::size_t mask = 1; mask < combos; ++mask) {
        for (std::size_t b = 0; b < wobble_idx.size(); ++b)
            cells[wobble_idx[b]] = ((mask >> b) & 1)
                                       ? cells[wobble_idx[b]] + wobble_shift[b]
                                       : cells[wobble_idx[b]];
        all.push_back(hash_cells());
        for (std::size_t b = 0; b < wobble_idx.size(); ++b)
            if ((mask >> b) & 1) cells[wobble_idx[b]] -= wobble_shift[b];
    }
}

}  // namespace

std::string OrbitCloud::word(std::size_t idx) const {
    std::vector<int> letters;
    std::int32_t cur = static_cast<std::int32_t>(idx);
    while (cur >= 0) {
        if (records[cur].letter != 0) letters.push_back(records[cur].letter);
        cur = records[cur].parent;
    }
    std::reverse(letters.begin(), letters.end());
    std::ostringstream os;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ' ';
        os << letters[i];
    }
    return os.str();
}

std::vector<double> OrbitCloud::displacements(double radius_cap) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (r.in_radius != 0.0f && r.displacement <= radius_cap)
            out.push_back(r.displacement);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<int> abelianization(const OrbitCloud& cloud, std::int64_t idx, int n_gens) {
    std::vector<int> counts(n_gens, 0);
    std::int64_t cur = idx;
    while (cur >= 0) {
        const auto& r = cloud.records[cur];
        if (r.letter > 0) ++counts[r.letter - 1];
        if (r.letter < 0) --counts[-r.letter - 1];
        cur = r.parent;
    }
    return counts;
}

}  // namespace

OrbitCloud enumerate_orbit(const GroupSpec& spec, int max_word_length,
                           std::size_t max_points, double max_radius, int threads) {
    if (max_word_length < 0) throw std::invalid_argument("enumerate_orbit: negative depth");
    if (max_points < 1) throw std::invalid_argument("enumerate_orbit: max_points < 1");
    const int n = spec.model.n();
    const int d = spec.model.dim();
    const int dd = d * d;

    // Everything runs in the ball basis; convert generators and basepoint.
    const MatC to_ball = HermitianModel::siegel_to_ball_matrix(n);
    const HermitianModel ball(n, Basis::Ball);
    std::vector<MatC> alphabet;  // generators then inverses
    for (const auto& g : spec.generators) {
        if (!preserves_form(spec.model, g, 1e-8))
            throw std::invalid_argument(
                "enumerate_orbit: generator does not preserve the form");
        MatC m = g.m;
        if (spec.model.basis() == Basis::Siegel) m = to_ball * m * to_ball.adjoint();
        alphabet.push_back(m);
    }
    const int n_gens = static_cast<int>(alphabet.size());
    if (n_gens == 0) throw std::invalid_argument("enumerate_orbit: no generators");
    for (int i = 0; i < n_gens; ++i)
        alphabet.push_back(Isometry{alphabet[i]}.inverse_against(ball).m);
    const std::size_t n_letters = alphabet.size();

    VecC o_lift;
    if (spec.basepoint) {
        o_lift = spec.basepoint->lift;
        if (spec.model.basis() == Basis::Siegel) o_lift = to_ball * o_lift;
    } else {
        o_lift = origin(ball).lift;
    }
    if (ball.classify_vector(o_lift) != PointClass::Interior)
        throw std::invalid_argument("enumerate_orbit: basepoint not interior");
    o_lift /= std::sqrt(-ball.form_self(o_lift));

    OrbitCloud cloud;
    cloud.n = n;
    cloud.dim = d;
    cloud.basepoint_lift = o_lift;
    cloud.max_word_length = max_word_length;
    cloud.max_points = max_points;
    cloud.max_radius = max_radius;

    std::vector<cplx> mat_pool;  // canonical matrices, row-major, BFS-time only
    mat_pool.reserve(std::min<std::size_t>(max_points, 1 << 20) * dd);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index;

    // cosh^2 d(o, lift) against the normalized basepoint, ball signature
    const auto displacement_of = [&](const cplx* lift) {
        double hxx = -std::norm(lift[0]);
        cplx hxy = -lift[0] * std::conj(o_lift(0));
        for (int j = 1; j < d; ++j) {
            hxx += std::norm(lift[j]);
            hxy += lift[j] * std::conj(o_lift(j));
        }
        const double c2 = std::norm(hxy) / (-hxx);  // h(o,o) = -1
        return std::acosh(std::sqrt(std::max(1.0, c2)));
    };

    const auto insert_node = [&](const MatC& canon, std::uint64_t base_hash,
                                 std::int32_t parent, std::int16_t letter) {
        OrbitRecord rec;
        rec.key_hash = base_hash;
        rec.parent = parent;
        rec.letter = letter;
        rec.word_length =
            parent < 0 ? 0 : static_cast<std::uint16_t>(cloud.records[parent].word_length + 1);
        const std::size_t lift_at = cloud.atom_pool.size();
        cloud.atom_pool.resize(lift_at + d);
        for (int r = 0; r < d; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < d; ++c) acc += canon(r, c) * o_lift(c);
            cloud.atom_pool[lift_at + r] = acc;
        }
        rec.displacement = displacement_of(cloud.atom_pool.data() + lift_at);
        rec.in_radius = rec.displacement <= max_radius ? 1.0f : 0.0f;
        cloud.max_displacement = std::max(cloud.max_displacement, rec.displacement);
        index[base_hash].push_back(static_cast<std::uint32_t>(cloud.records.size()));
        cloud.records.push_back(rec);
        mat_pool.insert(mat_pool.end(), canon.data(), canon.data() + dd);
    };

    std::vector<std::uint64_t> probe;
    const auto find_node = [&](const MatC& canon,
                               const std::vector<std::uint64_t>& hashes) -> std::int64_t {
        for (std::uint64_t h : hashes) {
            auto it = index.find(h);
            if (it == index.end()) continue;
            for (std::uint32_t idx : it->second) {
                const Eigen::Map<const MatC> stored(mat_pool.data() + std::size_t(idx) * dd,
                                                    d, d);
                if ((stored - canon).cwiseAbs().maxCoeff() <= kConfirmTol) return idx;
            }
        }
        return -1;
    };

    {
        const MatC id = canonical_form(MatC::Identity(d, d));
        std::vector<double> vals(2 * dd);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                vals[2 * (r * d + c)] = id(r, c).real();
                vals[2 * (r * d + c) + 1] = id(r, c).imag();
            }
        std::uint64_t base;
        candidate_hashes(vals.data(), 2 * dd, base, probe);
        insert_node(id, base, -1, 0);
    }

    int hw = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    hw = std::clamp(hw, 1, 8);

    struct Candidate {
        MatC canon;
        std::uint64_t base_hash = 0;
        std::vector<std::uint64_t> hashes;
        std::int32_t parent = 0;
        std::int16_t letter = 0;
    };
    constexpr std::size_t kSlab = 16384;
    std::vector<Candidate> cands(kSlab);

    std::size_t layer_begin = 0;
    cloud.layer_sizes.push_back(1);
    for (int len = 1; len <= max_word_length && !cloud.hit_point_cap; ++len) {
        const std::size_t layer_end = cloud.records.size();
        if (layer_begin == layer_end) break;  // frontier exhausted
        const std::size_t n_candidates = (layer_end - layer_begin) * n_letters;

        for (std::size_t slab_start = 0;
             slab_start < n_candidates && !cloud.hit_point_cap; slab_start += kSlab) {
            const std::size_t slab_end = std::min(n_candidates, slab_start + kSlab);
            const std::size_t slab_n = slab_end - slab_start;

            // Products, canonical forms and hashes are independent work; the
            // dedup merge below stays sequential in candidate order, so the
            // result is identical to a serial run.
            const auto worker = [&](std::size_t from, std::size_t to) {
                std::vector<double> vals(2 * dd);
                for (std::size_t c = from; c < to; ++c) {
                    const std::size_t global = slab_start + c;
                    const std::size_t node = layer_begin + global / n_letters;
                    const std::size_t a = global % n_letters;
                    Candidate& cand = cands[c];
                    const Eigen::Map<const MatC> parent_m(mat_pool.data() + node * dd, d, d);
                    cand.canon = canonical_form(parent_m * alphabet[a]);
                    for (int r = 0; r < d; ++r)
                        for (int cc = 0; cc < d; ++cc) {
                            vals[2 * (r * d + cc)] = cand.canon(r, cc).real();
                            vals[2 * (r * d + cc) + 1] = cand.canon(r, cc).imag();
                        }
                    candidate_hashes(vals.data(), 2 * dd, cand.base_hash, cand.hashes);
                    cand.parent = static_cast<std::int32_t>(node);
                    const int gen_idx = static_cast<int>(a % n_gens) + 1;
                    cand.letter = static_cast<std::int16_t>(
                        a < static_cast<std::size_t>(n_gens) ? gen_idx : -gen_idx);
                }
            };
            if (hw > 1 && slab_n >= 1024) {
                std::vector<std::thread> pool;
                const std::size_t chunk = (slab_n + hw - 1) / hw;
                for (int t = 0; t < hw; ++t) {
                    const std::size_t from = std::min(slab_n, t * chunk);
                    const std::size_t to = std::min(slab_n, from + chunk);
                    if (from < to) pool.emplace_back(worker, from, to);
                }
                for (auto& th : pool) th.join();
            } else {
                worker(0, slab_n);
            }

            for (std::size_t c = 0; c < slab_n; ++c) {
                Candidate& cand = cands[c];
                const std::int64_t existing = find_node(cand.canon, cand.hashes);
                if (existing >= 0) {
                    if (!cloud.relation_warning &&
                        cloud.records[existing].word_length != len) {
                        std::vector<int> ab_new = abelianization(cloud, cand.parent, n_gens);
                        if (cand.letter > 0) ++ab_new[cand.letter - 1];
                        if (cand.letter < 0) --ab_new[-cand.letter - 1];
                        if (ab_new != abelianization(cloud, existing, n_gens)) {
                            cloud.relation_warning = true;
                            cloud.relation_detail =
                                "words with different abelianization map to one matrix "
                                "(torsion or unexpected relation): [" +
                                cloud.word(existing) + "] vs parent [" +
                                cloud.word(cand.parent) + "] + letter " +
                                std::to_string(cand.letter);
                        }
                    }
                    continue;
                }
                if (cloud.records.size() >= max_points) {
                    cloud.hit_point_cap = true;
                    break;
                }
                insert_node(cand.canon, cand.base_hash, cand.parent, cand.letter);
            }
        }
        cloud.layer_sizes.push_back(cloud.records.size() - layer_end);
        layer_begin = layer_end;
        if (len == max_word_length && !cloud.hit_point_cap) cloud.hit_word_cap = true;
    }
    return cloud;
}

DeltaEstimate estimate_delta(const OrbitCloud& cloud, double radius_cap,
                             std::size_t min_points, double threshold) {
    DeltaEstimate est;
    est.radius_cap = radius_cap;
    est.threshold = threshold;
    const std::vector<double> ds = cloud.displacements(radius_cap);
    est.points_used = ds.size();
    if (ds.size() < min_points)
        throw InsufficientOrbitError("estimate_delta: " + std::to_string(ds.size()) +
                                     " orbit points, need " + std::to_string(min_points));

    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (est.shell_radii.empty() || ds[i] - est.shell_radii.back() > 1e-9) {
            est.shell_radii.push_back(ds[i]);
            est.shell_counts.push_back(i + 1);
        } else {
            est.shell_counts.back() = i + 1;
        }
    }
    est.truncation_radius = est.shell_radii.back();
    if (est.shell_radii.size() < 2 || est.truncation_radius <= 1e-12)
        throw DegenerateOrbitError("estimate_delta: all displacements equal");

    // least squares of ln N(R) against R, outer 20% of radii excluded
    const double window = 0.8 * est.truncation_radius;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < est.shell_radii.size(); ++i) {
        const double r = est.shell_radii[i];
        if (r > window) break;
        const double y = std::log(static_cast<double>(est.shell_counts[i]));
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        ++used;
    }
    if (used < 2) throw DegenerateOrbitError("estimate_delta: regression window too thin");
    const double denom = used * sxx - sx * sx;
    if (std::abs(denom) < 1e-12)
        throw DegenerateOrbitError("estimate_delta: degenerate regression");
    const double slope = (used * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / used;
    double ss = 0;
    for (std::size_t i = 0; i < used; ++i) {
        const double fit = slope * est.shell_radii[i] + icept;
        ss += sq(std::log(static_cast<double>(est.shell_counts[i])) - fit);
    }
    est.regression_residual = std::sqrt(ss / used);
    est.shell_estimate = std::max(0.0, slope);

    // tail-extrapolated series threshold crossing (the bisection method):
    // model N(R) = N_max e^{g (R - R_max)} beyond the truncation radius
    const double r_max = est.truncation_radius;
    const double n_total = static_cast<double>(ds.size());
    double growth = 0.0;
    {
        const auto count_at = [&](double r) {
            std::size_t c = 1;
            for (std::size_t i = 0; i < est.shell_radii.size() && est.shell_radii[i] <= r; ++i)
                c = est.shell_counts[i];
            return c;
        };
        const double n1 = static_cast<double>(count_at(0.4 * r_max));
        const double n2 = static_cast<double>(count_at(0.8 * r_max));
        if (n2 > n1) growth = std::log(n2 / n1) / (0.4 * r_max);
    }
    est.growth_rate = growth;
    const auto extrapolated_sum = [&](double s) {
        if (s <= growth + 1e-12) return std::numeric_limits<double>::infinity();
        return kernels::exp_sum(ds.data(), ds.size(), s) +
               n_total * growth * std::exp(-(s - growth) * r_max) / (s - growth);
    };
    {
        double lo = growth;
        double hi = growth + 0.5;
        while (extrapolated_sum(hi) >= threshold && hi < growth + 64.0) hi += hi - growth;
        while (hi - lo > 1e-3) {
            const double mid = 0.5 * (lo + hi);
            if (extrapolated_sum(mid) >= threshold)
                lo = mid;
            else
                hi = mid;
        }
        est.bisection_estimate = 0.5 * (lo + hi);
    }
    est.estimate = est.shell_estimate;
    return est;
}

double poincare_partial_sum(const OrbitCloud& cloud, double s, double radius_cap) {
    if (s < 0) throw std::invalid_argument("poincare_partial_sum: s must be >= 0");
    const std::vector<double> ds = cloud.displacements(radius_cap);
    return kernels::exp_sum(ds.data(), ds.size(), s);
}

std::string orbit_csv(const OrbitCloud& cloud) {
    std::ostringstream os;
    os << "key_hash,word,word_length,displacement\n";
    char buf[64];
    for (std::size_t i = 0; i < cloud.records.size(); ++i) {
        const auto& r = cloud.records[i];
        if (r.in_radius == 0.0f) continue;
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(r.key_hash));
        os << buf << ',' << cloud.word(i) << ',' << r.word_length << ',';
        std::snprintf(buf, sizeof buf, "%.12g", r.displacement);
        os << buf << '\n';
    }
    return os.str();
}

}  // namespace chc
