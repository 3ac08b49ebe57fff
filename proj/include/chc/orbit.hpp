#pragma once

#include "chc/geometry.hpp"
#include "chc/kernels.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chc {

// A group to enumerate: form-preserving generators in the model's basis
// (inverses are added automatically) and a basepoint, default the ball
// origin.
struct GroupSpec {
    HermitianModel model;
    std::vector<Isometry> generators;
    std::optional<ProjectivePoint> basepoint;
};

struct OrbitRecord {
    std::uint64_t key_hash = 0;
    std::int32_t parent = -1;  // index into records; -1 for the identity
    std::int16_t letter = 0;   // signed 1-based generator index
    std::uint16_t word_length = 0;
    float in_radius = 1.0f;    // 0 when filtered out by the displacement cap
    double displacement = 0.0;
};

class OrbitCloud {
public:
    int n = 0;    // complex ball dimension
    int dim = 0;  // n + 1
    std::vector<OrbitRecord> records;
    std::vector<cplx> atom_pool;  // ball-basis lift of gamma.o, dim entries per record
    VecC basepoint_lift;          // ball basis, h(o,o) = -1

    // truncation policy and outcome
    int max_word_length = 0;
    std::size_t max_points = 0;
    double max_radius = std::numeric_limits<double>::infinity();
    bool hit_word_cap = false;
    bool hit_point_cap = false;
    double max_displacement = 0.0;
    std::vector<std::size_t> layer_sizes;

    // discreteness heuristic: two words with different abelianization mapped
    // to one matrix (torsion or a non-obvious relation)
    bool relation_warning = false;
    std::string relation_detail;

    std::size_t size() const { return records.size(); }
    const cplx* atom_lift(std::size_t idx) const { return atom_pool.data() + idx * dim; }
    std::string word(std::size_t idx) const;  // signed letters, space-separated

    // displacements of records inside the given radius cap (and the stored
    // filter), ascending
    std::vector<double> displacements(double radius_cap =
                                          std::numeric_limits<double>::infinity()) const;
};

OrbitCloud enumerate_orbit(const GroupSpec& spec, int max_word_length,
                           std::size_t max_points,
                           double max_radius = std::numeric_limits<double>::infinity(),
                           int threads = 0);

struct InsufficientOrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateOrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeltaEstimate {
    double estimate = 0.0;  // headline value (the shell-count method)
    double shell_estimate = 0.0;
    double bisection_estimate = 0.0;

    std::vector<double> shell_radii;        // distinct displacement values
    std::vector<std::size_t> shell_counts;  // cumulative N(R_i)
    double regression_residual = 0.0;
    double truncation_radius = 0.0;  // largest displacement used
    double radius_cap = std::numeric_limits<double>::infinity();
    std::size_t points_used = 0;
    double growth_rate = 0.0;  // tail model rate for the bisection method
    double threshold = 0.0;
};

// Critical-exponent estimators from a truncated orbit.
//   shell method: least-squares slope of ln N(R) over the shells at
//     R <= 0.8 * (largest displacement), dropping the outer 20% of radii.
//   bisection method: the s at which the tail-extrapolated Poincare sum
//     crosses `threshold`, bisected to 1e-3.
// Throws InsufficientOrbitError below min_points and DegenerateOrbitError
// when all displacements coincide.
DeltaEstimate estimate_delta(const OrbitCloud& cloud,
                             double radius_cap = std::numeric_limits<double>::infinity(),
                             std::size_t min_points = 50, double threshold = 1e6);

// Truncated Poincare series sum_gamma e^{-s d(o, gamma o)} over the cloud.
double poincare_partial_sum(const OrbitCloud& cloud, double s,
                            double radius_cap = std::numeric_limits<double>::infinity());

// CSV rows: key hash, word, word length, displacement.
std::string orbit_csv(const OrbitCloud& cloud);

}  // namespace chc
