#pragma once

#include "chc/linalg.hpp"

#include <cstddef>
#include <vector>

namespace chc::kernels {

// Structure-of-arrays atom storage for the hot loops: one re/im plane per
// ball-basis coordinate, padded to the vector width. Lifts are normalized to
// h(y,y) = -1 at build time so cosh^2 d(x, y_i) is just |h(x, y_i)|^2.
struct AtomArray {
    int dim = 0;               // n+1 coordinates
    std::size_t count = 0;
    std::size_t stride = 0;    // count rounded up to the padding width
    std::vector<double> re, im;  // plane-major: plane j at [j*stride, j*stride+count)

    const double* re_plane(int j) const { return re.data() + j * stride; }
    const double* im_plane(int j) const { return im.data() + j * stride; }

    // lifts must be interior (h(v,v) < 0) in the *ball* basis.
    static AtomArray build(const std::vector<VecC>& lifts);
};

// out[i] = cosh^2 d(x, y_i) for x a ball-basis lift normalized to h(x,x) = -1.
void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out);

// out[i] = acosh(sqrt(max(1, cosh2[i]))).
void batch_dist(const double* cosh2, std::size_t count, double* out);

// sum_i exp(-s * acosh(sqrt(max(1, cosh2[i])))).
double weight_sum(const double* cosh2, std::size_t count, double s);

// sum_i exp(-s * d[i]) for precomputed distances.
double exp_sum(const double* d, std::size_t count, double s);

enum class Impl { Scalar, Avx2 };

Impl active_impl();
bool avx2_available();
// Force a variant (tests, benchmarking). Throws if the variant cannot run
// on this machine. The CHC_KERNEL env var (scalar|avx2) does the same at
// first use.
void set_impl(Impl impl);

// Direct entry points for equivalence testing.
namespace scalar {
void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out);
void batch_dist(const double* cosh2, std::size_t count, double* out);
double weight_sum(const double* cosh2, std::size_t count, double s);
double exp_sum(const double* d, std::size_t count, double s);
}  // namespace scalar

#ifdef CHC_BUILD_AVX2
namespace avx2 {
void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out);
void batch_dist(const double* cosh2, std::size_t count, double* out);
double weight_sum(const double* cosh2, std::size_t count, double s);
double exp_sum(const double* d, std::size_t count, double s);
}  // namespace avx2
#endif

}  // namespace chc::kernels
