#include "chc/kernels.hpp"

#include <cmath>

namespace chc::kernels::scalar {

void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out) {
    // h(x,y) = -x_0 conj(y_0) + sum_{j>=1} x_j conj(y_j), both sides
    // normalized to h(.,.) = -1, so cosh^2 = |h(x,y)|^2.
    for (std::size_t i = 0; i < atoms.count; ++i) {
        double sre = 0.0, sim = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double sign = j == 0 ? -1.0 : 1.0;
            const double xr = x[j].real(), xi = x[j].imag();
            const double yr = atoms.re_plane(j)[i], yi = atoms.im_plane(j)[i];
            sre += sign * (xr * yr + xi * yi);
            sim += sign * (xi * yr - xr * yi);
        }
        out[i] = sre * sre + sim * sim;
    }
}

void batch_dist(const double* cosh2, std::size_t count, double* out) {
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::acosh(std::sqrt(std::max(1.0, cosh2[i])));
}

double weight_sum(const double* cosh2, std::size_t count, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double c = std::sqrt(std::max(1.0, cosh2[i]));
        acc += std::exp(-s * std::acosh(c));
    }
    return acc;
}

double exp_sum(const double* d, std::size_t count, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += std::exp(-s * d[i]);
    return acc;
}

}  // namespace chc::kernels::scalar
