#include "chc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace chc::kernels {

AtomArray AtomArray::build(const std::vector<VecC>& lifts) {
    AtomArray a;
    if (lifts.empty()) return a;
    a.dim = static_cast<int>(lifts.front().size());
    a.count = lifts.size();
    a.stride = (a.count + 3) & ~std::size_t(3);
    a.re.assign(static_cast<std::size_t>(a.dim) * a.stride, 0.0);
    a.im.assign(static_cast<std::size_t>(a.dim) * a.stride, 0.0);
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        const VecC& v = lifts[i];
        if (v.size() != a.dim) throw std::invalid_argument("AtomArray: mixed dimensions");
        // normalize to h(v,v) = -1 in the ball form
        double h = -std::norm(v(0));
        for (int j = 1; j < a.dim; ++j) h += std::norm(v(j));
        if (h >= 0.0) throw std::invalid_argument("AtomArray: lift not interior");
        const double scale = 1.0 / std::sqrt(-h);
        for (int j = 0; j < a.dim; ++j) {
            a.re[j * a.stride + i] = v(j).real() * scale;
            a.im[j * a.stride + i] = v(j).imag() * scale;
        }
    }
    return a;
}

namespace {

struct Table {
    void (*batch_cosh2)(const cplx*, int, const AtomArray&, double*);
    void (*batch_dist)(const double*, std::size_t, double*);
    double (*weight_sum)(const double*, std::size_t, double);
    double (*exp_sum)(const double*, std::size_t, double);
};

constexpr Table kScalar{scalar::batch_cosh2, scalar::batch_dist, scalar::weight_sum,
                        scalar::exp_sum};
#ifdef CHC_BUILD_AVX2
constexpr Table kAvx2{avx2::batch_cosh2, avx2::batch_dist, avx2::weight_sum, avx2::exp_sum};
#endif

bool cpu_has_avx2() {
#if defined(CHC_BUILD_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    Table table = kScalar;
    Impl impl = Impl::Scalar;

    Dispatch() {
        bool want_avx2 = cpu_has_avx2();
        if (const char* env = std::getenv("CHC_KERNEL")) {
            if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
            else if (std::strcmp(env, "avx2") == 0 && !cpu_has_avx2())
                throw std::runtime_error("CHC_KERNEL=avx2 but this cpu lacks avx2");
        }
#ifdef CHC_BUILD_AVX2
        if (want_avx2) {
            table = kAvx2;
            impl = Impl::Avx2;
        }
#endif
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Impl active_impl() { return dispatch().impl; }

bool avx2_available() { return cpu_has_avx2(); }

void set_impl(Impl impl) {
    if (impl == Impl::Avx2) {
#ifdef CHC_BUILD_AVX2
        if (!cpu_has_avx2()) throw std::runtime_error("set_impl: avx2 not supported here");
        dispatch().table = kAvx2;
        dispatch().impl = impl;
        return;
#else
        throw std::runtime_error("set_impl: avx2 variant not built");
#endif
    }
    dispatch().table = kScalar;
    dispatch().impl = impl;
}

void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out) {
    if (dim > 16) {  // avx2 path keeps the fixed argument on the stack
        scalar::batch_cosh2(x, dim, atoms, out);
        return;
    }
    dispatch().table.batch_cosh2(x, dim, atoms, out);
}

void batch_dist(const double* cosh2, std::size_t count, double* out) {
    dispatch().table.batch_dist(cosh2, count, out);
}

double weight_sum(const double* cosh2, std::size_t count, double s) {
    return dispatch().table.weight_sum(cosh2, count, s);
}

double exp_sum(const double* d, std::size_t count, double s) {
    return dispatch().table.exp_sum(d, count, s);
}

}  // namespace chc::kernels
