#include "chc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace chc {

MatC unitary_completion(const VecC& u) {
    const int m = static_cast<int>(u.size());
    VecC e1 = VecC::Zero(m);
    e1(0) = 1.0;
    if ((u - e1).norm() < 1e-14) return MatC::Identity(m, m);
    // Rotate u so its first coordinate is real nonnegative, reflect e1 onto
    // it, then undo the rotation by a global unit scalar.
    cplx alpha = 1.0;
    if (std::abs(u(0)) > 1e-14) alpha = std::conj(u(0)) / std::abs(u(0));
    VecC w = e1 - alpha * u;
    const double wn2 = w.squaredNorm();
    MatC h = MatC::Identity(m, m);
    if (wn2 > 1e-28) h -= (2.0 / wn2) * (w * w.adjoint());
    return std::conj(alpha) * h;
}

int real_rank(const MatR& columns, double rel_tol) {
    if (columns.cols() == 0) return 0;
    Eigen::JacobiSVD<MatR> svd(columns);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++rank;
    return rank;
}

VecR realify(const VecC& v) {
    VecR r(2 * v.size());
    for (int i = 0; i < v.size(); ++i) {
        r(2 * i) = v(i).real();
        r(2 * i + 1) = v(i).imag();
    }
    return r;
}

namespace {

// Indices [lo, hi) of eigenvalue clusters of a sorted-by-key vector.
struct Block {
    int lo, hi;
};

// Permute columns lo..hi of `basis` so their eigenvalues come in sorted
// order, then emit adjacency clusters at the given tolerance. Sorting first
// keeps equal eigenvalues contiguous regardless of the Schur order.
void cluster_columns(MatC& basis, VecC& ev, const Block& blk, std::vector<Block>& out,
                     double cluster_tol) {
    const int w = blk.hi - blk.lo;
    std::vector<int> order(w);
    for (int i = 0; i < w; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const cplx ea = ev(blk.lo + a), eb = ev(blk.lo + b);
        if (ea.real() != eb.real()) return ea.real() < eb.real();
        return ea.imag() < eb.imag();
    });
    MatC cols = basis.middleCols(blk.lo, w);
    VecC vals = ev.segment(blk.lo, w);
    for (int i = 0; i < w; ++i) {
        basis.col(blk.lo + i) = cols.col(order[i]);
        ev(blk.lo + i) = vals(order[i]);
    }
    int i = 0;
    while (i < w) {
        int j = i + 1;
        while (j < w && std::abs(ev(blk.lo + j) - ev(blk.lo + j - 1)) <= cluster_tol) ++j;
        out.push_back({blk.lo + i, blk.lo + j});
        i = j;
    }
}

// Diagonalize the restriction of unitary t to the orthonormal columns
// basis(:, lo..hi), rotating those columns in place and splitting the block
// into sub-blocks of equal eigenvalue.
void split_block(MatC& basis, const MatC& t, const Block& blk, std::vector<Block>& out,
                 double cluster_tol) {
    const int w = blk.hi - blk.lo;
    MatC sub = basis.middleCols(blk.lo, w);
    MatC restricted = sub.adjoint() * t * sub;
    // The restriction of a unitary to an invariant subspace is unitary, so
    // its Schur form is diagonal; Schur keeps the transform unitary, which a
    // general eigensolver would not guarantee under repeated eigenvalues.
    Eigen::ComplexSchur<MatC> schur(restricted);
    basis.middleCols(blk.lo, w) = sub * schur.matrixU();
    VecC ev_full = VecC::Zero(basis.cols());
    ev_full.segment(blk.lo, w) = schur.matrixT().diagonal();
    cluster_columns(basis, ev_full, blk, out, cluster_tol);
}

double off_diagonal_defect(const MatC& basis, const std::vector<MatC>& family) {
    double worst = 0.0;
    for (const MatC& t : family) {
        MatC d = basis.adjoint() * t * basis;
        d.diagonal().setZero();
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

MatC simultaneous_diagonalize(const std::vector<MatC>& family, std::uint64_t seed,
                              double off_tol) {
    if (family.empty()) throw std::invalid_argument("simultaneous_diagonalize: empty family");
    const int m = static_cast<int>(family.front().rows());
    if (m == 0) return MatC(0, 0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(0.25, 1.0);

    for (int attempt = 0; attempt < 8; ++attempt) {
        // Random real combination separates eigenspaces generically; the
        // per-generator refinement below repairs whatever it fuses.
        MatC combo = MatC::Zero(m, m);
        for (const MatC& t : family) combo += coeff(rng) * t;
        Eigen::ComplexSchur<MatC> schur(combo);
        MatC basis = schur.matrixU();
        VecC ev = schur.matrixT().diagonal();

        std::vector<Block> blocks;
        cluster_columns(basis, ev, Block{0, m}, blocks, 1e-7);
        for (const MatC& t : family) {
            std::vector<Block> refined;
            for (const Block& blk : blocks) {
                if (blk.hi - blk.lo == 1) {
                    refined.push_back(blk);
                    continue;
                }
                split_block(basis, t, blk, refined, 1e-9);
            }
            blocks = std::move(refined);
        }
        if (off_diagonal_defect(basis, family) <= off_tol) return basis;
    }
    throw std::runtime_error(
        "simultaneous_diagonalize: family does not commute within tolerance");
}

}  // namespace chc
