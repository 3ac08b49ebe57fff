#include "chc/parabolic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace chc {

Rational Rational::reduced(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return {g ? n / g : 0, g ? d / g : 1};
}

std::string Rational::str() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

HeisenbergElement apply_word(const std::vector<HeisenbergElement>& generators,
                             const std::vector<int>& word) {
    if (generators.empty()) throw std::invalid_argument("apply_word: no generators");
    HeisenbergElement acc = HeisenbergElement::identity(generators.front().ball_dim());
    for (int letter : word) {
        if (letter == 0 || std::abs(letter) > static_cast<int>(generators.size()))
            throw std::invalid_argument("apply_word: letter out of range");
        const HeisenbergElement& g = generators[std::abs(letter) - 1];
        acc = compose(acc, letter > 0 ? g : inverse(g));
    }
    return acc;
}

bool totally_real_test(const std::vector<VecC>& spanning, double rel_tol) {
    if (spanning.empty()) return true;
    const int m = static_cast<int>(spanning.front().size());
    if (m == 0) return true;
    MatR w(2 * m, static_cast<int>(spanning.size()));
    MatR wi(2 * m, 2 * static_cast<int>(spanning.size()));
    for (size_t j = 0; j < spanning.size(); ++j) {
        w.col(static_cast<int>(j)) = realify(spanning[j]);
        wi.col(2 * static_cast<int>(j)) = w.col(static_cast<int>(j));
        wi.col(2 * static_cast<int>(j) + 1) = realify(cplx(0, 1) * spanning[j]);
    }
    return real_rank(wi, rel_tol) == 2 * real_rank(w, rel_tol);
}

namespace {

constexpr double kEigOneTol = 1e-10;

std::vector<HeisenbergElement> working_set(const ParabolicGroupInput& input) {
    if (input.generators.empty())
        throw std::invalid_argument("analyze: empty generating set");
    for (const auto& g : input.generators)
        if (!g.well_formed())
            throw std::invalid_argument("analyze: generator is not a valid (T,b,c) triple");
    if (input.finite_index_words.empty()) return input.generators;
    std::vector<HeisenbergElement> out;
    out.reserve(input.finite_index_words.size());
    for (const auto& word : input.finite_index_words)
        out.push_back(apply_word(input.generators, word));
    return out;
}

int detect_l(const std::vector<HeisenbergElement>& gens,
             const std::vector<GeneratorSplit>& splits) {
    for (const auto& g : gens)
        if (g.is_central()) return 1;
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (commutator(gens[i], gens[j]).is_central()) return 1;
    for (const auto& s : splits)
        if (s.unipotent.is_central()) return 1;
    return 0;
}

}  // namespace

ParabolicAnalysis analyze(const ParabolicGroupInput& input, std::uint64_t seed) {
    ParabolicAnalysis out;
    out.working_generators = working_set(input);
    const auto& gens = out.working_generators;
    const int m = static_cast<int>(gens.front().b.size());  // n - 1

    // Precondition of the whole pipeline: the Pi-images of the working set
    // must commute pairwise (pi-parts commute and translation parts are
    // compatible). The translation check matters: without it Lambda is
    // ill-defined and b(phi(gamma)) leaves V1.
    out.pi_abelian = true;
    std::optional<PiFailure> translation_failure;
    for (size_t i = 0; i < gens.size() && !out.failure; ++i) {
        for (size_t j = i + 1; j < gens.size(); ++j) {
            const MatC tc = gens[i].T * gens[j].T - gens[j].T * gens[i].T;
            const bool pi_ok = m == 0 || tc.cwiseAbs().maxCoeff() <= 1e-10;
            if (!pi_ok) {
                out.pi_abelian = false;
                out.failure = PiFailure{static_cast<int>(i), static_cast<int>(j), false,
                                        commutator(gens[i], gens[j])};
                break;
            }
            if (!translation_failure && !pi_images_commute(gens[i], gens[j]))
                translation_failure = PiFailure{static_cast<int>(i), static_cast<int>(j), true,
                                                commutator(gens[i], gens[j])};
        }
    }
    if (!out.failure && translation_failure) out.failure = translation_failure;
    if (out.failure) return out;

    // Common eigenbasis of the commuting pi-parts.
    std::vector<MatC> ts;
    ts.reserve(gens.size());
    for (const auto& g : gens) ts.push_back(g.T);
    out.eigenbasis = m == 0 ? MatC(0, 0) : simultaneous_diagonalize(ts, seed);
    const MatC& u = out.eigenbasis;

    out.eigenvalues.resize(gens.size());
    std::vector<VecC> b_eig(gens.size());
    for (size_t j = 0; j < gens.size(); ++j) {
        out.eigenvalues[j] = (u.adjoint() * gens[j].T * u).diagonal();
        b_eig[j] = u.adjoint() * gens[j].b;
    }

    // V1 = directions fixed by every generator; elsewhere solve for the
    // Heisenberg translation Lambda that absorbs the drift, taking for each
    // direction the generator with the best-conditioned (1 - a_i).
    std::vector<int> v1_idx, moving_idx;
    VecC lambda_eig = VecC::Zero(m);
    for (int i = 0; i < m; ++i) {
        int best = -1;
        double best_gap = kEigOneTol;
        for (size_t j = 0; j < gens.size(); ++j) {
            const double gap = std::abs(1.0 - out.eigenvalues[j](i));
            if (gap > best_gap) {
                best_gap = gap;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) {
            v1_idx.push_back(i);
        } else {
            moving_idx.push_back(i);
            lambda_eig(i) = b_eig[best](i) / (1.0 - out.eigenvalues[best](i));
        }
    }
    out.v1_basis = MatC(m, static_cast<int>(v1_idx.size()));
    for (size_t t = 0; t < v1_idx.size(); ++t) out.v1_basis.col(static_cast<int>(t)) = u.col(v1_idx[t]);
    out.lambda = m == 0 ? VecC(0) : VecC(u * lambda_eig);

    // Conjugate by T_Lambda and split into commuting elliptic and unipotent
    // parts. b(phi(gamma)) = b(gamma) + (pi(gamma) - Id) Lambda must land in
    // V1; a violation means the translation parts were inconsistent after
    // all, and we surface the offending pair instead of proceeding.
    const HeisenbergElement t_lambda{MatC::Identity(m, m), out.lambda, 0.0};
    const HeisenbergElement t_lambda_inv = inverse(t_lambda);
    out.splits.reserve(gens.size());
    for (size_t j = 0; j < gens.size(); ++j) {
        GeneratorSplit s;
        s.phi = compose(compose(t_lambda_inv, gens[j]), t_lambda);
        s.elliptic = HeisenbergElement{gens[j].T, VecC::Zero(m), 0.0};
        s.unipotent = HeisenbergElement{MatC::Identity(m, m), s.phi.b, s.phi.c};
        const VecC resid_eig = u.adjoint() * s.phi.b;
        double off_v1 = 0.0;
        for (int i : moving_idx) off_v1 = std::max(off_v1, std::abs(resid_eig(i)));
        const double scale = std::max(1.0, gens[j].b.size() ? gens[j].b.cwiseAbs().maxCoeff() : 0.0);
        if (off_v1 > 1e-8 * scale) {
            for (size_t a = 0; a < gens.size() && !out.failure; ++a)
                for (size_t b = a + 1; b < gens.size(); ++b)
                    if (!pi_images_commute(gens[a], gens[b], 1e-12)) {
                        out.failure = PiFailure{static_cast<int>(a), static_cast<int>(b), true,
                                                commutator(gens[a], gens[b])};
                        break;
                    }
            if (!out.failure)
                out.failure = PiFailure{0, static_cast<int>(j), true,
                                        commutator(gens[0], gens[j])};
            return out;
        }
        out.splits.push_back(std::move(s));
    }

    // W1 is spanned by p(b(phi(gamma))) with p the orthogonal projection onto
    // V1; b(phi) is a V1 member up to arithmetic dust, and projecting keeps
    // that dust out of the rank computations.
    out.w1_spanning.reserve(gens.size());
    for (const auto& s : out.splits)
        out.w1_spanning.push_back(out.v1_basis * (out.v1_basis.adjoint() * s.phi.b));

    out.totally_real = totally_real_test(out.w1_spanning);
    out.stein = out.totally_real;

    {
        MatR w(2 * std::max(m, 1), static_cast<int>(out.w1_spanning.size()));
        w.setZero();
        for (size_t j = 0; j < out.w1_spanning.size(); ++j)
            if (m > 0) w.col(static_cast<int>(j)) = realify(out.w1_spanning[j]);
        out.k = real_rank(w);
    }
    out.l = detect_l(gens, out.splits);
    out.l_caveat = (out.l == 0);
    out.delta = Rational::reduced(2 * out.l + out.k, 2);
    return out;
}

namespace {

// Quantized fingerprint of (T, b, c) for word deduplication.
std::vector<long long> element_key(const HeisenbergElement& g) {
    std::vector<long long> key;
    key.reserve(2 * g.T.size() + 2 * g.b.size() + 1);
    const auto push = [&key](double x) {
        key.push_back(static_cast<long long>(std::llround(x * 1e9)));
    };
    for (int i = 0; i < g.T.rows(); ++i)
        for (int j = 0; j < g.T.cols(); ++j) {
            push(g.T(i, j).real());
            push(g.T(i, j).imag());
        }
    for (int i = 0; i < g.b.size(); ++i) {
        push(g.b(i).real());
        push(g.b(i).imag());
    }
    push(g.c);
    return key;
}

}  // namespace

std::optional<Z2Witness> z2_witness(const ParabolicGroupInput& input, int max_word_length) {
    if (max_word_length < 1)
        throw std::invalid_argument("z2_witness: max_word_length must be >= 1");
    const auto gens = input.generators;
    if (gens.empty()) return std::nullopt;

    // Breadth-first closure of distinct elements, shortest word first.
    struct Entry {
        HeisenbergElement elem;
        std::vector<int> word;
    };
    std::vector<Entry> elements;
    std::map<std::vector<long long>, size_t> seen;
    const auto try_insert = [&](HeisenbergElement e, std::vector<int> word) {
        auto key = element_key(e);
        if (seen.count(key)) return;
        seen.emplace(std::move(key), elements.size());
        elements.push_back({std::move(e), std::move(word)});
    };
    try_insert(HeisenbergElement::identity(gens.front().ball_dim()), {});
    size_t layer_begin = 0;
    for (int len = 1; len <= max_word_length; ++len) {
        const size_t layer_end = elements.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (int s = 1; s <= static_cast<int>(gens.size()); ++s) {
                for (int sign : {+1, -1}) {
                    const HeisenbergElement& g = gens[s - 1];
                    std::vector<int> word = elements[i].word;
                    word.push_back(sign * s);
                    try_insert(compose(elements[i].elem, sign > 0 ? g : inverse(g)),
                               std::move(word));
                }
            }
        }
        layer_begin = layer_end;
    }

    for (size_t a = 1; a < elements.size(); ++a) {
        for (size_t b = a + 1; b < elements.size(); ++b) {
            const auto& x = elements[a].elem;
            const auto& y = elements[b].elem;
            if (!pi_images_commute(x, y)) continue;
            HeisenbergElement comm = commutator(x, y);
            if (comm.is_identity()) continue;
            return Z2Witness{elements[a].word, elements[b].word, x, y, std::move(comm)};
        }
    }
    return std::nullopt;
}

}  // namespace chc
