#pragma once

#include "chc/heisenberg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chc {

// Exact dyadic-friendly rational for the critical exponent (2l + k)/2.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational reduced(long long n, long long d);
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    std::string str() const;  // "p/q"
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Generators of a discrete torsion-free subgroup of U(n-1) x N, plus an
// optional finite-index substitution: words (1-based signed generator
// indices, negative for inverses) whose images replace the generating set
// before analysis.
struct ParabolicGroupInput {
    std::vector<HeisenbergElement> generators;
    std::vector<std::vector<int>> finite_index_words;

    int ball_dim() const { return generators.empty() ? 0 : generators.front().ball_dim(); }
};

HeisenbergElement apply_word(const std::vector<HeisenbergElement>& generators,
                             const std::vector<int>& word);

// Witness pair for a failed commutativity precondition.
struct PiFailure {
    int i = 0, j = 0;              // offending generator pair (0-based)
    bool translation_level = false;  // pi-parts commute but Pi images do not
    HeisenbergElement commutator;
};

// Elliptic/unipotent factorization of one conjugated generator.
struct GeneratorSplit {
    HeisenbergElement phi;        // T_Lambda^{-1} gamma T_Lambda
    HeisenbergElement elliptic;   // (pi(gamma), 0, 0)
    HeisenbergElement unipotent;  // (Id, b(phi), c(phi))
};

// Everything the totally-real criterion derives from a generating set:
// the common eigenbasis, V1, Lambda and the conjugated splits, the real
// span W1 of the normalized translation parts, the Stein verdict, and the
// exact critical exponent (2l + k)/2.
struct ParabolicAnalysis {
    bool pi_abelian = false;
    std::optional<PiFailure> failure;  // set iff the analysis stopped early

    std::vector<HeisenbergElement> working_generators;
    MatC eigenbasis;                    // unitary, diagonalizes every pi-part
    std::vector<VecC> eigenvalues;      // a_i(gamma_j) per generator j
    MatC v1_basis;                      // orthonormal columns spanning V1
    VecC lambda;                        // Lambda in standard coordinates
    std::vector<GeneratorSplit> splits;
    std::vector<VecC> w1_spanning;      // {b(phi(gamma_j))}

    bool totally_real = false;
    bool stein = false;
    int l = 0;
    bool l_caveat = false;  // l = 0 is only semi-decidable from generators
    int k = 0;
    Rational delta;

    bool ok() const { return !failure.has_value(); }
    int dim_v1() const { return static_cast<int>(v1_basis.cols()); }
};

// The decision procedure: check Pi-commutativity of the working generators,
// simultaneously diagonalize the pi-parts, split off V1, form Lambda and the
// conjugation by T_Lambda = (Id, Lambda, 0), split each generator into
// commuting elliptic and unipotent parts, and read off the verdict:
// stein iff W1 = Span_R{b(phi(gamma))} is totally real, delta = (2l + k)/2.
ParabolicAnalysis analyze(const ParabolicGroupInput& input, std::uint64_t seed = 1);

// W totally real: W intersect iW = {0}, decided by comparing real ranks of
// Span_R(S) and Span_R(S u iS) via singular values.
bool totally_real_test(const std::vector<VecC>& spanning, double rel_tol = 1e-9);

// Two words whose Pi-images commute while the words themselves do not;
// certifies delta(<x,y>) = 2 and (for n = 2) a non-Stein quotient.
struct Z2Witness {
    std::vector<int> word_x, word_y;
    HeisenbergElement x, y, commutator;
};

std::optional<Z2Witness> z2_witness(const ParabolicGroupInput& input, int max_word_length);

}  // namespace chc
