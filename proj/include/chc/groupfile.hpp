#pragma once

#include "chc/orbit.hpp"
#include "chc/parabolic.hpp"

#include <string>

namespace chc {

// Text format for a group description. Tokens are whitespace-separated;
// complex numbers are written [re,im] with decimal reals; '#' starts a
// comment to end of line. Layout:
//
//   dim 2
//   basis siegel            # or ball
//   heisenberg              # generator as a (T, b, c) triple
//     T [1,0]               # (n-1)^2 entries, row-major
//     b [1,0]               # n-1 entries
//     c 0
//   end
//   matrix                  # generator as a full (n+1)x(n+1) matrix
//     [1,0] [0,0] [0,0]
//     ...
//   end
//   basepoint [-1,0] [1,0] [0,0]   # optional projective lift
//   subst 1 2 -1 end               # optional finite-index words, signed indices
//
// Parsing a canonical serialization reproduces it byte for byte.

struct GroupFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotParabolicFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupFileGenerator {
    bool heisenberg = false;
    HeisenbergElement triple;  // when heisenberg
    MatC matrix;               // when !heisenberg
};

struct GroupFile {
    int n = 0;
    Basis basis = Basis::Siegel;
    std::vector<GroupFileGenerator> generators;
    std::optional<VecC> basepoint;  // lift in the declared basis
    std::vector<std::vector<int>> subst;
};

GroupFile parse_group_file(const std::string& text);
GroupFile load_group_file(const std::string& path);
std::string serialize_group_file(const GroupFile& gf);

// Matrix generators pass through; heisenberg triples are embedded (and
// converted to the declared basis).
GroupSpec to_group_spec(const GroupFile& gf);

// Requires every generator in heisenberg form; throws NotParabolicFormat.
ParabolicGroupInput to_parabolic_input(const GroupFile& gf);

}  // namespace chc
