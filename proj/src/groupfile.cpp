#include "chc/groupfile.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chc {

namespace {

// Tokenizer: strips comments, keeps [..] groups as single tokens so that
// "[1, 0]" and "[1,0]" read the same.
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char ch = text[i];
        if (ch == '#') {
            while (i < n && text[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (ch == '[') {
            std::string tok;
            for (; i < n; ++i) {
                if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
                tok.push_back(text[i]);
                if (text[i] == ']') {
                    ++i;
                    break;
                }
            }
            if (tok.empty() || tok.back() != ']')
                throw GroupFileError("unterminated complex literal");
            tokens.push_back(std::move(tok));
        } else {
            std::string tok;
            while (i < n && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '#')
                tok.push_back(text[i++]);
            tokens.push_back(std::move(tok));
        }
    }
    return tokens;
}

struct Cursor {
    const std::vector<std::string>& toks;
    std::size_t pos = 0;

    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        if (done()) throw GroupFileError("unexpected end of file");
        return toks[pos];
    }
    std::string next() {
        if (done()) throw GroupFileError("unexpected end of file");
        return toks[pos++];
    }
};

double parse_real(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw GroupFileError("trailing junk in number: " + tok);
        return v;
    } catch (const GroupFileError&) {
        throw;
    } catch (...) {
        throw GroupFileError("bad number: " + tok);
    }
}

cplx parse_complex(const std::string& tok) {
    if (tok.size() < 5 || tok.front() != '[' || tok.back() != ']')
        throw GroupFileError("expected [re,im], got: " + tok);
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw GroupFileError("expected [re,im], got: " + tok);
    return {parse_real(tok.substr(1, comma - 1)),
            parse_real(tok.substr(comma + 1, tok.size() - comma - 2))};
}

int parse_int(const std::string& tok) {
    int v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw GroupFileError("bad integer: " + tok);
    return v;
}

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_complex(cplx z) {
    return "[" + fmt_real(z.real()) + "," + fmt_real(z.imag()) + "]";
}

}  // namespace

GroupFile parse_group_file(const std::string& text) {
    const auto tokens = tokenize(text);
    Cursor cur{tokens};
    GroupFile gf;

    if (cur.done() || cur.peek() != "dim") throw GroupFileError("file must start with: dim <n>");
    cur.next();
    gf.n = parse_int(cur.next());
    if (gf.n < 1) throw GroupFileError("dim must be >= 1");

    if (cur.done() || cur.next() != "basis") throw GroupFileError("expected: basis ball|siegel");
    {
        const std::string b = cur.next();
        if (b == "ball") gf.basis = Basis::Ball;
        else if (b == "siegel") gf.basis = Basis::Siegel;
        else throw GroupFileError("basis must be ball or siegel, got: " + b);
    }

    const int m = gf.n - 1;
    const int d = gf.n + 1;
    while (!cur.done()) {
        const std::string kw = cur.next();
        if (kw == "heisenberg") {
            HeisenbergElement h{MatC(m, m), VecC(m), 0.0};
            if (cur.next() != "T") throw GroupFileError("heisenberg block: expected T");
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) h.T(i, j) = parse_complex(cur.next());
            if (cur.next() != "b") throw GroupFileError("heisenberg block: expected b");
            for (int i = 0; i < m; ++i) h.b(i) = parse_complex(cur.next());
            if (cur.next() != "c") throw GroupFileError("heisenberg block: expected c");
            h.c = parse_real(cur.next());
            if (cur.next() != "end") throw GroupFileError("heisenberg block: expected end");
            if (!h.well_formed(1e-8))
                throw GroupFileError("heisenberg generator: T is not unitary");
            gf.generators.push_back({true, std::move(h), MatC()});
        } else if (kw == "matrix") {
            MatC mat(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) mat(i, j) = parse_complex(cur.next());
            if (cur.next() != "end") throw GroupFileError("matrix block: expected end");
            gf.generators.push_back({false, HeisenbergElement{}, std::move(mat)});
        } else if (kw == "basepoint") {
            VecC v(d);
            for (int i = 0; i < d; ++i) v(i) = parse_complex(cur.next());
            gf.basepoint = std::move(v);
        } else if (kw == "subst") {
            std::vector<int> word;
            while (cur.peek() != "end") word.push_back(parse_int(cur.next()));
            cur.next();  // end
            if (word.empty()) throw GroupFileError("subst: empty word");
            gf.subst.push_back(std::move(word));
        } else {
            throw GroupFileError("unknown keyword: " + kw);
        }
    }
    if (gf.generators.empty()) throw GroupFileError("no generators");
    for (const auto& w : gf.subst)
        for (int letter : w)
            if (letter == 0 || std::abs(letter) > static_cast<int>(gf.generators.size()))
                throw GroupFileError("subst letter out of range");
    return gf;
}

GroupFile load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GroupFileError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group_file(buf.str());
}

std::string serialize_group_file(const GroupFile& gf) {
    std::ostringstream os;
    os << "dim " << gf.n << "\n";
    os << "basis " << (gf.basis == Basis::Ball ? "ball" : "siegel") << "\n";
    const int m = gf.n - 1;
    const int d = gf.n + 1;
    for (const auto& g : gf.generators) {
        if (g.heisenberg) {
            os << "heisenberg\n  T";
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) os << ' ' << fmt_complex(g.triple.T(i, j));
            os << "\n  b";
            for (int i = 0; i < m; ++i) os << ' ' << fmt_complex(g.triple.b(i));
            os << "\n  c " << fmt_real(g.triple.c) << "\nend\n";
        } else {
            os << "matrix\n";
            for (int i = 0; i < d; ++i) {
                os << " ";
                for (int j = 0; j < d; ++j) os << ' ' << fmt_complex(g.matrix(i, j));
                os << "\n";
            }
            os << "end\n";
        }
    }
    if (gf.basepoint) {
        os << "basepoint";
        for (int i = 0; i < d; ++i) os << ' ' << fmt_complex((*gf.basepoint)(i));
        os << "\n";
    }
    for (const auto& w : gf.subst) {
        os << "subst";
        for (int letter : w) os << ' ' << letter;
        os << " end\n";
    }
    return os.str();
}

GroupSpec to_group_spec(const GroupFile& gf) {
    GroupSpec spec{HermitianModel(gf.n, gf.basis), {}, std::nullopt};
    const HermitianModel siegel(gf.n, Basis::Siegel);
    const MatC to_ball = HermitianModel::siegel_to_ball_matrix(gf.n);
    for (const auto& g : gf.generators) {
        if (g.heisenberg) {
            Isometry iso = embed(siegel, g.triple);
            if (gf.basis == Basis::Ball) iso.m = to_ball * iso.m * to_ball.adjoint();
            spec.generators.push_back(std::move(iso));
        } else {
            spec.generators.push_back(Isometry{g.matrix});
        }
    }
    if (gf.basepoint) spec.basepoint = ProjectivePoint{*gf.basepoint};
    return spec;
}

ParabolicGroupInput to_parabolic_input(const GroupFile& gf) {
    ParabolicGroupInput input;
    for (const auto& g : gf.generators) {
        if (!g.heisenberg)
            throw NotParabolicFormat(
                "parabolic analysis needs heisenberg (T,b,c) generators");
        input.generators.push_back(g.triple);
    }
    input.finite_index_words = gf.subst;
    return input;
}

}  // namespace chc
