#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noise.hpp"

namespace gridft {

// ---- faulty rectified linear units -----------------------------------------

// ReLU that suffers unit failure: outputs max(0,x) with probability 1-p,
// otherwise 0.
inline double relu_p(double x, double p, RngStream& rng) {
    if (p > 0.0 && rng.bernoulli(p)) return 0.0;
    return x > 0.0 ? x : 0.0;
}

// Median of three through ReLU min/max identities, every unit faulty:
//   min(u,v) = u - ReLU(u-v),  max(u,v) = u + ReLU(v-u),
//   median(a,b,c) = max(min(a,b), min(max(a,b), c)).
// Four ReLU units; the linear combinations are free wiring.
inline constexpr std::size_t kMedian3Units = 4;

inline double median3_gadget(double a, double b, double c, double p, RngStream& rng) {
    const double r1 = relu_p(a - b, p, rng);
    const double min_ab = a - r1;
    const double r2 = relu_p(b - a, p, rng);
    const double max_ab = a + r2;
    const double r3 = relu_p(max_ab - c, p, rng);
    const double inner = max_ab - r3;
    const double r4 = relu_p(inner - min_ab, p, rng);
    return min_ab + r4;
}

// Exact (noiseless) median, for oracles.
inline double median3_exact(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// ---- von Neumann recursion for the ReLU ------------------------------------

// A logical ReLU at level L is three level-(L-1) logical ReLUs feeding a
// median gadget whose four units are themselves level-(L-1) logical ReLUs.
// Level 0 is the bare faulty unit.
struct VnReluNetwork {
    int level = 0;
    double p = 0.0;

    std::size_t units() const {
        std::size_t n = 1;
        for (int l = 0; l < level; ++l) n *= 7;  // 3 copies + 4 gadget units
        return n;
    }

    double eval(double x, RngStream& rng) const { return eval_level(level, x, rng); }

   private:
    double unit(int l, double u, RngStream& rng) const {
        return l == 0 ? relu_p(u, p, rng) : eval_level(l, u, rng);
    }

    double eval_level(int l, double x, RngStream& rng) const {
        if (l == 0) return relu_p(x, p, rng);
        const double a = eval_level(l - 1, x, rng);
        const double b = eval_level(l - 1, x, rng);
        const double c = eval_level(l - 1, x, rng);
        const double r1 = unit(l - 1, a - b, rng);
        const double min_ab = a - r1;
        const double r2 = unit(l - 1, b - a, rng);
        const double max_ab = a + r2;
        const double r3 = unit(l - 1, max_ab - c, rng);
        const double inner = max_ab - r3;
        const double r4 = unit(l - 1, inner - min_ab, rng);
        return min_ab + r4;
    }
};

inline VnReluNetwork vn_concatenate_relu(int level, double p) {
    if (level < 0) throw std::domain_error("vn_concatenate_relu: negative level");
    return VnReluNetwork{level, p};
}

// ---- NAND formulas and Evans-Pippenger concatenation -----------------------

// Per-gate error threshold for reliable 2-input NAND formulas.
inline double ep_threshold() { return (3.0 - std::sqrt(7.0)) / 4.0; }

// Network of 2-input NANDs over named input literals. Parsed formulas are
// trees; concatenated networks share restoring-stage inputs, so the general
// object is a DAG with nodes stored in topological order (children precede
// parents). `outputs` is the output bundle; parsed formulas have exactly one
// output wire.
struct BooleanFormula {
    struct Node {
        int a = -1, b = -1;   // child node indices for gates
        int literal = -1;     // >= 0: input literal index (leaf)
        bool is_gate() const { return literal < 0; }
    };
    std::vector<Node> nodes;
    std::vector<int> outputs;
    std::vector<std::string> input_names;

    std::size_t gate_count() const {
        std::size_t n = 0;
        for (const Node& nd : nodes)
            if (nd.is_gate()) ++n;
        return n;
    }

    int depth() const {
        std::vector<int> d(nodes.size(), 0);
        int best = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].is_gate()) d[i] = 1 + std::max(d[nodes[i].a], d[nodes[i].b]);
            best = std::max(best, d[i]);
        }
        return best;
    }

    void validate() const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& nd = nodes[i];
            if (nd.is_gate()) {
                if (nd.a < 0 || nd.b < 0 || std::size_t(nd.a) >= i || std::size_t(nd.b) >= i)
                    throw std::domain_error("BooleanFormula: bad topological order");
            } else if (std::size_t(nd.literal) >= input_names.size()) {
                throw std::domain_error("BooleanFormula: literal out of range");
            }
        }
        if (outputs.empty()) throw std::domain_error("BooleanFormula: no outputs");
        for (int o : outputs)
            if (o < 0 || std::size_t(o) >= nodes.size())
                throw std::domain_error("BooleanFormula: output out of range");
    }
};

// Noise-free evaluation of one output wire set: the logical value is the
// majority over the output bundle (bundles are odd-sized by construction).
inline bool eval_formula_exact(const BooleanFormula& f, const std::vector<bool>& inputs) {
    if (inputs.size() != f.input_names.size())
        throw std::domain_error("eval_formula_exact: input arity mismatch");
    std::vector<char> val(f.nodes.size());
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const auto& nd = f.nodes[i];
        val[i] = nd.is_gate() ? !(val[nd.a] && val[nd.b]) : char(inputs[nd.literal]);
    }
    std::size_t ones = 0;
    for (int o : f.outputs) ones += val[o];
    return 2 * ones > f.outputs.size();
}

// Noisy simulation: each gate's output is flipped independently with
// probability eps (inputs are error-free). Majority readout over the output
// bundle.
inline bool simulate_formula(const BooleanFormula& f, const std::vector<bool>& inputs, double eps,
                             RngStream& rng) {
    if (inputs.size() != f.input_names.size())
        throw std::domain_error("simulate_formula: input arity mismatch");
    std::vector<char> val(f.nodes.size());
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const auto& nd = f.nodes[i];
        if (nd.is_gate()) {
            char v = !(val[nd.a] && val[nd.b]);
            if (eps > 0.0 && rng.bernoulli(eps)) v = !v;
            val[i] = v;
        } else {
            val[i] = char(inputs[nd.literal]);
        }
    }
    std::size_t ones = 0;
    for (int o : f.outputs) ones += val[o];
    return 2 * ones > f.outputs.size();
}

namespace detail {

inline std::vector<int> random_perm(std::size_t n, RngStream& rng) {
    std::vector<int> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = int(i);
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(p[i], p[std::size_t(rng.bounded(std::uint64_t(i + 1)))]);
    return p;
}

}  // namespace detail

// Von Neumann multiplexing at bundle width 3^level: every wire carries its
// value on a bundle, and every NAND becomes one executive stage followed by
// two restoring stages (majority restoration through double inversion),
// each stage wired through fresh random permutations of the whole bundle.
// Gate count is 3 * 3^level per original gate; input literals are error-free
// and fan out to their bundle directly.
//
// The restoration threshold is visible in the per-stage map of the fraction
// q of wires carrying 1: q' = (1-q^2)(1-eps) + q^2 eps. Below
// eps = (3-sqrt(7))/4 the alternating 2-cycle that carries the logic is
// stable, so wider bundles push the majority readout error down; above it
// the polarity-forgetting fixed point takes over and wider bundles make the
// output independent of the inputs.
inline BooleanFormula ep_nand_concatenate(const BooleanFormula& f, int level,
                                          std::uint64_t seed = 0) {
    if (level < 0) throw std::domain_error("ep_nand_concatenate: negative level");
    if (level > 6) throw std::domain_error("ep_nand_concatenate: level > 6 exceeds size budget");
    f.validate();
    if (level == 0) return f;
    std::size_t N = 1;
    for (int l = 0; l < level; ++l) N *= 3;
    RngStream rng(seed, 0xE9, std::uint64_t(level));

    BooleanFormula out;
    out.input_names = f.input_names;
    std::vector<std::vector<int>> bundle(f.nodes.size());
    auto stage = [&](const std::vector<int>& in_a, const std::vector<int>& in_b) {
        auto pa = detail::random_perm(N, rng), pb = detail::random_perm(N, rng);
        std::vector<int> s(N);
        for (std::size_t k = 0; k < N; ++k) {
            s[k] = int(out.nodes.size());
            out.nodes.push_back({in_a[std::size_t(pa[k])], in_b[std::size_t(pb[k])], -1});
        }
        return s;
    };
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const auto& nd = f.nodes[i];
        if (!nd.is_gate()) {
            int lit = int(out.nodes.size());
            out.nodes.push_back({-1, -1, nd.literal});
            bundle[i].assign(N, lit);
            continue;
        }
        std::vector<int> c = stage(bundle[std::size_t(nd.a)], bundle[std::size_t(nd.b)]);
        std::vector<int> u = stage(c, c);
        bundle[i] = stage(u, u);
    }
    for (int o : f.outputs)
        for (std::size_t k = 0; k < N; ++k)
            out.outputs.push_back(bundle[std::size_t(o)][k]);
    return out;
}

// ---- text format: parenthesized prefix, e.g. (NAND (NAND a b) c) -----------

namespace detail {

struct FormulaParser {
    const std::string& s;
    std::size_t pos = 0;
    BooleanFormula& f;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (start == pos) throw std::domain_error("formula parse: expected token");
        return s.substr(start, pos - start);
    }

    int literal(const std::string& name) {
        for (std::size_t i = 0; i < f.input_names.size(); ++i)
            if (f.input_names[i] == name) {
                for (std::size_t n = 0; n < f.nodes.size(); ++n)
                    if (f.nodes[n].literal == int(i)) return int(n);
            }
        f.input_names.push_back(name);
        f.nodes.push_back({-1, -1, int(f.input_names.size()) - 1});
        return int(f.nodes.size()) - 1;
    }

    int expr() {
        skip_ws();
        if (pos >= s.size()) throw std::domain_error("formula parse: unexpected end");
        if (s[pos] != '(') return literal(token());
        ++pos;  // '('
        std::string op = token();
        if (op != "NAND") throw std::domain_error("formula parse: only NAND gates allowed");
        int a = expr();
        int b = expr();
        skip_ws();
        if (pos >= s.size() || s[pos] != ')')
            throw std::domain_error("formula parse: missing ')'");
        ++pos;
        f.nodes.push_back({a, b, -1});
        return int(f.nodes.size()) - 1;
    }
};

inline void format_node(const BooleanFormula& f, int n, std::string& out) {
    const auto& nd = f.nodes[std::size_t(n)];
    if (!nd.is_gate()) {
        out += f.input_names[std::size_t(nd.literal)];
        return;
    }
    out += "(NAND ";
    format_node(f, nd.a, out);
    out += ' ';
    format_node(f, nd.b, out);
    out += ')';
}

}  // namespace detail

inline BooleanFormula parse_formula(const std::string& text) {
    BooleanFormula f;
    detail::FormulaParser p{text, 0, f};
    int root = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) throw std::domain_error("formula parse: trailing input");
    f.outputs = {root};
    f.validate();
    return f;
}

// Tree expansion of a single-output formula. Intended for source formulas;
// concatenated networks share subterms and are reported via statistics
// instead.
inline std::string format_formula(const BooleanFormula& f) {
    if (f.outputs.size() != 1)
        throw std::domain_error("format_formula: requires a single output wire");
    std::string out;
    detail::format_node(f, f.outputs[0], out);
    return out;
}

}  // namespace gridft
