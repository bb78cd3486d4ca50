#pragma once

// Bracket ("generalized") polynomials over exact rationals.
//
// The building blocks are monomials a·n^p, constant scalings, finite sums,
// the nearest-integer bracket, and products a·n^p·⌈f_1(n)⌉···⌈f_k(n)⌉. Every
// such function vanishes at n = 0; expression trees are free (no symbolic
// canonicalization) and immutable, so they can be shared across threads.

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "indexset.hpp"
#include "rational.hpp"

namespace nilbracket::genpoly {

class GPExpr {
   public:
    enum class Kind { Mono, Bracket, Scale, Sum, Prod };

    struct Node {
        Kind kind;
        Rational coeff;               // Mono, Scale, Prod
        unsigned power = 0;           // Mono, Prod
        std::vector<GPExpr> children; // Bracket/Scale: exactly one; Sum: >= 1; Prod: brackets
    };

    // a·n^p. A power-0 monomial must have coefficient 0: these functions
    // vanish at 0, so nonzero constants are not representable.
    static GPExpr mono(Rational coeff, unsigned power) {
        if (power == 0 && coeff != 0)
            throw std::invalid_argument("GPExpr::mono: power 0 requires coeff 0");
        Node n{Kind::Mono, std::move(coeff), power, {}};
        return GPExpr(std::move(n));
    }

    // ⌈f⌉ as a rational-valued function of n.
    static GPExpr bracket(GPExpr f) {
        Node n{Kind::Bracket, Rational(0), 0, {std::move(f)}};
        return GPExpr(std::move(n));
    }

    static GPExpr scale(Rational coeff, GPExpr f) {
        Node n{Kind::Scale, std::move(coeff), 0, {std::move(f)}};
        return GPExpr(std::move(n));
    }

    static GPExpr sum(std::vector<GPExpr> terms) {
        if (terms.empty()) throw std::invalid_argument("GPExpr::sum: empty term list");
        Node n{Kind::Sum, Rational(0), 0, std::move(terms)};
        return GPExpr(std::move(n));
    }

    // a·n^p·⌈f_1(n)⌉···⌈f_k(n)⌉ with the children evaluated under brackets.
    static GPExpr prod(Rational coeff, unsigned power, std::vector<GPExpr> brackets) {
        if (brackets.empty()) throw std::invalid_argument("GPExpr::prod: empty bracket list");
        Node n{Kind::Prod, std::move(coeff), power, std::move(brackets)};
        return GPExpr(std::move(n));
    }

    const Node& node() const { return *node_; }

   private:
    explicit GPExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

// L(a_1) = a_1, L(a_1,...,a_l) = a_1·⌈L(a_2,...,a_l)⌉, evaluated right to left.
inline Rational eval_L(const std::vector<Rational>& values) {
    if (values.empty()) throw std::invalid_argument("eval_L: empty list");
    Rational acc = values.back();
    for (std::size_t t = values.size() - 1; t-- > 0;)
        acc = values[t] * Rational(nearest_int(acc));
    return acc;
}

// Nested bracket word L(n^{j_1}·a_1, ..., n^{j_l}·a_l) with all j_t >= 1.
struct SGPSpec {
    std::vector<std::pair<unsigned, Rational>> terms;  // (power j_t, coeff a_t)

    explicit SGPSpec(std::vector<std::pair<unsigned, Rational>> t) : terms(std::move(t)) {
        if (terms.empty()) throw std::invalid_argument("SGPSpec: empty term list");
        for (const auto& [j, a] : terms)
            if (j == 0) throw std::invalid_argument("SGPSpec: powers must be >= 1");
    }

    unsigned degree_bound() const {
        unsigned d = 0;
        for (const auto& [j, a] : terms) d += j;
        return d;
    }
};

inline Rational eval_sgp(const SGPSpec& spec, long long n) {
    std::vector<Rational> values;
    values.reserve(spec.terms.size());
    Int nz(static_cast<long>(n));
    for (const auto& [j, a] : spec.terms) values.push_back(Rational(Rational(int_pow(nz, j)) * a));
    return eval_L(values);
}

inline Rational eval_gp(const GPExpr& expr, long long n) {
    const auto& node = expr.node();
    Int nz(static_cast<long>(n));
    switch (node.kind) {
        case GPExpr::Kind::Mono:
            return Rational(node.coeff * Rational(int_pow(nz, node.power)));
        case GPExpr::Kind::Bracket:
            return Rational(nearest_int(eval_gp(node.children[0], n)));
        case GPExpr::Kind::Scale:
            return Rational(node.coeff * eval_gp(node.children[0], n));
        case GPExpr::Kind::Sum: {
            Rational acc(0);
            for (const GPExpr& child : node.children) acc += eval_gp(child, n);
            return acc;
        }
        case GPExpr::Kind::Prod: {
            Rational acc = node.coeff * Rational(int_pow(nz, node.power));
            for (const GPExpr& child : node.children)
                acc *= Rational(nearest_int(eval_gp(child, n)));
            return acc;
        }
    }
    throw std::logic_error("eval_gp: unreachable");
}

inline unsigned gp_degree(const GPExpr& expr) {
    const auto& node = expr.node();
    switch (node.kind) {
        case GPExpr::Kind::Mono:
            return node.power;
        case GPExpr::Kind::Bracket:
        case GPExpr::Kind::Scale:
            return gp_degree(node.children[0]);
        case GPExpr::Kind::Sum: {
            unsigned deg = 0;
            for (const GPExpr& child : node.children) deg = std::max(deg, gp_degree(child));
            return deg;
        }
        case GPExpr::Kind::Prod: {
            unsigned deg = node.power;
            for (const GPExpr& child : node.children) deg += gp_degree(child);
            return deg;
        }
    }
    throw std::logic_error("gp_degree: unreachable");
}

using AlphaVector = std::vector<Rational>;

// All ordered tuples of positive integers summing to d, sorted descending:
// j > r when j_t > r_t at the first position where they differ. The first
// element is (d), the last is (1,1,...,1). Generating first parts in
// descending order and recursing yields exactly this order.
inline std::vector<std::vector<unsigned>> compositions_of(unsigned d) {
    if (d == 0) throw std::invalid_argument("compositions_of: d must be >= 1");
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> current;
    auto descend = [&](auto&& self, unsigned remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (unsigned first = remaining; first >= 1; --first) {
            current.push_back(first);
            self(self, remaining - first);
            current.pop_back();
        }
    };
    descend(descend, d);
    return out;
}

// U(n; j_1) = n^{j_1}/j_1!·α_1···α_{j_1}; each later stage multiplies the
// bracket residual of the previous stage by the next block
// n^{j_t}/j_t!·α_{prefix+1}···α_{prefix+j_t}.
inline Rational eval_U(long long n, const std::vector<unsigned>& j, const AlphaVector& alpha) {
    if (j.empty()) throw std::invalid_argument("eval_U: empty index tuple");
    unsigned total = 0;
    for (unsigned jt : j) {
        if (jt == 0) throw std::invalid_argument("eval_U: indices must be >= 1");
        total += jt;
    }
    if (total > alpha.size())
        throw std::invalid_argument("eval_U: sum of indices exceeds length of alpha");

    Int nz(static_cast<long>(n));
    unsigned prefix = 0;
    Rational acc(0);
    for (std::size_t t = 0; t < j.size(); ++t) {
        Rational block = make_rational(int_pow(nz, j[t]), factorial(j[t]));
        for (unsigned r = 0; r < j[t]; ++r) block *= alpha[prefix + r];
        acc = (t == 0) ? block : Rational(bracket_residual(acc) * block);
        prefix += j[t];
    }
    return acc;
}

// Master bracket polynomial of the alpha vector:
//   P(n; α_1..α_r) = Σ_l Σ_{j_1+..+j_l = r} (-1)^{l-1} L(block_1, ..., block_l)
// with block_t = n^{j_t}/j_t!·α_{prefix+1}···α_{prefix+j_t}.
inline Rational eval_P(long long n, const AlphaVector& alpha) {
    if (alpha.empty()) throw std::invalid_argument("eval_P: empty alpha");
    const unsigned r = static_cast<unsigned>(alpha.size());
    Int nz(static_cast<long>(n));
    Rational total(0);
    for (const auto& comp : compositions_of(r)) {
        std::vector<Rational> blocks;
        blocks.reserve(comp.size());
        unsigned prefix = 0;
        for (unsigned jt : comp) {
            Rational block = make_rational(int_pow(nz, jt), factorial(jt));
            for (unsigned t = 0; t < jt; ++t) block *= alpha[prefix + t];
            blocks.push_back(block);
            prefix += jt;
        }
        Rational term = eval_L(blocks);
        if (comp.size() % 2 == 0) total -= term;
        else total += term;
    }
    return total;
}

struct LevelSetSpec {
    std::vector<std::pair<GPExpr, Rational>> constraints;  // (expr, epsilon)

    explicit LevelSetSpec(std::vector<std::pair<GPExpr, Rational>> cs)
        : constraints(std::move(cs)) {
        for (const auto& [expr, eps] : constraints)
            if (eps <= 0) throw std::invalid_argument("LevelSetSpec: epsilon must be > 0");
    }
};

// { n in window : every constraint has dist_to_int(expr_i(n)) < ε_i }.
inline IndexSet level_set(const LevelSetSpec& spec, Window window) {
    std::vector<long long> members;
    for (long long n = window.lo; n <= window.hi; ++n) {
        bool ok = true;
        for (const auto& [expr, eps] : spec.constraints) {
            if (dist_to_int(eval_gp(expr, n)) >= eps) {
                ok = false;
                break;
            }
        }
        if (ok) members.push_back(n);
    }
    return IndexSet(window, std::move(members));
}

}  // namespace nilbracket::genpoly
