#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "delaybs/errors.hpp"

// Closed arithmetic grammar for coefficient functions f(t, s) and g(t, s).
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | pow
//   pow   := atom ('^' unary)?
//   atom  := NUMBER | 't' | 's' | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' is right-associative and binds tighter than a leading minus, so
// "-2^2" is -(2^2) while "2^-1" is still accepted.
namespace dbs::coeff {

enum class NodeKind : std::uint8_t { Literal, VarT, VarS, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func : std::uint8_t { Exp, Log, Sqrt, Tanh, Abs, Min, Max };

struct Node {
    NodeKind kind = NodeKind::Literal;
    Func func = Func::Exp;  // Call only
    double value = 0.0;     // Literal only
    // Children are indices into Expression::nodes().
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    std::vector<std::uint32_t> args;  // Call only
    SourceSpan span;
};

class Expression {
public:
    // Literal 0.
    Expression();

    static Expression parse(std::string_view source);

    double eval(double t, double s) const;

    const std::string& source() const noexcept { return source_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::uint32_t root() const noexcept { return root_; }

    bool depends_on_t() const noexcept { return uses_t_; }
    bool depends_on_s() const noexcept { return uses_s_; }

    // Fully parenthesised rendering; parse(print()) is structurally equal to *this.
    std::string print() const;

    // Same tree shape, kinds, functions and literal bits; spans are ignored.
    bool structurally_equal(const Expression& other) const;

private:
    friend class Parser;

    double eval_node(std::uint32_t idx, double t, double s) const;
    void print_node(std::uint32_t idx, std::string& out) const;
    bool equal_node(std::uint32_t a, const Expression& other, std::uint32_t b) const;

    std::string source_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
    bool uses_t_ = false;
    bool uses_s_ = false;
};

std::string_view func_name(Func f) noexcept;
std::size_t func_arity(Func f) noexcept;

}  // namespace dbs::coeff
