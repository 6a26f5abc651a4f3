#include "delaybs/coeffexpr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace dbs::coeff {

namespace {

struct FuncInfo {
    std::string_view name;
    Func func;
    std::size_t arity;
};

constexpr std::array<FuncInfo, 7> kFuncs{{
    {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1},
    {"tanh", Func::Tanh, 1},
    {"abs", Func::Abs, 1},
    {"min", Func::Min, 2},
    {"max", Func::Max, 2},
}};

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

constexpr std::string_view kAtomExpected = "number, 't', 's', function call or '('";

}  // namespace

std::string_view func_name(Func f) noexcept {
    for (const auto& info : kFuncs) {
        if (info.func == f) return info.name;
    }
    return "?";
}

std::size_t func_arity(Func f) noexcept {
    for (const auto& info : kFuncs) {
        if (info.func == f) return info.arity;
    }
    return 0;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expression run() {
        Expression e;
        e.source_ = std::string(src_);
        e.nodes_.clear();
        out_ = &e;
        e.root_ = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, "operator or end of input");
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    std::uint32_t push(Node n) {
        out_->nodes_.push_back(std::move(n));
        return static_cast<std::uint32_t>(out_->nodes_.size() - 1);
    }

    std::uint32_t binary(NodeKind kind, std::uint32_t lhs, std::uint32_t rhs) {
        Node n;
        n.kind = kind;
        n.lhs = lhs;
        n.rhs = rhs;
        n.span = {out_->nodes_[lhs].span.begin, out_->nodes_[rhs].span.end};
        return push(std::move(n));
    }

    std::uint32_t parse_expr() {
        auto lhs = parse_term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                lhs = binary(NodeKind::Add, lhs, parse_term());
            } else if (peek('-')) {
                ++pos_;
                lhs = binary(NodeKind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    std::uint32_t parse_term() {
        auto lhs = parse_unary();
        while (true) {
            if (peek('*')) {
                ++pos_;
                lhs = binary(NodeKind::Mul, lhs, parse_unary());
            } else if (peek('/')) {
                ++pos_;
                lhs = binary(NodeKind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    std::uint32_t parse_unary() {
        if (peek('-')) {
            const auto start = pos_++;
            const auto operand = parse_unary();
            Node n;
            n.kind = NodeKind::Neg;
            n.lhs = operand;
            n.span = {start, out_->nodes_[operand].span.end};
            return push(std::move(n));
        }
        return parse_pow();
    }

    std::uint32_t parse_pow() {
        const auto base = parse_atom();
        if (peek('^')) {
            ++pos_;
            return binary(NodeKind::Pow, base, parse_unary());
        }
        return base;
    }

    std::uint32_t parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, std::string(kAtomExpected));
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            const auto inner = parse_expr();
            expect(')');
            return inner;
        }
        if (is_ident_start(c)) return parse_ident();
        throw ParseError(pos_, std::string(kAtomExpected));
    }

    void expect(char c) {
        if (!peek(c)) throw ParseError(pos_, std::string("'") + c + "'");
        ++pos_;
    }

    std::uint32_t parse_number() {
        const auto start = pos_;
        auto p = pos_;
        bool digits = false;
        while (p < src_.size() && is_digit(src_[p])) ++p, digits = true;
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            while (p < src_.size() && is_digit(src_[p])) ++p, digits = true;
        }
        if (!digits) throw ParseError(start, "digit");
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            auto q = p + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
            if (q >= src_.size() || !is_digit(src_[q])) throw ParseError(q, "exponent digits");
            while (q < src_.size() && is_digit(src_[q])) ++q;
            p = q;
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + p, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + p || !std::isfinite(value)) {
            throw ParseError(start, "finite number");
        }
        pos_ = p;
        Node n;
        n.kind = NodeKind::Literal;
        n.value = value;
        n.span = {start, p};
        return push(std::move(n));
    }

    std::uint32_t parse_ident() {
        const auto start = pos_;
        auto p = pos_;
        while (p < src_.size() && (is_ident_start(src_[p]) || is_digit(src_[p]))) ++p;
        const auto name = src_.substr(start, p - start);
        pos_ = p;
        if (name == "t" || name == "s") {
            Node n;
            n.kind = name == "t" ? NodeKind::VarT : NodeKind::VarS;
            n.span = {start, p};
            (name == "t" ? out_->uses_t_ : out_->uses_s_) = true;
            return push(std::move(n));
        }
        const FuncInfo* info = nullptr;
        for (const auto& f : kFuncs) {
            if (f.name == name) info = &f;
        }
        if (info == nullptr) throw UnknownIdentifierError(std::string(name), start);

        expect('(');
        std::vector<std::uint32_t> args;
        args.push_back(parse_expr());
        while (peek(',')) {
            ++pos_;
            args.push_back(parse_expr());
        }
        if (args.size() != info->arity) {
            skip_ws();
            throw ParseError(pos_, std::string(info->name) + " takes " + std::to_string(info->arity) +
                                       " argument" + (info->arity == 1 ? "" : "s"));
        }
        expect(')');
        Node n;
        n.kind = NodeKind::Call;
        n.func = info->func;
        n.args = std::move(args);
        n.span = {start, pos_};
        return push(std::move(n));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Expression* out_ = nullptr;
};

Expression::Expression() : source_("0") {
    Node n;
    n.kind = NodeKind::Literal;
    n.span = {0, 1};
    nodes_.push_back(n);
}

Expression Expression::parse(std::string_view source) { return Parser(source).run(); }

double Expression::eval(double t, double s) const { return eval_node(root_, t, s); }

double Expression::eval_node(std::uint32_t idx, double t, double s) const {
    const Node& n = nodes_[idx];
    auto fail = [&](const char* why) -> double { throw EvalError(why, n.span, t, s); };
    double r = 0.0;
    switch (n.kind) {
        case NodeKind::Literal: return n.value;
        case NodeKind::VarT: return t;
        case NodeKind::VarS: return s;
        case NodeKind::Neg: r = -eval_node(n.lhs, t, s); break;
        case NodeKind::Add: r = eval_node(n.lhs, t, s) + eval_node(n.rhs, t, s); break;
        case NodeKind::Sub: r = eval_node(n.lhs, t, s) - eval_node(n.rhs, t, s); break;
        case NodeKind::Mul: r = eval_node(n.lhs, t, s) * eval_node(n.rhs, t, s); break;
        case NodeKind::Div: {
            const double num = eval_node(n.lhs, t, s);
            const double den = eval_node(n.rhs, t, s);
            if (den == 0.0) return fail("division by zero");
            r = num / den;
            break;
        }
        case NodeKind::Pow: {
            const double base = eval_node(n.lhs, t, s);
            const double ex = eval_node(n.rhs, t, s);
            if (base < 0.0 && std::trunc(ex) != ex) return fail("negative base with non-integer exponent");
            if (base == 0.0 && ex < 0.0) return fail("zero raised to a negative power");
            r = std::pow(base, ex);
            break;
        }
        case NodeKind::Call: {
            const double x = eval_node(n.args[0], t, s);
            switch (n.func) {
                case Func::Exp: r = std::exp(x); break;
                case Func::Log:
                    if (x <= 0.0) return fail("log of non-positive value");
                    r = std::log(x);
                    break;
                case Func::Sqrt:
                    if (x < 0.0) return fail("sqrt of negative value");
                    r = std::sqrt(x);
                    break;
                case Func::Tanh: r = std::tanh(x); break;
                case Func::Abs: r = std::abs(x); break;
                case Func::Min: r = std::min(x, eval_node(n.args[1], t, s)); break;
                case Func::Max: r = std::max(x, eval_node(n.args[1], t, s)); break;
            }
            break;
        }
    }
    if (!std::isfinite(r)) return fail("non-finite result");
    return r;
}

std::string Expression::print() const {
    std::string out;
    print_node(root_, out);
    return out;
}

void Expression::print_node(std::uint32_t idx, std::string& out) const {
    const Node& n = nodes_[idx];
    auto bin = [&](char op) {
        out += '(';
        print_node(n.lhs, out);
        out += ' ';
        out += op;
        out += ' ';
        print_node(n.rhs, out);
        out += ')';
    };
    switch (n.kind) {
        case NodeKind::Literal: {
            std::array<char, 32> buf{};
            std::snprintf(buf.data(), buf.size(), "%.17g", n.value);
            out += buf.data();
            break;
        }
        case NodeKind::VarT: out += 't'; break;
        case NodeKind::VarS: out += 's'; break;
        case NodeKind::Neg:
            out += "(-";
            print_node(n.lhs, out);
            out += ')';
            break;
        case NodeKind::Add: bin('+'); break;
        case NodeKind::Sub: bin('-'); break;
        case NodeKind::Mul: bin('*'); break;
        case NodeKind::Div: bin('/'); break;
        case NodeKind::Pow: bin('^'); break;
        case NodeKind::Call:
            out += func_name(n.func);
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i > 0) out += ", ";
                print_node(n.args[i], out);
            }
            out += ')';
            break;
    }
}

bool Expression::structurally_equal(const Expression& other) const {
    return equal_node(root_, other, other.root_);
}

bool Expression::equal_node(std::uint32_t a, const Expression& other, std::uint32_t b) const {
    const Node& x = nodes_[a];
    const Node& y = other.nodes_[b];
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case NodeKind::Literal: return std::bit_cast<std::uint64_t>(x.value) == std::bit_cast<std::uint64_t>(y.value);
        case NodeKind::VarT:
        case NodeKind::VarS: return true;
        case NodeKind::Neg: return equal_node(x.lhs, other, y.lhs);
        case NodeKind::Call:
            if (x.func != y.func || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
                if (!equal_node(x.args[i], other, y.args[i])) return false;
            }
            return true;
        default: return equal_node(x.lhs, other, y.lhs) && equal_node(x.rhs, other, y.rhs);
    }
}

}  // namespace dbs::coeff
