#pragma once

#include <random>
#include <string>

namespace dbs::testing {

// Random source strings in the coefficient grammar, with varied spacing,
// literal formats and nesting.
inline std::string random_literal(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> form(0, 4);
    std::uniform_int_distribution<int> digits(0, 999);
    switch (form(rng)) {
        case 0: return std::to_string(digits(rng));
        case 1: return std::to_string(digits(rng)) + "." + std::to_string(digits(rng));
        case 2: return "." + std::to_string(digits(rng));
        case 3: return std::to_string(digits(rng) % 10) + "." + std::to_string(digits(rng)) + "e-" +
                       std::to_string(digits(rng) % 4);
        default: return std::to_string(digits(rng) % 10) + "E+" + std::to_string(digits(rng) % 3);
    }
}

inline std::string random_expression(std::mt19937_64& rng, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth > 4 ? 2 : 9);
    std::uniform_int_distribution<int> coin(0, 1);
    auto ws = [&]() { return coin(rng) ? std::string(" ") : std::string(); };
    switch (pick(rng)) {
        case 0: return random_literal(rng);
        case 1: return "t";
        case 2: return "s";
        case 3: return "-" + ws() + random_expression(rng, depth + 1);
        case 4: return "(" + ws() + random_expression(rng, depth + 1) + ws() + ")";
        case 5: {
            static const char* funcs[] = {"exp", "log", "sqrt", "tanh", "abs"};
            std::uniform_int_distribution<int> f(0, 4);
            return std::string(funcs[f(rng)]) + "(" + random_expression(rng, depth + 1) + ")";
        }
        case 6: {
            return std::string(coin(rng) ? "min" : "max") + "(" + random_expression(rng, depth + 1) + "," + ws() +
                   random_expression(rng, depth + 1) + ")";
        }
        default: {
            static const char ops[] = {'+', '-', '*', '/', '^'};
            std::uniform_int_distribution<int> op(0, 4);
            return random_expression(rng, depth + 1) + ws() + ops[op(rng)] + ws() + random_expression(rng, depth + 1);
        }
    }
}

}  // namespace dbs::testing
