#pragma once

#include <string>

#include "delaybs/errors.hpp"
#include "delaybs/model.hpp"

namespace dbs {

// Integrand evaluation failure, tagged with the abscissa that triggered it.
class IntegrationError : public NumericalError {
public:
    IntegrationError(double abscissa, const std::string& cause)
        : NumericalError("integrand failed at x=" + std::to_string(abscissa) + ": " + cause), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

// Composite Simpson rule with n (even) subintervals on [a, b].
template <class Fn>
double integrate(Fn&& fn, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) throw DomainError("integrate: subinterval count must be even and >= 2");
    if (a > b) throw DomainError("integrate: a > b");
    if (a == b) return 0.0;
    const double step = (b - a) / n;
    double x = a;
    try {
        double ends = fn(a);
        x = b;
        ends += fn(b);
        double odd = 0.0;
        double even = 0.0;
        for (int i = 1; i < n; i += 2) {
            x = a + i * step;
            odd += fn(x);
        }
        for (int i = 2; i < n; i += 2) {
            x = a + i * step;
            even += fn(x);
        }
        return step / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    } catch (const EvalError& e) {
        throw IntegrationError(x, e.what());
    }
}

// Gaussian moments of the log-price increment over [a, b] inside one delay block,
// with the coefficients frozen at the block-start price s_k.
struct BlockMoments {
    double m = 0.0;  // int drift - v/2
    double v = 0.0;  // int g(u, s_k)^2 du
    double c = 0.0;  // int (f(u, s_k) - lambda(u)) du
};

// Throws ContractError when [a, b] crosses a block boundary.
void require_single_block(double h, double a, double b);

BlockMoments block_moments(const VariableDelayMarket& market, double s_k, double a, double b, Measure measure);

// int_a^b g(u, s_k)^2 du; the volatility part of block_moments on its own.
double variance_integral(const VariableDelayMarket& market, double s_k, double a, double b);

}  // namespace dbs
