#include "delaybs/quadrature.hpp"

namespace dbs {

namespace {

// For integrands that ignore t the node values are identical, so evaluate once and
// feed the constant through the same Simpson sum.
template <class Fn>
double integrate_in_t(const CoefficientExpr& e, double s_k, double a, double b, int n, Fn&& transform) {
    if (!e.depends_on_t()) {
        double value = 0.0;
        try {
            value = transform(e.eval(a, s_k), a);
        } catch (const EvalError& err) {
            throw IntegrationError(a, err.what());
        }
        return integrate([value](double) { return value; }, a, b, n);
    }
    return integrate([&](double u) { return transform(e.eval(u, s_k), u); }, a, b, n);
}

}  // namespace

void require_single_block(double h, double a, double b) {
    if (a > b) throw ContractError("interval [a, b] is reversed");
    const double start = floor_block(a, h);
    if (b > (start + h) * (1.0 + kBoundarySnap)) {
        throw ContractError("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] crosses a delay-block boundary");
    }
}

double variance_integral(const VariableDelayMarket& market, double s_k, double a, double b) {
    return integrate_in_t(market.g, s_k, a, b, market.quad_n, [](double g, double) { return g * g; });
}

BlockMoments block_moments(const VariableDelayMarket& market, double s_k, double a, double b, Measure measure) {
    require_single_block(market.h, a, b);
    if (!(s_k > 0.0)) throw ContractError("block_moments: block-start price must be positive");

    BlockMoments out;
    out.v = variance_integral(market, s_k, a, b);
    const double rate_int = market.rate_integral(a, b);
    const double drift_int =
        integrate_in_t(market.f, s_k, a, b, market.quad_n, [](double f, double) { return f; });
    out.c = drift_int - rate_int;
    out.m = (measure == Measure::Q ? rate_int : drift_int) - 0.5 * out.v;
    return out;
}

}  // namespace dbs
