#include "delaybs/checks.hpp"

#include <cmath>

#include "delaybs/measure.hpp"
#include "delaybs/pricing.hpp"

namespace dbs {

bool within_sigmas(double estimate, double target, double std_error, double sigmas) {
    return std::abs(estimate - target) <= sigmas * std_error;
}

std::vector<CheckRow> run_check_suite(const VariableDelayMarket& market, const CheckOptions& options) {
    std::vector<CheckRow> rows;
    if (options.validation_bypassed) {
        const auto violations = validate_market(market);
        rows.push_back({"validation", static_cast<double>(violations.size()), 0.0, 0.0, violations.empty()});
        if (!violations.empty()) return rows;
    }

    // Each estimator gets its own seed so the comparisons below are between independent samples.
    auto controls_for = [&](std::uint64_t k) {
        McControls c = options.controls;
        c.seed = options.controls.seed + k;
        return c;
    };
    auto add = [&](std::string name, double est, double target, double se) {
        rows.push_back({std::move(name), est, target, se, within_sigmas(est, target, se)});
    };
    auto combined = [](double a, double b) { return std::sqrt(a * a + b * b); };

    const auto density = density_mean_check(market, controls_for(0));
    add("density_mean", density.mean, 1.0, density.std_error);

    const auto mart = martingale_mean_check(market, controls_for(1));
    add("martingale_mean", mart.mean, market.s0, mart.std_error);

    const double strike = options.strike > 0.0 ? options.strike : market.s0;
    const OptionSpec call{strike, OptionKind::Call, 0.0};
    const OptionSpec put{strike, OptionKind::Put, 0.0};
    const auto state = MarketState::initial(market);

    const auto semi = price_semi(market, call, state, controls_for(2));
    const auto mc = price_mc(market, call, state, controls_for(3));
    const auto imp = importance_price(market, call, controls_for(4));
    const auto mc_put = price_mc(market, put, state, controls_for(5));

    add("put_call_parity", mc_put.value, put_price(semi.value, market, state, put),
        combined(mc_put.std_error, semi.std_error));
    add("semi_vs_mc", semi.value, mc.value, combined(semi.std_error, mc.std_error));
    add("importance_vs_mc", imp.value, mc.value, combined(imp.std_error, mc.std_error));
    return rows;
}

}  // namespace dbs
