#include "delaybs/measure.hpp"

#include <array>
#include <cmath>

#include "delaybs/errors.hpp"
#include "delaybs/paths.hpp"
#include "delaybs/quadrature.hpp"

namespace dbs {

double market_price_of_risk(const VariableDelayMarket& market, double u, double s_block) {
    if (!(s_block > 0.0)) throw ContractError("market_price_of_risk: block price must be positive");
    const double g = market.g.eval(u, s_block);
    if (std::abs(g) < market.g_min) {
        throw ContractError("market_price_of_risk: |g| below g_min at t=" + std::to_string(u));
    }
    return (market.f.eval(u, s_block) - market.rate.rate(u)) / g;
}

namespace {

double theta_sq_integral(const VariableDelayMarket& market, double s_k, double a, double b) {
    if (market.rate.is_constant() && !market.f.depends_on_t() && !market.g.depends_on_t()) {
        const double th = market_price_of_risk(market, a, s_k);
        const double sq = th * th;
        return integrate([sq](double) { return sq; }, a, b, market.quad_n);
    }
    return integrate(
        [&](double u) {
            const double th = market_price_of_risk(market, u, s_k);
            return th * th;
        },
        a, b, market.quad_n);
}

}  // namespace

JointIncrement joint_block_step(const VariableDelayMarket& market, double s_k, double a, double b,
                                const BrownianSpec& spec, std::uint32_t index) {
    const auto mom = block_moments(market, s_k, a, b, Measure::P);
    JointIncrement out;
    out.record.v = mom.v;
    out.record.c = mom.c;
    out.record.theta_sq = theta_sq_integral(market, s_k, a, b);

    const double v = mom.v;
    const double tsq = out.record.theta_sq;
    const double c = mom.c;
    const double z1 = spec.normal(index, 0);
    const double sd = std::sqrt(v);
    const double i1 = sd * z1;

    double i2 = 0.0;
    if (tsq > 0.0) {
        const double scale = v * tsq;
        const double det = scale - c * c;
        if (det < -1e-12 * scale) {
            throw NumericalError("joint_block_step: covariance of (I1, I2) is not positive semidefinite");
        }
        if (det < 1e-12 * scale) {
            // theta proportional to g on the interval: perfectly correlated pair.
            i2 = std::copysign(std::sqrt(tsq), c) * z1;
        } else {
            i2 = c / sd * z1 + std::sqrt(det / v) * spec.normal(index, 1);
        }
    } else if (c != 0.0 && c * c > 1e-12 * v) {
        throw NumericalError("joint_block_step: zero density variance with non-zero covariance");
    }
    out.record.i2 = i2;
    out.log_price = mom.m + i1;
    out.log_density = -i2 - 0.5 * tsq;
    return out;
}

void GirsanovAccumulator::add(const JointIncrement& inc) {
    log_rho_ += inc.log_density;
    records_.push_back(inc.record);
}

double GirsanovAccumulator::rho() const { return std::exp(log_rho_); }

double GirsanovAccumulator::recompute_log_rho() const {
    double stochastic = 0.0;
    double compensator = 0.0;
    for (const auto& r : records_) stochastic += r.i2;
    for (const auto& r : records_) compensator += r.theta_sq;
    return -stochastic - 0.5 * compensator;
}

WeightedTerminal simulate_weighted(const VariableDelayMarket& market, const BrownianSpec& spec,
                                   GirsanovAccumulator* accumulator) {
    const double h = market.h;
    double t = 0.0;
    double s = market.s0;
    double s_block = market.s0;
    double log_rho = 0.0;
    std::uint32_t draw = 0;
    // Same segmentation as advance_exact, so draw j covers the same interval in both.
    while (t < market.T) {
        double seg_end = market.T;
        const double next = (std::floor(t / h * (1.0 + kBoundarySnap)) + 1.0) * h;
        if (next < market.T * (1.0 - kBoundarySnap)) seg_end = next;
        const auto inc = joint_block_step(market, s_block, t, seg_end, spec, draw++);
        s *= std::exp(inc.log_price);
        log_rho += inc.log_density;
        if (accumulator != nullptr) accumulator->add(inc);
        t = seg_end;
        if (on_block_boundary(seg_end, h)) s_block = s;
    }
    return {s, log_rho};
}

MeanEstimate density_mean_check(const VariableDelayMarket& market, const McControls& controls) {
    const auto stats = reduce_paths<1>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        const auto w = simulate_weighted(market, BrownianSpec{controls.seed, id});
        return std::array<double, 1>{std::exp(w.log_rho)};
    });
    return {stats[0].mean, stats[0].std_error(), stats[0].n};
}

MeanEstimate martingale_mean_check(const VariableDelayMarket& market, const McControls& controls) {
    const double disc = market.discount(0.0, market.T);
    const auto stats = reduce_paths<1>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        ExactState st{0.0, market.s0, market.s0, 0};
        advance_exact(market, Measure::Q, BrownianSpec{controls.seed, id}, st, market.T);
        return std::array<double, 1>{st.s * disc};
    });
    return {stats[0].mean, stats[0].std_error(), stats[0].n};
}

PricingResult importance_price(const VariableDelayMarket& market, const OptionSpec& option,
                               const McControls& controls) {
    if (option.t_valuation != 0.0) throw ContractError("importance_price values at t = 0 only");
    const double disc = market.discount(0.0, market.T);
    const auto stats = reduce_paths<1>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        const auto w = simulate_weighted(market, BrownianSpec{controls.seed, id});
        return std::array<double, 1>{option.payoff(w.s_T) * std::exp(w.log_rho)};
    });
    PricingResult out;
    out.method = Method::Importance;
    out.value = disc * stats[0].mean;
    out.std_error = disc * stats[0].std_error();
    out.n_paths = stats[0].n;
    return out;
}

}  // namespace dbs
