// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/core.h>

#include "expr_corpus.hpp"
#include "delaybs/coeffexpr.hpp"
#include "delaybs/errors.hpp"
#include "delaybs/hedging.hpp"
#include "delaybs/measure.hpp"
#include "delaybs/paths.hpp"
#include "delaybs/pricing.hpp"

using namespace dbs;

namespace {

const unsigned kWorkers = std::max(1u, std::thread::hardware_concurrency());

McControls controls(std::size_t n, std::uint64_t seed) { return {n, seed, kWorkers}; }

VariableDelayMarket constant_vol_market() {
    VariableDelayMarket m;
    m.h = 0.4;
    m.T = 1.0;
    m.s0 = 100.0;
    m.f = CoefficientExpr::parse("0.08");
    m.g = CoefficientExpr::parse("0.2");
    m.rate = RateCurve::constant(0.05);
    m.g_min = 0.1;
    return m;
}

VariableDelayMarket state_market(const char* f = "0.08") {
    VariableDelayMarket m;
    m.h = 0.25;
    m.T = 0.9;
    m.s0 = 1.0;
    m.f = CoefficientExpr::parse(f);
    m.g = CoefficientExpr::parse("0.1 + 0.1*s/(1+s)");
    m.rate = RateCurve::constant(0.05);
    m.g_min = 0.05;
    return m;
}

FixedDelaySfde fixed_model(double eps) {
    FixedDelaySfde s;
    s.L = 0.25;
    s.b = 0.25;
    s.a = 0.25;
    s.T = 1.0;
    s.phi_samples = {1.0};
    s.drift = {DriftFunctional::Kind::SegmentPoint, 0.1, eps};
    s.g = CoefficientExpr::parse("0.2");
    return s;
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome classical_reduction() {
    const auto m = constant_vol_market();
    const OptionSpec late{100.0, OptionKind::Call, 0.8};
    const double closed = price_closed(m, late, {0.8, 100.0, 100.0}).value;
    const double classical = price_classical(100.0, 100.0, 0.05 * 0.2, 0.04 * 0.2);
    const double gap = std::abs(closed - classical);
    const auto semi = price_semi(m, OptionSpec{100.0, OptionKind::Call, 0.0}, MarketState::initial(m),
                                 controls(1000000, 101));
    const double z = (semi.value - 10.450584) / semi.std_error;
    return {gap <= 1e-12 && std::abs(z) <= 3.0,
            fmt::format("|closed - classical| = {:.3g}; semi = {:.6f} +/- {:.2g} (z = {:.2f})", gap, semi.value,
                        semi.std_error, z)};
}

Outcome martingale() {
    const auto r = martingale_mean_check(state_market(), controls(1000000, 201));
    const double z = (r.mean - 1.0) / r.std_error;
    return {std::abs(z) <= 3.0, fmt::format("mean = {:.6f} +/- {:.2g} (z = {:.2f})", r.mean, r.std_error, z)};
}

Outcome density() {
    const auto r = density_mean_check(state_market(), controls(1000000, 301));
    const double z = (r.mean - 1.0) / r.std_error;
    const auto flat = density_mean_check(state_market("0.05"), controls(1000000, 302));
    const bool flat_ok = flat.mean == 1.0 && flat.std_error == 0.0;
    return {std::abs(z) <= 3.0 && flat_ok,
            fmt::format("mean = {:.6f} +/- {:.2g} (z = {:.2f}); f = lambda: mean = {}, se = {}", r.mean, r.std_error,
                        z, flat.mean, flat.std_error)};
}

Outcome estimator_triangle() {
    const auto m = state_market();
    const OptionSpec call{1.0, OptionKind::Call, 0.0};
    const auto st = MarketState::initial(m);
    const auto semi = price_semi(m, call, st, controls(1000000, 401));
    const auto mc = price_mc(m, call, st, controls(1000000, 402));
    const auto imp = importance_price(m, call, controls(1000000, 403));
    const double z_semi = (semi.value - mc.value) / combined(semi.std_error, mc.std_error);
    const double z_imp = (imp.value - mc.value) / combined(imp.std_error, mc.std_error);
    return {std::abs(z_semi) <= 3.0 && std::abs(z_imp) <= 3.0 && semi.std_error < mc.std_error,
            fmt::format("semi = {:.6f} ({:.2g}), mc = {:.6f} ({:.2g}), importance = {:.6f} ({:.2g}); z = {:.2f}, {:.2f}",
                        semi.value, semi.std_error, mc.value, mc.std_error, imp.value, imp.std_error, z_semi, z_imp)};
}

Outcome parity() {
    const auto m = state_market();
    double worst = 0.0;
    for (double K : {0.8, 1.0, 1.25}) {
        for (double s : {0.9, 1.0, 1.1}) {
            const MarketState st{0.8, s, 0.97};
            const double call = price_closed(m, OptionSpec{K, OptionKind::Call, 0.8}, st).value;
            const double put = price_closed(m, OptionSpec{K, OptionKind::Put, 0.8}, st).value;
            worst = std::max(worst, std::abs(call - put - (s - K * std::exp(-0.05 * 0.1))));
        }
    }
    const OptionSpec put{1.0, OptionKind::Put, 0.0};
    const auto st = MarketState::initial(m);
    const auto call = price_semi(m, OptionSpec{1.0, OptionKind::Call, 0.0}, st, controls(1000000, 501));
    const auto mc_put = price_mc(m, put, st, controls(1000000, 502));
    const double target = put_price(call.value, m, st, put);
    const double z = (mc_put.value - target) / combined(mc_put.std_error, call.std_error);
    return {worst <= 1e-12 && std::abs(z) <= 3.0,
            fmt::format("closed parity gap = {:.3g}; mc put = {:.6f}, parity = {:.6f} (z = {:.2f})", worst,
                        mc_put.value, target, z)};
}

Outcome hedging() {
    const auto m = state_market();
    const OptionSpec call{1.0, OptionKind::Call, 0.0};
    double prev = INFINITY;
    bool monotone = true;
    double identity = 0.0;
    std::string rmse;
    for (std::size_t n : {4u, 16u, 64u}) {
        const auto r = replicate(m, call, n, controls(100000, 601));
        monotone = monotone && r.rmse <= prev;
        prev = r.rmse;
        identity = std::max(identity, r.max_identity_error);
        rmse += fmt::format(" {}:{:.3g}", n, r.rmse);
    }
    return {monotone && identity <= 1e-12,
            fmt::format("max identity gap = {:.3g}; rmse by n_rebalance{}", identity, rmse)};
}

Outcome positivity() {
    const auto s = fixed_model(0.01);
    const double dt = 1.0 / 512.0;
    const auto stats = reduce_paths<1>(100000, kWorkers, [&](std::uint64_t id) {
        double lo = INFINITY;
        for (double v : simulate_split_fixed(s, dt, BrownianSpec{701, id}).values) lo = std::min(lo, v);
        return std::array<double, 1>{lo};
    });
    const auto m = state_market();
    const auto exact = reduce_paths<1>(100000, kWorkers, [&](std::uint64_t id) {
        const auto p = simulate_exact(m, Measure::P, BrownianSpec{702, id}, 0.0, 1.0, 1.0, {0.25, 0.5, 0.75, 0.9});
        double lo = INFINITY;
        for (double v : p.values) lo = std::min(lo, v);
        return std::array<double, 1>{lo};
    });
    return {stats[0].min > 0.0 && exact[0].min > 0.0,
            fmt::format("min split value = {:.6g}, min exact value = {:.6g}", stats[0].min, exact[0].min)};
}

Outcome scheme_agreement() {
    const auto s = fixed_model(0.0);
    std::array<RunningStats, 3> at[2];
    const double dts[2] = {1.0 / 256.0, 1.0 / 512.0};
    for (int k = 0; k < 2; ++k) {
        at[k] = reduce_paths<3>(100000, kWorkers, [&](std::uint64_t id) {
            const BrownianSpec spec{801, id};
            const double em = simulate_em_fixed(s, dts[k], spec).values.back();
            const double split = simulate_split_fixed(s, dts[k], spec).values.back();
            return std::array<double, 3>{em - split, em, split};
        });
    }
    const double ratio = at[0][0].rms() / at[1][0].rms();
    const auto& fine = at[1];
    const double z = (fine[1].mean - fine[2].mean) / combined(fine[1].std_error(), fine[2].std_error());
    // Shared draws: the paired difference has its own, much smaller, standard error.
    const double z_paired = fine[0].mean / fine[0].std_error();
    return {ratio >= 1.3 && std::abs(z) <= 3.0 && std::abs(z_paired) <= 3.0,
            fmt::format("rms gap {:.3g} -> {:.3g} (ratio {:.3f}); means {:.6f} vs {:.6f} (z = {:.2f}, paired z = {:.2f})",
                        at[0][0].rms(), at[1][0].rms(), ratio, fine[1].mean, fine[2].mean, z, z_paired)};
}

std::string capture(const std::string& cmd, int* exit_code) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        *exit_code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

Outcome determinism() {
    const std::string base = std::string(DELAYBS_CLI) + " price --method mc --paths 1000000 --seed 42 --config " +
                             DELAYBS_CONFIG_DIR + "/state_dependent.json";
    int rc1 = 0;
    int rc8 = 0;
    const auto one = capture(base + " --workers 1", &rc1);
    const auto eight = capture(base + " --workers 8", &rc8);
    std::string row = one.substr(one.find('\n') + 1);
    if (!row.empty() && row.back() == '\n') row.pop_back();
    return {rc1 == 0 && rc8 == 0 && !one.empty() && one == eight,
            fmt::format("exit codes {}/{}, {} bytes, row: {}", rc1, rc8, one.size(), row)};
}

Outcome parser() {
    std::mt19937_64 rng(2024);
    int fixpoints = 0;
    for (int i = 0; i < 1000; ++i) {
        try {
            const auto first = coeff::Expression::parse(dbs::testing::random_expression(rng));
            const auto printed = first.print();
            const auto second = coeff::Expression::parse(printed);
            if (first.structurally_equal(second) && second.print() == printed) ++fixpoints;
        } catch (const std::exception&) {
        }
    }
    auto offset_of = [](const char* src) -> long {
        try {
            (void)coeff::Expression::parse(src);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    bool errors_ok = offset_of("0.1+*s") == 4;
    try {
        (void)coeff::Expression::parse("log(s)").eval(0.0, 0.0);
        errors_ok = false;
    } catch (const EvalError& e) {
        errors_ok = errors_ok && e.span().begin == 0 && e.span().end == 6;
    }
    try {
        (void)coeff::Expression::parse("2*sigma");
        errors_ok = false;
    } catch (const UnknownIdentifierError& e) {
        errors_ok = errors_ok && e.offset() == 2;
    }
    return {fixpoints == 1000 && errors_ok,
            fmt::format("{}/1000 fixpoints; error offsets {}", fixpoints, errors_ok ? "ok" : "wrong")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"classical reduction", classical_reduction},
        {"discounted martingale", martingale},
        {"density normalisation", density},
        {"estimator triangle", estimator_triangle},
        {"put-call parity", parity},
        {"hedging", hedging},
        {"positivity", positivity},
        {"scheme agreement", scheme_agreement},
        {"determinism", determinism},
        {"parser", parser},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << fmt::format("[{}] {:>2} {:<22} {} ({:.1f}s)", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                                 o.detail, secs)
                  << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
