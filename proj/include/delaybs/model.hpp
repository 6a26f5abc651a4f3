#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "delaybs/coeffexpr.hpp"

namespace dbs {

using CoefficientExpr = coeff::Expression;

enum class Measure { P, Q };

inline constexpr int kDefaultQuadN = 64;

// Relative tolerance used to snap times onto block boundaries.
inline constexpr double kBoundarySnap = 1e-12;

// Deterministic short-rate curve lambda(t), in 1/years.
class RateCurve {
public:
    enum class Kind { Constant, Piecewise, Samples };

    RateCurve() = default;

    static RateCurve constant(double rate);
    // values[i] applies on [breakpoints[i-1], breakpoints[i]); values.size() == breakpoints.size() + 1.
    static RateCurve piecewise(std::vector<double> breakpoints, std::vector<double> values);
    // Linear interpolation between (times[i], values[i]); times strictly increasing.
    static RateCurve samples(std::vector<double> times, std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double rate(double t) const;

    // int_{t1}^{t2} lambda(u) du; Simpson on every smooth piece between knots.
    double integral(double t1, double t2, int n = kDefaultQuadN) const;

    // Problems preventing use on [0, horizon]; empty when usable.
    std::vector<std::string> check(double horizon) const;

    // true when lambda is the same constant everywhere.
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }

private:
    double piece_rate(std::size_t piece, double t) const;
    std::size_t piece_index(double t) const;
    std::size_t piece_count() const noexcept;
    double piece_end(std::size_t piece) const;

    Kind kind_ = Kind::Constant;
    std::vector<double> knots_;
    std::vector<double> values_{0.0};
};

// kh for the unique k with kh <= t < (k+1)h, with boundary snapping.
double floor_block(double t, double h);

// Start of the last block that has positive overlap with [0, T].
// Equals floor_block(T, h) unless T sits on a block boundary.
double final_block_start(double T, double h);

// [0, h, 2h, ..., floor_block(T), T] without a duplicated final entry.
std::vector<double> block_schedule(double T, double h);

// [t_start, interior block boundaries..., t_end].
std::vector<double> block_segments(double t_start, double t_end, double h);

// exp(-int_{t1}^{t2} lambda).
double discount_factor(const RateCurve& rate, double t1, double t2, int n = kDefaultQuadN);

struct VariableDelayMarket {
    double h = 1.0;
    double T = 1.0;
    double s0 = 1.0;
    CoefficientExpr f;
    CoefficientExpr g;
    RateCurve rate;
    double g_min = 1e-8;
    int quad_n = kDefaultQuadN;

    double rate_integral(double a, double b) const { return rate.integral(a, b, quad_n); }
    double discount(double a, double b) const { return discount_factor(rate, a, b, quad_n); }
    // Conditioning time after which the remaining volatility is known.
    double t_star() const { return final_block_start(T, h); }
};

struct Violation {
    std::string what;
    double t = 0.0;
    double s = 0.0;
    double value = 0.0;

    std::string describe() const;
};

// Validation grid: 129 equispaced t in [0, T] by 65 log-spaced s in [s0/100, 100 s0].
inline constexpr std::size_t kGridTimes = 129;
inline constexpr std::size_t kGridPrices = 65;

std::vector<Violation> validate_market(const VariableDelayMarket& market);

// Throws ConfigError listing every violation.
void require_valid(const VariableDelayMarket& market);

struct DriftFunctional {
    enum class Kind { SegmentPoint, ProportionalLagged, MovingAverage };

    Kind kind = Kind::SegmentPoint;
    double c = 0.0;
    double eps = 0.0;

    bool uses_drift_lag() const noexcept { return kind != Kind::SegmentPoint; }
};

struct FixedDelaySfde {
    double L = 1.0;
    double b = 1.0;
    double a = 1.0;
    // Equispaced samples of the initial path on [-L, 0]; a single sample is a constant path.
    std::vector<double> phi_samples{1.0};
    DriftFunctional drift;
    CoefficientExpr g;
    double T = 1.0;

    double phi(double u) const;
};

std::vector<std::string> validate_fixed_delay(const FixedDelaySfde& sfde);
void require_valid(const FixedDelaySfde& sfde);

enum class OptionKind { Call, Put };

struct OptionSpec {
    double K = 1.0;
    OptionKind kind = OptionKind::Call;
    double t_valuation = 0.0;

    double payoff(double s_T) const;
};

void require_valid(const OptionSpec& option, double horizon);

}  // namespace dbs
