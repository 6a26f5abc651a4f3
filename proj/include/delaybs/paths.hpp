#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "delaybs/model.hpp"
#include "delaybs/rng.hpp"

namespace dbs {

struct Path {
    std::vector<double> times;
    std::vector<double> values;
    Measure measure = Measure::P;
    BrownianSpec spec;
    // First grid index with a non-positive value (Euler-Maruyama only; never set by the other schemes).
    std::optional<std::size_t> first_nonpositive;
};

// ---------------------------------------------------------------------------
// Variable-delay market: exact sampling block by block.
// ---------------------------------------------------------------------------

// One exact draw of S(b) given S(a) = s_k with [a, b] inside the block started at price s_k.
// Under Q the drift is lambda, under P it is f(u, s_k).
double sample_block_exact(const VariableDelayMarket& market, double s_k, double a, double b, Measure measure,
                          double z);

// Running state of an exact path: current time and price, the frozen block-start
// price, and the index of the next Brownian draw.
struct ExactState {
    double t = 0.0;
    double s = 0.0;
    double s_block = 0.0;
    std::uint32_t draw = 0;
};

// Moves `state` forward to t_to, splitting at every block boundary and refreshing
// the frozen price there.
void advance_exact(const VariableDelayMarket& market, Measure measure, const BrownianSpec& spec, ExactState& state,
                   double t_to);

bool on_block_boundary(double t, double h);

// Path started at (t_start, s_start) with block-start price s_blockstart, recorded at
// t_start and at every requested sample time.
Path simulate_exact(const VariableDelayMarket& market, Measure measure, const BrownianSpec& spec, double t_start,
                    double s_start, double s_blockstart, const std::vector<double>& sample_times);

// ---------------------------------------------------------------------------
// Fixed-delay SFDE: Euler-Maruyama and the psi * y splitting scheme.
// ---------------------------------------------------------------------------

// Recent history of S on the dt grid. Holds at least L of past values; at t = 0
// it is phi sampled on the grid.
class SegmentBuffer {
public:
    SegmentBuffer(const FixedDelaySfde& sfde, double dt, std::size_t avg_steps);

    double dt() const noexcept { return dt_; }
    double current() const noexcept { return lagged(0); }
    // Value `steps` grid points in the past.
    double lagged(std::size_t steps) const noexcept { return ring_[(head_ + cap_ - steps) % cap_]; }
    // Trapezoidal mean of S over the last avg_steps grid intervals.
    double window_average() const noexcept;
    std::size_t capacity() const noexcept { return cap_; }

    void push(double value) noexcept;

private:
    double dt_;
    std::size_t cap_;
    std::size_t head_ = 0;
    std::size_t avg_steps_;
    double window_sum_ = 0.0;
    std::vector<double> ring_;
};

// Drift f(t, S_t) of the catalog functionals, evaluated on the buffered segment.
double drift_value(const DriftFunctional& drift, const SegmentBuffer& segment, std::size_t lag_a_steps,
                   std::size_t lag_b_steps);

struct SplitState {
    double psi = 1.0;
    double y = 0.0;
    double qv = 0.0;
    double m_acc = 0.0;
};

// Euler-Maruyama on the dt grid; dt must divide b (and a, for lag-a drifts).
Path simulate_em_fixed(const FixedDelaySfde& sfde, double dt, const BrownianSpec& spec);

// Splitting scheme S = psi * y advanced in blocks of length b. When `trace` is given
// it receives the state after every step.
Path simulate_split_fixed(const FixedDelaySfde& sfde, double dt, const BrownianSpec& spec,
                          std::vector<SplitState>* trace = nullptr);

}  // namespace dbs
