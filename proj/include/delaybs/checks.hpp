#pragma once

#include <string>
#include <vector>

#include "delaybs/estimator.hpp"
#include "delaybs/model.hpp"

namespace dbs {

struct CheckRow {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

struct CheckOptions {
    double strike = 0.0;  // <= 0 means at the money (s0)
    McControls controls;
    // Skip up-front validation; the suite then reports violations as a failed row.
    bool validation_bypassed = false;
};

// Statistical self-checks at 3 standard errors: density normalisation, discounted
// martingale, put-call parity and the agreement of the three t = 0 estimators.
std::vector<CheckRow> run_check_suite(const VariableDelayMarket& market, const CheckOptions& options);

bool within_sigmas(double estimate, double target, double std_error, double sigmas = 3.0);

}  // namespace dbs
