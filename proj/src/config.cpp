#include "delaybs/config.hpp"

#include <fstream>

#include "delaybs/errors.hpp"

namespace dbs {

namespace {

using nlohmann::json;

const json& field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return doc.at(key);
}

double number(const json& doc, const char* key) {
    const auto& v = field(doc, key);
    if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
    return doc.contains(key) ? number(doc, key) : fallback;
}

std::vector<double> numbers(const json& doc, const char* key) {
    const auto& v = field(doc, key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw ConfigError(std::string("key '") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string("key '") + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

CoefficientExpr expression(const json& doc, const char* key) {
    const auto& v = field(doc, key);
    std::string src;
    if (v.is_string()) {
        src = v.get<std::string>();
    } else if (v.is_number()) {
        src = v.dump();
    } else {
        throw ConfigError(std::string("key '") + key + "' must be an expression string");
    }
    try {
        return CoefficientExpr::parse(src);
    } catch (const std::exception& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

}  // namespace

RateCurve rate_from_json(const json& doc) {
    if (doc.is_number()) return RateCurve::constant(doc.get<double>());
    const auto& kind_v = field(doc, "kind");
    if (!kind_v.is_string()) throw ConfigError("rate.kind must be a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "constant") return RateCurve::constant(number(doc, "value"));
    if (kind == "piecewise") return RateCurve::piecewise(numbers(doc, "breakpoints"), numbers(doc, "values"));
    if (kind == "samples") return RateCurve::samples(numbers(doc, "times"), numbers(doc, "values"));
    throw ConfigError("unknown rate kind '" + kind + "' (expected constant, piecewise or samples)");
}

VariableDelayMarket market_from_json(const json& doc) {
    VariableDelayMarket m;
    m.h = number(doc, "h");
    m.T = number(doc, "T");
    m.s0 = number(doc, "s0");
    m.f = expression(doc, "f_expr");
    m.g = expression(doc, "g_expr");
    m.g_min = number(doc, "g_min");
    m.rate = rate_from_json(field(doc, "rate"));
    return m;
}

bool has_fixed_delay_keys(const json& doc) {
    return doc.is_object() && doc.contains("L") && doc.contains("b") && doc.contains("drift");
}

FixedDelaySfde fixed_delay_from_json(const json& doc) {
    FixedDelaySfde s;
    s.L = number(doc, "L");
    s.b = number(doc, "b");
    s.a = number_or(doc, "a", s.b);
    s.T = number(doc, "T");
    s.phi_samples = numbers(doc, "phi_samples");
    s.g = expression(doc, "g_expr");

    const auto& d = field(doc, "drift");
    const auto& kind_v = field(d, "kind");
    if (!kind_v.is_string()) throw ConfigError("drift.kind must be a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "segment-point") {
        s.drift.kind = DriftFunctional::Kind::SegmentPoint;
    } else if (kind == "proportional-lagged") {
        s.drift.kind = DriftFunctional::Kind::ProportionalLagged;
    } else if (kind == "moving-average") {
        s.drift.kind = DriftFunctional::Kind::MovingAverage;
    } else {
        throw ConfigError("unknown drift kind '" + kind +
                          "' (expected segment-point, proportional-lagged or moving-average)");
    }
    s.drift.c = number(d, "c");
    s.drift.eps = number_or(d, "eps", 0.0);
    return s;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse config file '" + path.string() + "': " + e.what());
    }
}

}  // namespace dbs
