#pragma once

#include <json.hpp>

#include "mdl/constructions.hpp"
#include "mdl/minimize.hpp"
#include "mdl/semantics.hpp"

namespace mdl {

// Valuations serialise as {"p1": [0, 3], ...}.
inline nlohmann::json to_json(const Valuation& v) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [var, pts] : v.sets) out["p" + std::to_string(var)] = pts;
    return out;
}

inline Valuation valuation_from_json(const nlohmann::json& j) {
    Valuation v;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key.empty() || key[0] != 'p')
            throw std::invalid_argument("valuation keys look like \"p<k>\"");
        v.assign(std::stoi(key.substr(1)), it.value().get<std::vector<PointId>>());
    }
    return v;
}

inline nlohmann::json to_json(const Verdict& verdict) {
    nlohmann::json properties = nlohmann::json::object();
    for (const std::string& name : property_names())
        properties[name] = verdict.property_holds() ? "hold" : "fail";
    return nlohmann::json{{"minimal", to_dsl(verdict.minimal)},
                          {"inner_cycle", verdict.inner_cycle},
                          {"class", to_string(verdict.classification)},
                          {"properties", properties}};
}

inline nlohmann::json to_json(const Rank1Report& report) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const Rank1Condition& c : report.conditions)
        conditions.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return nlohmann::json{{"conditions", conditions},
                          {"hom_count", report.hom_count},
                          {"passed", report.all_passed()}};
}

inline nlohmann::json to_json(const C1Report& report) {
    nlohmann::json out{{"samples", report.samples},
                       {"k", report.k},
                       {"m", report.m},
                       {"threshold", report.threshold},
                       {"passed", report.passed}};
    if (report.counterexample)
        out["counterexample"] = {{"point", report.counterexample->first},
                                 {"valuation", to_json(report.counterexample->second)}};
    return out;
}

inline nlohmann::json to_json(const Complete1Report& report) {
    nlohmann::json per_alpha = nlohmann::json::array();
    for (const auto& [alpha, refuted] : report.refuted)
        per_alpha.push_back({{"alpha", alpha}, {"refuted", refuted}});
    return nlohmann::json{{"per_alpha", per_alpha}, {"passed", report.passed}};
}

}  // namespace mdl
