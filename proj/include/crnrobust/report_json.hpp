#pragma once

#include <json.hpp>

#include "crnrobust/mono.hpp"
#include "crnrobust/robust.hpp"

namespace crnrobust {

// NaN is written as null and read back as NaN.

void to_json(nlohmann::json& j, const SampleResult& s);
void from_json(const nlohmann::json& j, SampleResult& s);
void to_json(nlohmann::json& j, const RobustnessReport& r);
void from_json(const nlohmann::json& j, RobustnessReport& r);

void to_json(nlohmann::json& j, const Probe& p);
void from_json(const nlohmann::json& j, Probe& p);
void to_json(nlohmann::json& j, const AlphaReport& r);
void from_json(const nlohmann::json& j, AlphaReport& r);

void to_json(nlohmann::json& j, const MonotonicityVerdict& v);
void from_json(const nlohmann::json& j, MonotonicityVerdict& v);
void to_json(nlohmann::json& j, const ChainVerdict& v);

/// Verdict JSON including the R-graph it was computed on.
nlohmann::json verdict_json(const ReactionNetwork& net, const MonotonicityVerdict& v);

}  // namespace crnrobust
