#include "crnrobust/report_json.hpp"

#include <cmath>
#include <limits>

namespace crnrobust {

using nlohmann::json;

namespace {

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double read_num(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

AlphaStatus status_from(const std::string& s) {
    if (s == "robust") return AlphaStatus::Robust;
    if (s == "not_robust") return AlphaStatus::NotRobust;
    if (s == "undetermined") return AlphaStatus::Undetermined;
    throw std::invalid_argument("unknown alpha status '" + s + "'");
}

MonotonicityKind kind_from(const std::string& s) {
    for (auto k : {MonotonicityKind::PositivelyMonotonic, MonotonicityKind::NegativelyMonotonic,
                   MonotonicityKind::Inconclusive})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown monotonicity kind '" + s + "'");
}

FailedCondition failed_from(const std::string& s) {
    for (auto c : {FailedCondition::None, FailedCondition::NoConsistentLabeling, FailedCondition::InputInvolvement,
                   FailedCondition::OutputInvolvement, FailedCondition::ZeroProduct, FailedCondition::Disconnected,
                   FailedCondition::ChainLink})
        if (to_string(c) == s) return c;
    throw std::invalid_argument("unknown failed condition '" + s + "'");
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> read_opt(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

}  // namespace

void to_json(json& j, const SampleResult& s) {
    j = json{{"index", s.index}, {"initial", s.initial}, {"sd", num(s.sd)}, {"failed", s.failed}};
    if (!s.error.empty()) j["error"] = s.error;
}

void from_json(const json& j, SampleResult& s) {
    s.index = j.at("index").get<std::size_t>();
    s.initial = j.at("initial").get<std::vector<double>>();
    s.sd = read_num(j.at("sd"));
    s.failed = j.at("failed").get<bool>();
    s.error = j.value("error", std::string());
}

void to_json(json& j, const RobustnessReport& r) {
    j = json{{"estimate", num(r.estimate)},
             {"std_error", num(r.std_error)},
             {"samples_used", r.samples_used},
             {"failures", r.failures},
             {"per_sample", r.per_sample}};
}

void from_json(const json& j, RobustnessReport& r) {
    r.estimate = read_num(j.at("estimate"));
    r.std_error = read_num(j.at("std_error"));
    r.samples_used = j.at("samples_used").get<std::size_t>();
    r.failures = j.at("failures").get<std::size_t>();
    r.per_sample = j.at("per_sample").get<std::vector<SampleResult>>();
}

void to_json(json& j, const Probe& p) {
    j = json{{"initial", p.initial},
             {"steady_output", num(p.steady_output)},
             {"reached", p.reached},
             {"t_reached", opt(p.t_reached)}};
    if (!p.error.empty()) j["error"] = p.error;
}

void from_json(const json& j, Probe& p) {
    p.initial = j.at("initial").get<std::vector<double>>();
    p.steady_output = read_num(j.at("steady_output"));
    p.reached = j.at("reached").get<bool>();
    p.t_reached = read_opt<double>(j.at("t_reached"));
    p.error = j.value("error", std::string());
}

void to_json(json& j, const AlphaReport& r) {
    j = json{{"output", r.output},
             {"alpha", r.alpha},
             {"robust", r.robust},
             {"status", std::string(to_string(r.status))},
             {"observed_min", num(r.observed_min)},
             {"observed_max", num(r.observed_max)},
             {"spread", num(r.spread)},
             {"center_k", num(r.center_k)},
             {"strategy_used", r.strategy_used},
             {"approximate", r.approximate},
             {"failures", r.failures},
             {"probes", r.probes}};
}

void from_json(const json& j, AlphaReport& r) {
    r.output = j.at("output").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    r.robust = j.at("robust").get<bool>();
    r.status = status_from(j.at("status").get<std::string>());
    r.observed_min = read_num(j.at("observed_min"));
    r.observed_max = read_num(j.at("observed_max"));
    r.spread = read_num(j.at("spread"));
    r.center_k = read_num(j.at("center_k"));
    r.strategy_used = j.at("strategy_used").get<std::string>();
    r.approximate = j.at("approximate").get<bool>();
    r.failures = j.at("failures").get<std::vector<std::vector<double>>>();
    r.probes = j.at("probes").get<std::vector<Probe>>();
}

void to_json(json& j, const MonotonicityVerdict& v) {
    j = json{{"kind", std::string(to_string(v.kind))},
             {"failed_condition", std::string(to_string(v.failed))},
             {"reason", v.reason},
             {"input", v.input},
             {"output", v.output},
             {"witness", opt(v.witness)},
             {"input_reaction", opt(v.input_reaction)},
             {"output_reaction", opt(v.output_reaction)},
             {"p_in", v.p_in},
             {"p_out", v.p_out}};
}

void from_json(const json& j, MonotonicityVerdict& v) {
    v.kind = kind_from(j.at("kind").get<std::string>());
    v.failed = failed_from(j.at("failed_condition").get<std::string>());
    v.reason = j.at("reason").get<std::string>();
    v.input = j.at("input").get<std::string>();
    v.output = j.at("output").get<std::string>();
    v.witness = read_opt<Labeling>(j.at("witness"));
    v.input_reaction = read_opt<std::size_t>(j.at("input_reaction"));
    v.output_reaction = read_opt<std::size_t>(j.at("output_reaction"));
    v.p_in = j.at("p_in").get<int>();
    v.p_out = j.at("p_out").get<int>();
}

void to_json(json& j, const ChainVerdict& v) {
    j = json{{"kind", std::string(to_string(v.kind))},
             {"failed_condition", std::string(to_string(v.failed))},
             {"reason", v.reason},
             {"steps", v.steps}};
}

json verdict_json(const ReactionNetwork& net, const MonotonicityVerdict& v) {
    json j = v;
    const auto g = build_r_graph(net);
    json names = json::array();
    for (const auto& r : net.reactions()) names.push_back(r.name);
    auto edges = [&](const auto& set) {
        json e = json::array();
        for (const auto& [a, b] : set) e.push_back({net.reactions()[a].name, net.reactions()[b].name});
        return e;
    };
    j["r_graph"] = json{{"reactions", names}, {"e_plus", edges(g.e_plus)}, {"e_minus", edges(g.e_minus)}};
    if (v.witness) {
        json w = json::object();
        for (std::size_t i = 0; i < v.witness->size(); ++i) w[net.reactions()[i].name] = (*v.witness)[i] > 0 ? "+" : "-";
        j["labels"] = w;
    }
    return j;
}

}  // namespace crnrobust
