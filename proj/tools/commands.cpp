#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cli.hpp"
#include "crnrobust/mono.hpp"
#include "crnrobust/qfltl.hpp"
#include "crnrobust/report_json.hpp"
#include "crnrobust/robust.hpp"

namespace crnrobust::cli {

namespace {

using nlohmann::json;

/// Input problem detected by the CLI itself; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 0;
    std::optional<double> rel_tol, abs_tol, ss_tol;
    std::string json_path;
};

struct SimFlags {
    double t_end = 100.0;
    std::size_t points = 0;
    std::optional<double> ss_window, t_max;

    void add(CLI::App* sub) {
        sub->add_option("--t-end", t_end, "simulation horizon")->capture_default_str();
        sub->add_option("--points", points, "output grid points (default t_end + 1, at least 101)");
        sub->add_option("--ss-window", ss_window, "steady-state window length (default 5% of t_end)");
        sub->add_option("--t-max", t_max, "steady-state search cap (default 10 * t_end)");
    }

    SimOptions build(const Globals& g) const {
        std::size_t n = points;
        if (n == 0 && std::isfinite(t_end) && t_end > 0) n = std::max<std::size_t>(101, static_cast<std::size_t>(std::ceil(t_end)) + 1);
        auto o = SimOptions::for_horizon(t_end, n);
        if (g.rel_tol) o.rel_tol = *g.rel_tol;
        if (g.abs_tol) o.abs_tol = *g.abs_tol;
        if (g.ss_tol) o.ss_tol = *g.ss_tol;
        if (ss_window) o.ss_window = *ss_window;
        if (t_max) o.t_max_extend = *t_max;
        o.validate();
        return o;
    }
};

std::string num(double v) { return format_number(v); }

json json_num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

void emit_json(const Globals& g, const json& doc, std::ostream& out, bool to_stdout) {
    if (to_stdout) out << doc.dump(2) << '\n';
    if (!g.json_path.empty()) {
        std::ofstream f(g.json_path);
        if (!f) throw UsageError("cannot write " + g.json_path);
        f << doc.dump(2) << '\n';
    }
}

double parse_bound(const std::string& s, const std::string& spec) {
    if (s == "inf" || s == "+inf") return kInfinity;
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in --interval " + spec);
    return v;
}

/// Name=lo:hi, or Name=value for a point.
void apply_interval(const ReactionNetwork& net, IntervalMarking& m, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--interval expects Name=lo:hi, got '" + spec + "'");
    const auto name = spec.substr(0, eq);
    const auto idx = net.find_species(name);
    if (!idx) throw UsageError("--interval: unknown species '" + name + "'");
    const auto rest = spec.substr(eq + 1);
    const auto colon = rest.find(':');
    const double lo = parse_bound(rest.substr(0, colon), spec);
    const double hi = colon == std::string::npos ? lo : parse_bound(rest.substr(colon + 1), spec);
    m.set(*idx, Interval(lo, hi));
}

IntervalMarking marking_for(const ReactionNetwork& net, const std::vector<std::string>& overrides) {
    auto m = IntervalMarking::from_network(net);
    for (const auto& s : overrides) apply_interval(net, m, s);
    return m;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
    std::string model;
    std::string out_path;
    bool until_steady = false;
    SimFlags sim;

    void add(CLI::App& app) {
        auto* s = app.add_subcommand("simulate", "integrate a model and write the trace as CSV");
        s->add_option("model", model, "model JSON")->required();
        s->add_option("--out", out_path, "trace CSV path (stdout when omitted)");
        s->add_flag("--until-steady", until_steady, "extend the run until steady state or --t-max");
        sim.add(s);
    }

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        const auto o = sim.build(g);
        const auto net = load_network(model);
        const auto odes = derive_odes(net);
        Trace trace;
        std::optional<SteadyStateReport> ss;
        if (until_steady) {
            auto r = find_steady_state(odes, net.initial_state(), o);
            trace = std::move(r.first);
            ss = std::move(r.second);
        } else {
            trace = simulate(odes, net.initial_state(), o);
        }
        if (out_path.empty())
            write_trace_csv(out, trace);
        else
            write_trace_csv(out_path, trace);
        std::ostream& rep = out_path.empty() ? err : out;
        const auto settle = settling_times(trace, o.ss_tol, o.ss_window);
        bool all = true;
        for (const auto& s : settle) all = all && s.has_value();
        if (ss)
            rep << "steady state: " << (ss->reached ? "reached at t = " + num(*ss->t_reached) : "not reached by t = " + num(trace.back().t)) << '\n';
        else
            rep << "steady state: " << (all ? "all species settled" : "not reached") << " by t = " << num(trace.back().t) << '\n';
        json st = json::object();
        json fin = json::object();
        for (std::size_t j = 0; j < trace.species.size(); ++j) {
            rep << "  " << trace.species[j] << ": final " << num(trace.back().x[j]) << ", settled "
                << (settle[j] ? "at t = " + num(*settle[j]) : std::string("no")) << '\n';
            st[trace.species[j]] = settle[j] ? json(*settle[j]) : json(nullptr);
            fin[trace.species[j]] = trace.back().x[j];
        }
        json doc{{"t_final", trace.back().t}, {"final", fin}, {"settling_times", st}};
        if (ss) {
            doc["reached"] = ss->reached;
            doc["t_reached"] = ss->t_reached ? json(*ss->t_reached) : json(nullptr);
        } else {
            doc["reached"] = all;
        }
        emit_json(g, doc, out, false);
        if (ss && !ss->reached) return kNumericFailure;
        return kOk;
    }
};

// ---------------------------------------------------------------- check

struct CheckCmd {
    std::string model;
    std::string trace_path;
    std::string formula;
    SimFlags sim;

    void add(CLI::App& app) {
        auto* s = app.add_subcommand("check", "evaluate an LTL formula with violation and satisfaction degrees");
        s->add_option("model", model, "model JSON (simulated when --trace is absent)");
        s->add_option("--trace", trace_path, "trace CSV to check instead of simulating");
        s->add_option("-f,--formula", formula, "LTL formula")->required();
        sim.add(s);
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        if (model.empty() == trace_path.empty()) throw UsageError("check needs exactly one of a model or --trace");
        const auto f = parse_formula(formula);
        Trace trace;
        if (!trace_path.empty()) {
            trace = read_trace_csv(trace_path);
        } else {
            const auto o = sim.build(g);
            const auto net = load_network(model);
            trace = simulate(derive_odes(net), net.initial_state(), o);
        }
        const auto a = assess(trace, f);
        out << "formula: " << f.to_string() << '\n';
        out << "holds: " << (a.holds ? "true" : "false") << '\n';
        out << "vd: " << num(a.violation) << '\n';
        out << "sd: " << num(a.satisfaction) << '\n';
        out << "abstraction: " << a.abstraction.formula.to_string() << '\n';
        out << "reference: (";
        for (std::size_t i = 0; i < a.abstraction.reference_point.size(); ++i)
            out << (i ? ", " : "") << num(a.abstraction.reference_point[i]);
        out << ")\n";
        out << "domain: " << a.domain.to_string() << '\n';
        json doc{{"formula", f.to_string()},
                 {"holds", a.holds},
                 {"vd", json_num(a.violation)},
                 {"sd", a.satisfaction},
                 {"abstraction", a.abstraction.formula.to_string()},
                 {"reference_point", a.abstraction.reference_point},
                 {"domain", a.domain.to_string()}};
        emit_json(g, doc, out, false);
        return kOk;
    }
};

// ---------------------------------------------------------------- robustness

struct RobustnessCmd {
    std::string model;
    std::string formula;
    std::size_t samples = 100;
    std::vector<std::string> intervals;
    std::string horizon = "fixed";
    bool emit_samples = false;
    SimFlags sim;

    void add(CLI::App& app) {
        auto* s = app.add_subcommand("robustness", "Monte Carlo robustness degree of a formula");
        s->add_option("model", model, "model JSON")->required();
        s->add_option("-f,--formula", formula, "closed LTL formula")->required();
        s->add_option("-n,--samples", samples, "number of sampled initial states")->capture_default_str();
        s->add_option("--interval", intervals, "initial interval override Name=lo:hi (repeatable)");
        s->add_option("--horizon", horizon, "fixed or steady")->check(CLI::IsMember({"fixed", "steady"}));
        s->add_flag("--emit-samples", emit_samples, "include every sample in the report");
        sim.add(s);
    }

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        if (samples == 0) throw UsageError("--samples must be at least 1");
        RobustnessQuery q;
        q.sim = sim.build(g);
        q.network = load_network(model);
        q.marking = marking_for(q.network, intervals);
        q.formula = parse_formula(formula);
        q.samples = samples;
        q.seed = g.seed;
        q.horizon = horizon == "steady" ? Horizon::SteadyState : Horizon::Fixed;
        q.validate();
        if (q.marking.all_trivial()) err << "warning: every initial interval is trivial\n";
        auto r = estimate_robustness(q);
        if (!emit_samples) r.per_sample.clear();
        emit_json(g, json(r), out, true);
        if (r.failures > 0) err << "warning: " << r.failures << " sample(s) failed\n";
        return r.samples_used == 0 ? kNumericFailure : kOk;
    }
};

// ---------------------------------------------------------------- monotonicity

struct MonotonicityCmd {
    std::string model;
    std::string input, output;
    std::string reactions;
    std::string chain_path;
    std::string dot_path;

    void add(CLI::App& app) {
        auto* s = app.add_subcommand("monotonicity", "structural input-output monotonicity test");
        s->add_option("model", model, "model JSON")->required();
        s->add_option("--input", input, "input species");
        s->add_option("--output", output, "output species");
        s->add_option("--reactions", reactions, "comma-separated sub-network");
        s->add_option("--chain", chain_path, "JSON list of cascade steps");
        s->add_option("--dot", dot_path, "write the labeled R-graph as Graphviz");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        const auto net = load_network(model);
        if (!chain_path.empty()) {
            if (!reactions.empty()) throw UsageError("--reactions and --chain are exclusive");
            if (!dot_path.empty()) throw UsageError("--dot is not available with --chain");
            const auto steps = load_chain(chain_path);
            const auto cv = classify_chain(net, steps);
            json doc = cv;
            for (std::size_t k = 0; k < cv.steps.size(); ++k) {
                const auto sub = steps[k].reactions.empty() ? net : net.subnetwork(steps[k].reactions);
                doc["steps"][k] = verdict_json(sub, cv.steps[k]);
            }
            emit_json(g, doc, out, true);
            return kOk;
        }
        if (input.empty() || output.empty()) throw UsageError("monotonicity needs --input and --output, or --chain");
        const auto names = split_names(reactions);
        const auto sub = names.empty() ? net : net.subnetwork(names);
        const auto v = classify_monotonicity(sub, input, output);
        emit_json(g, verdict_json(sub, v), out, true);
        if (!dot_path.empty()) {
            std::ofstream f(dot_path);
            if (!f) throw UsageError("cannot write " + dot_path);
            f << to_dot(sub, build_r_graph(sub), consistent_labeling(build_r_graph(sub)));
        }
        return kOk;
    }
};

// ---------------------------------------------------------------- alpha-check

struct AlphaCmd {
    std::string model;
    std::string output;
    std::string input;
    double alpha = 0.0;
    std::string strategy = "grid";
    std::size_t n = 20;
    bool automatic = false;
    std::string chain_path;
    std::vector<std::string> intervals;
    std::string probes_csv;
    SimFlags sim;

    void add(CLI::App& app) {
        auto* s = app.add_subcommand("alpha-check", "steady-state alpha-robustness of an output");
        s->add_option("model", model, "model JSON")->required();
        s->add_option("--output", output, "output species")->required();
        s->add_option("--alpha", alpha, "window width")->required();
        s->add_option("--input", input, "input species (default: the single non-trivial interval)");
        s->add_option("--strategy", strategy, "grid, mc or endpoints")
            ->check(CLI::IsMember({"grid", "mc", "endpoints"}))
            ->capture_default_str();
        s->add_option("--n", n, "grid points per axis or Monte Carlo samples")->capture_default_str();
        s->add_flag("--auto", automatic, "use endpoints when monotonicity is certified, else grid");
        s->add_option("--chain", chain_path, "JSON list of cascade steps for the certificate");
        s->add_option("--interval", intervals, "initial interval override Name=lo:hi (repeatable)");
        s->add_option("--probes-csv", probes_csv, "write input,output pairs of every probe");
        sim.t_end = 500.0;
        sim.add(s);
    }

    struct Certificate {
        bool monotone = false;
        MonotonicityKind kind = MonotonicityKind::Inconclusive;
        std::string reason;
        json doc;
    };

    Certificate certify(const ReactionNetwork& net, const std::string& in) const {
        Certificate c;
        if (!chain_path.empty()) {
            const auto steps = load_chain(chain_path);
            if (steps.front().input != in || steps.back().output != output)
                throw UsageError("chain must start at input " + in + " and end at output " + output);
            const auto cv = classify_chain(net, steps);
            c.kind = cv.kind;
            c.reason = cv.reason;
            c.doc = cv;
        } else {
            const auto v = classify_monotonicity(net, in, output);
            c.kind = v.kind;
            c.reason = v.reason;
            c.doc = verdict_json(net, v);
        }
        c.monotone = c.kind != MonotonicityKind::Inconclusive;
        return c;
    }

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        if (n == 0) throw UsageError("--n must be at least 1");
        if (!std::isfinite(alpha) || alpha < 0) throw UsageError("--alpha must be a finite value >= 0");
        const auto o = sim.build(g);
        const auto net = load_network(model);
        const auto marking = marking_for(net, intervals);
        if (!net.find_species(output)) throw UsageError("unknown output species '" + output + "'");
        if (!marking.bounded()) throw UsageError("initial intervals must be bounded");

        std::string in = input;
        const auto free = marking.nontrivial_indices();
        if (in.empty() && free.size() == 1) in = net.species()[free[0]].name;
        if (!in.empty() && !net.find_species(in)) throw UsageError("unknown input species '" + in + "'");

        const bool want_endpoints = automatic || strategy == "endpoints";
        std::optional<Certificate> cert;
        if (want_endpoints) {
            if (in.empty()) throw UsageError("endpoint mode needs an input species");
            for (auto i : free)
                if (net.species()[i].name != in)
                    throw UsageError("endpoint mode needs every interval other than " + in + " to be trivial");
            cert = certify(net, in);
            if (!cert->monotone && !automatic)
                throw UsageError("monotonicity not certified (" + cert->reason + "); use --auto or another strategy");
        }

        AlphaReport r;
        if (cert && cert->monotone) {
            r = endpoint_verification(net, in, marking[net.species_index(in)], output, alpha, o, cert->kind);
        } else {
            if (automatic)
                err << "warning: monotonicity not certified (" << cert->reason << "); falling back to grid(" << n
                    << "), result is approximate\n";
            AlphaQuery q;
            q.network = net;
            q.marking = marking;
            q.output = output;
            q.alpha = alpha;
            q.sim = o;
            if (strategy == "mc" && !automatic)
                q.strategy = MonteCarloStrategy{n, g.seed};
            else
                q.strategy = GridStrategy{n};
            r = check_alpha_robustness(q);
        }

        if (!probes_csv.empty()) {
            std::ofstream f(probes_csv);
            if (!f) throw UsageError("cannot write " + probes_csv);
            const auto col = in.empty() ? std::optional<std::size_t>() : net.find_species(in);
            f << (col ? in : "probe") << ',' << output << ",reached\n";
            for (std::size_t k = 0; k < r.probes.size(); ++k) {
                const auto& p = r.probes[k];
                f << (col ? num(p.initial[*col]) : std::to_string(k)) << ',' << num(p.steady_output) << ','
                  << (p.reached ? 1 : 0) << '\n';
            }
        }

        json doc = r;
        if (cert) doc = json{{"verdict", cert->doc}, {"report", r}};
        emit_json(g, doc, out, true);
        if (!r.failures.empty()) {
            err << "error: " << r.failures.size() << " probe(s) did not reach steady state\n";
            return kNumericFailure;
        }
        return kOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"crnrobust: robustness analysis of chemical reaction networks"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "base seed for every random draw");
    app.add_option("--rel-tol", g.rel_tol, "integrator relative tolerance");
    app.add_option("--abs-tol", g.abs_tol, "integrator absolute tolerance");
    app.add_option("--ss-tol", g.ss_tol, "steady-state threshold on max |dx/dt|");
    app.add_option("--json", g.json_path, "also write the JSON result to this path");

    SimulateCmd simulate_cmd;
    CheckCmd check_cmd;
    RobustnessCmd robustness_cmd;
    MonotonicityCmd mono_cmd;
    AlphaCmd alpha_cmd;
    simulate_cmd.add(app);
    check_cmd.add(app);
    robustness_cmd.add(app);
    mono_cmd.add(app);
    alpha_cmd.add(app);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (app.got_subcommand("simulate")) return simulate_cmd.run(g, out, err);
        if (app.got_subcommand("check")) return check_cmd.run(g, out, err);
        if (app.got_subcommand("robustness")) return robustness_cmd.run(g, out, err);
        if (app.got_subcommand("monotonicity")) return mono_cmd.run(g, out, err);
        if (app.got_subcommand("alpha-check")) return alpha_cmd.run(g, out, err);
    } catch (const SimulationError& e) {
        err << "error: simulation failed: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const FormulaError& e) {
        err << "error: formula: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace crnrobust::cli
