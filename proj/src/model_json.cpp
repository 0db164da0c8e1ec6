#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "crnrobust/model.hpp"

namespace crnrobust {

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ModelError(where, std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ModelError(where + "/" + key, "expected a number");
    return v.get<double>();
}

double bound_value(const json& v, const std::string& where) {
    if (v.is_null()) return kInfinity;
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) return kInfinity;
    if (!v.is_number()) throw ModelError(where, "interval bound must be a number, \"inf\" or null");
    return v.get<double>();
}

Interval parse_interval(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw ModelError(where, "interval must be a two-element array [lo, hi]");
    const double lo = bound_value(v[0], where + "/0");
    const double hi = bound_value(v[1], where + "/1");
    if (lo < 0.0) throw ModelError(where, "interval lower bound must be nonnegative");
    if (lo > hi) throw ModelError(where, "interval lower bound exceeds upper bound");
    return Interval(lo, hi);
}

class DocumentReader {
public:
    explicit DocumentReader(const json& doc) : doc_(doc) {}

    ReactionNetwork read() {
        if (!doc_.is_object()) throw ModelError("", "model document must be a JSON object");
        read_species();
        read_reactions();
        return ReactionNetwork(std::move(species_), std::move(reactions_));
    }

private:
    void read_species() {
        if (!doc_.contains("species") || !doc_["species"].is_array())
            throw ModelError("/species", "missing or non-array 'species'");
        const auto& arr = doc_["species"];
        for (std::size_t j = 0; j < arr.size(); ++j) {
            const auto where = "/species/" + std::to_string(j);
            const auto& s = arr[j];
            if (!s.is_object()) throw ModelError(where, "species entry must be an object");
            if (!s.contains("name") || !s["name"].is_string()) throw ModelError(where + "/name", "missing species name");
            Species sp;
            sp.name = s["name"].get<std::string>();
            if (index_.count(sp.name)) throw ModelError(where + "/name", "duplicate species name '" + sp.name + "'");
            sp.initial = number_field(s, "initial", where);
            if (sp.initial < 0.0 || !std::isfinite(sp.initial))
                throw ModelError(where + "/initial", "initial concentration must be finite and nonnegative");
            if (s.contains("interval")) sp.interval = parse_interval(s["interval"], where + "/interval");
            index_.emplace(sp.name, species_.size());
            species_.push_back(std::move(sp));
        }
    }

    std::size_t lookup(const json& v, const std::string& where) const {
        if (!v.is_string()) throw ModelError(where, "expected a species name");
        auto it = index_.find(v.get<std::string>());
        if (it == index_.end()) throw ModelError(where, "undeclared species '" + v.get<std::string>() + "'");
        return it->second;
    }

    std::vector<StoichTerm> read_terms(const json& r, const char* key, const std::string& where) const {
        std::vector<StoichTerm> terms;
        if (!r.contains(key)) return terms;
        const auto& arr = r[key];
        if (!arr.is_array()) throw ModelError(where + "/" + key, "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const auto loc = where + "/" + key + "/" + std::to_string(k);
            const auto& e = arr[k];
            if (e.is_string()) {
                terms.push_back({lookup(e, loc), 1});
                continue;
            }
            if (!e.is_array() || e.size() != 2) throw ModelError(loc, "expected [name, coefficient]");
            const auto s = lookup(e[0], loc + "/0");
            if (!e[1].is_number_integer() || e[1].get<long long>() < 1)
                throw ModelError(loc + "/1", "stoichiometric coefficient must be a positive integer");
            terms.push_back({s, static_cast<int>(e[1].get<long long>())});
        }
        return terms;
    }

    std::vector<std::size_t> read_modifiers(const json& r, const char* key, const std::string& where) const {
        std::vector<std::size_t> mods;
        if (!r.contains(key)) return mods;
        const auto& arr = r[key];
        if (!arr.is_array()) throw ModelError(where + "/" + key, "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) mods.push_back(lookup(arr[k], where + "/" + key + "/" + std::to_string(k)));
        return mods;
    }

    static double read_rate(const json& r, const char* key, const std::string& where) {
        const double k = number_field(r, key, where);
        if (k < 0.0 || !std::isfinite(k)) throw ModelError(where + "/" + key, "rate must be finite and nonnegative");
        return k;
    }

    void read_reactions() {
        if (!doc_.contains("reactions")) return;
        const auto& arr = doc_["reactions"];
        if (!arr.is_array()) throw ModelError("/reactions", "'reactions' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto where = "/reactions/" + std::to_string(i);
            const auto& r = arr[i];
            if (!r.is_object()) throw ModelError(where, "reaction entry must be an object");
            Reaction fwd;
            fwd.reactants = read_terms(r, "reactants", where);
            fwd.products = read_terms(r, "products", where);
            fwd.modifiers = read_modifiers(r, "modifiers", where);
            fwd.rate = read_rate(r, "rate", where);
            if (fwd.reactants.empty() && fwd.products.empty())
                throw ModelError(where, "reaction has neither reactants nor products");
            if (r.contains("name")) {
                if (!r["name"].is_string()) throw ModelError(where + "/name", "expected a string");
                fwd.name = r["name"].get<std::string>();
            }
            const std::size_t fwd_index = reactions_.size();
            if (fwd.name.empty()) fwd.name = "R" + std::to_string(fwd_index);
            reactions_.push_back(fwd);

            if (!r.contains("reverse_rate")) {
                if (r.contains("reverse_modifiers") || r.contains("reverse_name"))
                    throw ModelError(where, "reverse_* fields given without reverse_rate");
                continue;
            }
            Reaction rev;
            rev.reactants = fwd.products;
            rev.products = fwd.reactants;
            rev.modifiers = read_modifiers(r, "reverse_modifiers", where);
            rev.rate = read_rate(r, "reverse_rate", where);
            if (r.contains("reverse_name")) {
                if (!r["reverse_name"].is_string()) throw ModelError(where + "/reverse_name", "expected a string");
                rev.name = r["reverse_name"].get<std::string>();
            } else {
                rev.name = fwd.name + "_rev";
            }
            reactions_.push_back(std::move(rev));
        }
    }

    const json& doc_;
    std::map<std::string, std::size_t> index_;
    std::vector<Species> species_;
    std::vector<Reaction> reactions_;
};

json bound_json(double v) {
    if (v == kInfinity) return "inf";
    return v;
}

}  // namespace

ReactionNetwork parse_network(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ModelError("byte " + std::to_string(e.byte), std::string("malformed JSON: ") + e.what());
    }
    return DocumentReader(doc).read();
}

ReactionNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError(path, "cannot open model file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_network(ss.str());
    } catch (const ModelError& e) {
        throw ModelError(e.where().empty() ? path : path + ":" + e.where(), e.message());
    }
}

std::string serialize_network(const ReactionNetwork& net) {
    json doc;
    doc["species"] = json::array();
    for (const auto& s : net.species()) {
        json js{{"name", s.name}, {"initial", s.initial}};
        if (s.interval) js["interval"] = json::array({bound_json(s.interval->lo()), bound_json(s.interval->hi())});
        doc["species"].push_back(std::move(js));
    }
    doc["reactions"] = json::array();
    const auto& sp = net.species();
    for (const auto& r : net.reactions()) {
        json jr;
        jr["name"] = r.name;
        auto terms = [&](const std::vector<StoichTerm>& ts) {
            json a = json::array();
            for (const auto& t : ts) a.push_back(json::array({sp[t.species].name, t.coeff}));
            return a;
        };
        jr["reactants"] = terms(r.reactants);
        jr["products"] = terms(r.products);
        jr["modifiers"] = json::array();
        for (auto m : r.modifiers) jr["modifiers"].push_back(sp[m].name);
        jr["rate"] = r.rate;
        doc["reactions"].push_back(std::move(jr));
    }
    return doc.dump(2);
}

}  // namespace crnrobust
