#include "bmsfield/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bmsfield/errors.hpp"

namespace bms {

using nlohmann::json;

Metric Metric::from_signature(const std::string& sig) {
    if (sig == "+---") return mostly_minus();
    if (sig == "-+++") return mostly_plus();
    throw ConfigError("signature must be \"+---\" or \"-+++\", got \"" + sig + "\"");
}

std::string Metric::signature() const {
    if (*this == mostly_minus()) return "+---";
    if (*this == mostly_plus()) return "-+++";
    std::string s;
    for (double d : diag) s += d > 0 ? '+' : d < 0 ? '-' : '0';
    return s;
}

std::map<std::string, double> Config::default_tolerances() {
    return {
        {"cocycle", 1e-12},
        {"covering", 1e-12},
        {"nuclear_chain", 0.0},
        {"counterexamples", 0.0},
        {"transform_roundtrip", 1e-12},
        {"reduction", 1e-12},
        {"group_laws", 1e-9},
        {"hs_oracle", 1e-14},
        {"hs_cauchy", 1e-8},
        {"split", 1e-14},
        {"casimir_mass", 1e-7},
        {"massless_B", 1e-10},
        {"t4_covariance", 1e-12},
        {"q_identity", 1e-14},
        {"mc_sigmas", 3.0},
        {"fg_identity", 1e-12},
        {"fg_intertwining", 1e-10},
        {"fourier_intertwining", 1e-10},
        {"propfg", 1e-10},
        {"vainberg_symmetric", 1e-12},
        {"vainberg_obstruction", 0.5},
        {"el_gradient", 1e-6},
        {"legendre", 1e-10},
        {"fiber_invariance", 1e-12},
        {"induced_phase", 1e-13},
        {"boost_norm", 1e-3},
        {"refinement_gain", 2.0},
    };
}

void Config::validate() const {
    if (!(k > 1.0)) throw ConfigError("k must satisfy k > 1 (got " + std::to_string(k) + ")");
    if (N < 2) throw ConfigError("N must satisfy N >= 2 (got " + std::to_string(N) + ")");
    if (L_max < 2) throw ConfigError("L_max must be at least 2 (got " + std::to_string(L_max) + ")");
    for (const auto& [l, m] : st_directions) {
        if (l <= 1) throw ConfigError("ST_directions must all have l > 1 (got l = " + std::to_string(l) + ")");
        if (m < -l || m > l) throw ConfigError("ST_directions entry has |m| > l");
        if (l > L_max) throw ConfigError("ST_directions entry has l > L_max");
    }
    for (std::size_t i = 0; i < st_directions.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (st_directions[i] == st_directions[j]) throw ConfigError("ST_directions contains a duplicate");
    if (mc_samples < 1 || fd_states < 1) throw ConfigError("battery sizes must be positive");
    if (induced_n_chi < 2 || induced_n_sphere < 2 || induced_refine < 2)
        throw ConfigError("induced resolution must be at least 2 and refine at least 2");
    if (boost_rapidity < 0.0) throw ConfigError("boost_rapidity must be non-negative");
    for (const auto& [name, v] : tolerances)
        if (!(v >= 0.0)) throw ConfigError("tolerance " + name + " must be non-negative");
}

double Config::tol(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("no tolerance named " + name);
    return it->second;
}

namespace {

template <class T>
T read(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field ") + key + ": " + e.what());
    }
}

} // namespace

Config Config::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    Config c;
    for (const auto& [key, value] : j.items()) {
        if (key == "L_max") c.L_max = read<int>(j, "L_max");
        else if (key == "k") c.k = read<double>(j, "k");
        else if (key == "N") c.N = read<int>(j, "N");
        else if (key == "signature") c.signature = Metric::from_signature(read<std::string>(j, "signature"));
        else if (key == "ST_directions") c.st_directions = read<std::vector<std::pair<int, int>>>(j, "ST_directions");
        else if (key == "seed") c.seed = read<std::uint64_t>(j, "seed");
        else if (key == "degree_policy") {
            const auto p = read<std::string>(j, "degree_policy");
            if (p == "strict") c.degree_policy = DegreePolicy::strict;
            else if (p == "grow") c.degree_policy = DegreePolicy::grow;
            else throw ConfigError("degree_policy must be \"strict\" or \"grow\"");
        } else if (key == "tolerances") {
            for (const auto& [name, v] : read<std::map<std::string, double>>(j, "tolerances")) {
                if (!c.tolerances.contains(name)) throw ConfigError("unknown tolerance " + name);
                c.tolerances[name] = v;
            }
        } else if (key == "mc_samples") c.mc_samples = read<std::int64_t>(j, "mc_samples");
        else if (key == "fd_states") c.fd_states = read<int>(j, "fd_states");
        else if (key == "induced_n_chi") c.induced_n_chi = read<int>(j, "induced_n_chi");
        else if (key == "induced_n_sphere") c.induced_n_sphere = read<int>(j, "induced_n_sphere");
        else if (key == "induced_refine") c.induced_refine = read<int>(j, "induced_refine");
        else if (key == "boost_rapidity") c.boost_rapidity = read<double>(j, "boost_rapidity");
        else if (key == "weight_exponent") c.weight_exponent = read<double>(j, "weight_exponent");
        else throw ConfigError("unknown config key " + key);
    }
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Config::to_json_text() const {
    json j;
    j["L_max"] = L_max;
    j["k"] = k;
    j["N"] = N;
    j["signature"] = signature.signature();
    j["ST_directions"] = st_directions;
    j["seed"] = seed;
    j["degree_policy"] = degree_policy == DegreePolicy::strict ? "strict" : "grow";
    j["tolerances"] = tolerances;
    j["mc_samples"] = mc_samples;
    j["fd_states"] = fd_states;
    j["induced_n_chi"] = induced_n_chi;
    j["induced_n_sphere"] = induced_n_sphere;
    j["induced_refine"] = induced_refine;
    j["boost_rapidity"] = boost_rapidity;
    j["weight_exponent"] = weight_exponent;
    return j.dump(2);
}

std::optional<std::string> resolve_config_path(const std::optional<std::string>& explicit_path) {
    if (explicit_path) return explicit_path;
    if (const char* env = std::getenv("BMSFIELD_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

} // namespace bms
