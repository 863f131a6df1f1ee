#include "zsm/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace zsm {

const char* kCodeVersion = "0.1.0";

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void require_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            fail(path + "." + it.key(), "unknown key");
}

double need_number(const json& j, const std::string& path, const char* key, double fallback,
                   bool required = false) {
    if (!j.contains(key)) {
        if (required)
            fail(path + "." + key, "missing required key");
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number())
        fail(path + "." + key, "expected number, got " + std::string(v.type_name()));
    return v.get<double>();
}

long need_integer(const json& j, const std::string& path, const char* key, long fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required)
            fail(path + "." + key, "missing required key");
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        fail(path + "." + key, "expected integer, got " + std::string(v.type_name()));
    return v.get<long>();
}

std::string need_string(const json& j, const std::string& path, const char* key,
                        const char* fallback) {
    if (!j.contains(key))
        return fallback;
    const auto& v = j.at(key);
    if (!v.is_string())
        fail(path + "." + std::string(key), "expected string, got " + std::string(v.type_name()));
    return v.get<std::string>();
}

void parse_potential(const json& p, ExperimentConfig& cfg) {
    require_keys(p, "$.potential", {"external", "pair", "coupling_scale", "include_rest_energy"});
    PotentialSpec& spec = cfg.potential;
    spec.coupling_scale = need_number(p, "$.potential", "coupling_scale", 1.0);
    if (p.contains("include_rest_energy")) {
        if (!p.at("include_rest_energy").is_boolean())
            fail("$.potential.include_rest_energy", "expected boolean");
        spec.include_rest_energy = p.at("include_rest_energy").get<bool>();
    }
    if (p.contains("external")) {
        const auto& arr = p.at("external");
        if (!arr.is_array())
            fail("$.potential.external", "expected array");
        int idx = 0;
        for (const auto& t : arr) {
            const std::string path = "$.potential.external[" + std::to_string(idx) + "]";
            require_keys(t, path, {"kind", "slope", "omega", "center", "particle"});
            ExternalTerm term;
            const std::string kind = need_string(t, path, "kind", "linear");
            if (kind == "linear")
                term.kind = ExternalTerm::Kind::Linear;
            else if (kind == "harmonic")
                term.kind = ExternalTerm::Kind::Harmonic;
            else
                fail(path + ".kind", "unknown external kind '" + kind + "'");
            term.slope = need_number(t, path, "slope", 0.0);
            term.omega = need_number(t, path, "omega", 1.0);
            term.center = need_number(t, path, "center", 0.0);
            term.particle = static_cast<int>(need_integer(t, path, "particle", -1));
            spec.external_terms.push_back(term);
            ++idx;
        }
    }
    if (p.contains("pair")) {
        const auto& pr = p.at("pair");
        require_keys(pr, "$.potential.pair", {"kind", "G", "k_e", "eps", "charges"});
        const std::string kind = need_string(pr, "$.potential.pair", "kind", "none");
        if (kind == "none")
            spec.pair.kind = PairKernel::Kind::None;
        else if (kind == "gravity")
            spec.pair.kind = PairKernel::Kind::Gravity;
        else if (kind == "coulomb")
            spec.pair.kind = PairKernel::Kind::Coulomb;
        else
            fail("$.potential.pair.kind", "unknown pair kind '" + kind + "'");
        spec.pair.eps = need_number(pr, "$.potential.pair", "eps", 0.0);
        // couplings ride on the run constants
        cfg.constants.G = need_number(pr, "$.potential.pair", "G", cfg.constants.G);
        cfg.constants.k_e = need_number(pr, "$.potential.pair", "k_e", cfg.constants.k_e);
        if (pr.contains("charges")) {
            if (!pr.at("charges").is_array())
                fail("$.potential.pair.charges", "expected array");
            for (const auto& q : pr.at("charges"))
                spec.pair.charges.push_back(q.get<double>());
        }
    }
    cfg.has_potential = true;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const json& j) {
    if (!j.is_object())
        fail("$", "top level must be an object");
    require_keys(j, "$",
                 {"experiment", "seed_root", "output_dir", "grid", "constants", "params",
                  "potential"});
    ExperimentConfig cfg;
    if (!j.contains("experiment") || !j.at("experiment").is_string())
        fail("$.experiment", "required string");
    cfg.experiment = j.at("experiment").get<std::string>();
    static const std::set<std::string> known = {
        "bohr",        "wallstrom",     "cm-experiment", "scaling",  "cat-probe",
        "sn-ground",   "classical-nls", "quantum-equilibrium", "vlasov", "crossing",
        "stochastic-sn", "corrections"};
    if (!known.count(cfg.experiment))
        fail("$.experiment", "unknown experiment '" + cfg.experiment + "'");
    cfg.seed_root = static_cast<std::uint64_t>(need_integer(j, "$", "seed_root", 1));
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            fail("$.output_dir", "expected string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object())
            fail("$.grid", "expected object");
        require_keys(g, "$.grid", {"dims", "points", "extent"});
        cfg.grid_dims = static_cast<int>(need_integer(g, "$.grid", "dims", 1));
        cfg.grid_points = static_cast<int>(need_integer(g, "$.grid", "points", 256));
        cfg.grid_extent = need_number(g, "$.grid", "extent", 32.0);
    }
    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        if (!c.is_object())
            fail("$.constants", "expected object");
        require_keys(c, "$.constants", {"hbar", "mass", "G", "k_e", "c"});
        cfg.constants.hbar = need_number(c, "$.constants", "hbar", 1.0);
        cfg.constants.masses = {need_number(c, "$.constants", "mass", 1.0)};
        cfg.constants.G = need_number(c, "$.constants", "G", 1.0);
        cfg.constants.k_e = need_number(c, "$.constants", "k_e", 1.0);
        cfg.constants.c = need_number(c, "$.constants", "c", 1.0);
        cfg.constants.validate();
    }
    if (j.contains("potential")) {
        if (!j.at("potential").is_object())
            fail("$.potential", "expected object");
        parse_potential(j.at("potential"), cfg);
    }
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            fail("$.params", "expected object");
        cfg.params = j.at("params");
        // per-experiment numeric type check
        for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
            const auto& v = it.value();
            if (!v.is_number() && !v.is_boolean() && !v.is_string() && !v.is_array())
                fail("$.params." + it.key(), "unsupported value type " +
                                                 std::string(v.type_name()));
        }
    } else {
        cfg.params = json::object();
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
    }
    return parse(j);
}

json ExperimentConfig::canonical() const {
    json j;
    j["experiment"] = experiment;
    j["seed_root"] = seed_root;
    j["grid"] = {{"dims", grid_dims}, {"points", grid_points}, {"extent", grid_extent}};
    j["constants"] = {{"hbar", constants.hbar},
                      {"mass", constants.masses[0]},
                      {"G", constants.G},
                      {"k_e", constants.k_e},
                      {"c", constants.c}};
    j["params"] = params;
    if (has_potential) {
        json pot;
        pot["coupling_scale"] = potential.coupling_scale;
        pot["include_rest_energy"] = potential.include_rest_energy;
        json ext = json::array();
        for (const auto& t : potential.external_terms)
            ext.push_back({{"kind", static_cast<int>(t.kind)},
                           {"slope", t.slope},
                           {"omega", t.omega},
                           {"center", t.center},
                           {"particle", t.particle}});
        pot["external"] = ext;
        pot["pair"] = {{"kind", static_cast<int>(potential.pair.kind)},
                       {"eps", potential.pair.eps},
                       {"charges", potential.pair.charges}};
        j["potential"] = pot;
    }
    return j;
}

std::uint64_t ExperimentConfig::config_hash() const {
    const std::string s = canonical().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool RunRecord::all_passed() const {
    for (const auto& [name, ok] : checks)
        if (!ok)
            return false;
    return true;
}

json RunRecord::to_json() const {
    json j;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    j["config_hash"] = hash_hex;
    j["code_version"] = code_version;
    j["experiment"] = experiment;
    j["wall_time_s"] = wall_time_s;
    j["outputs"] = outputs;
    json chk = json::array();
    for (const auto& [name, ok] : checks)
        chk.push_back({{"name", name}, {"pass", ok}});
    j["checks"] = chk;
    j["summary"] = summary;
    return j;
}

void RunRecord::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("run record: cannot open " + path);
    out << to_json().dump(2) << "\n";
}

} // namespace zsm
