#include "bragg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bragg {

const std::vector<KeyDef>& config_schema()
{
    static const std::vector<KeyDef> schema = {
        {"physics.eps", ValueType::real, "0.1", "coupling ε = Ω₀/ω_k for single-point experiments"},
        {"physics.eps_grid", ValueType::text, "0.02:1.0:50", "ε sweep as min:max:count"},
        {"physics.sigma_q", ValueType::real, "0.005", "momentum width σ_q in ħk"},
        {"physics.N", ValueType::integer, "20000", "atom number"},
        {"physics.chi", ValueType::text, "auto", "twisting strength, or auto for χ₀(N)"},
        {"physics.alpha", ValueType::text, "equator", "rotation after twisting, or equator for −α₀(χ)"},
        {"physics.lambda_T", ValueType::real, "0", "interrogation time ω_k T; 0 selects 10³/ε"},
        {"physics.shape", ValueType::text, "box", "pulse envelope: box | blackman"},
        {"physics.backend", ValueType::text, "perturbative", "analytic_vs_only | perturbative | numeric"},
        {"physics.backends", ValueType::text, "perturbative,numeric", "backends compared by sensitivity-sweep"},
        {"physics.n_min", ValueType::integer, "-2", "lowest momentum class kept by the numeric backend"},
        {"physics.n_max", ValueType::integer, "3", "highest momentum class kept by the numeric backend"},
        {"physics.phi", ValueType::real, "1.5707963267948966", "working point for the fringe uncertainty"},
        {"grid.q", ValueType::real, "0.02", "momentum q̃ for validate-pert"},
        {"grid.tau_max", ValueType::real, "6.283185307179586", "largest pulse area in τ scans"},
        {"grid.tau_count", ValueType::integer, "129", "points in τ scans"},
        {"grid.q_count", ValueType::integer, "81", "momentum points in rabi-map"},
        {"grid.v_max", ValueType::real, "6", "largest v in reflectivity profiles"},
        {"grid.v_count", ValueType::integer, "601", "points in reflectivity profiles"},
        {"grid.phi_count", ValueType::integer, "121", "points in the fringe scan over [0, 2π]"},
        {"grid.z_count", ValueType::integer, "12001", "points of the position grid over [−1/2, 5/2]"},
        {"numerics.nodes", ValueType::integer, "200", "Gauss–Legendre nodes"},
        {"numerics.rtol", ValueType::real, "1e-10", "Runge–Kutta relative tolerance"},
        {"numerics.atol", ValueType::real, "1e-12", "Runge–Kutta absolute tolerance"},
        {"numerics.fd_step", ValueType::real, "1e-5", "finite-difference step in φ"},
        {"numerics.n_q", ValueType::integer, "0", "momentum samples for position distributions; 0 = automatic"},
        {"output.dir", ValueType::text, ".", "output directory"},
        {"output.format", ValueType::text, "csv", "csv | json"},
        {"output.precision", ValueType::integer, "12", "significant digits in CSV"},
    };
    return schema;
}

std::vector<double> LinearGrid::values() const
{
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = count == 1 ? min : min + (max - min) * i / (count - 1);
    return v;
}

Backend parse_backend(const std::string& s)
{
    if (s == "analytic_vs_only") return Backend::analytic_vs_only;
    if (s == "perturbative") return Backend::perturbative;
    if (s == "numeric") return Backend::numeric;
    throw ConfigError("unknown backend '" + s + "'");
}

PulseShape parse_shape(const std::string& s)
{
    if (s == "box") return PulseShape::box;
    if (s == "blackman") return PulseShape::blackman;
    throw ConfigError("unknown pulse shape '" + s + "'");
}

namespace {

const KeyDef* find_key(const std::string& key)
{
    for (const auto& d : config_schema())
        if (key == d.key) return &d;
    return nullptr;
}

bool parse_real(const std::string& s, double& out)
{
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out)
{
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

LinearGrid parse_grid(const std::string& key, const std::string& s)
{
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(":"));
    LinearGrid g;
    if (parts.size() != 3 || !parse_real(parts[0], g.min) || !parse_real(parts[1], g.max) ||
        !parse_int(parts[2], g.count) || g.count < 1 || g.max < g.min)
        throw ConfigError("key '" + key + "': expected min:max:count with min <= max, got '" + s + "'");
    return g;
}

void validate(const KeyDef& d, const std::string& v)
{
    const std::string key = d.key;
    auto bad = [&](const std::string& what) { throw ConfigError("key '" + key + "': " + what + ", got '" + v + "'"); };
    double x = 0.0;
    int n = 0;
    switch (d.type) {
    case ValueType::real:
        if (!parse_real(v, x)) bad("expected a number");
        break;
    case ValueType::integer:
        if (!parse_int(v, n)) bad("expected an integer");
        break;
    case ValueType::text:
        break;
    }
    if (key == "physics.eps" && !(x > 0.0)) bad("must be > 0");
    if (key == "physics.sigma_q" && !(x > 0.0 && x <= 0.25)) bad("must lie in (0, 0.25]");
    if (key == "physics.N" && n < 3) bad("must be >= 3");
    if (key == "physics.lambda_T" && x < 0.0) bad("must be >= 0");
    if (key == "physics.eps_grid") {
        const LinearGrid g = parse_grid(key, v);
        if (!(g.min > 0.0)) bad("grid must be positive");
    }
    if (key == "physics.chi" && v != "auto" && !(parse_real(v, x) && x >= 0.0)) bad("expected auto or chi >= 0");
    if (key == "physics.alpha" && v != "equator" && !parse_real(v, x)) bad("expected equator or a number");
    if (key == "physics.shape") parse_shape(v);
    if (key == "physics.backend") parse_backend(v);
    if (key == "physics.backends") {
        std::vector<std::string> parts;
        boost::split(parts, v, boost::is_any_of(","));
        for (auto& p : parts) parse_backend(boost::trim_copy(p));
    }
    if ((key == "grid.tau_count" || key == "grid.q_count" || key == "grid.v_count" || key == "grid.phi_count" ||
         key == "grid.z_count") && n < 2)
        bad("must be >= 2");
    if (key == "grid.q" && !(x >= -0.5 && x <= 0.5)) bad("must lie in [-0.5, 0.5]");
    if ((key == "grid.tau_max" || key == "grid.v_max") && !(x > 0.0)) bad("must be > 0");
    if (key == "numerics.nodes" && n < 32) bad("must be >= 32");
    if (key == "numerics.rtol" && !(x > 0.0 && x <= 1e-8)) bad("must lie in (0, 1e-8]");
    if ((key == "numerics.atol" || key == "numerics.fd_step") && !(x > 0.0)) bad("must be > 0");
    if (key == "numerics.n_q" && n < 0) bad("must be >= 0");
    if (key == "output.format" && v != "csv" && v != "json") bad("expected csv or json");
    if (key == "output.precision" && (n < 1 || n > 17)) bad("must lie in [1, 17]");
}

} // namespace

RunConfig::RunConfig()
{
    for (const auto& d : config_schema()) values_.emplace_back(d.key, d.fallback);
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    const KeyDef* d = find_key(key);
    if (!d) throw ConfigError("unknown configuration key '" + key + "'");
    const std::string v = boost::trim_copy(value);
    validate(*d, v);
    for (auto& kv : values_)
        if (kv.first == key) kv.second = v;
}

RunConfig RunConfig::from_string(const std::string& ini)
{
    boost::property_tree::ptree tree;
    std::istringstream in(ini);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& section : tree) {
        if (section.second.empty() && !section.second.data().empty())
            throw ConfigError("unknown configuration key '" + section.first + "' (keys belong in a section)");
        for (const auto& kv : section.second) {
            if (!kv.second.empty()) throw ConfigError("unknown configuration key '" + section.first + "." + kv.first + "'");
            cfg.set(section.first + "." + kv.first, kv.second.data());
        }
    }
    cfg.backends();  // cross-key check
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read configuration file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str());
}

const std::string& RunConfig::raw(const std::string& key) const
{
    for (const auto& kv : values_)
        if (kv.first == key) return kv.second;
    throw ConfigError("unknown configuration key '" + key + "'");
}

double RunConfig::real(const std::string& key) const
{
    double x = 0.0;
    if (!parse_real(raw(key), x)) throw ConfigError("key '" + key + "' is not a number");
    return x;
}

int RunConfig::integer(const std::string& key) const
{
    int n = 0;
    if (!parse_int(raw(key), n)) throw ConfigError("key '" + key + "' is not an integer");
    return n;
}

const std::string& RunConfig::text(const std::string& key) const { return raw(key); }

LinearGrid RunConfig::grid(const std::string& key) const { return parse_grid(key, raw(key)); }

Backend RunConfig::backend() const { return parse_backend(text("physics.backend")); }

std::vector<Backend> RunConfig::backends() const
{
    std::vector<std::string> parts;
    boost::split(parts, text("physics.backends"), boost::is_any_of(","));
    std::vector<Backend> out;
    for (auto& p : parts) out.push_back(parse_backend(boost::trim_copy(p)));
    return out;
}

PulseShape RunConfig::shape() const { return parse_shape(text("physics.shape")); }

ClassRange RunConfig::classes() const
{
    ClassRange c{integer("physics.n_min"), integer("physics.n_max")};
    if (!c.contains(0) || !c.contains(1)) throw ConfigError("key 'physics.n_min'/'physics.n_max': range must contain 0 and 1");
    return c;
}

RkOptions RunConfig::rk() const { return {real("numerics.rtol"), real("numerics.atol")}; }

std::string RunConfig::echo_ini() const
{
    std::string out, section;
    for (const auto& [key, value] : values_) {
        const auto dot = key.find('.');
        const std::string s = key.substr(0, dot);
        if (s != section) {
            if (!section.empty()) out += '\n';
            out += "[" + s + "]\n";
            section = s;
        }
        out += key.substr(dot + 1) + " = " + value + "\n";
    }
    return out;
}

} // namespace bragg
