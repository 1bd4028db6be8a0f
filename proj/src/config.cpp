#include "sectorprimes/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

double parse_real(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw InvalidInput("config key '" + key + "': not a number: '" + v + "'");
    }
    if (used != v.size()) throw InvalidInput("config key '" + key + "': trailing characters in '" + v + "'");
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v)
{
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec == std::errc() && ptr == v.data() + v.size()) return out;
    // integral values written in floating notation, e.g. 1e6
    const double d = parse_real(key, v);
    if (d != std::floor(d) || std::fabs(d) > 9.0e18) {
        throw InvalidInput("config key '" + key + "': not an integer: '" + v + "'");
    }
    return static_cast<std::int64_t>(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    if (v.empty()) return out;
    std::vector<std::string> parts;
    boost::split(parts, v, boost::is_any_of(","));
    for (auto& p : parts) {
        boost::trim(p);
        out.push_back(parse_real(key, p));
    }
    return out;
}

void check_value(const KeySpec& k, const std::string& v)
{
    switch (k.kind) {
    case KeyKind::integer:
        parse_int(k.name, v);
        break;
    case KeyKind::real:
        parse_real(k.name, v);
        break;
    case KeyKind::optional_real:
        if (!v.empty()) parse_real(k.name, v);
        break;
    case KeyKind::optional_integer:
        if (!v.empty()) parse_int(k.name, v);
        break;
    case KeyKind::real_list:
        parse_list(k.name, v);
        break;
    case KeyKind::text:
        break;
    }
}

}  // namespace

const std::vector<KeySpec>& ExperimentConfig::keys()
{
    static const std::vector<KeySpec> table = {
        {"m", "-1", KeyKind::integer, "squarefree integer m, field Q(sqrt m)"},
        {"class", "identity", KeyKind::text, "narrow class index, or 'identity'"},
        {"phi0", "0.25", KeyKind::real, "sector centre on the circle"},
        {"delta", "0.1", KeyKind::real, "sector radius exponent"},
        {"delta_prime", "0.1", KeyKind::real, "interval length exponent, h = x^(1 - delta_prime)"},
        {"mode", "per_prime", KeyKind::text, "sector scale: per_prime or fixed_x"},
        {"x", "1000000", KeyKind::real, "interval start"},
        {"h", "", KeyKind::optional_real, "explicit interval length"},
        {"x_ladder", "1e6,1e7,1e8", KeyKind::real_list, "x values for fit and bv"},
        {"theta", "0.05", KeyKind::real, "modulus range exponent, Q = x^theta"},
        {"Q", "", KeyKind::optional_integer, "explicit modulus bound"},
        {"A", "1", KeyKind::real, "smoothness exponent, reported only"},
        {"c_hat", "", KeyKind::optional_real, "calibration constant; fitted when empty"},
        {"residue_a", "", KeyKind::optional_integer, "residue class a"},
        {"residue_q", "", KeyKind::optional_integer, "residue modulus q"},
        {"p_min", "2", KeyKind::integer, "identity-check and enumerate: first prime"},
        {"p_max", "10000", KeyKind::integer, "identity-check and enumerate: last prime"},
        {"sectors", "10", KeyKind::integer, "identity-check: random sectors"},
        {"seed", "1", KeyKind::integer, "seed for every random draw"},
        {"dim", "1", KeyKind::integer, "selberg: torus dimension"},
        {"kappa", "0.05", KeyKind::real, "selberg: box side"},
        {"M", "100", KeyKind::integer, "trigonometric degree"},
        {"samples", "100000", KeyKind::integer, "selberg: random sandwich points"},
        {"u", "", KeyKind::optional_real, "smoothing length of the interval window"},
        {"kappa0", "0.05", KeyKind::real, "tiling cube side in local units"},
        {"tol_mellin", "1e-10", KeyKind::real, "Mellin quadrature tolerance"},
        {"tol_identity", "1e-12", KeyKind::real, "selberg identity tolerance"},
        {"disc_bound", "1000000", KeyKind::integer, "largest |disc| accepted"},
        {"threads", "0", KeyKind::integer, "worker threads, 0 = available parallelism"},
        {"cache_dir", "", KeyKind::text, "sieve cache directory (else the environment variable)"},
        {"out_json", "", KeyKind::text, "JSON report path (stdout when empty)"},
        {"out_csv", "", KeyKind::text, "CSV listing path"},
    };
    return table;
}

const KeySpec* ExperimentConfig::find_key(const std::string& name)
{
    for (const auto& k : keys()) {
        if (name == k.name) return &k;
    }
    return nullptr;
}

ExperimentConfig::ExperimentConfig()
{
    for (const auto& k : keys()) values_[k.name] = k.default_value;
}

void ExperimentConfig::set(const std::string& key, const std::string& value)
{
    const KeySpec* k = find_key(key);
    if (k == nullptr) throw InvalidInput("unknown config key '" + key + "'");
    std::string v = boost::trim_copy(value);
    check_value(*k, v);
    values_[key] = v;
    explicit_[key] = true;
}

void ExperimentConfig::merge(const ExperimentConfig& other, bool only_explicit)
{
    for (const auto& [k, v] : other.values_) {
        if (!only_explicit || other.is_explicit(k)) set(k, v);
    }
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text)
{
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        boost::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        }
        cfg.set(boost::trim_copy(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

const std::string& ExperimentConfig::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) throw InvalidInput("unknown config key '" + key + "'");
    return it->second;
}

std::int64_t ExperimentConfig::get_int(const std::string& key) const { return parse_int(key, get(key)); }

double ExperimentConfig::get_double(const std::string& key) const { return parse_real(key, get(key)); }

std::optional<double> ExperimentConfig::get_optional_double(const std::string& key) const
{
    const auto& v = get(key);
    if (v.empty()) return std::nullopt;
    return parse_real(key, v);
}

std::optional<std::int64_t> ExperimentConfig::get_optional_int(const std::string& key) const
{
    const auto& v = get(key);
    if (v.empty()) return std::nullopt;
    return parse_int(key, v);
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const { return parse_list(key, get(key)); }

std::string ExperimentConfig::to_text() const
{
    std::ostringstream os;
    for (const auto& k : keys()) os << k.name << " = " << values_.at(k.name) << "\n";
    return os.str();
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : keys()) {
        const std::string& v = values_.at(k.name);
        switch (k.kind) {
        case KeyKind::integer:
            j[k.name] = parse_int(k.name, v);
            break;
        case KeyKind::real:
            j[k.name] = parse_real(k.name, v);
            break;
        case KeyKind::optional_real:
            j[k.name] = v.empty() ? nlohmann::json(nullptr) : nlohmann::json(parse_real(k.name, v));
            break;
        case KeyKind::optional_integer:
            j[k.name] = v.empty() ? nlohmann::json(nullptr) : nlohmann::json(parse_int(k.name, v));
            break;
        case KeyKind::real_list:
            j[k.name] = parse_list(k.name, v);
            break;
        case KeyKind::text:
            j[k.name] = v;
            break;
        }
    }
    j["config_text"] = to_text();
    return j;
}

}  // namespace sp
