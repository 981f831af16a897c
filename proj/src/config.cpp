#include "ddpinn/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ddpinn {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template<class T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("invalid value for '" + key + "': '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

//! Remove and return kv[key] if present.
bool take(KeyValues& kv, const std::string& key, std::string& out)
{
    auto it = kv.find(key);
    if (it == kv.end())
        return false;
    out = it->second;
    kv.erase(it);
    return true;
}

}  // namespace

std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

KeyValues parse_key_values(const std::string& text)
{
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        out.push_back(parse_number<int>("list", trim(item)));
    if (out.empty())
        throw ConfigError("empty integer list");
    return out;
}

TrainConfig train_config_from(KeyValues& kv)
{
    TrainConfig c;
    std::string v;
    if (take(kv, "problem", v))
        c.problem = v;
    find_problem(c.problem);
    if (take(kv, "m_interior", v))
        c.counts.interior = parse_number<std::size_t>("m_interior", v);
    if (take(kv, "m_boundary", v))
        c.counts.boundary = parse_number<std::size_t>("m_boundary", v);
    if (take(kv, "m_interface", v))
        c.counts.interface = parse_number<std::size_t>("m_interface", v);
    if (take(kv, "m_initial", v))
        c.counts.initial = parse_number<std::size_t>("m_initial", v);
    if (take(kv, "strategy", v) && v != "default")
        c.strategy = parse_strategy(v);
    if (take(kv, "seed", v)) {
        auto s = parse_number<std::uint64_t>("seed", v);
        c.sample_seed = c.init_seed = c.validation_seed = s;
    }
    if (take(kv, "sample_seed", v))
        c.sample_seed = parse_number<std::uint64_t>("sample_seed", v);
    if (take(kv, "init_seed", v))
        c.init_seed = parse_number<std::uint64_t>("init_seed", v);
    if (take(kv, "validation_seed", v))
        c.validation_seed = parse_number<std::uint64_t>("validation_seed", v);
    if (take(kv, "hidden", v))
        c.hidden = parse_int_list(v);
    if (take(kv, "mode", v))
        c.mode = parse_mode(v);
    if (take(kv, "omega", v)) {
        if (v == "frozen")
            c.omega_mode = OmegaMode::Frozen;
        else if (v == "differentiated")
            c.omega_mode = OmegaMode::Differentiated;
        else
            throw ConfigError("invalid value for 'omega': '" + v + "' (frozen|differentiated)");
    }
    if (take(kv, "gauss_gamma", v))
        c.gauss_gamma = parse_number<double>("gauss_gamma", v);
    if (take(kv, "weight_rate", v))
        c.weight_rate = parse_number<double>("weight_rate", v);
    if (take(kv, "gauss_bias", v))
        c.gauss_bias = parse_bool("gauss_bias", v);
    if (take(kv, "normalize_inputs", v))
        c.normalize_inputs = parse_bool("normalize_inputs", v);
    const std::pair<const char*, double*> weights[] = {
        {"w_pde1", &c.weights.pde1}, {"w_pde2", &c.weights.pde2}, {"w_bc1", &c.weights.bc1},
        {"w_bc2", &c.weights.bc2},   {"w_init", &c.weights.init}, {"gamma1", &c.weights.gamma1},
        {"gamma2", &c.weights.gamma2},
    };
    for (auto [key, dst] : weights)
        if (take(kv, key, v))
            *dst = parse_number<double>(key, v);
    if (take(kv, "steps", v))
        c.steps = parse_number<long>("steps", v);
    if (take(kv, "lr", v))
        c.adam.lr = parse_number<double>("lr", v);
    if (take(kv, "beta1", v))
        c.adam.beta1 = parse_number<double>("beta1", v);
    if (take(kv, "beta2", v))
        c.adam.beta2 = parse_number<double>("beta2", v);
    if (take(kv, "eps", v))
        c.adam.eps = parse_number<double>("eps", v);
    if (take(kv, "log_every", v))
        c.log_every = parse_number<long>("log_every", v);
    if (take(kv, "output_dir", v))
        c.output_dir = v;
    c.validate();
    return c;
}

void reject_unknown(const KeyValues& kv)
{
    if (kv.empty())
        return;
    std::string msg = "unknown config key(s):";
    for (const auto& [k, v] : kv)
        msg += " " + k;
    throw ConfigError(msg);
}

TrainConfig load_train_config(const std::string& path)
{
    KeyValues kv = parse_key_values(read_text_file(path));
    TrainConfig c = train_config_from(kv);
    reject_unknown(kv);
    return c;
}

std::string config_to_text(const TrainConfig& c)
{
    std::ostringstream os;
    os << "problem=" << c.problem << '\n'
       << "m_interior=" << c.counts.interior << '\n'
       << "m_boundary=" << c.counts.boundary << '\n'
       << "m_interface=" << c.counts.interface << '\n'
       << "m_initial=" << c.counts.initial << '\n'
       << "strategy=" << (c.strategy ? strategy_name(*c.strategy) : "default") << '\n'
       << "sample_seed=" << c.sample_seed << '\n'
       << "init_seed=" << c.init_seed << '\n'
       << "validation_seed=" << c.validation_seed << '\n'
       << "hidden=";
    for (std::size_t i = 0; i < c.hidden.size(); ++i)
        os << (i ? "," : "") << c.hidden[i];
    os << '\n'
       << "mode=" << mode_name(c.mode) << '\n'
       << "omega=" << (c.omega_mode == OmegaMode::Frozen ? "frozen" : "differentiated") << '\n'
       << "gauss_gamma=" << format_double(c.gauss_gamma) << '\n'
       << "weight_rate=" << format_double(c.weight_rate) << '\n'
       << "gauss_bias=" << (c.gauss_bias ? "true" : "false") << '\n'
       << "normalize_inputs=" << (c.normalize_inputs ? "true" : "false") << '\n'
       << "w_pde1=" << format_double(c.weights.pde1) << '\n'
       << "w_pde2=" << format_double(c.weights.pde2) << '\n'
       << "w_bc1=" << format_double(c.weights.bc1) << '\n'
       << "w_bc2=" << format_double(c.weights.bc2) << '\n'
       << "w_init=" << format_double(c.weights.init) << '\n'
       << "gamma1=" << format_double(c.weights.gamma1) << '\n'
       << "gamma2=" << format_double(c.weights.gamma2) << '\n'
       << "steps=" << c.steps << '\n'
       << "lr=" << format_double(c.adam.lr) << '\n'
       << "beta1=" << format_double(c.adam.beta1) << '\n'
       << "beta2=" << format_double(c.adam.beta2) << '\n'
       << "eps=" << format_double(c.adam.eps) << '\n'
       << "log_every=" << c.log_every << '\n'
       << "output_dir=" << c.output_dir << '\n';
    return os.str();
}

}  // namespace ddpinn
