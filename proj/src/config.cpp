#include "bdirs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bdirs/errors.hpp"

namespace bdirs {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    return out;
}

// section.key -> value, comments (# or ;) stripped.
std::map<std::string, std::string> parse_kv(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        kv[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

double to_double(const std::string &key, const std::string &value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception &) {
        throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
    }
}

long long to_int(const std::string &key, const std::string &value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw ConfigError("config key '" + key + "': cannot parse integer from '" + value + "'");
    }
}

struct Reader {
    const std::map<std::string, std::string> &kv;
    std::set<std::string> seen;

    bool has(const std::string &key) const { return kv.count(key) > 0; }

    void get(const std::string &key, double &out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out = to_double(key, it->second);
            seen.insert(key);
        }
    }
    void get(const std::string &key, int &out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out = static_cast<int>(to_int(key, it->second));
            seen.insert(key);
        }
    }
    void get(const std::string &key, std::string &out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out = it->second;
            seen.insert(key);
        }
    }
    void get_doubles(const std::string &key, std::vector<double> &out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out.clear();
            for (const auto &tok : split(it->second, ','))
                if (!tok.empty())
                    out.push_back(to_double(key, tok));
            seen.insert(key);
        }
    }
    void get_ints(const std::string &key, std::vector<int> &out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out.clear();
            for (const auto &tok : split(it->second, ','))
                if (!tok.empty())
                    out.push_back(static_cast<int>(to_int(key, tok)));
            seen.insert(key);
        }
    }
};

} // namespace

std::vector<std::uint64_t> parse_seed_spec(const std::string &spec) {
    const std::string s = trim(spec);
    std::vector<std::uint64_t> seeds;
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const long long lo = to_int("seeds", trim(s.substr(0, dots)));
        const long long hi = to_int("seeds", trim(s.substr(dots + 2)));
        if (lo < 0 || hi < lo)
            throw ConfigError("seeds range '" + s + "' is invalid");
        if (hi - lo >= 1000000)
            throw ConfigError("seeds range '" + s + "' is unreasonably large");
        for (long long v = lo; v <= hi; ++v)
            seeds.push_back(static_cast<std::uint64_t>(v));
        return seeds;
    }
    for (const auto &tok : split(s, ',')) {
        if (tok.empty())
            continue;
        const long long v = to_int("seeds", tok);
        if (v < 0)
            throw ConfigError("seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(v));
    }
    return seeds;
}

ExperimentConfig parse_config_text(const std::string &text) {
    const auto kv = parse_kv(text);
    Reader r{kv, {}};
    ExperimentConfig cfg;

    r.get("scenario.carrier_freq_hz", cfg.scenario.carrier_freq_hz);
    r.get("scenario.n_bs", cfg.scenario.n_bs);
    r.get("scenario.m_irs", cfg.scenario.m_irs);
    r.get("scenario.mu_abs_per_m", cfg.scenario.mu_abs_per_m);
    r.get("scenario.antenna_spacing_m", cfg.scenario.antenna_spacing_m);
    r.get("scenario.area_m", cfg.scenario.area_m);
    r.get("scenario.bs_x", cfg.scenario.bs_x);
    r.get("scenario.bs_y", cfg.scenario.bs_y);
    r.get("scenario.irs_x", cfg.scenario.irs_x);
    r.get("scenario.irs_y", cfg.scenario.irs_y);
    r.get("scenario.d1_m", cfg.scenario.fixed_d1_m);
    r.get("scenario.d2_m", cfg.scenario.fixed_d2_m);
    r.get("scenario.c_mps", cfg.scenario.c_mps);
    r.get("scenario.bandwidth_hz", cfg.bandwidth_hz);
    r.get("scenario.noise_dbm_per_hz", cfg.noise_dbm_per_hz);

    std::string seed_spec;
    r.get("run.seeds", seed_spec);
    if (!seed_spec.empty())
        cfg.seeds = parse_seed_spec(seed_spec);
    r.get("run.l_bits", cfg.l_bits);
    r.get("run.xi_amp", cfg.xi_amp);
    r.get("run.p_dbm", cfg.p_dbm);
    r.get("run.variant", cfg.variant);
    r.get("run.threads", cfg.threads);
    r.get("run.out_dir", cfg.out_dir);

    r.get_ints("sweep.n_values", cfg.sweep_n);
    r.get_doubles("sweep.p_dbm_values", cfg.sweep_p_dbm);

    r.get("precoder.delta", cfg.precoder.delta);
    r.get("precoder.eps", cfg.precoder.eps);
    r.get("precoder.max_iter", cfg.precoder.max_iter);
    r.get_doubles("precoder.step_candidates", cfg.precoder.step_candidates);

    r.get("phase_designer.max_sweeps", cfg.phase.max_sweeps);
    r.get_doubles("phase_designer.correlation_steps", cfg.phase.correlation_step_candidates);
    r.get("phase_designer.correlation_delta", cfg.phase.correlation_delta);
    r.get("phase_designer.bypass_tol", cfg.phase.bypass_tol);

    r.get("optimizer.eps_outer", cfg.eps_outer);
    r.get("optimizer.max_outer", cfg.max_outer);

    for (const auto &[key, value] : kv) {
        (void)value;
        if (!r.seen.count(key))
            throw ConfigError("config key '" + key + "' is not recognized");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("error reading config file '" + path + "'");
    return parse_config_text(ss.str());
}

void ExperimentConfig::validate(bool for_sweep) const {
    if (seeds.empty())
        throw ConfigError("seed list must be non-empty");
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    if (unique.size() != seeds.size())
        throw ConfigError("seed list must be unique");
    if (l_bits < 1 || l_bits > 16)
        throw ConfigError("l_bits must be in [1, 16]");
    if (!(xi_amp > 0.0))
        throw ConfigError("xi_amp must be > 0");
    if (!(scenario.carrier_freq_hz > 0.0))
        throw ConfigError("carrier_freq_hz must be > 0");
    if (scenario.n_bs < 1 || scenario.m_irs < 1)
        throw ConfigError("n_bs and m_irs must be >= 1");
    if (!(scenario.area_m > 0.0))
        throw ConfigError("area_m must be > 0");
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("bandwidth_hz must be > 0");
    if (!(scenario.mu_abs_per_m >= 0.0))
        throw ConfigError("mu_abs_per_m must be >= 0");
    if (!(precoder.delta > 0.0) || !(precoder.eps > 0.0) || precoder.max_iter < 1)
        throw ConfigError("precoder solver parameters out of range");
    if (precoder.step_candidates.empty())
        throw ConfigError("precoder.step_candidates must be non-empty");
    for (double c : precoder.step_candidates)
        if (!(c > 0.0))
            throw ConfigError("precoder.step_candidates must be positive");
    if (phase.max_sweeps < 0)
        throw ConfigError("phase_designer.max_sweeps must be >= 0");
    if (!(phase.bypass_tol >= 0.0))
        throw ConfigError("phase_designer.bypass_tol must be >= 0");
    if (!(eps_outer > 0.0) || max_outer < 1)
        throw ConfigError("optimizer parameters out of range");
    if (variant != "bd" && variant != "diag" && variant != "both")
        throw ConfigError("variant must be bd, diag, or both");
    if (threads < 0)
        throw ConfigError("threads must be >= 0");
    if (for_sweep) {
        if (sweep_n.empty())
            throw ConfigError("sweep.n_values must be non-empty");
        if (sweep_p_dbm.empty())
            throw ConfigError("sweep.p_dbm_values must be non-empty");
        for (int n : sweep_n)
            if (n < 1)
                throw ConfigError("sweep.n_values must be >= 1");
    }
}

double ExperimentConfig::noise_w() const {
    return noise_power(noise_dbm_per_hz, bandwidth_hz);
}

JointConfig ExperimentConfig::joint(int n_bs, double p_dbm_override) const {
    (void)n_bs; // channel dimension is carried by the sampled params
    JointConfig jc;
    jc.p_tot_w = dbm_to_watts(p_dbm_override);
    jc.noise_w = noise_w();
    jc.quant = QuantSpec(l_bits, xi_amp);
    jc.precoder = precoder;
    jc.phase = phase;
    jc.eps_outer = eps_outer;
    jc.max_outer = max_outer;
    return jc;
}

namespace {

void feed(std::string &buf, const std::string &key, const std::string &value) {
    buf += key;
    buf += '=';
    buf += value;
    buf += '\n';
}

std::string num(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    return tmp;
}

} // namespace

std::string config_hash_hex(const ExperimentConfig &cfg) {
    std::string buf;
    feed(buf, "carrier_freq_hz", num(cfg.scenario.carrier_freq_hz));
    feed(buf, "n_bs", std::to_string(cfg.scenario.n_bs));
    feed(buf, "m_irs", std::to_string(cfg.scenario.m_irs));
    feed(buf, "mu_abs_per_m", num(cfg.scenario.mu_abs_per_m));
    feed(buf, "antenna_spacing_m", num(cfg.scenario.antenna_spacing_m));
    feed(buf, "area_m", num(cfg.scenario.area_m));
    feed(buf, "bs_x", num(cfg.scenario.bs_x));
    feed(buf, "bs_y", num(cfg.scenario.bs_y));
    feed(buf, "irs_x", num(cfg.scenario.irs_x));
    feed(buf, "irs_y", num(cfg.scenario.irs_y));
    feed(buf, "d1_m", num(cfg.scenario.fixed_d1_m));
    feed(buf, "d2_m", num(cfg.scenario.fixed_d2_m));
    feed(buf, "c_mps", num(cfg.scenario.c_mps));
    feed(buf, "bandwidth_hz", num(cfg.bandwidth_hz));
    feed(buf, "noise_dbm_per_hz", num(cfg.noise_dbm_per_hz));
    {
        std::string s;
        for (auto v : cfg.seeds)
            s += std::to_string(v) + ",";
        feed(buf, "seeds", s);
    }
    feed(buf, "l_bits", std::to_string(cfg.l_bits));
    feed(buf, "xi_amp", num(cfg.xi_amp));
    feed(buf, "p_dbm", num(cfg.p_dbm));
    feed(buf, "variant", cfg.variant);
    {
        std::string s;
        for (int v : cfg.sweep_n)
            s += std::to_string(v) + ",";
        feed(buf, "sweep_n", s);
        s.clear();
        for (double v : cfg.sweep_p_dbm)
            s += num(v) + ",";
        feed(buf, "sweep_p_dbm", s);
    }
    feed(buf, "precoder.delta", num(cfg.precoder.delta));
    feed(buf, "precoder.eps", num(cfg.precoder.eps));
    feed(buf, "precoder.max_iter", std::to_string(cfg.precoder.max_iter));
    {
        std::string s;
        for (double v : cfg.precoder.step_candidates)
            s += num(v) + ",";
        feed(buf, "precoder.step_candidates", s);
        s.clear();
        for (double v : cfg.phase.correlation_step_candidates)
            s += num(v) + ",";
        feed(buf, "phase.correlation_steps", s);
    }
    feed(buf, "phase.max_sweeps", std::to_string(cfg.phase.max_sweeps));
    feed(buf, "phase.correlation_delta", num(cfg.phase.correlation_delta));
    feed(buf, "phase.bypass_tol", num(cfg.phase.bypass_tol));
    feed(buf, "eps_outer", num(cfg.eps_outer));
    feed(buf, "max_outer", std::to_string(cfg.max_outer));

    // FNV-1a 64-bit
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : buf) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace bdirs
