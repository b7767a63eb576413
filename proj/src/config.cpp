#include "srb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

#include "srb/error.hpp"

namespace srb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
    T v{};
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw ConfigError("bad value for '" + key + "': '" + s + "'");
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& s) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) out.push_back(parse_number<T>(key, item));
    return out;
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("bad value for '" + key + "': '" + s + "'");
}

template <class T>
std::string fmt(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, p);
    } else if constexpr (std::is_same_v<T, bool>) {
        return v ? "true" : "false";
    } else if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else {
        return std::to_string(v);
    }
}

template <class T>
std::string fmt(const std::vector<T>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Field {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field field(T ExperimentConfig::*m) {
    Field f;
    f.get = [m](const ExperimentConfig& c) { return fmt(c.*m); };
    f.set = [m](ExperimentConfig& c, const std::string& v) {
        if constexpr (std::is_same_v<T, std::string>) c.*m = v;
        else if constexpr (std::is_same_v<T, bool>) c.*m = parse_bool("flag", v);
        else if constexpr (std::is_same_v<T, std::vector<double>>) c.*m = parse_list<double>("list", v);
        else if constexpr (std::is_same_v<T, std::vector<int>>) c.*m = parse_list<int>("list", v);
        else c.*m = parse_number<T>("value", v);
    };
    return f;
}

// ordered for rendering
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> f = {
        {"model", field(&ExperimentConfig::model)},
        {"matrix", field(&ExperimentConfig::matrix)},
        {"delta", field(&ExperimentConfig::delta)},
        {"kick", field(&ExperimentConfig::kick)},
        {"r", field(&ExperimentConfig::r)},
        {"eta", field(&ExperimentConfig::eta)},
        {"gamma", field(&ExperimentConfig::gamma)},
        {"alpha_grid", field(&ExperimentConfig::alpha_grid)},
        {"L_grid", field(&ExperimentConfig::L_grid)},
        {"N", field(&ExperimentConfig::N)},
        {"eps_hat", field(&ExperimentConfig::eps_hat)},
        {"schedule_k", field(&ExperimentConfig::schedule_k)},
        {"n_min", field(&ExperimentConfig::n_min)},
        {"n_max", field(&ExperimentConfig::n_max)},
        {"curve", field(&ExperimentConfig::curve)},
        {"curve_length", field(&ExperimentConfig::curve_length)},
        {"transverse_samples", field(&ExperimentConfig::transverse_samples)},
        {"transverse_horizon", field(&ExperimentConfig::transverse_horizon)},
        {"param_grid", field(&ExperimentConfig::param_grid)},
        {"pilot_horizon", field(&ExperimentConfig::pilot_horizon)},
        {"pilot_quantile", field(&ExperimentConfig::pilot_quantile)},
        {"dilation_n", field(&ExperimentConfig::dilation_n)},
        {"dilation_grid", field(&ExperimentConfig::dilation_grid)},
        {"phi_grid", field(&ExperimentConfig::phi_grid)},
        {"decompose_n", field(&ExperimentConfig::decompose_n)},
        {"stabilization_tol", field(&ExperimentConfig::stabilization_tol)},
        {"cluster_delta", field(&ExperimentConfig::cluster_delta)},
        {"item_d_samples", field(&ExperimentConfig::item_d_samples)},
        {"item_d_horizon", field(&ExperimentConfig::item_d_horizon)},
        {"periodic_max_period", field(&ExperimentConfig::periodic_max_period)},
        {"periodic_grid", field(&ExperimentConfig::periodic_grid)},
        {"cell_grid", field(&ExperimentConfig::cell_grid)},
        {"color_length", field(&ExperimentConfig::color_length)},
        {"classify_L", field(&ExperimentConfig::classify_L)},
        {"filler_constant", field(&ExperimentConfig::filler_constant)},
        {"piece_grid", field(&ExperimentConfig::piece_grid)},
        {"depth_cap", field(&ExperimentConfig::depth_cap)},
        {"chain_tol", field(&ExperimentConfig::chain_tol)},
        {"seed", field(&ExperimentConfig::seed)},
        {"out", field(&ExperimentConfig::out)},
        {"verify", field(&ExperimentConfig::verify)},
    };
    return f;
}

}  // namespace

int ExperimentConfig::resolved_color_length() const {
    return color_length > 0 ? color_length : int(std::floor(1.0 / gamma)) + 1;
}

int ExperimentConfig::resolved_classify_L() const {
    return classify_L > 0 ? classify_L : int(std::floor(2.0 * resolved_color_length() / gamma)) + 1;
}

void ExperimentConfig::validate() const {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    need(r >= 2 && r <= 12, "r must be in [2, 12]");
    need(gamma > 0.0 && gamma < eta && eta < 1.0, "need 0 < gamma < eta < 1");
    need(!alpha_grid.empty() && std::is_sorted(alpha_grid.begin(), alpha_grid.end()) && alpha_grid.front() > 0.0,
         "alpha_grid must be nonempty, positive and sorted");
    need(!L_grid.empty() && std::is_sorted(L_grid.begin(), L_grid.end()) && L_grid.front() >= 1,
         "L_grid must be nonempty, >= 1 and sorted");
    need(!schedule_k.empty() && std::is_sorted(schedule_k.begin(), schedule_k.end()) && schedule_k.front() >= 1,
         "schedule_k must be nonempty, >= 1 and sorted");
    need(N >= 1, "N must be >= 1");
    need(eps_hat > 0.0, "eps_hat must be positive");
    need(n_min >= 1 && n_max >= n_min, "need 1 <= n_min <= n_max");
    need(param_grid >= 2, "param_grid must be >= 2");
    need(pilot_quantile > 0.0 && pilot_quantile <= 1.0, "pilot_quantile must be in (0, 1]");
    need(matrix.size() == 4, "matrix needs 4 entries");
    need(dilation_grid.size() == 3 && cell_grid.size() == 3, "dilation_grid and cell_grid need 3 entries");
    need(periodic_max_period >= 1 && periodic_max_period <= 12, "periodic_max_period must be in [1, 12]");
    need(piece_grid >= 2 && depth_cap >= 1, "piece_grid >= 2 and depth_cap >= 1 required");
    need(decompose_n >= 1 && cluster_delta > 0.0, "decompose_n >= 1 and cluster_delta > 0 required");
    need(10.0 * gamma < 0.5, "need 10 gamma < 1/2 for the type count");
    if (curve != "auto") need(split_list(curve).size() == 4, "curve must be 'auto' or 'u, v, theta, length'");
}

SurfaceMap ExperimentConfig::make_map() const {
    const Mat2 A{matrix[0], matrix[1], matrix[2], matrix[3]};
    try {
        if (model == "identity") return SurfaceMap::identity();
        if (model == "cat") return SurfaceMap::cat(A);
        if (model == "perturbed_cat") return SurfaceMap::perturbed_cat(delta, A);
        if (model == "standard") return SurfaceMap::standard(kick);
        if (model == "source_sink") return SurfaceMap::source_sink(delta);
    } catch (const ModelError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("unknown model '" + model + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, const Field*> index;
    for (const auto& [k, f] : fields()) index[k] = &f;
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = index.find(key);
        if (it == index.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            it->second->set(c, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& c) {
    std::string s;
    for (const auto& [k, f] : fields()) s += k + " = " + f.get(c) + "\n";
    return s;
}

}  // namespace srb
