#include "cds/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cds {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(origin, line, "invalid number for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(origin, line, "invalid integer for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    fail(origin, line, "invalid boolean for '" + key + "': " + v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void validate(const ExperimentConfig& c) {
    if (!(c.sigma > 0.0)) throw ConfigError("config: sigma must be > 0");
    if (!(c.eps_err > 0.0 && c.eps_err < 1.0))
        throw ConfigError("config: eps_err must lie in (0, 1)");
    if (!(c.eps1 > 0.0 && c.eps1 < 1.0)) throw ConfigError("config: eps1 must lie in (0, 1)");
    if (c.n_samples < 1) throw ConfigError("config: n_samples must be >= 1");
    if (c.oracle != "exact" && c.oracle != "noisy")
        throw ConfigError("config: oracle must be 'exact' or 'noisy'");
    if (c.noise_features < 1) throw ConfigError("config: noise_features must be >= 1");
    if (c.corrector_steps < 1) throw ConfigError("config: corrector steps must be >= 1");
    if (!(c.corrector_eps > 0.0 && c.corrector_eps < 1.0))
        throw ConfigError("config: corrector eps must lie in (0, 1)");
    if (c.atoms_file.empty() && c.preset != "single_atom_d2" && c.preset != "two_atoms_d2" &&
        c.preset != "acceptance_gmm")
        throw ConfigError("config: unknown preset '" + c.preset + "'");
    for (double e : c.eps_err_list)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("config: eps_err_list entries in (0, 1)");
    for (int s : c.euler_steps)
        if (s < 1) throw ConfigError("config: euler_steps entries must be >= 1");
    if (c.threads < 0) throw ConfigError("config: threads must be >= 0");
    if (c.n_dirs < 1 || c.n_reference < 2 || c.n_trajectories < 1)
        throw ConfigError("config: n_dirs/n_reference/n_trajectories too small");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "target" && section != "plan" && section != "corrector" &&
                section != "run")
                fail(origin, lineno, "unknown section '" + section + "'");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) fail(origin, lineno, "key outside any section");

        if (section == "target") {
            if (key == "preset") c.preset = val;
            else if (key == "atoms_file") c.atoms_file = val;
            else if (key == "atoms_dim") c.atoms_dim = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "sigma") c.sigma = parse_double(origin, lineno, key, val);
            else fail(origin, lineno, "unknown key '" + key + "' in [target]");
        } else if (section == "plan") {
            if (key == "eps_err") c.eps_err = parse_double(origin, lineno, key, val);
            else if (key == "eps1") c.eps1 = parse_double(origin, lineno, key, val);
            else if (key == "T") c.overrides.T = parse_double(origin, lineno, key, val);
            else if (key == "h") c.overrides.h = parse_double(origin, lineno, key, val);
            else if (key == "k") c.overrides.k = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "D") c.overrides.D = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "m") c.overrides.m = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "gamma_const") c.overrides.gamma_const = parse_double(origin, lineno, key, val);
            else if (key == "L_tilde") c.overrides.L_tilde = parse_double(origin, lineno, key, val);
            else if (key == "c_T") c.overrides.c_T = parse_double(origin, lineno, key, val);
            else fail(origin, lineno, "unknown key '" + key + "' in [plan]");
        } else if (section == "corrector") {
            if (key == "enabled") c.corrector = parse_bool(origin, lineno, key, val);
            else if (key == "eps") c.corrector_eps = parse_double(origin, lineno, key, val);
            else if (key == "friction_const") c.friction_const = parse_double(origin, lineno, key, val);
            else if (key == "duration_const") c.duration_const = parse_double(origin, lineno, key, val);
            else if (key == "L") c.corrector_L = parse_double(origin, lineno, key, val);
            else if (key == "step") c.corrector_step = parse_double(origin, lineno, key, val);
            else if (key == "steps") c.corrector_steps = static_cast<int>(parse_int(origin, lineno, key, val));
            else fail(origin, lineno, "unknown key '" + key + "' in [corrector]");
        } else {  // run
            if (key == "n_samples") c.n_samples = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(origin, lineno, key, val));
            else if (key == "out_dir") c.out_dir = val;
            else if (key == "oracle") c.oracle = val;
            else if (key == "noise_features") c.noise_features = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "euler_steps") {
                c.euler_steps.clear();
                for (const auto& s : split_list(val))
                    c.euler_steps.push_back(static_cast<int>(parse_int(origin, lineno, key, s)));
            } else if (key == "eps_err_list") {
                c.eps_err_list.clear();
                for (const auto& s : split_list(val))
                    c.eps_err_list.push_back(parse_double(origin, lineno, key, s));
            } else if (key == "n_reference") c.n_reference = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "n_trajectories") c.n_trajectories = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "n_dirs") c.n_dirs = static_cast<int>(parse_int(origin, lineno, key, val));
            else if (key == "threads") c.threads = static_cast<int>(parse_int(origin, lineno, key, val));
            else fail(origin, lineno, "unknown key '" + key + "' in [run]");
        }
    }
    validate(c);
    return c;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

namespace {
std::string num(double x) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
}  // namespace

std::string render_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[target]\n";
    if (!c.atoms_file.empty()) out << "atoms_file = " << c.atoms_file << "\n";
    else out << "preset = " << c.preset << "\n";
    if (c.atoms_dim) out << "atoms_dim = " << *c.atoms_dim << "\n";
    out << "sigma = " << num(c.sigma) << "\n\n";

    out << "[plan]\n";
    out << "eps_err = " << num(c.eps_err) << "\n";
    out << "eps1 = " << num(c.eps1) << "\n";
    if (c.overrides.T) out << "T = " << num(*c.overrides.T) << "\n";
    if (c.overrides.h) out << "h = " << num(*c.overrides.h) << "\n";
    if (c.overrides.k) out << "k = " << *c.overrides.k << "\n";
    if (c.overrides.D) out << "D = " << *c.overrides.D << "\n";
    if (c.overrides.m) out << "m = " << *c.overrides.m << "\n";
    if (c.overrides.gamma_const) out << "gamma_const = " << num(*c.overrides.gamma_const) << "\n";
    if (c.overrides.L_tilde) out << "L_tilde = " << num(*c.overrides.L_tilde) << "\n";
    if (c.overrides.c_T) out << "c_T = " << num(*c.overrides.c_T) << "\n";
    out << "\n[corrector]\n";
    out << "enabled = " << (c.corrector ? "on" : "off") << "\n";
    out << "eps = " << num(c.corrector_eps) << "\n";
    out << "friction_const = " << num(c.friction_const) << "\n";
    out << "duration_const = " << num(c.duration_const) << "\n";
    if (c.corrector_L) out << "L = " << num(*c.corrector_L) << "\n";
    if (c.corrector_step) out << "step = " << num(*c.corrector_step) << "\n";
    out << "steps = " << c.corrector_steps << "\n";

    out << "\n[run]\n";
    out << "n_samples = " << c.n_samples << "\n";
    out << "seed = " << c.seed << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "oracle = " << c.oracle << "\n";
    out << "noise_features = " << c.noise_features << "\n";
    out << "euler_steps = ";
    for (size_t i = 0; i < c.euler_steps.size(); ++i)
        out << (i ? ", " : "") << c.euler_steps[i];
    out << "\neps_err_list = ";
    for (size_t i = 0; i < c.eps_err_list.size(); ++i)
        out << (i ? ", " : "") << num(c.eps_err_list[i]);
    out << "\nn_reference = " << c.n_reference << "\n";
    out << "n_trajectories = " << c.n_trajectories << "\n";
    out << "n_dirs = " << c.n_dirs << "\n";
    out << "threads = " << c.threads << "\n";
    return out.str();
}

AtomicPrior load_atoms(const std::string& path, std::optional<int> expect_dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open atoms file: " + path);
    std::vector<std::vector<double>> rows;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<double> row;
        double x;
        while (ls >> x) row.push_back(x);
        if (!ls.eof()) fail(path, lineno, "invalid numeric field");
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            fail(path, lineno, "inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(path + ": no atoms");
    const int cols = static_cast<int>(rows.front().size());
    bool has_weights = false;
    if (expect_dim) {
        if (cols == *expect_dim + 1) has_weights = true;
        else if (cols != *expect_dim)
            throw ConfigError(path + ": column count matches neither d nor d+1");
    }
    const int d = has_weights ? cols - 1 : cols;
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd atoms(n, d);
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) atoms(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (has_weights) weights[i] = rows[static_cast<size_t>(i)][static_cast<size_t>(d)];
    }
    return AtomicPrior::create(std::move(atoms), std::move(weights));
}

AtomicPrior make_prior(const ExperimentConfig& config) {
    if (!config.atoms_file.empty()) return load_atoms(config.atoms_file, config.atoms_dim);
    if (config.preset == "single_atom_d2") {
        Eigen::MatrixXd a(1, 2);
        a << 1.0, 1.0;
        return AtomicPrior::uniform(a);
    }
    if (config.preset == "two_atoms_d2") {
        Eigen::MatrixXd a(2, 2);
        a << 1.0, 0.0, -1.0, 0.0;
        return AtomicPrior::uniform(a);
    }
    if (config.preset == "acceptance_gmm") {
        Eigen::MatrixXd a(3, 2);
        a << 2.0, 0.0, -2.0, 0.0, 0.0, 2.0;
        return AtomicPrior::uniform(a);
    }
    throw ConfigError("config: unknown preset '" + config.preset + "'");
}

}  // namespace cds
