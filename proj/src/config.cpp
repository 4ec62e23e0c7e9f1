#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "glelab/errors.hpp"
#include "glelab/experiment.hpp"

namespace glelab {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError(field, "expected a number, got '" + text + "'");
    }
    return v;
}

long long to_int(const std::string& field, const std::string& text) {
    const double v = to_double(field, text);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
        throw ConfigError(field, "expected an integer, got '" + text + "'");
    }
    return static_cast<long long>(v);
}

// Drops a trailing "  # comment" (the '#' must follow whitespace).
std::string strip_comment(const std::string& s) {
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '#' && (s[i - 1] == ' ' || s[i - 1] == '\t')) return s.substr(0, i);
    }
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::string normalised = text;
    for (char& c : normalised) {
        if (c == ',') c = ' ';
    }
    for (const auto& item : split(normalised, ' ')) out.push_back(to_double(field, item));
    if (out.empty()) throw ConfigError(field, "expected at least one value");
    return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || path == "synthetic") return path;
    const std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

const std::set<std::string> kKnown = {
    "experiment.potential",     "experiment.schemes",       "experiment.stepsizes",
    "experiment.t_total",       "experiment.chains",        "experiment.master_seed",
    "experiment.beta",          "experiment.n_bins",        "experiment.burn_in_fraction",
    "experiment.thin",          "experiment.output_dir",    "potential.omega",
    "potential.dataset",        "potential.synthetic_size", "kernel.type",
    "kernel.r",                 "kernel.terms",             "kernel.gamma",
    "kernel.tau",               "kernel.lambda",            "kernel.file",
    "baseline.ld_friction",     "baseline.mobility",        "baseline.h_tilde",
    "baseline.ld_h"};

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", std::string(e.message()) + " (line " +
                                        std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(section, "keys must live inside a [section]");
        }
        for (const auto& [key, value] : body) {
            const std::string field = section + "." + key;
            if (!kKnown.count(field)) throw ConfigError(field, "unknown key");
        }
    }
    auto get = [&](const std::string& field) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(field, '.'))) {
            return trim(strip_comment(*v));
        }
        return std::nullopt;
    };

    ExperimentConfig c;
    if (auto v = get("experiment.potential")) c.potential = *v;
    if (c.potential != "harmonic" && c.potential != "double_well" && c.potential != "mixture") {
        throw ConfigError("experiment.potential", "expected harmonic, double_well or mixture");
    }
    if (auto v = get("experiment.schemes")) {
        std::string normalised = *v;
        for (char& ch : normalised) {
            if (ch == ' ') ch = ',';
        }
        c.schemes = split(normalised, ',');
        if (c.schemes.empty()) throw ConfigError("experiment.schemes", "no schemes listed");
        for (const auto& s : c.schemes) {
            try {
                parse_scheme(s);
            } catch (const SchemeError& e) {
                throw ConfigError("experiment.schemes", e.what());
            }
        }
    }
    if (auto v = get("experiment.stepsizes")) c.stepsizes = to_list("experiment.stepsizes", *v);
    for (double h : c.stepsizes) {
        if (!(h > 0.0)) throw ConfigError("experiment.stepsizes", "stepsizes must be positive");
    }
    if (auto v = get("experiment.t_total")) c.t_total = to_double("experiment.t_total", *v);
    if (!(c.t_total > 0.0)) throw ConfigError("experiment.t_total", "must be positive");
    if (auto v = get("experiment.chains")) c.chains = static_cast<int>(to_int("experiment.chains", *v));
    if (c.chains < 1) throw ConfigError("experiment.chains", "must be at least 1");
    if (auto v = get("experiment.master_seed")) {
        const long long s = to_int("experiment.master_seed", *v);
        if (s < 0) throw ConfigError("experiment.master_seed", "must be non-negative");
        c.master_seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("experiment.beta")) c.beta = to_double("experiment.beta", *v);
    if (!(c.beta > 0.0)) throw ConfigError("experiment.beta", "must be positive");
    if (auto v = get("experiment.n_bins")) c.n_bins = static_cast<int>(to_int("experiment.n_bins", *v));
    if (c.n_bins < 1) throw ConfigError("experiment.n_bins", "must be at least 1");
    if (auto v = get("experiment.burn_in_fraction")) {
        c.burn_in_fraction = to_double("experiment.burn_in_fraction", *v);
    }
    if (!(c.burn_in_fraction >= 0.0 && c.burn_in_fraction < 1.0)) {
        throw ConfigError("experiment.burn_in_fraction", "must lie in [0, 1)");
    }
    if (auto v = get("experiment.thin")) {
        const long long t = to_int("experiment.thin", *v);
        if (t < 1) throw ConfigError("experiment.thin", "must be at least 1");
        c.thin = static_cast<std::uint64_t>(t);
    }
    if (auto v = get("experiment.output_dir")) c.output_dir = resolve(base_dir, *v);
    else c.output_dir = resolve(base_dir, c.output_dir);

    if (auto v = get("potential.omega")) c.omega = to_list("potential.omega", *v);
    for (double w : c.omega) {
        if (!(w > 0.0)) throw ConfigError("potential.omega", "entries must be positive");
    }
    if (auto v = get("potential.dataset")) c.dataset = resolve(base_dir, *v);
    if (auto v = get("potential.synthetic_size")) {
        const long long n = to_int("potential.synthetic_size", *v);
        if (n < 2) throw ConfigError("potential.synthetic_size", "must be at least 2");
        c.synthetic_size = static_cast<std::size_t>(n);
    }

    if (auto v = get("kernel.type")) c.kernel = *v;
    if (c.kernel != "prony" && c.kernel != "exp" && c.kernel != "kv_8_8" && c.kernel != "file") {
        throw ConfigError("kernel.type", "expected prony, exp, kv_8_8 or file");
    }
    if (auto v = get("kernel.r")) c.prony_r = static_cast<int>(to_int("kernel.r", *v));
    if (auto v = get("kernel.terms")) {
        for (const auto& term : split(*v, ';')) {
            const auto values = to_list("kernel.terms", term);
            if (values.size() != 2 && values.size() != 3) {
                throw ConfigError("kernel.terms", "each term is 'c a' or 'c a b'");
            }
            c.prony_terms.push_back({values[0], values[1], values.size() == 3 ? values[2] : 0.0});
        }
    }
    if (auto v = get("kernel.gamma")) c.exp.gamma = to_double("kernel.gamma", *v);
    if (auto v = get("kernel.tau")) c.exp.tau = to_double("kernel.tau", *v);
    if (auto v = get("kernel.lambda")) c.exp.lambda = to_double("kernel.lambda", *v);
    if (auto v = get("kernel.file")) c.kernel_file = resolve(base_dir, *v);
    if (c.kernel == "file" && c.kernel_file.empty()) {
        throw ConfigError("kernel.file", "required when kernel.type = file");
    }

    if (auto v = get("baseline.ld_friction")) c.ld_friction = to_double("baseline.ld_friction", *v);
    if (auto v = get("baseline.mobility")) c.mobility = to_double("baseline.mobility", *v);
    if (auto v = get("baseline.h_tilde")) c.h_tilde = to_double("baseline.h_tilde", *v);
    if (auto v = get("baseline.ld_h")) c.ld_h = to_double("baseline.ld_h", *v);
    if (!(c.ld_friction > 0.0)) throw ConfigError("baseline.ld_friction", "must be positive");
    if (!(c.mobility > 0.0)) throw ConfigError("baseline.mobility", "must be positive");
    if (!(c.h_tilde >= 0.0)) throw ConfigError("baseline.h_tilde", "must be non-negative");
    if (!(c.ld_h > 0.0)) throw ConfigError("baseline.ld_h", "must be positive");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    const auto parent = std::filesystem::path(path).parent_path();
    return parse_config(in, parent.empty() ? std::string(".") : parent.string());
}

int config_dimension(const ExperimentConfig& config) {
    if (config.potential == "harmonic") return static_cast<int>(config.omega.size());
    if (config.potential == "double_well") return 1;
    return mixture_dim(3);
}

Potential make_potential(const ExperimentConfig& config) {
    if (config.potential == "harmonic") {
        Vector w(static_cast<Eigen::Index>(config.omega.size()));
        for (std::size_t i = 0; i < config.omega.size(); ++i) w(static_cast<Eigen::Index>(i)) = config.omega[i];
        return harmonic(Matrix(w.asDiagonal()));
    }
    if (config.potential == "double_well") return double_well();
    if (config.dataset.empty()) throw ConfigError("potential.dataset", "required for mixture");
    std::vector<double> data = config.dataset == "synthetic"
                                   ? synthetic_mixture_data(config.synthetic_size, config.master_seed)
                                   : load_dataset(config.dataset);
    return mixture_posterior(make_mixture_spec(std::move(data)));
}

GleParams make_params(const ExperimentConfig& config, int n) {
    const Matrix mass = Matrix::Identity(n, n);
    if (config.kernel == "prony") {
        const auto terms = config.prony_terms.empty() ? benchmark_prony_terms(config.prony_r)
                                                      : config.prony_terms;
        return from_prony(terms, n, mass, config.beta);
    }
    if (config.kernel == "exp") return from_exp_kernel(config.exp, n, mass, config.beta);
    if (config.kernel == "kv_8_8") return builtin_kv_8_8(n, config.beta);
    GleParams loaded = load_kernel_file(config.kernel_file);
    if (loaded.n() != n) {
        throw ConfigError("kernel.file", "kernel dimension n=" + std::to_string(loaded.n()) +
                                             " does not match the potential (n=" +
                                             std::to_string(n) + ")");
    }
    return GleParams(loaded.mass(), loaded.gamma11(), loaded.gamma12(), loaded.gamma21(),
                     loaded.gamma22(), loaded.q_aux(), config.beta);
}

BaselineSpec make_baseline(const ExperimentConfig& config, int n) {
    BaselineSpec b;
    const Matrix eye = Matrix::Identity(n, n);
    b.friction = config.ld_friction * eye;
    b.mobility = config.mobility * eye;
    b.h_tilde = config.h_tilde;
    if (config.kernel == "prony") {
        const auto terms = config.prony_terms.empty() ? benchmark_prony_terms(config.prony_r)
                                                      : config.prony_terms;
        bool plain = true;
        for (const auto& t : terms) plain = plain && t.b == 0.0;
        if (plain) b.prony_terms = bb_terms_from_prony(terms);
    } else if (config.kernel == "exp" && config.exp.lambda == 0.0) {
        b.prony_terms = {{config.exp.gamma * config.exp.tau, config.exp.tau}};
    }
    return b;
}

}  // namespace glelab
