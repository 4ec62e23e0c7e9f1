#include "glelab/commands.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "glelab/errors.hpp"
#include "glelab/theory.hpp"

namespace glelab {

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (p.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(p, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != p.size()) throw ConfigError("kernel", "bad number '" + p + "' in " + what);
        out.push_back(v);
    }
    return out;
}

// Diagonal-class view of a parameter set, when it has one.
std::optional<RescaleSpec> rescale_view(const GleParams& p) {
    const int n = p.n();
    if (p.m() != n) return std::nullopt;
    const Matrix id = Matrix::Identity(n, n);
    if (max_abs(p.mass() - id) > 1e-14 || max_abs(p.q_aux() - id) > 1e-14) return std::nullopt;
    if (max_abs(p.gamma11()) > 0.0) return std::nullopt;
    if (max_abs(p.gamma12() + p.gamma21()) > 1e-14) return std::nullopt;
    const Matrix da = p.gamma21().cwiseAbs();
    const Matrix db = p.gamma22();
    if (max_abs(Matrix(da.diagonal().asDiagonal()) - da) > 0.0) return std::nullopt;
    if (max_abs(Matrix(db.diagonal().asDiagonal()) - db) > 0.0) return std::nullopt;
    if ((da.diagonal().array() <= 0.0).any() || (db.diagonal().array() <= 0.0).any()) return std::nullopt;
    RescaleSpec spec;
    spec.d_a = da.diagonal();
    spec.d_b = db.diagonal();
    return spec;
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << indent;
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_number(m(i, j));
        out << '\n';
    }
}

}  // namespace

GleParams kernel_from_argument(const std::string& arg, double beta) {
    const auto colon = arg.find(':');
    const std::string kind = boost::to_lower_copy(arg.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : arg.substr(colon + 1);
    const Matrix one = Matrix::Identity(1, 1);
    if (kind == "kv_8_8") return builtin_kv_8_8(1, beta);
    if (kind == "exp") {
        const auto v = parse_numbers(rest, "exp kernel");
        if (v.size() != 2 && v.size() != 3) throw ConfigError("kernel", "exp expects γ,τ[,λ]");
        return from_exp_kernel({v[0], v[1], v.size() == 3 ? v[2] : 0.0}, 1, one, beta);
    }
    if (kind == "prony") {
        if (rest.find_first_of(",;") == std::string::npos) {
            const auto v = parse_numbers(rest, "prony kernel");
            if (v.size() != 1 || v[0] != std::round(v[0])) throw ConfigError("kernel", "prony expects r or terms");
            return from_prony(benchmark_prony_terms(static_cast<int>(v[0])), 1, one, beta);
        }
        std::vector<std::string> groups;
        boost::split(groups, rest, boost::is_any_of(";"));
        std::vector<PronyTerm> terms;
        for (const auto& g : groups) {
            const auto v = parse_numbers(g, "prony term");
            if (v.empty()) continue;
            if (v.size() != 2 && v.size() != 3) throw ConfigError("kernel", "prony term expects c,a[,b]");
            terms.push_back({v[0], v[1], v.size() == 3 ? v[2] : 0.0});
        }
        return from_prony(terms, 1, one, beta);
    }
    if (kind == "file") {
        if (rest.empty()) throw ConfigError("kernel", "file: needs a path");
        return load_kernel_file(rest);
    }
    throw ConfigError("kernel", "unknown kernel '" + arg + "'");
}

int cmd_sweep(const std::string& config_path, const RunOptions& options, std::ostream& out) {
    const ExperimentConfig config = load_config(config_path);
    const SweepResult result = run_sweep(config, options);
    write_sweep_csv(result, config.output_dir);
    out << "wrote " << config.output_dir << "/sweep.csv and slopes.csv\n";
    for (const auto& s : result.slopes) {
        out << "  " << s.scheme << ": slope " << format_number(s.slope) << " over " << s.points
            << " points\n";
    }
    return kExitOk;
}

int cmd_mixture(const std::string& config_path, bool synthetic, const RunOptions& options,
                std::ostream& out) {
    const ExperimentConfig config = load_config(config_path);
    const MixtureResult result = run_mixture(config, synthetic, options);
    write_mixture_csv(result, config.output_dir);
    out << "wrote " << config.output_dir << "/mixture.csv\n";
    for (const auto& s : result.diverged) out << "  diverged: " << s << '\n';
    return result.diverged.empty() ? kExitOk : kExitNumerical;
}

int cmd_validate(const ValidateOptions& options, std::ostream& out) {
    const GleParams params = kernel_from_argument(options.kernel, options.beta);
    const ValidationReport report = validate(params);
    out << "kernel: " << options.kernel << " (n=" << params.n() << ", m=" << params.m() << ")\n";
    out << "stable: " << (report.stable ? "true" : "false") << '\n';
    out << "min_real_eigenvalue: " << format_number(report.min_real_eigenvalue) << '\n';
    out << "controllable: " << (report.controllable ? "true" : "false") << '\n';
    out << "commutation_residual: " << format_number(report.commutation_residual) << '\n';
    if (report.fdt_residual) out << "fdt_residual: " << format_number(*report.fdt_residual) << '\n';
    if (report.fdt_q) {
        out << "fdt_q:\n";
        print_matrix(out, *report.fdt_q, "  ");
    }
    if (!report.stable) {
        out << "not stable: Γ_M has an eigenvalue with real part "
            << format_number(report.min_real_eigenvalue) << '\n';
        return kExitValidation;
    }
    bool ok = report.controllable;
    if (!report.controllable) out << "not controllable\n";

    // Harmonic probe with Ω = M.
    const SchemeSpec baoab = parse_scheme("BAOAB");
    const Matrix omega = params.mass();
    try {
        const CovarianceResult oracle = numeric_stationary_cov(baoab, omega, params, options.h);
        const CovarianceResult formula = analytic_invariant_cov(baoab, omega, params, options.h);
        const double diff = max_abs(oracle.cov - formula.cov);
        out << "harmonic probe (Ω = M, h = " << format_number(options.h) << "):\n";
        out << "  oracle covariance diagonal:";
        for (Eigen::Index i = 0; i < oracle.cov.rows(); ++i) out << ' ' << format_number(oracle.cov(i, i));
        out << "\n  max |oracle − formula|: " << format_number(diff) << '\n';
        if (!(diff <= 1e-8)) {
            out << "oracle does not match the closed form\n";
            ok = false;
        }
    } catch (const InstabilityError& e) {
        out << "harmonic probe unstable at h = " << format_number(options.h) << ": " << e.what() << '\n';
        ok = false;
    }

    const auto view = rescale_view(params);
    RescaleSpec spec;
    if (view) {
        spec = *view;
    } else {
        spec.d_a = Vector::Ones(1);
        spec.d_b = Vector::Ones(1);
        out << "limit gaps (unit diagonal class, kernel is not diagonal):\n";
    }
    if (view) out << "limit gaps:\n";
    out << "  eps,white_noise,overdamped\n";
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        out << "  " << format_number(eps) << ','
            << format_number(limit_gap(spec, LimitMode::WhiteNoise, eps, options.h)) << ','
            << format_number(limit_gap(spec, LimitMode::Overdamped, eps, options.h)) << '\n';
    }
    return ok ? kExitOk : kExitValidation;
}

}  // namespace glelab
