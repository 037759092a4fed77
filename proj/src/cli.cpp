#include "deltoid/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltoid/errors.hpp"
#include "deltoid/iterative.hpp"
#include "deltoid/matgen.hpp"
#include "deltoid/poly.hpp"
#include "deltoid/random.hpp"
#include "deltoid/walk.hpp"

namespace deltoid {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::power:
        return "power";
    case Method::cheb1:
        return "cheb1";
    case Method::deltoid:
        return "deltoid";
    case Method::deltoid_dyn:
        return "deltoid-dyn";
    }
    return "?";
}

Method parse_method(std::string_view name)
{
    for (Method m : {Method::power, Method::cheb1, Method::deltoid, Method::deltoid_dyn}) {
        if (method_name(m) == name) {
            return m;
        }
    }
    throw ConfigError("methods", "unknown method '" + std::string(name) +
                                     "' (expected power, cheb1, deltoid or deltoid-dyn)");
}

namespace {

bool has_method(const ExperimentConfig& c, Method m)
{
    return std::ranges::find(c.methods, m) != c.methods.end();
}

bool needs_beta(const ExperimentConfig& c)
{
    return has_method(c, Method::deltoid) || has_method(c, Method::cheb1);
}

} // namespace

void ExperimentConfig::validate() const
{
    if (methods.empty()) {
        throw ConfigError("methods", "at least one method is required");
    }
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (std::find(methods.begin() + static_cast<std::ptrdiff_t>(i) + 1, methods.end(), methods[i]) !=
            methods.end()) {
            throw ConfigError("methods", "duplicate method '" + std::string(method_name(methods[i])) + "'");
        }
    }
    if (iterations == 0) {
        throw ConfigError("iterations", "must be positive");
    }
    if ((has_method(*this, Method::deltoid) || has_method(*this, Method::deltoid_dyn)) && iterations < 3) {
        throw ConfigError("iterations", "deltoid methods need at least 3 iterations");
    }
    if (beta && beta_oracle) {
        throw ConfigError("beta", "give either --beta or --beta-oracle, not both");
    }
    if (beta && !needs_beta(*this)) {
        throw ConfigError("beta", "only used by the deltoid and cheb1 methods");
    }
    if (beta && !std::isfinite(*beta)) {
        throw ConfigError("beta", "must be finite");
    }
    if (needs_beta(*this) && !beta && !beta_oracle) {
        throw ConfigError("beta", "required for deltoid or cheb1 unless --beta-oracle is given");
    }
    if (lambda2 && !(std::isfinite(*lambda2) && *lambda2 > 0.0)) {
        throw ConfigError("lambda2", "must be positive and finite");
    }
    if (beta_oracle && !lambda2 && matrix_kind != MatrixKind::toy) {
        throw ConfigError("lambda2", "--beta-oracle needs --lambda2 for this matrix");
    }
    if (matrix_kind == MatrixKind::barbell) {
        if (barbell_n < 2) {
            throw ConfigError("n", "barbell block size must be at least 2");
        }
        if (!(barbell_p > 0.0 && barbell_p < 1.0)) {
            throw ConfigError("p", "must lie in (0, 1)");
        }
    }
    if (matrix_kind == MatrixKind::file && matrix_path.empty()) {
        throw ConfigError("matrix", "file path is empty");
    }
    if (ref_tol && !(*ref_tol > 0.0)) {
        throw ConfigError("ref-tol", "must be positive");
    }
    if (ref_max_iters == 0) {
        throw ConfigError("ref-max-iters", "must be positive");
    }
    if (out.empty()) {
        throw ConfigError("out", "output path is required");
    }
}

std::string format_double(double v)
{
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return {buffer, result.ptr};
}

void write_file_atomic(const fs::path& path, std::string_view content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        file.write(content.data(), static_cast<std::streamsize>(content.size()));
        file.flush();
        if (!file) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

fs::path metadata_path(const fs::path& csv)
{
    fs::path meta = csv;
    meta += ".meta.json";
    return meta;
}

// ---- region ----

std::vector<fs::path> cmd_region(const std::vector<std::size_t>& n_list, std::size_t resolution,
                                 const fs::path& out_dir)
{
    if (n_list.empty()) {
        throw ConfigError("n", "at least one degree is required");
    }
    if (resolution == 0) {
        throw ConfigError("resolution", "must be positive");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string());
    }

    GridSpec grid;
    grid.resolution = resolution;
    std::vector<fs::path> written;
    for (std::size_t n : n_list) {
        const Raster raster = raster_magnitude(n, grid);
        json magnitude = json::array();
        for (std::size_t r = 0; r < raster.rows; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < raster.cols; ++c) {
                row.push_back(raster.at(r, c));
            }
            magnitude.push_back(std::move(row));
        }
        json doc = {
            {"n", n},
            {"rows", raster.rows},
            {"cols", raster.cols},
            {"re_min", grid.re_min},
            {"re_max", grid.re_max},
            {"im_min", grid.im_min},
            {"im_max", grid.im_max},
            {"row_order", "im_max_first"},
            {"clamp", kRasterClamp},
            {"magnitude", std::move(magnitude)},
        };
        const fs::path path = out_dir / ("region_n" + std::to_string(n) + ".json");
        write_file_atomic(path, doc.dump() + "\n");
        written.push_back(path);
    }
    return written;
}

// ---- coeffs ----

void cmd_coeffs(std::size_t n, const fs::path& out)
{
    const BetaCoefficients coeffs = beta_coeffs(n);
    std::string csv = "k,beta\n";
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.beta.size(); ++k) {
        csv += std::to_string(k) + "," + format_double(coeffs.beta[k]) + "\n";
        sum += coeffs.beta[k];
    }
    csv += "sum," + format_double(sum) + "\n";
    write_file_atomic(out, csv);
}

// ---- approx ----

std::vector<Complex> region_samples(std::size_t count, std::uint64_t seed)
{
    const std::size_t on_boundary = (count + 1) / 2;
    std::vector<Complex> points;
    points.reserve(count);
    for (std::size_t j = 0; j < on_boundary; ++j) {
        points.push_back(gamma_point(2.0 * std::numbers::pi * static_cast<double>(j) /
                                     static_cast<double>(on_boundary)));
    }
    const CounterRng rng(seed);
    for (std::uint64_t c = 0; points.size() < count; ++c) {
        const Complex z(2.0 * rng.uniform(1, c) - 1.0, 2.0 * rng.uniform(2, c) - 1.0);
        if (in_deltoid(z)) {
            points.push_back(z);
        }
    }
    return points;
}

namespace {

Complex int_power(Complex z, std::size_t n)
{
    Complex result = 1.0;
    for (; n > 0; n >>= 1) {
        if (n & 1) {
            result *= z;
        }
        z *= z;
    }
    return result;
}

} // namespace

std::vector<ApproxRow> approx_table(const std::vector<std::size_t>& n_list, const std::vector<double>& t_list,
                                    std::size_t samples, std::uint64_t seed)
{
    if (n_list.empty() || t_list.empty()) {
        throw ConfigError(n_list.empty() ? "n" : "t", "at least one value is required");
    }
    if (std::ranges::any_of(n_list, [](std::size_t n) { return n == 0; })) {
        throw ConfigError("n", "degrees must be positive");
    }
    if (std::ranges::any_of(t_list, [](double t) { return !(t > 0.0) || !std::isfinite(t); })) {
        throw ConfigError("t", "values must be positive and finite");
    }
    if (samples == 0) {
        throw ConfigError("samples", "must be positive");
    }
    const std::vector<Complex> points = region_samples(samples, seed);
    std::vector<ApproxRow> rows;
    for (std::size_t n : n_list) {
        const BetaCoefficients coeffs = beta_coeffs(n);
        for (double t : t_list) {
            ApproxRow row;
            row.n = n;
            row.t = t;
            row.degree = std::min(static_cast<std::size_t>(std::floor(t * std::sqrt(static_cast<double>(n)))), n);
            for (const Complex& z : points) {
                row.max_err = std::max(row.max_err, std::abs(int_power(z, n) - approx_monomial(z, coeffs, t)));
            }
            row.bound = tail_bound(t);
            row.pass = row.max_err <= row.bound;
            rows.push_back(row);
        }
    }
    return rows;
}

void cmd_approx(const std::vector<std::size_t>& n_list, const std::vector<double>& t_list, std::size_t samples,
                std::uint64_t seed, const fs::path& out)
{
    std::string csv = "n,t,degree,max_err,bound,pass\n";
    for (const ApproxRow& r : approx_table(n_list, t_list, samples, seed)) {
        csv += std::to_string(r.n) + "," + format_double(r.t) + "," + std::to_string(r.degree) + "," +
               format_double(r.max_err) + "," + format_double(r.bound) + "," + (r.pass ? "true" : "false") + "\n";
    }
    write_file_atomic(out, csv);
}

// ---- converge ----

namespace {

struct Problem {
    std::unique_ptr<LinearOperator> op;
    json matrix_info;
    Eigenpair reference;
    json reference_info;
};

Problem load_problem(const ExperimentConfig& c)
{
    Problem p;
    switch (c.matrix_kind) {
    case MatrixKind::toy: {
        auto a = std::make_unique<DenseMatrix>(toy_matrix());
        const double tol = c.ref_tol.value_or(1e-30);
        p.reference = reference_eigenpair(*a, tol, c.ref_max_iters);
        p.reference_info = {{"solver", "power"}, {"tol", tol}};
        p.matrix_info = {{"kind", "toy"}};
        p.op = std::move(a);
        break;
    }
    case MatrixKind::barbell: {
        auto a = std::make_unique<CsrMatrix>(barbell_matrix(c.barbell_n, c.barbell_p, c.matrix_seed));
        const double tol = c.ref_tol.value_or(1e-10);
        p.reference = stationary_eigenpair(*a, tol);
        p.reference_info = {{"solver", "sparse_lu"}, {"tol", tol}};
        p.matrix_info = {{"kind", "barbell"}, {"n", c.barbell_n}, {"p", c.barbell_p}, {"seed", c.matrix_seed},
                         {"nnz", a->nnz()}};
        p.op = std::move(a);
        break;
    }
    case MatrixKind::file: {
        std::ifstream in(c.matrix_path);
        if (!in) {
            throw IoError("cannot open matrix file " + c.matrix_path.string());
        }
        auto a = std::make_unique<CsrMatrix>(read_sparse_text(in));
        const double tol = c.ref_tol.value_or(1e-12);
        p.reference = reference_eigenpair(*a, tol, c.ref_max_iters);
        p.reference_info = {{"solver", "power"}, {"tol", tol}};
        p.matrix_info = {{"kind", "file"}, {"path", c.matrix_path.string()}, {"nnz", a->nnz()}};
        p.op = std::move(a);
        break;
    }
    }
    p.matrix_info["dimension"] = p.op->dimension();
    p.reference_info["lambda1"] = p.reference.lambda;
    p.reference_info["residual"] = p.reference.residual;
    p.reference_info["iterations"] = p.reference.iterations;
    p.reference_info["certified"] = p.reference.certified;
    return p;
}

} // namespace

void cmd_converge(const ExperimentConfig& config)
{
    config.validate();
    const Problem problem = load_problem(config);
    const std::vector<double> v0 = seeded_start_vector(problem.op->dimension(), config.start_seed);
    RunOptions options;
    options.reference = problem.reference.phi;

    const double lambda2 = config.lambda2.value_or(1.0);
    const double deltoid_param = config.beta_oracle ? deltoid_beta(lambda2) : config.beta.value_or(0.0);
    const double cheb_param = config.beta_oracle ? chebyshev_beta(lambda2) : config.beta.value_or(0.0);

    std::string csv = "iter,method,h,nu,d,beta_used,rel_err\n";
    json runs = json::object();
    for (Method m : config.methods) {
        IterationTrace trace;
        switch (m) {
        case Method::power:
            trace = power_method(*problem.op, v0, config.iterations, options);
            break;
        case Method::cheb1:
            trace = chebyshev_momentum(*problem.op, v0, cheb_param, config.iterations, options);
            break;
        case Method::deltoid:
            trace = deltoid_momentum(*problem.op, v0, deltoid_param, config.iterations, options);
            break;
        case Method::deltoid_dyn:
            trace = dynamic_deltoid(*problem.op, v0, config.iterations, options);
            break;
        }
        const std::string name(method_name(m));
        for (std::size_t k = 0; k < trace.records.size(); ++k) {
            const IterationRecord& r = trace.records[k];
            csv += std::to_string(k + 1) + "," + name + "," + format_double(r.h) + "," + format_double(r.nu) + "," +
                   format_double(r.d) + "," + format_double(r.beta) + "," + format_double(r.rel_err.value_or(NAN)) +
                   "\n";
        }
        runs[name] = {{"rows", trace.steps()}, {"converged", trace.converged}};
    }

    // Predicted envelope for the static deltoid method, from the lambda its
    // beta corresponds to.
    json prediction = nullptr;
    std::optional<double> lambda_star;
    if (has_method(config, Method::deltoid) && deltoid_param > 0.0) {
        lambda_star = std::cbrt(27.0 * deltoid_param / 4.0);
    } else if (config.beta_oracle) {
        lambda_star = lambda2;
    }
    const double lambda1 = problem.reference.lambda;
    if (lambda_star && std::abs(lambda1 / *lambda_star) > 1.0) {
        json values = json::array();
        for (std::size_t i = 1; i <= config.iterations; ++i) {
            values.push_back(predicted_rate(lambda1, *lambda_star, i));
        }
        prediction = {{"lambda1", lambda1}, {"lambda_star", *lambda_star}, {"iter_first", 1},
                      {"values", std::move(values)}};
    }

    json methods = json::array();
    for (Method m : config.methods) {
        methods.push_back(method_name(m));
    }
    json beta = json::object();
    if (has_method(config, Method::deltoid)) {
        beta["deltoid"] = deltoid_param;
    }
    if (has_method(config, Method::cheb1)) {
        beta["cheb1"] = cheb_param;
    }
    json meta = {
        {"matrix", problem.matrix_info},
        {"start_seed", config.start_seed},
        {"iterations", config.iterations},
        {"methods", std::move(methods)},
        {"beta", std::move(beta)},
        {"beta_oracle", config.beta_oracle},
        {"lambda2", config.beta_oracle ? json(lambda2) : json(nullptr)},
        {"reference", problem.reference_info},
        {"runs", std::move(runs)},
        {"predicted_rate", std::move(prediction)},
        {"columns", {"iter", "method", "h", "nu", "d", "beta_used", "rel_err"}},
    };
    write_file_atomic(config.out, csv);
    write_file_atomic(metadata_path(config.out), meta.dump(2) + "\n");
}

// ---- command line ----

namespace {

ExperimentConfig parse_matrix_flag(ExperimentConfig c, const std::string& matrix)
{
    if (matrix == "toy") {
        c.matrix_kind = MatrixKind::toy;
    } else if (matrix == "barbell") {
        c.matrix_kind = MatrixKind::barbell;
    } else if (matrix.starts_with("file:")) {
        c.matrix_kind = MatrixKind::file;
        c.matrix_path = matrix.substr(5);
    } else {
        throw ConfigError("matrix", "expected toy, barbell or file:<path>, got '" + matrix + "'");
    }
    return c;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deltoid polynomials, walk coefficients and momentum power iterations"};
    app.name("deltoid");
    app.require_subcommand(1);

    std::vector<std::size_t> region_n{6, 12, 24, 96};
    std::size_t resolution = 512;
    std::string region_out = "region";
    auto* region = app.add_subcommand("region", "Rasterize |P_n| on [-1,1]^2 into JSON files");
    region->add_option("--n", region_n, "Degrees")->delimiter(',')->capture_default_str();
    region->add_option("--resolution", resolution, "Cells per side")->capture_default_str();
    region->add_option("--out", region_out, "Output directory")->capture_default_str();

    std::size_t coeffs_n = 0;
    std::string coeffs_out;
    auto* coeffs = app.add_subcommand("coeffs", "Write the expansion coefficients beta_k as CSV");
    coeffs->add_option("--n", coeffs_n, "Walk length")->required();
    coeffs->add_option("--out", coeffs_out, "Output CSV")->required();

    std::vector<std::size_t> approx_n{16, 64, 256};
    std::vector<double> approx_t{1.0, 2.0, 3.0};
    std::size_t samples = 500;
    std::uint64_t approx_seed = 1;
    std::string approx_out;
    auto* approx = app.add_subcommand("approx", "Check the truncated monomial expansion against its tail bound");
    approx->add_option("--n", approx_n, "Degrees")->delimiter(',')->capture_default_str();
    approx->add_option("--t", approx_t, "Truncation parameters")->delimiter(',')->capture_default_str();
    approx->add_option("--samples", samples, "Sample points in the region")->capture_default_str();
    approx->add_option("--seed", approx_seed, "Seed for interior samples")->capture_default_str();
    approx->add_option("--out", approx_out, "Output CSV")->required();

    ExperimentConfig config;
    std::string matrix = "toy";
    std::vector<std::string> method_names{"power", "cheb1", "deltoid", "deltoid-dyn"};
    double beta = 0.0;
    double lambda2 = 0.0;
    double ref_tol = 0.0;
    std::string converge_out;
    auto* converge = app.add_subcommand("converge", "Run power-type iterations and log relative errors");
    converge->add_option("--matrix", matrix, "toy, barbell or file:<path>")->capture_default_str();
    converge->add_option("--methods", method_names, "Subset of power,cheb1,deltoid,deltoid-dyn")
        ->delimiter(',')
        ->capture_default_str();
    converge->add_option("--iterations", config.iterations, "Iterations per method")->capture_default_str();
    auto* beta_opt = converge->add_option("--beta", beta, "Momentum parameter for deltoid and cheb1");
    converge->add_flag("--beta-oracle", config.beta_oracle, "Derive beta from --lambda2");
    auto* lambda2_opt = converge->add_option("--lambda2", lambda2, "Second eigenvalue for the oracle (toy: 1)");
    converge->add_option("--n", config.barbell_n, "Barbell block size")->capture_default_str();
    converge->add_option("--p", config.barbell_p, "Barbell edge probability")->capture_default_str();
    converge->add_option("--seed", config.matrix_seed, "Barbell matrix seed")->capture_default_str();
    converge->add_option("--start-seed", config.start_seed, "Start vector seed")->capture_default_str();
    auto* ref_tol_opt = converge->add_option("--ref-tol", ref_tol, "Reference eigenvector tolerance");
    converge->add_option("--ref-max-iters", config.ref_max_iters, "Reference power iteration cap")
        ->capture_default_str();
    converge->add_option("--out", converge_out, "Output CSV (metadata goes to <out>.meta.json)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
    }

    try {
        if (*region) {
            for (const auto& path : cmd_region(region_n, resolution, region_out)) {
                out << "wrote " << path.string() << "\n";
            }
        } else if (*coeffs) {
            cmd_coeffs(coeffs_n, coeffs_out);
            out << "wrote " << coeffs_out << "\n";
        } else if (*approx) {
            cmd_approx(approx_n, approx_t, samples, approx_seed, approx_out);
            out << "wrote " << approx_out << "\n";
        } else if (*converge) {
            config = parse_matrix_flag(config, matrix);
            for (const auto& name : method_names) {
                config.methods.push_back(parse_method(name));
            }
            if (*beta_opt) {
                config.beta = beta;
            }
            if (*lambda2_opt) {
                config.lambda2 = lambda2;
            }
            if (*ref_tol_opt) {
                config.ref_tol = ref_tol;
            }
            config.out = converge_out;
            cmd_converge(config);
            out << "wrote " << converge_out << " and " << metadata_path(converge_out).string() << "\n";
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::io);
    } catch (const BreakdownError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::breakdown);
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::breakdown);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::validation);
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::io);
    }
    return static_cast<int>(ExitCode::ok);
}

} // namespace deltoid
