#ifndef DELTOID_CLI_HPP
#define DELTOID_CLI_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace deltoid {

enum class ExitCode : int {
    ok = 0,
    validation = 1,
    breakdown = 2,
    io = 3,
};

enum class MatrixKind { toy, barbell, file };

enum class Method { power, cheb1, deltoid, deltoid_dyn };

std::string_view method_name(Method m);
/// Accepts power, cheb1, deltoid and deltoid-dyn. Throws ConfigError otherwise.
Method parse_method(std::string_view name);

struct ExperimentConfig {
    MatrixKind matrix_kind = MatrixKind::toy;
    std::filesystem::path matrix_path; // MatrixKind::file only
    std::vector<Method> methods;
    std::size_t iterations = 1000;
    std::optional<double> beta;
    bool beta_oracle = false;
    std::optional<double> lambda2; // oracle input; the toy matrix defaults to 1

    // barbell parameters
    std::size_t barbell_n = 2000;
    double barbell_p = 1.0 / 125.0;
    std::uint64_t matrix_seed = 1;

    std::uint64_t start_seed = 0;

    // Reference eigenvector settings. When unset the tolerance depends on the
    // matrix: 1e-30 for toy (the power method reaches e1 exactly), 1e-10 for
    // barbell (sparse LU solve) and 1e-12 for files.
    std::optional<double> ref_tol;
    std::size_t ref_max_iters = 100000;

    std::filesystem::path out;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Writes region_n<n>.json into out_dir for each n; returns the paths written.
std::vector<std::filesystem::path> cmd_region(const std::vector<std::size_t>& n_list, std::size_t resolution,
                                              const std::filesystem::path& out_dir);

/// Writes "k,beta" rows for k = 0..n followed by a "sum,<total>" footer.
void cmd_coeffs(std::size_t n, const std::filesystem::path& out);

struct ApproxRow {
    std::size_t n = 0;
    double t = 0.0;
    std::size_t degree = 0;
    double max_err = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Sample points of the closed region: the first half on the boundary curve,
/// equally spaced in the parameter, the rest uniform inside by rejection.
std::vector<std::complex<double>> region_samples(std::size_t count, std::uint64_t seed);

std::vector<ApproxRow> approx_table(const std::vector<std::size_t>& n_list, const std::vector<double>& t_list,
                                    std::size_t samples, std::uint64_t seed);

void cmd_approx(const std::vector<std::size_t>& n_list, const std::vector<double>& t_list, std::size_t samples,
                std::uint64_t seed, const std::filesystem::path& out);

/// Runs the configured methods and writes the long-format CSV to config.out
/// plus a metadata sidecar <out>.meta.json.
void cmd_converge(const ExperimentConfig& config);

std::filesystem::path metadata_path(const std::filesystem::path& csv);

/// Writes content to a temporary file next to path and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal representation, independent of locale.
std::string format_double(double v);

/// Full command-line entry point. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace deltoid

#endif
