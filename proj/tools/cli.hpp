#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlsdbar/scattering.hpp"

namespace nlsdbar::cli {

// Raised for anything wrong with the configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string q0 = "gaussian";  // builtin name or CSV path
    std::string scattering;       // optional ScatteringData JSON instead of q0
    double z_min = -8.0, z_max = 8.0;
    std::size_t nz = 1025;
    std::vector<double> t;
    double dt = 0.005;
    std::size_t n = 131072;
    double half_width = 8192.0;
    double x_min = -10.0, x_max = 10.0;
    std::size_t nx = 101;
    double window = 1.5;  // |x/(4t)| bound for sup errors
    std::size_t window_points = 201;
    double m = 0.5;
    std::vector<double> radii{0.5, 1, 2, 5, 10, 20};
    std::string model = "nls";
    bool correction = false;
    std::string rule = "default";  // q1 quadrature: default or fast
    double tol = 1e-12;            // phase quadrature tolerance
    double selftest_tol = 1e-8;
    std::string out = ".";
    bool timestamp = false;

    // Canonical JSON (sorted keys); the config hash is taken over this.
    nlohmann::json to_json() const;
    std::string hash() const;
};

// Defaults, then the config file (if any), then explicit flags. Validates.
RunConfig make_config(const std::string& command, const nlohmann::json& file, const nlohmann::json& flags);

// Builtins: gaussian(A, sigma), box(A, L), sech(A); otherwise a CSV path with
// columns x, re_q, im_q. '#' lines are comments; "# dx <value>" pins the step.
Potential load_potential(const std::string& source);
std::string potential_csv(const Potential& q, const std::string& header = "");

struct OutputFile {
    std::string name;
    std::string content;
};

// Runs a command and returns the files to write plus a stdout summary.
// Throws ConfigError, InputError or NumericalError.
std::vector<OutputFile> run(const RunConfig& cfg, std::string& summary);

// Writes all files into cfg.out via temporaries and renames, so nothing is
// left behind on failure.
void write_outputs(const RunConfig& cfg, const std::vector<OutputFile>& files);

// Process entry point used by main(); returns the exit status.
int main_entry(int argc, char** argv);

}  // namespace nlsdbar::cli
