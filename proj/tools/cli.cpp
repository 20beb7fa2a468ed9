#include "cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "nlsdbar/dbar.hpp"
#include "nlsdbar/fit.hpp"
#include "nlsdbar/linear.hpp"
#include "nlsdbar/nls.hpp"
#include "nlsdbar/parallel.hpp"
#include "nlsdbar/parametrix.hpp"

#ifndef NLSDBAR_VERSION
#define NLSDBAR_VERSION "0.0.0"
#endif

namespace nlsdbar::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> commands = {"scatter", "evolve",      "asymptotic", "compare",
                                        "decay",   "pc-selftest", "linear-demo"};

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::vector<double> parse_list(const json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(key + ": list entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_string()) throw ConfigError(key + ": expected a list of numbers");
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(key + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

double as_num(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            const std::string s = v.get<std::string>();
            const double d = std::stod(s, &pos);
            if (pos == s.size()) return d;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError(key + ": expected a number");
}

std::size_t as_count(const json& v, const std::string& key) {
    const double d = as_num(v, key);
    if (!(d >= 1.0) || d != std::floor(d) || d > 1e9) throw ConfigError(key + ": expected a positive integer");
    return static_cast<std::size_t>(d);
}

bool as_bool(const json& v, const std::string& key) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
    }
    throw ConfigError(key + ": expected true or false");
}

std::string as_str(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
}

void apply(RunConfig& c, const std::string& key, const json& v) {
    if (key == "q0") c.q0 = as_str(v, key);
    else if (key == "scattering") c.scattering = as_str(v, key);
    else if (key == "z_min") c.z_min = as_num(v, key);
    else if (key == "z_max") c.z_max = as_num(v, key);
    else if (key == "nz") c.nz = as_count(v, key);
    else if (key == "t") c.t = parse_list(v, key);
    else if (key == "dt") c.dt = as_num(v, key);
    else if (key == "n") c.n = as_count(v, key);
    else if (key == "half_width") c.half_width = as_num(v, key);
    else if (key == "x_min") c.x_min = as_num(v, key);
    else if (key == "x_max") c.x_max = as_num(v, key);
    else if (key == "nx") c.nx = as_count(v, key);
    else if (key == "window") c.window = as_num(v, key);
    else if (key == "window_points") c.window_points = as_count(v, key);
    else if (key == "m") c.m = as_num(v, key);
    else if (key == "radii") c.radii = parse_list(v, key);
    else if (key == "model") c.model = as_str(v, key);
    else if (key == "correction") c.correction = as_bool(v, key);
    else if (key == "rule") c.rule = as_str(v, key);
    else if (key == "tol") c.tol = as_num(v, key);
    else if (key == "selftest_tol") c.selftest_tol = as_num(v, key);
    else if (key == "out") c.out = as_str(v, key);
    else if (key == "timestamp") c.timestamp = as_bool(v, key);
    else if (key == "command") {
        if (as_str(v, key) != c.command) throw ConfigError("config file is for command '" + as_str(v, key) + "'");
    } else
        throw ConfigError("unknown configuration key '" + key + "'");
}

bool is_builtin(const std::string& source) {
    for (const char* b : {"gaussian", "box", "sech"})
        if (source.rfind(b, 0) == 0) {
            const std::string rest = source.substr(std::string(b).size());
            if (rest.empty() || rest.front() == '(') return true;
        }
    return false;
}

std::vector<double> default_ladder(const RunConfig& c) {
    if (c.command == "decay" && c.model == "linear") {
        std::vector<double> t;
        for (double e = 1.0; e <= 4.0 + 1e-12; e += 0.5) t.push_back(std::pow(10.0, e));
        return t;
    }
    if (c.command == "decay" || c.command == "compare") return {25, 50, 100, 200, 400};
    return {10.0};
}

void validate(RunConfig& c) {
    if (!commands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
    if (c.t.empty()) c.t = default_ladder(c);
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        if (!(c.t[i] > 0.0) || !std::isfinite(c.t[i])) throw ConfigError("t: times must be positive");
        if (i > 0 && !(c.t[i] > c.t[i - 1])) throw ConfigError("t: ladder must be strictly increasing");
    }
    if (!(c.tol > 0.0) || !(c.selftest_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(c.half_width > 0.0)) throw ConfigError("half_width must be positive");
    if (!(c.x_max > c.x_min)) throw ConfigError("x_max must exceed x_min");
    if (!(c.z_max > c.z_min)) throw ConfigError("z_max must exceed z_min");
    if (!(c.window > 0.0)) throw ConfigError("window must be positive");
    if (!(c.m >= 0.0 && c.m < 1.0)) throw ConfigError("m must lie in [0, 1)");
    for (double r : c.radii)
        if (!(r > 0.0)) throw ConfigError("radii must be positive");
    if (c.model != "linear" && c.model != "nls") throw ConfigError("model must be linear or nls");
    if (c.rule != "default" && c.rule != "fast") throw ConfigError("rule must be default or fast");
    if (!c.scattering.empty() && !fs::exists(c.scattering))
        throw ConfigError("scattering file '" + c.scattering + "' does not exist");
    if (!is_builtin(c.q0) && !fs::exists(c.q0)) throw ConfigError("q0 file '" + c.q0 + "' does not exist");
    if (c.out.empty()) throw ConfigError("out must name a directory");
}

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char b[17];
    std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
    return b;
}

json tolerances(const RunConfig& c) {
    return {{"phase_tol", c.tol},    {"q1_rule", c.rule},  {"selftest_tol", c.selftest_tol},
            {"transfer_tol", 1e-10}, {"end_threshold", 1e-6}};
}

json meta(const RunConfig& c) {
    json m = {{"version", NLSDBAR_VERSION},
              {"command", c.command},
              {"config_hash", c.hash()},
              {"tolerances", tolerances(c)}};
    if (c.timestamp) m["timestamp"] = static_cast<long long>(std::time(nullptr));
    return m;
}

std::string csv_header(const RunConfig& c) {
    const json m = meta(c);
    std::string h = "# nlsdbar " + std::string(NLSDBAR_VERSION) + "\n# command " + c.command + "\n# config_hash " +
                    c.hash() + "\n# tolerances " + m["tolerances"].dump() + "\n";
    if (c.timestamp) h += "# timestamp " + std::to_string(m["timestamp"].get<long long>()) + "\n";
    return h;
}

std::string json_file(const RunConfig& c, json body) {
    body["meta"] = meta(c);
    return body.dump(2) + "\n";
}

dbar::CorrectionOptions correction_options(const RunConfig& c) {
    dbar::CorrectionOptions o;
    o.phase.abs_tol = o.phase.rel_tol = c.tol;
    if (c.rule == "fast") {
        o.cutoff_inner = 4;
        o.cutoff_outer = 8;
        o.rule.radial_nodes = 5;
        o.rule.layer_nodes = 4;
        o.rule.bulk_nodes = 5;
        o.rule.tau_max = 30;
        o.rule.vertex_levels = 8;
        o.phase.abs_tol = o.phase.rel_tol = std::max(c.tol, 1e-9);
        o.norm_ratio = 1.3;
        o.norm_radial_nodes = 6;
    }
    return o;
}

ScatteringData scattering_for(const RunConfig& c) {
    if (!c.scattering.empty()) {
        std::ifstream in(c.scattering);
        std::stringstream ss;
        ss << in.rdbuf();
        return ScatteringData::from_json(ss.str());
    }
    ScatterOptions o;
    o.z_min = c.z_min;
    o.z_max = c.z_max;
    o.n = c.nz;
    return reflection_coefficient(load_potential(c.q0), o);
}

std::vector<double> window_z0(const RunConfig& c) {
    std::vector<double> z;
    const std::size_t n = c.window_points;
    for (std::size_t k = 0; k < n; ++k)
        z.push_back(n == 1 ? 0.0 : -c.window + 2.0 * c.window * static_cast<double>(k) / static_cast<double>(n - 1));
    return z;
}

std::vector<double> x_grid(const RunConfig& c) {
    std::vector<double> x;
    for (std::size_t k = 0; k < c.nx; ++k)
        x.push_back(c.nx == 1 ? c.x_min
                              : c.x_min + (c.x_max - c.x_min) * static_cast<double>(k) / static_cast<double>(c.nx - 1));
    return x;
}

std::string tname(double t) {
    char b[40];
    std::snprintf(b, sizeof b, "%g", t);
    return b;
}

std::vector<evolution::FieldSnapshot> evolve(const RunConfig& c, const Potential& q, bool require_clean) {
    evolution::SplitStepOptions so;
    so.n = c.n;
    so.half_width = c.half_width;
    auto snaps = evolution::split_step_nls(q, c.t, c.dt, so);
    if (require_clean)
        for (const auto& s : snaps)
            if (s.wrapped)
                throw NumericalError("evolution", "split_step_nls",
                                     "domain wrap-around at t = " + tname(s.t) + "; enlarge half_width");
    return snaps;
}

// --- commands ---------------------------------------------------------------

std::vector<OutputFile> cmd_scatter(const RunConfig& c, std::string& summary) {
    const ScatteringData sd = scattering_for(c);
    json rows = json::array();
    std::vector<std::string> r(c.window_points);
    const auto z0s = window_z0(c);
    parallel_for(z0s.size(), [&](std::size_t k) { r[k] = phase::to_json_row(phase::phase_data(z0s[k], sd)); });
    for (const auto& s : r) rows.push_back(json::parse(s));
    json body = json::parse(sd.to_json());
    summary = "sup|r| = " + num(sd.sup_r()) + " on [" + num(sd.support_min()) + ", " + num(sd.support_max()) + "]";
    return {{"scattering.csv", csv_header(c) + sd.to_csv()},
            {"scattering.json", json_file(c, body)},
            {"phase.json", json_file(c, json{{"rows", rows}})}};
}

std::vector<OutputFile> cmd_evolve(const RunConfig& c, std::string& summary) {
    const Potential q = load_potential(c.q0);
    const auto snaps = evolve(c, q, false);
    std::vector<OutputFile> out;
    for (const auto& s : snaps) {
        const std::string base = "field_t" + tname(s.t);
        out.push_back({base + ".csv", csv_header(c) + s.to_csv()});
        out.push_back({base + ".json", json_file(c, json::parse(s.sidecar_json()))});
        summary += "t = " + tname(s.t) + ": mass " + num(s.mass()) + (s.wrapped ? " (WRAPPED, do not trust)" : "") + "\n";
    }
    if (!summary.empty()) summary.pop_back();
    return out;
}

std::vector<OutputFile> cmd_asymptotic(const RunConfig& c, std::string& summary) {
    const ScatteringData sd = scattering_for(c);
    const auto xs = x_grid(c);
    const auto opt = correction_options(c);
    std::vector<std::string> lines(xs.size() * c.t.size());
    parallel_for(lines.size(), [&](std::size_t k) {
        const double t = c.t[k / xs.size()], x = xs[k % xs.size()];
        const cplx q0 = evolution::nls_leading(sd, x, t);
        std::string l = num(x) + "," + num(t) + "," + num(q0.real()) + "," + num(q0.imag());
        if (c.correction) {
            const dbar::CorrectionIntegrator ci(sd, -x / (4.0 * t), opt);
            const cplx q1 = ci.q1(t);
            l += "," + num(q1.real()) + "," + num(q1.imag()) + "," + num(ci.W_L1(t));
        }
        lines[k] = l + "\n";
    });
    std::string body = csv_header(c) + (c.correction ? "x,t,re_q0,im_q0,re_q1,im_q1,W_L1\n" : "x,t,re_q0,im_q0\n");
    for (const auto& l : lines) body += l;
    summary = std::to_string(lines.size()) + " points";
    return {{"asymptotic.csv", body}};
}

struct WindowErrors {
    std::vector<double> sup0, sup1;
    std::string csv;
};

WindowErrors nls_window(const RunConfig& c, const Potential& q, const ScatteringData& sd) {
    const auto snaps = evolve(c, q, true);
    const auto z0s = window_z0(c);
    const auto opt = correction_options(c);
    const std::size_t nt = c.t.size();
    std::vector<std::vector<std::string>> rows(z0s.size(), std::vector<std::string>(nt));
    std::vector<std::vector<double>> e0(z0s.size(), std::vector<double>(nt)), e1 = e0;
    parallel_for(z0s.size(), [&](std::size_t k) {
        const double z0 = z0s[k];
        const auto pd = phase::phase_data(z0, sd);
        std::unique_ptr<dbar::CorrectionIntegrator> ci;
        if (c.correction) ci = std::make_unique<dbar::CorrectionIntegrator>(sd, z0, opt);
        for (std::size_t i = 0; i < nt; ++i) {
            const double t = c.t[i], x = -4.0 * t * z0;
            const cplx qs = snaps[i].at(x), q0 = evolution::nls_leading(pd, x, t);
            e0[k][i] = std::abs(qs - q0);
            std::string l = num(t) + "," + num(z0) + "," + num(x) + "," + num(qs.real()) + "," + num(qs.imag()) + "," +
                            num(q0.real()) + "," + num(q0.imag()) + "," + num(e0[k][i]);
            if (ci) {
                const cplx q1 = ci->q1(t);
                e1[k][i] = std::abs(qs - q0 - q1);
                l += "," + num(q1.real()) + "," + num(q1.imag()) + "," + num(e1[k][i]);
            }
            rows[k][i] = l + "\n";
        }
    });
    WindowErrors w;
    w.sup0.assign(nt, 0.0);
    w.sup1.assign(nt, 0.0);
    w.csv = c.correction ? "t,z0,x,re_q,im_q,re_q0,im_q0,err0,re_q1,im_q1,err1\n"
                         : "t,z0,x,re_q,im_q,re_q0,im_q0,err0\n";
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t k = 0; k < z0s.size(); ++k) {
            w.sup0[i] = std::max(w.sup0[i], e0[k][i]);
            w.sup1[i] = std::max(w.sup1[i], e1[k][i]);
            w.csv += rows[k][i];
        }
    return w;
}

json fit_json(const std::vector<double>& t, const std::vector<double>& e) {
    std::vector<std::pair<double, double>> p;
    for (std::size_t i = 0; i < t.size(); ++i) p.emplace_back(t[i], e[i]);
    const auto f = evolution::decay_fit(p);
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

std::vector<OutputFile> cmd_compare(const RunConfig& c, std::string& summary) {
    const Potential q = load_potential(c.q0);
    const ScatteringData sd = scattering_for(c);
    const WindowErrors w = nls_window(c, q, sd);
    json per = json::array();
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        json e = {{"t", c.t[i]}, {"sup_err0", w.sup0[i]}};
        if (c.correction) e["sup_err1"] = w.sup1[i];
        per.push_back(e);
        summary += "t = " + tname(c.t[i]) + ": sup|q - q0| = " + num(w.sup0[i]) +
                   (c.correction ? ", sup|q - q0 - q1| = " + num(w.sup1[i]) : "") + "\n";
    }
    if (!summary.empty()) summary.pop_back();
    return {{"compare.csv", csv_header(c) + w.csv},
            {"compare.json", json_file(c, json{{"window", c.window}, {"points", c.window_points}, {"times", per}})}};
}

std::vector<OutputFile> cmd_decay(const RunConfig& c, std::string& summary) {
    const Potential q = load_potential(c.q0);
    std::vector<double> sup0, sup1;
    if (c.model == "linear") {
        const auto z0s = window_z0(c);
        for (double t : c.t) {
            std::vector<double> e(z0s.size());
            parallel_for(z0s.size(), [&](std::size_t k) {
                const double x = -4.0 * t * z0s[k];
                e[k] = std::abs(evolution::linear_exact(q, x, t) - evolution::linear_leading(q, x, t));
            });
            sup0.push_back(*std::max_element(e.begin(), e.end()));
        }
    } else {
        const WindowErrors w = nls_window(c, q, scattering_for(c));
        sup0 = w.sup0;
        sup1 = w.sup1;
    }
    const bool corr = c.model == "nls" && c.correction;
    std::string csv = csv_header(c) + (corr ? "t,sup_err,sup_err_corrected\n" : "t,sup_err\n");
    for (std::size_t i = 0; i < c.t.size(); ++i)
        csv += num(c.t[i]) + "," + num(sup0[i]) + (corr ? "," + num(sup1[i]) : "") + "\n";
    json rep = {{"model", c.model}, {"window", c.window}, {"points", c.window_points}, {"t", c.t},
                {"sup_err", sup0},  {"fit", fit_json(c.t, sup0)}};
    summary = "slope " + num(rep["fit"]["slope"].get<double>()) + " (r2 " + num(rep["fit"]["r2"].get<double>()) + ")";
    if (corr) {
        rep["sup_err_corrected"] = sup1;
        rep["fit_corrected"] = fit_json(c.t, sup1);
        summary += ", corrected slope " + num(rep["fit_corrected"]["slope"].get<double>());
    }
    return {{"decay.csv", csv}, {"decay.json", json_file(c, rep)}};
}

std::vector<OutputFile> cmd_pc_selftest(const RunConfig& c, std::string& summary) {
    std::string csv = csv_header(c) + "ray,radius,m,residual\n";
    double worst = 0.0;
    for (int ray = 1; ray <= 5; ++ray)
        for (double R : c.radii) {
            const double res = pc::jump_residual(ray, R, c.m);
            worst = std::max(worst, res);
            csv += std::to_string(ray) + "," + num(R) + "," + num(c.m) + "," + num(res) + "\n";
        }
    if (!(worst < c.selftest_tol))
        throw NumericalError("pc_parametrix", "jump_residual",
                             "max residual " + num(worst) + " exceeds " + num(c.selftest_tol));
    summary = "max jump residual " + num(worst);
    return {{"pc_selftest.csv", csv}};
}

std::vector<OutputFile> cmd_linear_demo(const RunConfig& c, std::string& summary) {
    const Potential q = load_potential(c.q0);
    const auto xs = x_grid(c);
    std::vector<std::string> lines(xs.size() * c.t.size());
    double worst = 0.0;
    std::vector<double> res(lines.size());
    parallel_for(lines.size(), [&](std::size_t k) {
        const double t = c.t[k / xs.size()], x = xs[k % xs.size()];
        const auto s = evolution::stokes_terms(q, x, t);
        res[k] = s.residual;
        lines[k] = num(t) + "," + num(x) + "," + num(s.exact.real()) + "," + num(s.exact.imag()) + "," +
                   num(s.diagonal.real()) + "," + num(s.diagonal.imag()) + "," + num(s.area.real()) + "," +
                   num(s.area.imag()) + "," + num(s.residual) + "\n";
    });
    for (double r : res) worst = std::max(worst, r);
    std::string body = csv_header(c) + "t,x,re_exact,im_exact,re_leading,im_leading,re_area,im_area,stokes_residual\n";
    for (const auto& l : lines) body += l;
    summary = "max Stokes residual " + num(worst);
    return {{"linear_demo.csv", body}};
}

}  // namespace

json RunConfig::to_json() const {
    return {{"command", command}, {"q0", q0},
            {"scattering", scattering}, {"z_min", z_min},
            {"z_max", z_max}, {"nz", nz},
            {"t", t}, {"dt", dt},
            {"n", n}, {"half_width", half_width},
            {"x_min", x_min}, {"x_max", x_max},
            {"nx", nx}, {"window", window},
            {"window_points", window_points}, {"m", m},
            {"radii", radii}, {"model", model},
            {"correction", correction}, {"rule", rule},
            {"tol", tol}, {"selftest_tol", selftest_tol},
            {"out", out}, {"timestamp", timestamp}};
}

std::string RunConfig::hash() const {
    json j = to_json();
    j.erase("out");  // where results go does not change them
    return fnv1a(j.dump());
}

RunConfig make_config(const std::string& command, const json& file, const json& flags) {
    RunConfig c;
    c.command = command;
    if (!file.is_null()) {
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        for (const auto& [k, v] : file.items()) apply(c, k, v);
    }
    for (const auto& [k, v] : flags.items()) apply(c, k, v);
    validate(c);
    return c;
}

Potential load_potential(const std::string& source) {
    if (is_builtin(source)) {
        const std::size_t open = source.find('(');
        const std::string name = source.substr(0, open);
        std::vector<double> args;
        if (open != std::string::npos) {
            if (source.back() != ')') throw ConfigError("q0: malformed builtin '" + source + "'");
            const std::string inner = source.substr(open + 1, source.size() - open - 2);
            if (!inner.empty()) args = parse_list(json(inner), "q0");
        }
        auto arg = [&](std::size_t i, double def) { return i < args.size() ? args[i] : def; };
        if (name == "gaussian") {
            if (args.size() > 2) throw ConfigError("q0: gaussian takes (A, sigma)");
            return Potential::gaussian(arg(0, 1.0), arg(1, 1.0));
        }
        if (name == "box") {
            if (args.size() > 2) throw ConfigError("q0: box takes (A, L)");
            return Potential::box(arg(0, 0.5), arg(1, 2.0));
        }
        if (args.size() > 1) throw ConfigError("q0: sech takes (A)");
        return Potential::sech(arg(0, 1.0));
    }
    std::ifstream in(source);
    if (!in) throw ConfigError("q0: cannot open '" + source + "'");
    std::vector<double> xs;
    std::vector<cplx> qs;
    double pinned_dx = 0.0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# dx ", 0) == 0) pinned_dx = std::stod(line.substr(5));
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-' && line[0] != '+' && line[0] != '.')
            continue;  // column header
        double v[3];
        std::stringstream ss(line);
        std::string cell;
        int k = 0;
        while (std::getline(ss, cell, ',') && k < 3) {
            try {
                v[k++] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("q0: bad number on line " + std::to_string(lineno));
            }
        }
        if (k != 3) throw ConfigError("q0: expected x,re_q,im_q on line " + std::to_string(lineno));
        xs.push_back(v[0]);
        qs.emplace_back(v[1], v[2]);
    }
    if (xs.size() < 2) throw ConfigError("q0: need at least two samples");
    const double dx = pinned_dx > 0.0 ? pinned_dx : (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(dx > 0.0)) throw ConfigError("q0: x must increase");
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (std::abs(xs[k] - (xs.front() + dx * static_cast<double>(k))) > 1e-6 * dx)
            throw ConfigError("q0: grid is not uniform near x = " + num(xs[k]));
    Potential p;
    p.x_min = xs.front();
    p.dx = dx;
    p.samples = std::move(qs);
    p.validate();
    return p;
}

std::string potential_csv(const Potential& q, const std::string& header) {
    std::string s = header + "# dx " + num(q.dx) + "\nx,re_q,im_q\n";
    for (std::size_t k = 0; k < q.size(); ++k)
        s += num(q.x(k)) + "," + num(q.samples[k].real()) + "," + num(q.samples[k].imag()) + "\n";
    return s;
}

std::vector<OutputFile> run(const RunConfig& c, std::string& summary) {
    if (c.command == "scatter") return cmd_scatter(c, summary);
    if (c.command == "evolve") return cmd_evolve(c, summary);
    if (c.command == "asymptotic") return cmd_asymptotic(c, summary);
    if (c.command == "compare") return cmd_compare(c, summary);
    if (c.command == "decay") return cmd_decay(c, summary);
    if (c.command == "pc-selftest") return cmd_pc_selftest(c, summary);
    if (c.command == "linear-demo") return cmd_linear_demo(c, summary);
    throw ConfigError("unknown command '" + c.command + "'");
}

void write_outputs(const RunConfig& c, const std::vector<OutputFile>& files) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw Error("cli", "write_outputs", "cannot create '" + c.out + "': " + ec.message());
    std::vector<std::pair<fs::path, fs::path>> staged;
    auto cleanup = [&] {
        for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
    };
    for (const auto& f : files) {
        const fs::path dst = fs::path(c.out) / f.name;
        const fs::path tmp = fs::path(c.out) / ("." + f.name + ".tmp" + std::to_string(::getpid()));
        std::ofstream o(tmp, std::ios::binary);
        o << f.content;
        o.close();
        staged.emplace_back(tmp, dst);
        if (!o) {
            cleanup();
            throw Error("cli", "write_outputs", "cannot write '" + tmp.string() + "'");
        }
    }
    for (const auto& [tmp, dst] : staged) {
        fs::rename(tmp, dst, ec);
        if (ec) {
            cleanup();
            throw Error("cli", "write_outputs", "cannot rename onto '" + dst.string() + "'");
        }
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Long-time asymptotics for the defocusing NLS equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", NLSDBAR_VERSION);

    struct Flag {
        const char* key;
        const char* help;
    };
    const std::vector<Flag> value_flags = {
        {"q0", "initial datum: gaussian(A,sigma), box(A,L), sech(A) or a CSV file"},
        {"scattering", "scattering JSON to use instead of q0"},
        {"z-min", "spectral grid start"},
        {"z-max", "spectral grid end"},
        {"nz", "spectral grid points"},
        {"t", "comma-separated strictly increasing times"},
        {"dt", "split-step time step"},
        {"n", "split-step grid size (power of two)"},
        {"half-width", "split-step periodic half width L"},
        {"x-min", "x grid start"},
        {"x-max", "x grid end"},
        {"nx", "x grid points"},
        {"window", "bound on |x/(4t)| for sup errors"},
        {"window-points", "sample count in the window"},
        {"m", "parametrix modulus"},
        {"radii", "comma-separated radii for pc-selftest"},
        {"model", "decay model: linear or nls"},
        {"rule", "q1 quadrature rule: default or fast"},
        {"tol", "phase quadrature tolerance"},
        {"selftest-tol", "pc-selftest pass threshold"},
        {"out", "output directory"},
    };
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
    std::map<std::string, bool> bools{{"correction", false}, {"timestamp", false}};
    std::map<std::string, CLI::Option*> bool_opts;
    std::string config_path;
    std::map<std::string, CLI::App*> subs;

    for (const auto& name : commands) {
        CLI::App* s = app.add_subcommand(name, "run " + name);
        subs[name] = s;
        s->add_option("--config", config_path, "JSON config file; keys mirror the flags");
        for (const auto& f : value_flags) {
            std::string key = f.key;
            opts[name + key] = s->add_option("--" + key, values[key], f.help);
        }
        bool_opts[name + "correction"] = s->add_flag("--correction", bools["correction"], "add the first correction q1");
        bool_opts[name + "timestamp"] = s->add_flag("--timestamp", bools["timestamp"], "stamp outputs with the time");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string command;
    for (const auto& [name, s] : subs)
        if (s->parsed()) command = name;

    try {
        json file;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
            try {
                file = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config file: ") + e.what());
            }
        }
        json flags = json::object();
        for (const auto& f : value_flags) {
            std::string key = f.key;
            if (opts[command + key]->count() == 0) continue;
            std::string jk = key;
            std::replace(jk.begin(), jk.end(), '-', '_');
            flags[jk] = values[key];
        }
        for (const auto& [k, v] : bools)
            if (bool_opts[command + k]->count() > 0) flags[k] = v;
        const RunConfig cfg = make_config(command, file, flags);
        std::string summary;
        const auto files = run(cfg, summary);
        write_outputs(cfg, files);
        if (!summary.empty()) std::cout << summary << "\n";
        for (const auto& f : files) std::cout << "wrote " << (fs::path(cfg.out) / f.name).string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: cli::" << command << ": " << e.what() << "\n";
        return 2;
    }
}

}  // namespace nlsdbar::cli
