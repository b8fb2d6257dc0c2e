// Command-line front end: evaluate kernels to files, run the verification
// suite, emit spectra and SVG plots. Exit codes: 0 ok, 1 verification
// failure, 2 invalid input, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <modcyl/config.hpp>
#include <modcyl/correlators.hpp>
#include <modcyl/io.hpp>
#include <modcyl/modular.hpp>
#include <modcyl/oracle.hpp>
#include <modcyl/resolvent.hpp>
#include <modcyl/svg.hpp>
#include <modcyl/verify.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace modcyl;

namespace {

struct CliOptions {
    std::string config_path;
    std::string preset;
    int grid_n = 0;
    std::string times;
    std::string out_dir;
    std::string formats;
};

RunConfig load_config(const CliOptions& opt) {
    RunConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw std::runtime_error("cannot read config: " + opt.config_path);
        json j = json::parse(in);
        cfg = parse_config(j);
    }
    // flags win over the config file
    if (!opt.preset.empty()) {
        cfg.preset = opt.preset;
        cfg.bc.clear();
    }
    if (opt.grid_n > 0) cfg.grid_n = opt.grid_n;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (!opt.times.empty()) {
        cfg.times.clear();
        std::stringstream ss(opt.times);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.times.push_back(std::stod(tok));
    }
    if (!opt.formats.empty()) {
        cfg.formats.clear();
        std::stringstream ss(opt.formats);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.formats.insert(tok);
    }
    return cfg;
}

int check_valid(const RunConfig& cfg) {
    auto diags = validate(cfg);
    if (diags.empty()) return 0;
    for (const auto& d : diags) std::cerr << "config error [" << d.field << "]: " << d.message << "\n";
    return 2;
}

json result_to_json(const CriterionResult& r) {
    return json{{"id", r.id},           {"name", r.name},   {"pass", r.pass},
                {"value", r.value},     {"threshold", r.threshold},
                {"detail", r.detail}};
}

// ---- kernel command -------------------------------------------------------

std::vector<KernelRow> evaluate_kernel_rows(const RunConfig& cfg) {
    const Geometry g = cfg.geometry();
    const StateParams st = cfg.state();
    std::vector<KernelRow> rows;
    const int n = std::min(cfg.grid_n, 96);  // plotting grid, not a solver grid
    auto grid = midpoint_grid(n, g);

    // two-point kernel parts
    SingularKernel1D tp = two_point_kernel(st, g, -g.ell, g.ell);
    for (double x : grid)
        for (double y : grid) {
            if (tp.smooth) {
                Mat2 m = tp.smooth(x, y);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        if (m(a, b) != complex(0.0))
                            rows.push_back({a + 1, b + 1, x, y, "smooth", m(a, b)});
            }
            for (const auto& term : tp.pv)
                if (x != y)
                    rows.push_back({term.a + 1, term.b + 1, x, y, "pv",
                                    term.prefactor(x, y) / g.sin_pl(x - y)});
        }
    for (double x : grid) {
        Mat2 m = tp.delta_diag(x);
        for (int a = 0; a < 2; ++a) rows.push_back({a + 1, a + 1, x, x, "delta", m(a, a)});
    }

    // modular Hamiltonian parts
    SingularKernel1D hk = hamiltonian_kernel(st, g);
    for (double x : grid) {
        Mat2 dp = hk.delta_prime(x, x);
        rows.push_back({1, 1, x, x, "delta_prime", dp(0, 0)});
        rows.push_back({2, 2, x, x, "delta_prime", dp(1, 1)});
        if (hk.delta_diag) {
            Mat2 dd = hk.delta_diag(x);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (dd(a, b) != complex(0.0))
                        rows.push_back({a + 1, b + 1, x, x, "delta", dd(a, b)});
        }
        if (hk.delta_mirror) {
            Mat2 dm = hk.delta_mirror(x);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (dm(a, b) != complex(0.0))
                        rows.push_back({a + 1, b + 1, x, -x, "mirror", dm(a, b)});
        }
    }
    for (const auto& term : hk.pv)
        for (double x : grid)
            for (double y : grid) {
                const double d = flow_coordinate_diff(term.sing.omega_x, x, term.sing.omega_y, y, g);
                if (std::abs(d) < 1e-8) continue;
                rows.push_back({term.a + 1, term.b + 1, x, y, "pv",
                                -term.prefactor(x, y) / std::sinh(term.sing.scale * d)});
            }

    // flow kernel structured parts at the configured times
    for (double t : cfg.times)
        for (double x : grid) {
            FlowKernelRecord rec = flow_kernel_eval(t, x, x, st, g);
            for (int a = 0; a < 2; ++a) {
                const double dir = a == 0 ? -t : t;
                const double ystar = flow_trajectory(x, dir, g);
                rows.push_back({a + 1, a + 1, x, ystar, "local",
                                complex(rec.local_weight[a], 0.0)});
            }
        }
    return rows;
}

int cmd_kernel(const RunConfig& cfg) {
    if (int rc = check_valid(cfg)) return rc;
    const auto rows = evaluate_kernel_rows(cfg);
    const fs::path dir = cfg.out_dir;
    try {
        if (cfg.formats.count("csv")) write_file_atomic(dir / "kernel.csv", kernel_rows_csv(rows));
        if (cfg.formats.count("json")) {
            json j;
            j["schema_version"] = 1;
            j["rows"] = json::array();
            for (const auto& r : rows)
                j["rows"].push_back({{"a", r.a},
                                     {"b", r.b},
                                     {"x", r.x},
                                     {"y", r.y},
                                     {"part", r.part},
                                     {"re", r.value.real()},
                                     {"im", r.value.imag()}});
            write_file_atomic(dir / "kernel.json", j.dump(1));
        }
        if (cfg.formats.count("svg")) {
            for (const std::string part : {"pv", "smooth"})
                write_file_atomic(dir / ("kernel_" + part + ".svg"),
                                  kernel_heatmap_svg(rows, part, "kernel"));
        }
    } catch (const std::exception& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

// ---- verify command -------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
    if (int rc = check_valid(cfg)) return rc;
    std::vector<CriterionResult> results = run_acceptance();
    bool all_pass = true;
    json report;
    report["schema_version"] = 1;
    report["criteria"] = json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << "  " << r.name
                  << "  value=" << format_double(r.value)
                  << " threshold=" << format_double(r.threshold) << "\n";
        report["criteria"].push_back(result_to_json(r));
        all_pass = all_pass && r.pass;
    }
    report["passed"] = all_pass;
    try {
        write_file_atomic(fs::path(cfg.out_dir) / "verify.json", report.dump(1));
    } catch (const std::exception& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    return all_pass ? 0 : 1;
}

// ---- spectrum command -----------------------------------------------------

int cmd_spectrum(const RunConfig& cfg) {
    if (int rc = check_valid(cfg)) return rc;
    const Geometry g = cfg.geometry();
    const StateParams st = cfg.state();
    try {
        DiscretizedOperator d = discretize_two_point(st, g, cfg.grid_n);
        SpectralDecomposition s = decompose(d);
        std::string csv = "index,lambda\n";
        for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
            csv += std::to_string(i) + "," + format_double(double(s.eigenvalues[i])) + "\n";
        write_file_atomic(fs::path(cfg.out_dir) / "spectrum.csv", csv);

        // analytic spectral density for a fixed probe pair
        auto probes = probe_spinors(g, 2, cfg.seed);
        std::string dens = "mu,re,im\n";
        for (int k = 1; k < 64; ++k) {
            const double mu = k / 64.0;
            complex v = spectral_density(mu, probes[0], probes[1], st, g);
            dens += format_double(mu) + "," + format_double(v.real()) + "," +
                    format_double(v.imag()) + "\n";
        }
        write_file_atomic(fs::path(cfg.out_dir) / "spectral_density.csv", dens);
        if (cfg.formats.count("svg")) {
            std::vector<int> idx(s.eigenvalues.size());
            std::vector<double> vals(s.eigenvalues.size());
            for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
                idx[i] = int(i) + 1;
                vals[i] = std::max(1e-18, double(s.eigenvalues[i]));
            }
            write_file_atomic(fs::path(cfg.out_dir) / "spectrum.svg",
                              convergence_svg(idx, vals, "eigenvalues"));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

// ---- plot command ---------------------------------------------------------

int cmd_plot(const std::vector<std::string>& inputs, const RunConfig& cfg) {
    try {
        for (const auto& path : inputs) {
            fs::path p = path;
            if (p.extension() == ".csv") {
                std::ifstream in(p);
                if (!in) {
                    std::cerr << "cannot read " << path << "\n";
                    return 3;
                }
                std::string header;
                std::getline(in, header);
                if (header.rfind("a,b,x,y,part", 0) != 0) {
                    std::cerr << "schema mismatch in " << path << "\n";
                    return 2;
                }
                std::vector<KernelRow> rows;
                std::string line;
                while (std::getline(in, line)) {
                    KernelRow r;
                    std::stringstream ss(line);
                    std::string tok;
                    std::getline(ss, tok, ',');
                    r.a = std::stoi(tok);
                    std::getline(ss, tok, ',');
                    r.b = std::stoi(tok);
                    std::getline(ss, tok, ',');
                    r.x = std::stod(tok);
                    std::getline(ss, tok, ',');
                    r.y = std::stod(tok);
                    std::getline(ss, r.part, ',');
                    std::getline(ss, tok, ',');
                    double re = std::stod(tok);
                    std::getline(ss, tok, ',');
                    r.value = complex(re, std::stod(tok));
                    rows.push_back(r);
                }
                for (const std::string part : {"pv", "smooth", "delta", "delta_prime", "mirror"}) {
                    bool present = false;
                    for (const auto& r : rows)
                        if (r.part == part) present = true;
                    if (!present) continue;  // omit empty layers
                    write_file_atomic(fs::path(cfg.out_dir) / (p.stem().string() + "_" + part + ".svg"),
                                      kernel_heatmap_svg(rows, part, p.stem().string()));
                }
            } else if (p.extension() == ".json") {
                std::ifstream in(p);
                if (!in) {
                    std::cerr << "cannot read " << path << "\n";
                    return 3;
                }
                json j = json::parse(in);
                if (!j.contains("criteria")) {
                    std::cerr << "schema mismatch in " << path << "\n";
                    return 2;
                }
                // convergence curves from the oracle criteria details
                std::vector<int> ns = {128, 256, 512};
                for (const auto& c : j["criteria"]) {
                    const std::string id = c["id"].get<std::string>();
                    if (id.rfind("4.", 0) != 0) continue;
                    std::stringstream ss(c["detail"].get<std::string>());
                    std::string tok;
                    std::vector<double> errs;
                    while (ss >> tok) {
                        try {
                            errs.push_back(std::stod(tok));
                        } catch (...) {
                        }
                        if (errs.size() == 3) break;
                    }
                    if (errs.size() == 3)
                        write_file_atomic(
                            fs::path(cfg.out_dir) / ("convergence_" + id + ".svg"),
                            convergence_svg(ns, errs, "oracle error, " + id));
                }
            } else {
                std::cerr << "unsupported input " << path << "\n";
                return 2;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modular flow and Hamiltonian kernels for massless fermions on a cylinder"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON config file");
        cmd->add_option("--preset", opt.preset, "state preset name");
        cmd->add_option("--N", opt.grid_n, "grid resolution per component");
        cmd->add_option("--t", opt.times, "comma-separated modular times");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--format", opt.formats, "comma-separated subset of csv,json,svg");
    };

    auto* kernel = app.add_subcommand("kernel", "evaluate kernel parts to files");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and spectral density");
    auto* plot = app.add_subcommand("plot", "render SVG plots from produced files");
    for (auto* cmd : {kernel, verify, spectrum, plot}) add_common(cmd);
    std::vector<std::string> plot_inputs;
    plot->add_option("inputs", plot_inputs, "files produced by kernel/verify");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        cfg = load_config(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (kernel->parsed()) return cmd_kernel(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (plot->parsed()) return cmd_plot(plot_inputs, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
