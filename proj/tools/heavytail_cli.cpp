// Command-line front end. Links the shared C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heavytail/heavytail.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct Options {
    std::string command;
    double beta = 2.5;
    double eta = 0.05;
    double eta_min = 1e-3, eta_max = 1e-1;
    int points = 16;
    std::vector<double> epsilons;
    std::vector<double> ks;
    double t_final = 2.0;
    int grid = 0;
    int steps = 400;
    double tol = 0.0; // informational override recorded in the header
    std::string method = "connection";
    std::string out_path;
    std::string format = "csv";
    std::string config_path;
    int threads = 0;
    double lambda_im = 0.0;
};

[[noreturn]] void die_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitUsage);
}

void apply_config_file(Options& o, CLI::App& app) {
    // flat "key = value" lines; command-line flags override
    std::ifstream in(o.config_path);
    if (!in) die_usage("cannot open config file " + o.config_path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string t) {
            const auto a = t.find_first_not_of(" \t\r");
            const auto b = t.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto set_if = [&](const char* key, auto& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        std::istringstream ss(it->second);
        ss >> slot;
    };
    // flags that were explicitly given on the command line win; flags not
    // registered on this subcommand count as not given
    auto given = [&](const char* flag) {
        const CLI::Option* opt = app.get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (!given("--beta")) set_if("beta", o.beta);
    if (!given("--eta")) set_if("eta", o.eta);
    if (!given("--eta-min")) set_if("eta-min", o.eta_min);
    if (!given("--eta-max")) set_if("eta-max", o.eta_max);
    if (!given("--points")) set_if("points", o.points);
    if (!given("--t-final")) set_if("t-final", o.t_final);
    if (!given("--grid")) set_if("grid", o.grid);
    if (!given("--steps")) set_if("steps", o.steps);
    if (!given("--method")) set_if("method", o.method);
    if (!given("--format")) set_if("format", o.format);
    if (!given("--out")) set_if("out", o.out_path);
    if (!given("--tol")) set_if("tol", o.tol);
    if (!given("--epsilon") && kv.count("epsilon")) {
        o.epsilons.clear();
        std::istringstream ss(kv["epsilon"]);
        double x;
        while (ss >> x) o.epsilons.push_back(x);
    }
    if (!given("--k") && kv.count("k")) {
        o.ks.clear();
        std::istringstream ss(kv["k"]);
        double x;
        while (ss >> x) o.ks.push_back(x);
    }
}

std::string status_text(ht_status st) {
    std::string msg = ht_last_error();
    return "status " + std::to_string(int(st)) + (msg.empty() ? "" : ": " + msg);
}

struct Model {
    ht_model* ptr = nullptr;
    explicit Model(double beta) {
        if (ht_status st = ht_model_create(beta, 0.0, 0.0, &ptr); st != HT_OK)
            die_usage("invalid beta " + std::to_string(beta)
                      + " (admissible: (1,5) excluding 2, 3, 4); " + status_text(st));
    }
    ~Model() { ht_model_free(ptr); }
};

// Output sink: JSON header first, then CSV rows (the header is a '#' comment)
// or JSON-lines records. Deterministic: no timestamps.
class Sink {
public:
    Sink(const Options& o, json header) : fmt_(o.format) {
        header["version"] = ht_version();
        if (!o.out_path.empty()) {
            file_.open(o.out_path);
            if (!file_) die_usage("cannot open output file " + o.out_path);
            os_ = &file_;
        }
        if (os_) {
            if (fmt_ == "csv")
                *os_ << "# " << header.dump() << "\n";
            else
                *os_ << json{{"type", "header"}, {"header", header}}.dump() << "\n";
        }
    }
    void columns(const std::vector<std::string>& names) {
        names_ = names;
        if (os_ && fmt_ == "csv") {
            for (size_t i = 0; i < names.size(); ++i)
                *os_ << names[i] << (i + 1 < names.size() ? "," : "\n");
        }
    }
    void row(const std::vector<double>& vals, const std::vector<std::string>& tags = {}) {
        if (!os_) return;
        if (fmt_ == "csv") {
            char buf[32];
            for (size_t i = 0; i < vals.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", vals[i]);
                *os_ << buf << (i + 1 < vals.size() || !tags.empty() ? "," : "\n");
            }
            for (size_t i = 0; i < tags.size(); ++i)
                *os_ << tags[i] << (i + 1 < tags.size() ? "," : "\n");
        } else {
            json j{{"type", "record"}};
            size_t t = 0;
            for (size_t i = 0; i < names_.size(); ++i) {
                if (i < vals.size())
                    j[names_[i]] = vals[i];
                else if (t < tags.size())
                    j[names_[i]] = tags[t++];
            }
            *os_ << j.dump() << "\n";
        }
    }

private:
    std::string fmt_;
    std::ofstream file_;
    std::ostream* os_ = nullptr;
    std::vector<std::string> names_;
};

int cmd_kappa(const Options& o) {
    Model m(o.beta);
    double kappa = 0.0, dre = 0.0, dim = 0.0;
    if (ht_status st = ht_kappa_closed(o.beta, &kappa); st != HT_OK) die_usage(status_text(st));
    if (ht_status st = ht_d_zero_closed(o.beta, &dre, &dim); st != HT_OK) die_usage(status_text(st));
    const double identity = -2.0 * ht_model_c_beta_sq(m.ptr) * (o.beta + 1.0) * dre;
    std::printf("kappa(%g) = %.15g\n", o.beta, kappa);
    std::printf("d(0) = %.15g %+.15gi\n", dre, dim);
    std::printf("identity -2 C^2 (beta+1) Re d(0) = %.15g (rel gap %.2e)\n", identity,
                std::abs(identity - kappa) / kappa);
    Sink sink(o, {{"command", "kappa"}, {"beta", o.beta}});
    sink.columns({"beta", "kappa", "re_d0", "im_d0", "identity_gap"});
    sink.row({o.beta, kappa, dre, dim, std::abs(identity - kappa) / kappa});
    return 0;
}

int cmd_dzero(const Options& o) {
    Model m(o.beta);
    ht_connection* c = nullptr;
    if (ht_status st = ht_connection_build(m.ptr, 0.0, o.lambda_im, &c); st != HT_OK)
        die_usage(status_text(st));
    std::unique_ptr<ht_connection, decltype(&ht_connection_free)> guard(c, ht_connection_free);
    double re, im, cre, cim;
    ht_connection_d(c, &re, &im);
    ht_d_zero_closed(o.beta, &cre, &cim);
    const double rel = std::hypot(re - cre, im - cim) / std::hypot(cre, cim);
    double lemma = 0.0;
    ht_connection_lemma_integral(c, &lemma);
    const double lemma_target = (o.beta + 1.0) * cre;
    std::printf("extracted d(0) = %.12g %+.12gi\n", re, im);
    std::printf("closed    d(0) = %.12g %+.12gi   (rel gap %.3e)\n", cre, cim, rel);
    std::printf("ODE residual %.3e, contraction cutoff s0 = %.3f\n", ht_connection_residual(c),
                ht_connection_s0(c));
    std::printf("coefficient-lemma integral = %.10g vs (beta+1) Re d(0) = %.10g\n", lemma,
                lemma_target);
    Sink sink(o, {{"command", "dzero"}, {"beta", o.beta}});
    sink.columns({"beta", "re_d0", "im_d0", "re_d0_closed", "im_d0_closed", "rel_gap", "residual"});
    sink.row({o.beta, re, im, cre, cim, rel, ht_connection_residual(c)});
    return rel <= 1e-6 ? 0 : kExitValidation;
}

int cmd_eigen(const Options& o) {
    Model m(o.beta);
    const bool both = o.method == "both";
    std::vector<ht_method> methods;
    if (o.method == "connection" || both) methods.push_back(HT_METHOD_CONNECTION);
    if (o.method == "matrix" || both) methods.push_back(HT_METHOD_MATRIX);
    if (methods.empty()) die_usage("unknown method " + o.method);
    Sink sink(o, {{"command", "eigen"}, {"beta", o.beta}, {"eta", o.eta}, {"grid", o.grid}});
    sink.columns({"eta", "re_mu", "im_mu", "re_lambda", "im_lambda", "residual", "iterations",
                  "grid_mismatch", "method"});
    std::vector<ht_eigen_out> results;
    for (ht_method mm : methods) {
        ht_eigen_out r{};
        if (ht_status st = ht_solve_mu(m.ptr, o.eta, mm, 0.0, o.grid, &r); st != HT_OK)
            die_usage(status_text(st));
        std::printf("mu(%g) = %.12g %+.3ei  [%s] residual %.2e\n", o.eta, r.mu_re, r.mu_im,
                    mm == HT_METHOD_CONNECTION ? "connection" : "matrix", r.residual);
        sink.row({r.eta, r.mu_re, r.mu_im, r.lambda_re, r.lambda_im, r.residual,
                  double(r.iterations), r.grid_mismatch},
                 {mm == HT_METHOD_CONNECTION ? "connection" : "matrix"});
        results.push_back(r);
    }
    if (results.size() == 2) {
        const double gap = std::hypot(results[0].mu_re - results[1].mu_re,
                                      results[0].mu_im - results[1].mu_im)
                         / std::hypot(results[1].mu_re, results[1].mu_im);
        std::printf("cross-method relative gap = %.3e\n", gap);
        if (gap > (o.tol > 0 ? o.tol : 1e-4)) return kExitValidation;
    }
    return 0;
}

int cmd_sweep(const Options& o) {
    Model m(o.beta);
    const ht_method mm = o.method == "matrix" ? HT_METHOD_MATRIX : HT_METHOD_CONNECTION;
    std::vector<ht_eigen_out> rs(o.points);
    ht_fit_out fit{};
    if (ht_status st = ht_sweep(m.ptr, o.eta_min, o.eta_max, o.points, mm, o.threads,
                                rs.data(), &fit);
        st != HT_OK)
        die_usage(status_text(st));
    Sink sink(o, {{"command", "sweep"},
                  {"beta", o.beta},
                  {"eta_min", o.eta_min},
                  {"eta_max", o.eta_max},
                  {"points", o.points},
                  {"method", o.method}});
    sink.columns({"eta", "re_mu", "im_mu", "re_lambda", "im_lambda", "residual", "method"});
    for (const auto& r : rs) {
        std::printf("eta = %-12.6g  mu = %.10e\n", r.eta, r.mu_re);
        sink.row({r.eta, r.mu_re, r.mu_im, r.lambda_re, r.lambda_im, r.residual},
                 {o.method == "matrix" ? "matrix" : "connection"});
    }
    double kappa = 0.0;
    ht_kappa_closed(o.beta, &kappa);
    const double alpha = ht_model_alpha(m.ptr);
    std::printf("fit: exponent %.5f (alpha = %.5f), prefactor %.6g (kappa = %.6g), R^2 %.8f\n",
                fit.exponent, alpha, fit.prefactor, kappa, fit.r_squared);
    return 0;
}

int cmd_simulate(const Options& o) {
    Model m(o.beta);
    std::vector<double> eps = o.epsilons.empty() ? std::vector<double>{0.1, 0.05, 0.025}
                                                 : o.epsilons;
    std::vector<double> ks = o.ks.empty() ? std::vector<double>{1.0} : o.ks;
    Sink sink(o, {{"command", "simulate"},
                  {"beta", o.beta},
                  {"epsilon", eps},
                  {"k", ks},
                  {"t_final", o.t_final},
                  {"steps", o.steps},
                  {"grid", o.grid}});
    sink.columns({"epsilon", "k", "s", "re_rho", "im_rho", "re_fhat", "im_fhat", "re_ref",
                  "im_ref", "mass"});
    for (double k : ks) {
        for (double e : eps) {
            std::vector<ht_mode_sample> rows(o.steps + 1);
            double mu_re = 0.0, mu_im = 0.0;
            if (ht_status st = ht_evolve_mode(m.ptr, k, e, o.t_final, o.steps, o.grid,
                                              rows.data(), &mu_re, &mu_im);
                st != HT_OK)
                die_usage(status_text(st));
            double gap = 0.0;
            for (const auto& r : rows)
                gap = std::max(gap, std::hypot(r.rho_re - r.ref_re, r.rho_im - r.ref_im));
            std::printf("epsilon = %-8g k = %-6g mu(eta) = %.8e  sup-gap to fractional heat = %.4e\n",
                        e, k, mu_re, gap);
            for (const auto& r : rows)
                sink.row({e, k, r.s, r.rho_re, r.rho_im, r.fhat_re, r.fhat_im, r.ref_re,
                          r.ref_im, r.mass});
            (void)mu_im;
        }
    }
    return 0;
}

int cmd_verify(const Options& o) {
    Model m(o.beta);
    std::vector<ht_verify_record> recs(128);
    size_t written = 0, failed = 0;
    if (ht_status st = ht_verify(m.ptr, o.threads, recs.data(), recs.size(), &written, &failed);
        st != HT_OK)
        die_usage(status_text(st));
    Sink sink(o, {{"command", "verify"}, {"beta", o.beta}});
    sink.columns({"measured", "tolerance", "pass", "name"});
    for (size_t i = 0; i < written; ++i) {
        std::printf("[%s] %-46s measured %.3e  tol %.3e%s%s\n", recs[i].pass ? "PASS" : "FAIL",
                    recs[i].name, recs[i].measured, recs[i].tolerance,
                    recs[i].note[0] ? "  -- " : "", recs[i].note);
        sink.row({recs[i].measured, recs[i].tolerance, double(recs[i].pass)},
                 {recs[i].name});
    }
    std::printf("%zu checks, %zu failed\n", written, failed);
    return failed == 0 ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for the 1-d kinetic Fokker-Planck equation "
                 "with heavy-tail equilibria"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", o.config_path, "flat key = value config file");
        c->add_option("--beta", o.beta, "tail exponent in (1,5) \\ {2,3,4}");
        c->add_option("--out", o.out_path, "output file");
        c->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--tol", o.tol, "validation tolerance override");
        c->add_option("--threads", o.threads, "worker cap (HEAVYTAIL_THREADS also honored)");
        return c;
    };
    add_common(app.add_subcommand("kappa", "closed-form diffusion coefficient"));
    add_common(app.add_subcommand("dzero", "connection coefficient d(0): numeric vs closed form"));
    auto* eig = add_common(app.add_subcommand("eigen", "principal eigenvalue mu(eta)"));
    eig->add_option("--eta", o.eta, "Fourier-frequency parameter");
    eig->add_option("--method", o.method, "connection | matrix | both");
    eig->add_option("--grid", o.grid, "matrix grid size");
    auto* sw = add_common(app.add_subcommand("sweep", "geometric eta sweep + scaling fit"));
    sw->add_option("--eta-min", o.eta_min);
    sw->add_option("--eta-max", o.eta_max);
    sw->add_option("--points", o.points);
    sw->add_option("--method", o.method, "connection | matrix");
    auto* sim = add_common(app.add_subcommand("simulate", "per-mode semigroup evolution"));
    sim->add_option("--epsilon", o.epsilons, "mean free path values");
    sim->add_option("--k", o.ks, "Fourier frequencies");
    sim->add_option("--t-final", o.t_final, "macroscopic horizon");
    sim->add_option("--steps", o.steps, "time steps");
    sim->add_option("--grid", o.grid, "velocity grid size");
    add_common(app.add_subcommand("verify", "run the invariant suite"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::exit(app.exit(e) == 0 ? 0 : kExitUsage);
    }
    if (!o.config_path.empty()) apply_config_file(o, *app.get_subcommands().front());

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "kappa") return cmd_kappa(o);
        if (cmd == "dzero") return cmd_dzero(o);
        if (cmd == "eigen") return cmd_eigen(o);
        if (cmd == "sweep") return cmd_sweep(o);
        if (cmd == "simulate") return cmd_simulate(o);
        if (cmd == "verify") return cmd_verify(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
