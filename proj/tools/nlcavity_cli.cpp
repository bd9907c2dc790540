#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlcavity/analysis.hpp"
#include "nlcavity/entanglement.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/kinetics.hpp"
#include "nlcavity/lindblad.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out.good()) throw std::invalid_argument("failed while writing: " + path);
}

// Box and axis options default to 0, meaning "derive from gamma".
double resolve(double value, double factor, double gamma) {
    return value > 0.0 ? value : factor * gamma;
}

struct SteadyArgs {
    double gamma = 1.0, pump = 1.0, k = 1.0, eta = 1.0;
    bool uncorrected = false, numeric = false;
};

struct SweepArgs {
    double gamma = 1.0, eta = 1.0;
    double pi_min = 0.0, pi_max = 0.0, k_min = 0.0, k_max = 0.0;
    int pi_count = 200, k_count = 200;
    bool linear = false, serial = false;
    std::string format = "csv";
    std::string out;
};

struct ThresholdArgs {
    double gamma = 1.0, tol = 1e-3;
    double pi_min = 0.0, pi_max = 0.0, k_min = 0.0, k_max = 0.0;
};

struct EvolveArgs {
    double gamma = 1.0, pump = 1.0, k = 1.0, eta = 1.0;
    double p_g = 1.0, p_s1 = 0.0, p_s2 = 0.0, p_oprime2 = 0.0;
    double p_dark1 = 0.0, p_dark2 = 0.0;
    double t_final = 0.0, dt = 0.0, stop_below = 0.0;
    int stride = 1;
    bool uncorrected = false;
    std::string out;
};

struct CompareArgs {
    double gamma = 1.0, pump = 1.0, k = 1.0, eta = 1.0, g = 100.0;
    int fock_cutoff = 6;
};

void add_rates(CLI::App* cmd, double& gamma, double& pump, double& k, double& eta) {
    cmd->add_option("--gamma", gamma, "Spontaneous emission rate, the natural unit")
        ->capture_default_str();
    cmd->add_option("--pump", pump, "Pump rate")->capture_default_str();
    cmd->add_option("--k", k, "One-photon mirror transmission rate")
        ->capture_default_str();
    cmd->add_option("--eta", eta, "Mirror nonlinearity ratio K(2)/K(1)")
        ->capture_default_str();
}

int run_steady(const SteadyArgs& a) {
    if (a.uncorrected && !a.numeric)
        throw std::invalid_argument(
            "the closed form covers the corrected kinetics; combine "
            "--uncorrected with --numeric");
    nlcavity::SystemParams params{a.gamma, a.pump, a.k, a.eta};
    const nlcavity::ManifoldPopulations pops =
        a.numeric ? nlcavity::steady_state_numeric(
                        nlcavity::build_rate_matrix(params, !a.uncorrected))
                  : nlcavity::steady_state_closed_form(params);
    const auto conc = nlcavity::concurrence_closed_form(pops);

    std::cout << "method: " << (a.numeric ? "numeric null space" : "closed form")
              << (a.uncorrected ? ", uncorrected" : ", corrected") << "\n";
    if (!a.uncorrected) {
        const auto f = nlcavity::correction_factors(params);
        std::cout << "alpha: " << fmt(f.alpha) << "\n"
                  << "beta: " << fmt(f.beta) << "\n";
    }
    std::cout << "p_g: " << fmt(pops.p_g) << "\n"
              << "p_s1: " << fmt(pops.p_s1) << "\n"
              << "p_s2: " << fmt(pops.p_s2) << "\n"
              << "p_oprime2: " << fmt(pops.p_oprime2) << "\n"
              << "concurrence: " << fmt(conc.value) << "\n";
    return 0;
}

int run_sweep(const SweepArgs& a) {
    nlcavity::SweepSpec spec;
    spec.gamma = a.gamma;
    spec.eta = a.eta;
    spec.pump_range = {resolve(a.pi_min, 0.05, a.gamma),
                       resolve(a.pi_max, 20.0, a.gamma), a.pi_count, !a.linear};
    spec.k_range = {resolve(a.k_min, 0.05, a.gamma),
                    resolve(a.k_max, 20.0, a.gamma), a.k_count, !a.linear};
    const nlcavity::SweepResult result =
        a.serial ? nlcavity::sweep_serial(spec) : nlcavity::sweep(spec);
    const std::string table = nlcavity::emit_table(
        result,
        a.format == "json" ? nlcavity::TableFormat::json : nlcavity::TableFormat::csv);
    write_output(a.out, table);
    if (!a.out.empty()) {
        std::cout << "wrote " << a.pi_count << "x" << a.k_count << " grid to "
                  << a.out << "\n"
                  << "max concurrence: " << fmt(result.max_value) << " at pi="
                  << fmt(result.argmax_pi) << ", k=" << fmt(result.argmax_k) << "\n";
    }
    return 0;
}

int run_threshold(const ThresholdArgs& a) {
    nlcavity::SearchBounds box{
        resolve(a.pi_min, 0.05, a.gamma), resolve(a.pi_max, 10.0, a.gamma),
        resolve(a.k_min, 0.05, a.gamma), resolve(a.k_max, 10.0, a.gamma)};
    const nlcavity::ThresholdResult r = nlcavity::eta_threshold(a.gamma, box, a.tol);
    std::cout << "eta_star: " << fmt(r.eta_star) << "\n"
              << "pi: " << fmt(r.pi) << "\n"
              << "k: " << fmt(r.k) << "\n"
              << "c_max: " << fmt(r.c_max) << "\n";
    return 0;
}

int run_evolve(const EvolveArgs& a) {
    nlcavity::SystemParams params{a.gamma, a.pump, a.k, a.eta};
    nlcavity::ManifoldPopulations initial;
    initial.p_g = a.p_g;
    initial.p_s1 = a.p_s1;
    initial.p_s2 = a.p_s2;
    initial.p_oprime2 = a.p_oprime2;
    initial.p_dark1 = a.p_dark1;
    initial.p_dark2 = a.p_dark2;
    nlcavity::EvolveOptions opts;
    opts.record_stride = a.stride;
    opts.stop_below = a.stop_below;
    const nlcavity::Trajectory traj =
        nlcavity::evolve(nlcavity::build_rate_matrix(params, !a.uncorrected),
                         initial, a.t_final, a.dt, opts);

    std::string csv = "t,p_g,p_s1,p_s2,p_oprime2,p_dark1,p_dark2\n";
    csv.reserve(csv.size() + traj.times.size() * 140);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const auto& p = traj.states[i];
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i],
                      p.p_g, p.p_s1, p.p_s2, p.p_oprime2, p.p_dark1, p.p_dark2);
        csv += buf;
    }
    write_output(a.out, csv);
    if (!a.out.empty())
        std::cout << "wrote " << traj.times.size() << " samples to " << a.out << "\n";
    return 0;
}

int run_compare(const CompareArgs& a) {
    nlcavity::OracleParams params;
    params.g = a.g;
    params.fock_cutoff = a.fock_cutoff;
    params.system = nlcavity::SystemParams{a.gamma, a.pump, a.k, a.eta};
    const nlcavity::ComparisonReport rep = nlcavity::compare_with_rate_model(params);

    if (rep.validity_warning)
        std::cerr << "warning: coupling g is less than 10x the fastest incoherent "
                     "rate; the rate picture degrades in this regime\n";
    std::cout << "validity_ratio: " << fmt(rep.validity_ratio) << "\n"
              << "rate p_g: " << fmt(rep.rate_pops.p_g) << "\n"
              << "rate p_s1: " << fmt(rep.rate_pops.p_s1) << "\n"
              << "rate p_s2: " << fmt(rep.rate_pops.p_s2) << "\n"
              << "rate p_oprime2: " << fmt(rep.rate_pops.p_oprime2) << "\n"
              << "rate concurrence: " << fmt(rep.rate_concurrence) << "\n"
              << "oracle diag: " << fmt(rep.oracle_diag(0)) << " "
              << fmt(rep.oracle_diag(1)) << " " << fmt(rep.oracle_diag(2)) << " "
              << fmt(rep.oracle_diag(3)) << "\n"
              << "oracle concurrence: " << fmt(rep.oracle_concurrence) << "\n"
              << "cutoff pair: " << rep.cutoff_low << " " << rep.cutoff_high << "\n"
              << "cutoff concurrence diff: " << fmt(rep.cutoff_concurrence_diff)
              << "\n"
              << "cutoff element diff: " << fmt(rep.cutoff_element_diff) << "\n"
              << "assumptions:\n";
    for (const std::string& s : rep.assumptions) std::cout << "  - " << s << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Steady-state entanglement of two atoms in a coherently pumped cavity "
        "with a nonlinear output mirror"};
    app.footer("Exit codes: 0 success, 1 usage or argument error, 2 numerical failure.");
    app.set_config("--config", "", "Read options from a TOML/INI file");
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config,
                 "Print the effective configuration and exit");
    app.require_subcommand(0, 1);

    SteadyArgs s;
    CLI::App* steady = app.add_subcommand(
        "steady", "Steady-state populations and concurrence at one point");
    steady->configurable();
    add_rates(steady, s.gamma, s.pump, s.k, s.eta);
    steady->add_flag("--uncorrected", s.uncorrected,
                     "Drop the overflow correction factors");
    steady->add_flag("--numeric", s.numeric,
                     "Solve the null space numerically instead of the closed form");

    SweepArgs w;
    CLI::App* sw = app.add_subcommand(
        "sweep", "Concurrence over a pump x mirror grid, CSV or JSON");
    sw->configurable();
    sw->add_option("--gamma", w.gamma, "Spontaneous emission rate")
        ->capture_default_str();
    sw->add_option("--eta", w.eta, "Mirror nonlinearity ratio")->required();
    sw->add_option("--pi-min", w.pi_min, "Pump axis start (0 = 0.05*gamma)")
        ->capture_default_str();
    sw->add_option("--pi-max", w.pi_max, "Pump axis end (0 = 20*gamma)")
        ->capture_default_str();
    sw->add_option("--pi-count", w.pi_count, "Pump axis samples")
        ->capture_default_str();
    sw->add_option("--k-min", w.k_min, "Mirror axis start (0 = 0.05*gamma)")
        ->capture_default_str();
    sw->add_option("--k-max", w.k_max, "Mirror axis end (0 = 20*gamma)")
        ->capture_default_str();
    sw->add_option("--k-count", w.k_count, "Mirror axis samples")
        ->capture_default_str();
    sw->add_flag("--linear", w.linear, "Linear instead of geometric spacing");
    sw->add_flag("--serial", w.serial, "Use the serial reference kernel");
    sw->add_option("--format", w.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sw->add_option("--out", w.out, "Output file (default: stdout)");

    ThresholdArgs t;
    CLI::App* th = app.add_subcommand(
        "threshold", "Smallest nonlinearity with nonzero steady-state concurrence");
    th->configurable();
    th->add_option("--gamma", t.gamma, "Spontaneous emission rate")
        ->capture_default_str();
    th->add_option("--tol", t.tol, "Bisection tolerance on eta")
        ->capture_default_str();
    th->add_option("--pi-min", t.pi_min, "Search box pump start (0 = 0.05*gamma)")
        ->capture_default_str();
    th->add_option("--pi-max", t.pi_max, "Search box pump end (0 = 10*gamma)")
        ->capture_default_str();
    th->add_option("--k-min", t.k_min, "Search box mirror start (0 = 0.05*gamma)")
        ->capture_default_str();
    th->add_option("--k-max", t.k_max, "Search box mirror end (0 = 10*gamma)")
        ->capture_default_str();

    EvolveArgs e;
    CLI::App* ev = app.add_subcommand(
        "evolve", "Integrate the kinetics from a given initial distribution, CSV");
    ev->configurable();
    add_rates(ev, e.gamma, e.pump, e.k, e.eta);
    ev->add_option("--p-g", e.p_g, "Initial ground population")->capture_default_str();
    ev->add_option("--p-s1", e.p_s1, "Initial one-quantum symmetric population")
        ->capture_default_str();
    ev->add_option("--p-s2", e.p_s2, "Initial two-quanta symmetric population")
        ->capture_default_str();
    ev->add_option("--p-oprime2", e.p_oprime2, "Initial o' population")
        ->capture_default_str();
    ev->add_option("--p-dark1", e.p_dark1, "Initial n=1 dark population")
        ->capture_default_str();
    ev->add_option("--p-dark2", e.p_dark2, "Initial n=2 dark population")
        ->capture_default_str();
    ev->add_option("--t-final", e.t_final, "Integration horizon")->required();
    ev->add_option("--dt", e.dt, "Step size")->required();
    ev->add_option("--stride", e.stride, "Record every n-th step")
        ->capture_default_str();
    ev->add_option("--stop-below", e.stop_below,
                   "Stop once |dP/dt| falls below this (0 = never)")
        ->capture_default_str();
    ev->add_flag("--uncorrected", e.uncorrected,
                 "Drop the overflow correction factors");
    ev->add_option("--out", e.out, "Output file (default: stdout)");

    CompareArgs c;
    CLI::App* cmp = app.add_subcommand(
        "compare", "Cross-check the kinetics against the full master equation");
    cmp->configurable();
    add_rates(cmp, c.gamma, c.pump, c.k, c.eta);
    cmp->add_option("--g", c.g, "Atom-cavity coupling")->capture_default_str();
    cmp->add_option("--fock-cutoff", c.fock_cutoff, "Photon-number cutoff (>= 3)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    if (dump_config) {
        std::cout << app.config_to_str(true, true);
        return 0;
    }

    try {
        if (steady->parsed()) return run_steady(s);
        if (sw->parsed()) return run_sweep(w);
        if (th->parsed()) return run_threshold(t);
        if (ev->parsed()) return run_evolve(e);
        if (cmp->parsed()) return run_compare(c);
        std::cerr << app.help();
        return 1;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const nlcavity::NumericalError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
