// jetcurv: curvature, flatness, gauge-identity and developing-map sweeps.

#include "jetcurv/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

void add_common(CLI::App* cmd, jetcurv::RunConfig& cfg, bool with_potential) {
    if (with_potential) {
        cmd->add_option("--potential", cfg.potential, "builtin:NAME or path to a JSON potential spec");
    }
    cmd->add_option("--n", cfg.n, "complex dimension for builtin potentials");
    cmd->add_option("--epsilon", cfg.epsilon, "perturbation size for perturbed_fs");
    cmd->add_option("--grid", cfg.grid, "min:max:count, or ';'-separated per real axis");
    cmd->add_option("--tol-flat", cfg.flat_tol, "flatness / FD residual tolerance");
    cmd->add_option("--tol-chsc", cfg.chsc_tol, "chsc residual tolerance");
    cmd->add_option("--transport-rtol", cfg.transport_rtol, "allowed Gram drift during transport");
    cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step");
    cmd->add_option("--seed", cfg.seed, "seed for random pullback parameters");
    cmd->add_option("--out", cfg.out, "output file (stdout when omitted)");
    cmd->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_form(CLI::App* cmd, jetcurv::RunConfig& cfg) {
    cmd->add_option_function<std::string>(
           "--form",
           [&cfg](const std::string& s) { cfg.form = s == "K" ? jetcurv::FormKind::K : jetcurv::FormKind::H; },
           "H or K (default depends on the potential)")
        ->check(CLI::IsMember({"H", "K"}));
}

std::vector<std::string> value_columns(const jetcurv::Report& r) {
    if (r.command == "develop" && !r.records.empty()) {
        return jetcurv::develop_csv_columns(static_cast<int>(r.records.front().z.size()));
    }
    std::vector<std::string> cols;
    if (!r.records.empty())
        for (const auto& [k, v] : r.records.front().values) cols.push_back(k);
    cols.push_back("residual");
    return cols;
}

void write_output(const jetcurv::RunConfig& cfg, jetcurv::Report report) {
    // CSV readers get the record residual as a plain column.
    std::string text;
    if (cfg.format == "csv") {
        for (auto& rec : report.records) rec.values["residual"] = rec.residual;
        text = jetcurv::emit_csv(report, value_columns(report));
    } else {
        text = jetcurv::emit_json(report) + "\n";
    }
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out);
    if (!out) throw jetcurv::Error(jetcurv::ErrorKind::Config, "cannot write " + cfg.out);
    out << text;
}

void print_verdict_matrix(const jetcurv::Report& report) {
    struct Cell {
        bool chsc_plus = true, chsc_minus = true, h_flat = true, k_flat = true;
        jetcurv::Verdict verdict = jetcurv::Verdict::Pass;
    };
    std::vector<std::string> order;
    std::map<std::string, Cell> cells;
    const double chsc_tol = report.config.value("chsc_tol", 1e-6);
    const double flat_tol = report.config.value("flat_tol", 1e-4);
    for (const auto& rec : report.records) {
        if (!cells.count(rec.label)) order.push_back(rec.label);
        Cell& c = cells[rec.label];
        c.chsc_plus = c.chsc_plus && rec.values.at("chsc_residual_plus2") < chsc_tol;
        c.chsc_minus = c.chsc_minus && rec.values.at("chsc_residual_minus2") < chsc_tol;
        c.h_flat = c.h_flat && rec.values.at("flatness_H") < flat_tol;
        c.k_flat = c.k_flat && rec.values.at("flatness_K") < flat_tol;
        c.verdict = jetcurv::combine(c.verdict, rec.verdict);
    }
    auto yn = [](bool b) { return b ? "yes" : "no "; };
    std::cerr << "potential          chsc+2 chsc-2 H-flat K-flat verdict\n";
    for (const auto& name : order) {
        const Cell& c = cells[name];
        std::fprintf(stderr, "%-18s %-6s %-6s %-6s %-6s %s\n", name.c_str(), yn(c.chsc_plus), yn(c.chsc_minus),
                     yn(c.h_flat), yn(c.k_flat), jetcurv::to_string(c.verdict));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jetcurv: jet-bundle curvature checks for Kahler potentials"};
    app.set_version_flag("--version", std::string(jetcurv::kToolVersion));
    app.require_subcommand(1);
    jetcurv::RunConfig cfg;

    auto* curvature = app.add_subcommand("curvature", "chsc residual and holomorphic sectional curvature");
    add_common(curvature, cfg, true);
    curvature->add_option_function<double>("--kappa", [&cfg](double k) { cfg.kappa = k; },
                                           "target curvature (default from the potential, else 2)");

    auto* flatness = app.add_subcommand("flatness", "Chern curvature of the H or K field");
    add_common(flatness, cfg, true);
    add_form(flatness, cfg);

    auto* claims = app.add_subcommand("claims", "gauge identities at grid points");
    add_common(claims, cfg, true);
    claims->add_flag("--no-normalize", [&cfg](std::int64_t) { cfg.normalize = false; },
                     "skip the gauge normalization (expected to fail)");

    auto* develop = app.add_subcommand("develop", "developing map to the model space");
    add_common(develop, cfg, true);
    add_form(develop, cfg);

    auto* verify = app.add_subcommand("verify-all", "equivalence matrix over the built-in registry");
    add_common(verify, cfg, false);
    verify->add_flag("--no-normalize", [&cfg](std::int64_t) { cfg.normalize = false; },
                     "skip the gauge normalization in the claims column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : jetcurv::kConfigErrorExit;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        const jetcurv::Report report = jetcurv::run_command(cfg);
        write_output(cfg, report);
        if (cfg.command == "verify-all") print_verdict_matrix(report);
        if (!report.message.empty()) std::cerr << "jetcurv: " << report.message << "\n";
        std::cerr << cfg.command << ": " << jetcurv::to_string(report.summary.verdict)
                  << " (max residual " << report.summary.max_residual << ", " << report.records.size()
                  << " records, " << report.summary.runtime_seconds << " s)\n";
        return jetcurv::exit_code(report.summary.verdict);
    } catch (const jetcurv::Error& e) {
        std::cerr << "jetcurv: " << e.what() << "\n";
        return e.kind() == jetcurv::ErrorKind::Config ? jetcurv::kConfigErrorExit : 1;
    } catch (const std::exception& e) {
        std::cerr << "jetcurv: " << e.what() << "\n";
        return 1;
    }
}
