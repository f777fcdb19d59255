// Command-line front end: parameter sweeps to CSV, the built-in figure
// and table reproductions, closed-form-vs-oracle verification, and
// working-point lookups.

#include <fstream>
#include <iostream>
#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mzi/estimator.hpp"
#include "mzi/sweep.hpp"

namespace {

struct StateFlags {
    std::string kind = "single";
    double alpha = 1.0;
    double beta = 0.0;
    double theta_alpha = 0.0;
    double delta_theta = 0.0;
    double r = 0.0;
};

void add_state_flags(CLI::App* cmd, StateFlags& flags) {
    cmd->add_option("--state", flags.kind, "input state: single|double|squeezed")
        ->check(CLI::IsMember({"single", "double", "squeezed"}))
        ->capture_default_str();
    cmd->add_option("--alpha", flags.alpha, "coherent amplitude |alpha| (port 1)")
        ->capture_default_str();
    cmd->add_option("--beta", flags.beta,
                    "coherent amplitude |beta| (port 0, double state)")
        ->capture_default_str();
    cmd->add_option("--theta-alpha", flags.theta_alpha,
                    "phase of alpha in radians")
        ->capture_default_str();
    cmd->add_option("--delta-theta", flags.delta_theta,
                    "laser phase difference theta_alpha - theta_beta")
        ->capture_default_str();
    cmd->add_option("--r", flags.r, "squeeze magnitude (squeezed state)")
        ->capture_default_str();
}

mzi::InputState make_state(const StateFlags& flags) {
    using namespace mzi;
    if (flags.kind == "single") {
        return SingleCoherent{ComplexAmplitude(flags.alpha, flags.theta_alpha)};
    }
    if (flags.kind == "double") {
        return DoubleCoherent{
            ComplexAmplitude(flags.alpha, flags.theta_alpha),
            ComplexAmplitude(flags.beta,
                             flags.theta_alpha - flags.delta_theta)};
    }
    return CoherentSqueezedVacuum{
        ComplexAmplitude(flags.alpha, flags.theta_alpha),
        SqueezeParameter(flags.r, 0.0)};
}

mzi::DetectionScheme parse_scheme(const std::string& name) {
    using mzi::DetectionScheme;
    if (name == "diff") {
        return DetectionScheme::DifferenceIntensity;
    }
    if (name == "single") {
        return DetectionScheme::SingleModeIntensity;
    }
    if (name == "homodyne") {
        return DetectionScheme::HomodyneBound;
    }
    throw CLI::ValidationError("--scheme", "unknown scheme: " + name);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "stdout" || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mach-Zehnder interferometer phase-sensitivity toolkit"};
    app.require_subcommand(1);

    StateFlags state_flags;
    std::string out_path = "stdout";
    std::vector<std::string> scheme_names = {"diff", "single"};

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_state_flags(sweep_cmd, state_flags);
    std::string axis_kind = "phase";
    double phi_from = 0.01;
    double phi_to = 2.0 * M_PI - 0.01;
    double alpha_from = 1.0;
    double alpha_to = 10.0;
    int points = 1000;
    bool log_alpha = false;
    bool no_qcrb = false;
    double loss_sigma = -1.0;
    sweep_cmd->add_option("--scheme", scheme_names,
                          "detection schemes: diff|single|homodyne");
    sweep_cmd->add_option("--axis", axis_kind, "sweep axis: phase|alpha")
        ->check(CLI::IsMember({"phase", "alpha"}))
        ->capture_default_str();
    sweep_cmd->add_option("--phi-from", phi_from)->capture_default_str();
    sweep_cmd->add_option("--phi-to", phi_to)->capture_default_str();
    sweep_cmd->add_option("--points", points)->capture_default_str();
    sweep_cmd->add_option("--alpha-from", alpha_from)->capture_default_str();
    sweep_cmd->add_option("--alpha-to", alpha_to)->capture_default_str();
    sweep_cmd->add_flag("--log-alpha", log_alpha, "log-spaced amplitude axis");
    sweep_cmd->add_flag("--no-qcrb", no_qcrb, "omit the QCRB column");
    sweep_cmd->add_option("--loss-sigma", loss_sigma,
                          "add a lossy-bound column with this loss fraction");
    sweep_cmd->add_option("--out", out_path, "output file or 'stdout'")
        ->capture_default_str();
    std::string config_path;
    sweep_cmd->add_option("--config", config_path,
                          "flat key=value config file; flags override");

    // --- figure ---
    auto* figure_cmd =
        app.add_subcommand("figure", "emit a named preset sweep (fig3..fig7)");
    std::string figure_name;
    figure_cmd->add_option("name", figure_name, "preset name")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7"}));
    figure_cmd->add_option("--out", out_path, "output file or 'stdout'")
        ->capture_default_str();

    // --- table1 ---
    auto* table_cmd = app.add_subcommand(
        "table1", "summary of optima, best sensitivities and bounds");
    mzi::sweep::Table1Params table_params;
    table_cmd->add_option("--alpha", table_params.alpha)->capture_default_str();
    table_cmd->add_option("--power-ratio", table_params.power_ratio)
        ->capture_default_str();
    table_cmd->add_option("--delta-theta", table_params.delta_theta)
        ->capture_default_str();
    table_cmd->add_option("--r", table_params.r)->capture_default_str();
    table_cmd->add_option("--out", out_path, "output file or 'stdout'")
        ->capture_default_str();

    // --- verify ---
    auto* verify_cmd =
        app.add_subcommand("verify", "closed forms vs Fock-space oracle");
    std::string verify_scale = "quick";
    verify_cmd->add_option("scale", verify_scale, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));

    // --- optimum ---
    auto* optimum_cmd =
        app.add_subcommand("optimum", "working-point search for one setup");
    StateFlags optimum_state;
    add_state_flags(optimum_cmd, optimum_state);
    std::string optimum_scheme = "diff";
    std::string optimum_source = "analytic";
    double opt_from = std::numeric_limits<double>::quiet_NaN();
    double opt_to = std::numeric_limits<double>::quiet_NaN();
    optimum_cmd->add_option("--scheme", optimum_scheme, "diff|single")
        ->check(CLI::IsMember({"diff", "single"}))
        ->capture_default_str();
    optimum_cmd->add_option("--source", optimum_source, "analytic|oracle")
        ->check(CLI::IsMember({"analytic", "oracle"}))
        ->capture_default_str();
    optimum_cmd->add_option("--from", opt_from, "search interval start (radians)");
    optimum_cmd->add_option("--to", opt_to, "search interval end (radians)");

    // --- qcrb ---
    auto* qcrb_cmd =
        app.add_subcommand("qcrb", "quantum Cramer-Rao bound for one setup");
    StateFlags qcrb_state;
    add_state_flags(qcrb_cmd, qcrb_state);
    double qcrb_loss = -1.0;
    qcrb_cmd->add_option("--loss-sigma", qcrb_loss, "loss fraction in [0, 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; everything else is invalid input.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep_cmd->parsed()) {
            if (!config_path.empty()) {
                std::ifstream file(config_path);
                if (!file) {
                    throw std::invalid_argument("cannot read config file: " +
                                                config_path);
                }
                const auto as_bool = [](const std::string& v) {
                    return v == "true" || v == "1" || v == "yes";
                };
                // key -> setter; applied only when the matching flag was
                // not given on the command line (flags override the file).
                const std::map<std::string,
                               std::function<void(const std::string&)>>
                    setters = {
                        {"state", [&](const std::string& v) { state_flags.kind = v; }},
                        {"alpha", [&](const std::string& v) { state_flags.alpha = std::stod(v); }},
                        {"beta", [&](const std::string& v) { state_flags.beta = std::stod(v); }},
                        {"theta-alpha", [&](const std::string& v) { state_flags.theta_alpha = std::stod(v); }},
                        {"delta-theta", [&](const std::string& v) { state_flags.delta_theta = std::stod(v); }},
                        {"r", [&](const std::string& v) { state_flags.r = std::stod(v); }},
                        {"scheme", [&](const std::string& v) {
                             scheme_names.clear();
                             std::istringstream list(v);
                             std::string item;
                             while (std::getline(list, item, ',')) {
                                 scheme_names.push_back(item);
                             }
                         }},
                        {"axis", [&](const std::string& v) { axis_kind = v; }},
                        {"phi-from", [&](const std::string& v) { phi_from = std::stod(v); }},
                        {"phi-to", [&](const std::string& v) { phi_to = std::stod(v); }},
                        {"points", [&](const std::string& v) { points = std::stoi(v); }},
                        {"alpha-from", [&](const std::string& v) { alpha_from = std::stod(v); }},
                        {"alpha-to", [&](const std::string& v) { alpha_to = std::stod(v); }},
                        {"log-alpha", [&](const std::string& v) { log_alpha = as_bool(v); }},
                        {"no-qcrb", [&](const std::string& v) { no_qcrb = as_bool(v); }},
                        {"loss-sigma", [&](const std::string& v) { loss_sigma = std::stod(v); }},
                        {"out", [&](const std::string& v) { out_path = v; }},
                    };
                for (const auto& [raw_key, value] :
                     mzi::sweep::parse_config(file)) {
                    std::string key = raw_key;
                    std::replace(key.begin(), key.end(), '_', '-');
                    const auto setter = setters.find(key);
                    if (setter == setters.end()) {
                        throw std::invalid_argument("unknown config key: " +
                                                    raw_key);
                    }
                    if (sweep_cmd->count("--" + key) == 0) {
                        setter->second(value);
                    }
                }
            }
            mzi::sweep::SweepSpec spec;
            spec.state = make_state(state_flags);
            for (const auto& name : scheme_names) {
                spec.schemes.push_back(parse_scheme(name));
            }
            if (axis_kind == "phase") {
                spec.axis = mzi::sweep::PhaseAxis{phi_from, phi_to, points};
            } else {
                spec.axis =
                    mzi::sweep::AlphaAxis{alpha_from, alpha_to, points, log_alpha};
            }
            spec.include_qcrb = !no_qcrb;
            if (loss_sigma >= 0.0) {
                spec.loss = mzi::analytic::LossModel(loss_sigma);
            }
            write_output(out_path, mzi::sweep::run_sweep(spec).to_csv());
        } else if (figure_cmd->parsed()) {
            write_output(out_path, mzi::sweep::run_figure(figure_name).to_csv());
        } else if (table_cmd->parsed()) {
            write_output(out_path, mzi::sweep::run_table1(table_params).to_csv());
        } else if (verify_cmd->parsed()) {
            const auto report = mzi::sweep::run_verify(
                verify_scale == "full" ? mzi::sweep::VerifyScale::Full
                                       : mzi::sweep::VerifyScale::Quick);
            std::cout << report.to_text();
            if (!report.all_pass()) {
                return 2;
            }
        } else if (optimum_cmd->parsed()) {
            const auto state = make_state(optimum_state);
            const auto scheme = parse_scheme(optimum_scheme);
            const bool diff =
                scheme == mzi::DetectionScheme::DifferenceIntensity;
            // Canonical repo intervals: (0, pi) for difference detection,
            // (0, 2 pi) for single-mode detection.
            const double lo = std::isnan(opt_from) ? 0.0 : opt_from;
            const double hi =
                std::isnan(opt_to) ? (diff ? M_PI : 2.0 * M_PI) : opt_to;
            const auto result = mzi::estimator::find_optimum(
                state, scheme, {lo, hi},
                optimum_source == "oracle"
                    ? mzi::estimator::EvaluationSource::Oracle
                    : mzi::estimator::EvaluationSource::Analytic);
            std::cout << "phi_opt " << mzi::sweep::format_cell(result.phi_opt)
                      << "\ndelta_phi "
                      << mzi::sweep::format_cell(result.delta_phi_opt) << "\n";
            try {
                const double closed =
                    mzi::analytic::optimal_phase(state, scheme, 0);
                std::cout << "phi_opt_closed " << mzi::sweep::format_cell(closed)
                          << "\nagreement_gap "
                          << mzi::sweep::format_cell(
                                 result.agreement_gap.value_or(
                                     std::numeric_limits<double>::quiet_NaN()))
                          << "\n";
            } catch (const mzi::Error&) {
                std::cout << "phi_opt_closed unavailable\n";
            }
            std::cout << "qcrb "
                      << mzi::sweep::format_cell(mzi::analytic::qcrb(state))
                      << "\n";
        } else if (qcrb_cmd->parsed()) {
            const auto state = make_state(qcrb_state);
            std::cout << "qcrb "
                      << mzi::sweep::format_cell(mzi::analytic::qcrb(state))
                      << "\n";
            if (qcrb_loss >= 0.0) {
                std::cout << "qcrb_loss "
                          << mzi::sweep::format_cell(mzi::analytic::qcrb_with_loss(
                                 state, mzi::analytic::LossModel(qcrb_loss)))
                          << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
