#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mzi/analytic.hpp"
#include "mzi/states.hpp"

namespace mzi::sweep {

/// Version string embedded in CSV metadata. No timestamps anywhere, so
/// output stays byte-stable across runs.
inline constexpr const char* kToolVersion = "1.0.0";

/// Phase sweep at fixed input parameters: one row per working point phi.
struct PhaseAxis {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

/// Amplitude sweep: one row per coherent amplitude |alpha|, each curve
/// evaluated at its own optimal working point. Double coherent inputs
/// hold the power ratio and relative phase fixed while |alpha| varies.
struct AlphaAxis {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_scale = false;
};

using SweepAxis = std::variant<PhaseAxis, AlphaAxis>;

struct SweepSpec {
    InputState state;
    std::vector<DetectionScheme> schemes;
    SweepAxis axis;
    bool include_qcrb = true;
    std::optional<analytic::LossModel> loss;
    std::string preset;  // set for the named figure presets
};

/// CSV-shaped result: '#'-prefixed metadata comments, a header row and
/// pre-rendered cells (doubles formatted with %.15g, +inf as "inf").
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

/// Renders a double the way Table cells do.
std::string format_cell(double value);

Table run_sweep(const SweepSpec& spec);

/// Named built-in sweeps fig3..fig7 with pinned parameter values.
SweepSpec figure_preset(const std::string& name);
Table run_figure(const std::string& name);

/// Parameter set for the summary table; defaults follow the standard
/// working example.
struct Table1Params {
    double alpha = 1e4;
    double power_ratio = 0.5;
    double delta_theta = 0.0;
    double r = 2.3;
};

/// Per input state and scheme: QCRB, closed-form optimum and best
/// sensitivity, the numerically refined optimum, their gap, and the
/// alternative textbook variants of the squeezed single-mode optimum and
/// the double-coherent QCRB for side-by-side comparison.
Table run_table1(const Table1Params& params = {});

enum class VerifyScale { Quick, Full };

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double max_error = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
    std::string to_text() const;
};

/// Cross-validates the closed forms against the Fock-space oracle on the
/// small-parameter grid: three-path moment equivalence, photon-number
/// conservation, unitarity, the coherent-output structure of the double
/// coherent input, and the r->0 / ratio->0 reductions.
VerifyReport run_verify(VerifyScale scale);

/// Flat key=value config file ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_config(std::istream& in);

} // namespace mzi::sweep
