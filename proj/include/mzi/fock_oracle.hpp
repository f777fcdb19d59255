#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "mzi/analytic.hpp"
#include "mzi/states.hpp"

namespace mzi::fock {

/// How the two-mode Fock basis is cut off.
class TruncationPolicy {
  public:
    /// Per-mode cutoff n_max; prepare() rejects it when the resulting norm
    /// deficit exceeds 1e-6.
    static TruncationPolicy fixed(int n_max);

    /// Grow the per-mode cutoff until the total norm deficit is below
    /// target; target must lie in (0, 1e-6].
    static TruncationPolicy adaptive(double target_norm_deficit = 1e-10);

    bool is_adaptive() const { return adaptive_; }
    int n_max() const { return n_max_; }
    double target_norm_deficit() const { return target_; }

  private:
    TruncationPolicy() = default;
    bool adaptive_ = true;
    int n_max_ = 0;
    double target_ = 1e-10;
};

/// Dense two-mode Fock state on the square grid 0 <= n0, n1 <= n_max,
/// amplitude(n0, n1) stored row-major. Mode 0 is input port 0 and output
/// port 4; mode 1 is input port 1 and output port 5.
///
/// States produced by prepare() populate only total-photon sectors
/// N = n0 + n1 <= n_max, which apply_mzi rotates exactly; the truncation
/// error lives entirely in the recorded norm deficit.
class FockState {
  public:
    FockState(std::vector<std::complex<double>> amplitudes, int n_max,
              double norm_deficit);

    int n_max() const { return n_max_; }
    double norm_deficit() const { return norm_deficit_; }

    std::complex<double> amplitude(int n0, int n1) const {
        return amplitudes_[static_cast<std::size_t>(n0) *
                               (static_cast<std::size_t>(n_max_) + 1) +
                           static_cast<std::size_t>(n1)];
    }
    const std::vector<std::complex<double>>& amplitudes() const {
        return amplitudes_;
    }

    double norm_squared() const;

  private:
    std::vector<std::complex<double>> amplitudes_;
    int n_max_;
    double norm_deficit_;
};

/// Builds the truncated two-mode product state for the given input.
/// Adaptive truncation is guarded to desk scale: |alpha|, |beta| <= 6 and
/// r <= 1.2. Any squeeze phase theta is supported here.
FockState prepare(const InputState& state,
                  const TruncationPolicy& policy = TruncationPolicy::adaptive());

/// Applies the interferometer unitary whose Heisenberg action on the
/// creation operators is
///   a4+ = -sin(phi/2) a0+ + cos(phi/2) a1+
///   a5+ =  cos(phi/2) a0+ + sin(phi/2) a1+
/// realised block-by-block on each total-photon sector, so photon number
/// is conserved exactly and the map is unitary on the populated sectors.
FockState apply_mzi(const FockState& state, double phi);

/// Mean and variance of N_d = n4 - n5 or N_4 = n4 over the output
/// distribution of an already-transformed state.
std::pair<double, double> output_mean_variance(const FockState& output,
                                               DetectionScheme scheme);

/// Mean photon number n0 + n1 of a stored state (input or output basis).
double total_photon_mean(const FockState& state);

/// Brute-force moment set for a prepared input state: transforms at phi
/// and phi +/- fd_step and reads the observable off the output
/// distribution; the derivative is the central finite difference.
analytic::MomentSet observable_moments(const FockState& input, double phi,
                                       DetectionScheme scheme,
                                       double fd_step = 1e-5);

/// Third, independent moment path: evaluates the normally ordered
/// input-side expectation values (<a0+ a0+ a0 a0>, <a0^2 (a1+)^2>, ...)
/// directly on the truncated input modes and combines them with the exact
/// trigonometric coefficients of the expanded observable.
analytic::MomentSet normal_ordered_moments(
    const InputState& state, double phi, DetectionScheme scheme,
    const TruncationPolicy& policy = TruncationPolicy::adaptive());

} // namespace mzi::fock
