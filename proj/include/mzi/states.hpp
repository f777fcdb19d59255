#pragma once

#include <string>
#include <variant>

#include "mzi/errors.hpp"

namespace mzi {

/// Wraps an angle (radians) into the principal range (-pi, pi].
double wrap_phase(double angle);

/// Coherent amplitude in polar form, |z| e^{i theta}.
///
/// The phase is wrapped to (-pi, pi] at construction so that every optimum
/// formula built on arctan branches sees one canonical representative.
class ComplexAmplitude {
  public:
    ComplexAmplitude() = default;  // vacuum amplitude
    ComplexAmplitude(double modulus, double phase);

    double modulus() const { return modulus_; }
    double phase() const { return phase_; }

  private:
    double modulus_ = 0.0;
    double phase_ = 0.0;
};

/// Squeeze parameter xi = r e^{i theta}, r >= 0, theta in (-pi, pi].
///
/// The closed forms in mzi::analytic are derived for theta == 0; nonzero
/// theta is accepted here and handled only by the Fock-space oracle.
class SqueezeParameter {
  public:
    SqueezeParameter() = default;  // no squeezing
    SqueezeParameter(double r, double theta);

    double r() const { return r_; }
    double theta() const { return theta_; }

  private:
    double r_ = 0.0;
    double theta_ = 0.0;
};

/// Coherent state |alpha> in port 1, port 0 kept dark (vacuum).
struct SingleCoherent {
    ComplexAmplitude alpha;
};

/// Coherent |alpha> in port 1 and coherent |beta> in port 0.
struct DoubleCoherent {
    ComplexAmplitude alpha;
    ComplexAmplitude beta;
};

/// Coherent |alpha> in port 1, squeezed vacuum in port 0.
struct CoherentSqueezedVacuum {
    ComplexAmplitude alpha;
    SqueezeParameter xi;
};

using InputState =
    std::variant<SingleCoherent, DoubleCoherent, CoherentSqueezedVacuum>;

/// Which observable is read out at the interferometer output.
/// HomodyneBound has no photon-counting moment path; it only supports the
/// bound-style sensitivity formulas.
enum class DetectionScheme {
    DifferenceIntensity,
    SingleModeIntensity,
    HomodyneBound,
};

/// Short stable identifier used in CSV columns and CLI flags.
std::string scheme_name(DetectionScheme scheme);

/// Power ratio |beta|/|alpha| of a double coherent input.
/// Throws DegenerateInput when |alpha| == 0.
double power_ratio(const DoubleCoherent& state);
double power_ratio(const InputState& state);

/// Mean total photon number of the input state.
double mean_photon_number(const InputState& state);

/// Phase difference theta_alpha - theta_beta of the two input lasers,
/// wrapped to (-pi, pi].
double relative_phase(const DoubleCoherent& state);
double relative_phase(const InputState& state);

/// One-line human-readable description, used in CSV metadata headers.
std::string describe(const InputState& state);

} // namespace mzi
