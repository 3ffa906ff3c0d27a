// optics.hpp
// Jones calculus for half-wave plates and the two-path interferometer that
// turns a weak value into a rotation of linear polarization.
//
// Conventions:
//   - A half-wave plate at angle χ is the real Jones matrix
//     [[cos2χ, sin2χ], [sin2χ, −cos2χ]] (no global −i phase), so linear
//     polarization at angle a maps to 2χ−a.
//   - Linear-polarization directions are rays, reported in [0, π).
//   - Angles are radians everywhere in this API; degrees exist only at the
//     CLI boundary.
//   - On the Poincaré sphere every real-space angle here doubles.

#pragma once

#include <numbers>

#include "wvsim/qcore.hpp"

namespace wvsim {

// Polarization/path correlation strength g = cos²θ − sin²θ = cos2θ of a
// probe polarization cosθ|H> + sinθ|V>, with θ in [0, π/4] so that g ∈ [0,1].
// g = 1 is a strong (which-path) measurement, g → 0 a weak one.
class MeasurementStrength {
public:
    static MeasurementStrength from_g(double g);          // g in [0, 1]
    static MeasurementStrength from_theta(double theta);  // radians in [0, π/4]

    double g() const { return g_; }
    double theta() const { return theta_; }
    double sin_theta() const;  // √((1−g)/2)
    double cos_theta() const;  // √((1+g)/2)

private:
    MeasurementStrength(double g, double theta) : g_(g), theta_(theta) {}
    double g_;
    double theta_;
};

// Polarization rotation π/2 − 2θ picked up when the photon certainly passes
// the wave-plate arm; equals asin(g).
double delta_theta(const MeasurementStrength& strength);

// Half-wave plate at angle χ, on the {H, V} basis.
Operator hwp(double chi);

// Path-space beam splitter [[cosη, −sinη], [sinη, cosη]]; η = π/4 gives the
// 50/50 splitter whose first port carries (|A> − |B>)/√2.
Operator beam_splitter(double eta = std::numbers::pi / 4);

// (cos a)|H> + (sin a)|V>.
StateVector linear_polarization(double angle);

// Ray direction of a linearly polarized state, folded into [0, π).
// Rejects states that are not linear up to a global phase.
double polarization_angle(const StateVector& polarization);

// Path superposition (p_a, p_a − 1)/√(p_a² + (p_a−1)²) over {A, B}. Against
// the (|A> − |B>)/√2 postselection this pins the weak value of |A><A| to
// exactly p_a, for any real p_a.
StateVector preselection_from_weak_value(double p_a);

enum class Path { A, B };

struct InterferometerRun {
    double p_a;
    MeasurementStrength strength;
    Path hwp_path;
    double hwp_angle;
    StateVector output_polarization;  // normalized, {H, V}, linear
    double output_angle;              // ray direction in [0, π)
    double postselect_prob;           // in (0, 1]
};

// Closed-form pipeline: prepare the path superposition carrying linear
// polarization at θ, apply the wave plate on one arm, postselect the
// (|A> − |B>)/√2 port, renormalize.
InterferometerRun run_interferometer(double p_a, const MeasurementStrength& strength,
                                     Path hwp_path = Path::A,
                                     double hwp_angle = std::numbers::pi / 4);

// The same experiment evaluated as a full tensor-product state simulation
// (path ⊗ polarization, wave-plate unitary, beam splitter, port projection).
// Kept deliberately independent of run_interferometer so the two routes can
// check each other.
InterferometerRun simulate_interferometer(double p_a, const MeasurementStrength& strength,
                                          Path hwp_path = Path::A,
                                          double hwp_angle = std::numbers::pi / 4);

// Rotation of the output ray relative to the input direction θ, from the
// closed form; matches run_interferometer's output_angle − θ.
double shift_angle_exact(double p_a, const MeasurementStrength& strength);

// Small-g approximation p_a · g (radians).
double shift_angle_approx(double p_a, double g);

// Wave-plate angle that maps the run's output ray back onto target_theta:
// χ = (output_angle + target_theta)/2.
double restoration_hwp_angle(const InterferometerRun& run, double target_theta);

}  // namespace wvsim
