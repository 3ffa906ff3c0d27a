#include "wvsim/optics.hpp"

#include <cmath>

namespace wvsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
}

// Fold an arbitrary direction onto the ray representative in [0, π).
// Rays are lines, not arrows: a and a ± π describe the same polarization.
double fold_ray(double angle) {
    double a = std::fmod(angle, kPi);
    if (a < 0.0) a += kPi;
    if (a >= kPi) a -= kPi;  // fmod can land exactly on π after the shift
    return a;
}

const std::vector<std::string>& pol_labels() {
    static const std::vector<std::string> labels{"H", "V"};
    return labels;
}

const std::vector<std::string>& path_labels() {
    static const std::vector<std::string> labels{"A", "B"};
    return labels;
}

}  // namespace

MeasurementStrength MeasurementStrength::from_g(double g) {
    require_finite(g, "MeasurementStrength::from_g");
    if (g < 0.0 || g > 1.0) {
        throw std::out_of_range("MeasurementStrength::from_g: g must lie in [0, 1]");
    }
    return MeasurementStrength(g, 0.5 * std::acos(g));
}

MeasurementStrength MeasurementStrength::from_theta(double theta) {
    require_finite(theta, "MeasurementStrength::from_theta");
    if (theta < 0.0 || theta > kPi / 4) {
        throw std::out_of_range("MeasurementStrength::from_theta: theta must lie in [0, π/4]");
    }
    return MeasurementStrength(std::cos(2.0 * theta), theta);
}

double MeasurementStrength::sin_theta() const { return std::sqrt((1.0 - g_) / 2.0); }

double MeasurementStrength::cos_theta() const { return std::sqrt((1.0 + g_) / 2.0); }

double delta_theta(const MeasurementStrength& strength) {
    return std::asin(strength.g());
}

Operator hwp(double chi) {
    require_finite(chi, "hwp");
    const double c = std::cos(2.0 * chi);
    const double s = std::sin(2.0 * chi);
    return Operator(2, 2, {Complex{c, 0.0}, Complex{s, 0.0}, Complex{s, 0.0}, Complex{-c, 0.0}});
}

Operator beam_splitter(double eta) {
    require_finite(eta, "beam_splitter");
    const double c = std::cos(eta);
    const double s = std::sin(eta);
    return Operator(2, 2, {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0}, Complex{c, 0.0}});
}

StateVector linear_polarization(double angle) {
    require_finite(angle, "linear_polarization");
    return StateVector(pol_labels(), {Complex{std::cos(angle), 0.0}, Complex{std::sin(angle), 0.0}});
}

double polarization_angle(const StateVector& polarization) {
    if (polarization.dim() != 2 || !(polarization.labels() == pol_labels())) {
        throw std::invalid_argument("polarization_angle: expected a state over {H, V}");
    }
    const StateVector unit = normalize(polarization).state;
    const Complex h = unit.amp(0);
    const Complex v = unit.amp(1);
    // Strip the global phase of the dominant component, then insist the
    // remainder is real: anything else is elliptical, not a ray.
    const double phase = std::arg(std::abs(h) >= std::abs(v) ? h : v);
    const Complex rot = std::polar(1.0, -phase);
    const Complex hr = h * rot;
    const Complex vr = v * rot;
    if (std::abs(hr.imag()) > kPipelineTol || std::abs(vr.imag()) > kPipelineTol) {
        throw std::invalid_argument("polarization_angle: state is not linearly polarized");
    }
    return fold_ray(std::atan2(vr.real(), hr.real()));
}

StateVector preselection_from_weak_value(double p_a) {
    require_finite(p_a, "preselection_from_weak_value");
    const double scale = 1.0 / std::sqrt(p_a * p_a + (p_a - 1.0) * (p_a - 1.0));
    return StateVector(path_labels(),
                       {Complex{p_a * scale, 0.0}, Complex{(p_a - 1.0) * scale, 0.0}});
}

InterferometerRun run_interferometer(double p_a, const MeasurementStrength& strength,
                                     Path hwp_path, double hwp_angle) {
    require_finite(p_a, "run_interferometer");
    require_finite(hwp_angle, "run_interferometer");
    const double theta = strength.theta();
    const double plate_out = 2.0 * hwp_angle - theta;  // plate arm: a ↦ 2χ − a
    const double a_through = (hwp_path == Path::A) ? plate_out : theta;
    const double b_through = (hwp_path == Path::B) ? plate_out : theta;

    const StateVector pre = preselection_from_weak_value(p_a);
    const double wa = pre.amp(0).real();
    const double wb = pre.amp(1).real();
    // Project onto the (|A> − |B>)/√2 port.
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Complex out_h{(wa * std::cos(a_through) - wb * std::cos(b_through)) * inv_sqrt2, 0.0};
    const Complex out_v{(wa * std::sin(a_through) - wb * std::sin(b_through)) * inv_sqrt2, 0.0};

    StateVector raw(pol_labels(), {out_h, out_v});
    const double n = raw.norm();
    if (n < kOverlapCutoff) {
        throw NullStateError("run_interferometer: postselection annihilates the state");
    }
    Normalized unit = normalize(raw);
    const double angle = polarization_angle(unit.state);
    return InterferometerRun{p_a,   strength,         hwp_path, hwp_angle,
                             unit.state, angle, n * n};
}

InterferometerRun simulate_interferometer(double p_a, const MeasurementStrength& strength,
                                          Path hwp_path, double hwp_angle) {
    require_finite(p_a, "simulate_interferometer");
    require_finite(hwp_angle, "simulate_interferometer");

    const StateVector pre = preselection_from_weak_value(p_a);
    const StateVector pol = linear_polarization(strength.theta());
    const StateVector joint = tensor(pre, pol);

    const Operator proj_a = Operator::projector(StateVector::basis_state(path_labels(), 0));
    const Operator proj_b = Operator::projector(StateVector::basis_state(path_labels(), 1));
    const Operator eye2 = Operator::identity(2);
    const Operator plate = hwp(hwp_angle);
    const Operator plate_stage = (hwp_path == Path::A)
                                     ? tensor(proj_a, plate) + tensor(proj_b, eye2)
                                     : tensor(proj_a, eye2) + tensor(proj_b, plate);
    const Operator splitter_stage = tensor(beam_splitter(), eye2);

    const StateVector after = apply(splitter_stage, apply(plate_stage, joint));
    // Splitter row 0 is the (|A> − |B>)/√2 port, so the postselected
    // polarization lives on the A⊗{H,V} pair of the output.
    StateVector port(pol_labels(), {after.amp(0), after.amp(1)});
    const double n = port.norm();
    if (n < kOverlapCutoff) {
        throw NullStateError("simulate_interferometer: postselection annihilates the state");
    }
    Normalized unit = normalize(port);
    const double angle = polarization_angle(unit.state);
    return InterferometerRun{p_a,   strength,         hwp_path, hwp_angle,
                             unit.state, angle, n * n};
}

double shift_angle_exact(double p_a, const MeasurementStrength& strength) {
    require_finite(p_a, "shift_angle_exact");
    const double theta = strength.theta();
    const double q = p_a - 1.0;
    const double out_h = p_a * std::sin(theta) - q * std::cos(theta);
    const double out_v = p_a * std::cos(theta) - q * std::sin(theta);
    return fold_ray(std::atan2(out_v, out_h)) - theta;
}

double shift_angle_approx(double p_a, double g) {
    require_finite(p_a, "shift_angle_approx");
    require_finite(g, "shift_angle_approx");
    return p_a * g;
}

double restoration_hwp_angle(const InterferometerRun& run, double target_theta) {
    require_finite(target_theta, "restoration_hwp_angle");
    return 0.5 * (run.output_angle + target_theta);
}

}  // namespace wvsim
