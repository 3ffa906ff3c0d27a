// qcore.hpp
// Exact complex linear algebra over small labeled Hilbert spaces.
// States carry their basis labels so that distinct two-dimensional spaces
// (paths vs. polarizations) cannot be combined by accident.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wvsim {

using Complex = std::complex<double>;

// Comparison tolerance for exact algebraic identities.
inline constexpr double kExactTol = 1e-12;
// Looser tolerance for quantities chained through several operations.
inline constexpr double kPipelineTol = 1e-9;
// States (or pre/post overlaps) with norm at or below this are treated as
// annihilated rather than renormalized into noise.
inline constexpr double kOverlapCutoff = 1e-12;

// Thrown when a quantity is undefined because a state vector vanished:
// normalizing a zero vector, a postselection that annihilates the state,
// or a pre/post pair with vanishing overlap.
class NullStateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Finite-dimensional complex amplitude vector over a labeled basis.
// Not necessarily normalized; all entries are guaranteed finite.
class StateVector {
public:
    StateVector(std::vector<std::string> labels, std::vector<Complex> amplitudes);

    // Unit vector along basis direction `index`.
    static StateVector basis_state(std::vector<std::string> labels, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    const Complex& amp(std::size_t k) const { return amplitudes_.at(k); }

    double norm() const;
    bool is_normalized(double tol = kExactTol) const;
    bool same_basis(const StateVector& other) const;

private:
    std::vector<std::string> labels_;
    std::vector<Complex> amplitudes_;
};

// Dense complex matrix mapping a dim_in space into a dim_out space
// (projectors, wave-plate Jones matrices, beam-splitter unitaries).
class Operator {
public:
    Operator(std::size_t dim_out, std::size_t dim_in, std::vector<Complex> row_major);

    static Operator identity(std::size_t dim);
    // |ket><bra|
    static Operator outer(const StateVector& ket, const StateVector& bra);
    // |s><s| for normalized s.
    static Operator projector(const StateVector& s);

    std::size_t dim_out() const { return dim_out_; }
    std::size_t dim_in() const { return dim_in_; }
    const Complex& entry(std::size_t row, std::size_t col) const;

    Operator dagger() const;
    bool is_unitary(double tol = kExactTol) const;
    bool is_projector(double tol = kExactTol) const;

    Operator operator+(const Operator& other) const;
    Operator operator-(const Operator& other) const;
    Operator operator*(const Operator& other) const;
    friend Operator operator*(const Complex& scalar, const Operator& op);

    // Largest entrywise |difference| between two equal-shaped operators.
    static double max_abs_diff(const Operator& a, const Operator& b);

private:
    std::size_t dim_out_;
    std::size_t dim_in_;
    std::vector<Complex> entries_;  // row-major
};

// Tensor product. Labels combine as "<a>⊗<b>", a-index major.
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

// <a|b>. Requires identical bases.
Complex inner(const StateVector& a, const StateVector& b);

// |<a|b>|²: the global-phase-free way to compare physical states.
double fidelity(const StateVector& a, const StateVector& b);

// Matrix-vector product. The square overload keeps the input labels; maps
// between different spaces must name the output basis explicitly.
StateVector apply(const Operator& op, const StateVector& s);
StateVector apply(const Operator& op, const StateVector& s, std::vector<std::string> out_labels);

struct Normalized {
    StateVector state;
    double norm;  // Euclidean norm before rescaling
};

// Throws NullStateError on a zero vector (signals an undefined weak value
// or an annihilating postselection upstream).
Normalized normalize(const StateVector& s);

}  // namespace wvsim
