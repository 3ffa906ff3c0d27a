#include "wvsim/qcore.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace wvsim {

namespace {

void check_finite(const std::vector<Complex>& values) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("qcore: non-finite amplitude");
        }
    }
}

}  // namespace

StateVector::StateVector(std::vector<std::string> labels, std::vector<Complex> amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
    if (labels_.empty() || labels_.size() != amplitudes_.size()) {
        throw std::invalid_argument("StateVector: labels and amplitudes must be nonempty and equal-length");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument("StateVector: duplicate basis label '" + l + "'");
        }
    }
    check_finite(amplitudes_);
}

StateVector StateVector::basis_state(std::vector<std::string> labels, std::size_t index) {
    if (index >= labels.size()) {
        throw std::invalid_argument("StateVector::basis_state: index out of range");
    }
    std::vector<Complex> amps(labels.size(), Complex{0.0, 0.0});
    amps[index] = Complex{1.0, 0.0};
    return StateVector(std::move(labels), std::move(amps));
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
}

bool StateVector::is_normalized(double tol) const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::abs(sum - 1.0) <= tol;
}

bool StateVector::same_basis(const StateVector& other) const {
    return labels_ == other.labels_;
}

Operator::Operator(std::size_t dim_out, std::size_t dim_in, std::vector<Complex> row_major)
    : dim_out_(dim_out), dim_in_(dim_in), entries_(std::move(row_major)) {
    if (dim_out_ == 0 || dim_in_ == 0 || entries_.size() != dim_out_ * dim_in_) {
        throw std::invalid_argument("Operator: entry count must equal dim_out*dim_in");
    }
    check_finite(entries_);
}

Operator Operator::identity(std::size_t dim) {
    std::vector<Complex> e(dim * dim, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < dim; ++k) e[k * dim + k] = Complex{1.0, 0.0};
    return Operator(dim, dim, std::move(e));
}

Operator Operator::outer(const StateVector& ket, const StateVector& bra) {
    std::vector<Complex> e;
    e.reserve(ket.dim() * bra.dim());
    for (std::size_t r = 0; r < ket.dim(); ++r) {
        for (std::size_t c = 0; c < bra.dim(); ++c) {
            e.push_back(ket.amp(r) * std::conj(bra.amp(c)));
        }
    }
    return Operator(ket.dim(), bra.dim(), std::move(e));
}

Operator Operator::projector(const StateVector& s) {
    if (!s.is_normalized(kExactTol)) {
        throw std::invalid_argument("Operator::projector: state must be normalized");
    }
    return outer(s, s);
}

const Complex& Operator::entry(std::size_t row, std::size_t col) const {
    if (row >= dim_out_ || col >= dim_in_) {
        throw std::out_of_range("Operator::entry: index out of range");
    }
    return entries_[row * dim_in_ + col];
}

Operator Operator::dagger() const {
    std::vector<Complex> e(entries_.size());
    for (std::size_t r = 0; r < dim_out_; ++r) {
        for (std::size_t c = 0; c < dim_in_; ++c) {
            e[c * dim_out_ + r] = std::conj(entries_[r * dim_in_ + c]);
        }
    }
    return Operator(dim_in_, dim_out_, std::move(e));
}

bool Operator::is_unitary(double tol) const {
    if (dim_out_ != dim_in_) return false;
    return max_abs_diff(dagger() * (*this), identity(dim_in_)) <= tol;
}

bool Operator::is_projector(double tol) const {
    if (dim_out_ != dim_in_) return false;
    return max_abs_diff((*this) * (*this), *this) <= tol &&
           max_abs_diff(dagger(), *this) <= tol;
}

Operator Operator::operator+(const Operator& other) const {
    if (dim_out_ != other.dim_out_ || dim_in_ != other.dim_in_) {
        throw std::invalid_argument("Operator: shape mismatch in +");
    }
    std::vector<Complex> e(entries_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += other.entries_[k];
    return Operator(dim_out_, dim_in_, std::move(e));
}

Operator Operator::operator-(const Operator& other) const {
    if (dim_out_ != other.dim_out_ || dim_in_ != other.dim_in_) {
        throw std::invalid_argument("Operator: shape mismatch in -");
    }
    std::vector<Complex> e(entries_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= other.entries_[k];
    return Operator(dim_out_, dim_in_, std::move(e));
}

Operator Operator::operator*(const Operator& other) const {
    if (dim_in_ != other.dim_out_) {
        throw std::invalid_argument("Operator: shape mismatch in *");
    }
    std::vector<Complex> e(dim_out_ * other.dim_in_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim_out_; ++r) {
        for (std::size_t k = 0; k < dim_in_; ++k) {
            const Complex lhs = entries_[r * dim_in_ + k];
            if (lhs == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < other.dim_in_; ++c) {
                e[r * other.dim_in_ + c] += lhs * other.entries_[k * other.dim_in_ + c];
            }
        }
    }
    return Operator(dim_out_, other.dim_in_, std::move(e));
}

Operator operator*(const Complex& scalar, const Operator& op) {
    std::vector<Complex> e(op.entries_);
    for (auto& v : e) v *= scalar;
    return Operator(op.dim_out_, op.dim_in_, std::move(e));
}

double Operator::max_abs_diff(const Operator& a, const Operator& b) {
    if (a.dim_out_ != b.dim_out_ || a.dim_in_ != b.dim_in_) {
        throw std::invalid_argument("Operator::max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries_.size(); ++k) {
        m = std::max(m, std::abs(a.entries_[k] - b.entries_[k]));
    }
    return m;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<std::string> labels;
    std::vector<Complex> amps;
    labels.reserve(a.dim() * b.dim());
    amps.reserve(a.dim() * b.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        for (std::size_t k = 0; k < b.dim(); ++k) {
            labels.push_back(a.labels()[j] + "⊗" + b.labels()[k]);
            amps.push_back(a.amp(j) * b.amp(k));
        }
    }
    return StateVector(std::move(labels), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
    const std::size_t rows = a.dim_out() * b.dim_out();
    const std::size_t cols = a.dim_in() * b.dim_in();
    std::vector<Complex> e(rows * cols);
    for (std::size_t ra = 0; ra < a.dim_out(); ++ra) {
        for (std::size_t rb = 0; rb < b.dim_out(); ++rb) {
            for (std::size_t ca = 0; ca < a.dim_in(); ++ca) {
                for (std::size_t cb = 0; cb < b.dim_in(); ++cb) {
                    e[(ra * b.dim_out() + rb) * cols + (ca * b.dim_in() + cb)] =
                        a.entry(ra, ca) * b.entry(rb, cb);
                }
            }
        }
    }
    return Operator(rows, cols, std::move(e));
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim() || !a.same_basis(b)) {
        throw std::invalid_argument("inner: states live on different bases");
    }
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < a.dim(); ++k) {
        sum += std::conj(a.amp(k)) * b.amp(k);
    }
    return sum;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner(a, b));
}

StateVector apply(const Operator& op, const StateVector& s) {
    if (op.dim_out() != op.dim_in()) {
        throw std::invalid_argument("apply: non-square operator needs explicit output labels");
    }
    return apply(op, s, s.labels());
}

StateVector apply(const Operator& op, const StateVector& s, std::vector<std::string> out_labels) {
    if (op.dim_in() != s.dim()) {
        throw std::invalid_argument("apply: operator input dimension does not match state");
    }
    if (out_labels.size() != op.dim_out()) {
        throw std::invalid_argument("apply: output label count does not match operator");
    }
    std::vector<Complex> amps(op.dim_out(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < op.dim_out(); ++r) {
        for (std::size_t c = 0; c < op.dim_in(); ++c) {
            amps[r] += op.entry(r, c) * s.amp(c);
        }
    }
    return StateVector(std::move(out_labels), std::move(amps));
}

Normalized normalize(const StateVector& s) {
    const double n = s.norm();
    if (n == 0.0) {
        throw NullStateError("normalize: null state");
    }
    std::vector<Complex> amps(s.amplitudes());
    for (auto& a : amps) a /= n;
    return Normalized{StateVector(s.labels(), std::move(amps)), n};
}

}  // namespace wvsim
