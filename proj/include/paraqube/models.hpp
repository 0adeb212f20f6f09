#pragma once

// Catalog of the eight benchmark generators, time-grid construction,
// short-time propagators, and the exact-evolution oracle the tests and the
// decode pipeline compare against.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "paraqube/numerics.hpp"

namespace paraqube {

enum class SystemId { H1, H2, H3, H4, H5, H6, H7, H8 };

inline std::string to_string(SystemId id) {
    switch (id) {
        case SystemId::H1: return "H1";
        case SystemId::H2: return "H2";
        case SystemId::H3: return "H3";
        case SystemId::H4: return "H4";
        case SystemId::H5: return "H5";
        case SystemId::H6: return "H6";
        case SystemId::H7: return "H7";
        case SystemId::H8: return "H8";
    }
    throw std::invalid_argument("to_string: unknown system id");
}

inline SystemId parse_system_id(const std::string& s) {
    for (int k = 0; k < 8; ++k) {
        const SystemId id = static_cast<SystemId>(k);
        if (to_string(id) == s) return id;
    }
    throw std::invalid_argument("parse_system_id: unknown system '" + s + "'");
}

// Parameters are used only by the non-Hermitian member of the catalog.
// b defaults to sqrt(1 + sin^2 alpha), which places its eigenvalues at
// exactly +-omega; |alpha| < pi/2 keeps the spectrum real.
struct SystemSpec {
    SystemId id = SystemId::H1;
    double omega = 1.0;
    double alpha = 0.3;
    std::optional<double> b;

    double coupling_b() const { return b ? *b : std::sqrt(1.0 + std::sin(alpha) * std::sin(alpha)); }
};

inline std::size_t system_dimension(SystemId id) {
    switch (id) {
        case SystemId::H1:
        case SystemId::H2:
        case SystemId::H3:
        case SystemId::H7: return 2;
        case SystemId::H4:
        case SystemId::H5:
        case SystemId::H8: return 4;
        case SystemId::H6: return 8;
    }
    throw std::invalid_argument("system_dimension: unknown system id");
}

namespace detail {

inline ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m.hermitian = true;
    return m;
}

inline ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    m.hermitian = true;
    return m;
}

inline ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    m.hermitian = true;
    return m;
}

}  // namespace detail

inline ComplexMatrix build_hamiltonian(const SystemSpec& spec) {
    using detail::sigma_x;
    using detail::sigma_y;
    using detail::sigma_z;
    const double pi = std::numbers::pi;
    const ComplexMatrix id2 = ComplexMatrix::identity(2);

    switch (spec.id) {
        case SystemId::H1:
            return Complex(pi / 2.0, 0.0) * sigma_y();
        case SystemId::H2:
            return Complex(pi / std::sqrt(2.0), 0.0) * (sigma_x() + sigma_z());
        case SystemId::H3:
            return Complex(pi, 0.0) *
                   (Complex(0.75, 0.0) * id2 + Complex(-0.25, 0.0) * sigma_y());
        case SystemId::H4:
            return Complex(pi / 4.0, 0.0) *
                   (kron(sigma_x(), sigma_x()) + kron(sigma_y(), sigma_y()));
        case SystemId::H5:
            return Complex(pi / 4.0, 0.0) *
                   (kron(sigma_x(), sigma_x()) - kron(sigma_y(), sigma_y()));
        case SystemId::H6:
            return Complex(pi / 8.0, 0.0) *
                   (kron(kron(sigma_x(), sigma_x()), sigma_x()) -
                    kron(kron(sigma_x(), sigma_y()), sigma_y()) -
                    kron(kron(sigma_y(), sigma_x()), sigma_y()) -
                    kron(kron(sigma_y(), sigma_y()), sigma_x()));
        case SystemId::H7: {
            detail::require(std::abs(spec.alpha) < pi / 2.0,
                            "build_hamiltonian: H7 requires |alpha| < pi/2");
            ComplexMatrix m = Complex(spec.omega * spec.coupling_b(), 0.0) * sigma_x() +
                              Complex(0.0, spec.omega * std::sin(spec.alpha)) * sigma_z();
            m.hermitian = false;
            return m;
        }
        case SystemId::H8:
            return Complex(pi / 4.0, 0.0) *
                   (kron(id2, sigma_y()) - kron(id2, sigma_z()) + kron(sigma_x(), sigma_x()) -
                    kron(sigma_y(), sigma_x()));
    }
    throw std::invalid_argument("build_hamiltonian: unknown system id");
}

// Uniform grid t_n = t0 + n dt, n = 0..n_points-1.
struct TimeGrid {
    double t0 = 0.0;
    double tf = 1.0;
    std::size_t n_points = 2;

    TimeGrid() = default;
    TimeGrid(double start, double final, std::size_t points)
        : t0(start), tf(final), n_points(points) {
        detail::require(points >= 1, "TimeGrid: need at least one point");
        detail::require(points == 1 || final > start, "TimeGrid: need tf > t0 for N >= 2");
    }

    double dt() const { return n_points >= 2 ? (tf - t0) / static_cast<double>(n_points - 1) : 0.0; }
    double point(std::size_t n) const { return t0 + static_cast<double>(n) * dt(); }
};

struct PropagatorSequence {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> steps;  // length n_points - 1
};

// First-order generator convention: d psi/dt = G psi with G = -iH, so each
// slice applies U_n = exp(-i H dt).
inline PropagatorSequence build_propagators(const ComplexMatrix& h, const TimeGrid& grid) {
    detail::require(h.square(), "build_propagators: generator must be square");
    detail::require(grid.n_points >= 2, "build_propagators: need at least two grid points");
    PropagatorSequence seq;
    seq.dim = h.rows;
    const ComplexMatrix u = matrix_exponential(Complex(0.0, -grid.dt()) * h);
    seq.steps.assign(grid.n_points - 1, u);
    return seq;
}

// Time-dependent variant: the callback supplies the generator G(t) directly
// (no -i factor applied here) and each slice uses U_n = exp(G(t_n) dt).
inline PropagatorSequence build_propagators(
    const std::function<ComplexMatrix(double)>& generator, std::size_t dim,
    const TimeGrid& grid) {
    detail::require(grid.n_points >= 2, "build_propagators: need at least two grid points");
    PropagatorSequence seq;
    seq.dim = dim;
    seq.steps.reserve(grid.n_points - 1);
    for (std::size_t n = 0; n + 1 < grid.n_points; ++n) {
        ComplexMatrix g = generator(grid.point(n));
        detail::require(g.rows == dim && g.cols == dim,
                        "build_propagators: generator dimension mismatch");
        seq.steps.push_back(matrix_exponential(Complex(grid.dt(), 0.0) * g));
    }
    return seq;
}

inline std::vector<ComplexVector> exact_evolution(const ComplexMatrix& h, const TimeGrid& grid,
                                                  const ComplexVector& psi0) {
    detail::require(h.square() && h.rows == psi0.size(),
                    "exact_evolution: dimension mismatch");
    detail::require(std::abs(norm2(psi0) - 1.0) < 1e-12,
                    "exact_evolution: initial state must be normalized");
    std::vector<ComplexVector> states;
    states.reserve(grid.n_points);
    states.push_back(psi0);
    if (grid.n_points >= 2) {
        const PropagatorSequence seq = build_propagators(h, grid);
        for (const ComplexMatrix& u : seq.steps) states.push_back(matvec(u, states.back()));
    }
    return states;
}

struct StateChoice {
    enum class Kind { basis, eigenstate };
    Kind kind = Kind::basis;
    std::size_t index = 0;
};

// Parses "basis:<i>" or "eigenstate:<k>".
inline StateChoice parse_state_choice(const std::string& s) {
    const auto colon = s.find(':');
    detail::require(colon != std::string::npos, "parse_state_choice: expected kind:index");
    const std::string kind = s.substr(0, colon);
    const std::string index = s.substr(colon + 1);
    detail::require(!index.empty() && index.find_first_not_of("0123456789") == std::string::npos,
                    "parse_state_choice: index must be a nonnegative integer");
    StateChoice choice;
    choice.index = static_cast<std::size_t>(std::stoull(index));
    if (kind == "basis")
        choice.kind = StateChoice::Kind::basis;
    else if (kind == "eigenstate")
        choice.kind = StateChoice::Kind::eigenstate;
    else
        throw std::invalid_argument("parse_state_choice: unknown kind '" + kind + "'");
    return choice;
}

// basis(i): computational basis vector. eigenstate(k): k-th ascending
// eigenvector of the (Hermitian) generator, phase fixed so the largest
// magnitude component is real positive.
inline ComplexVector initial_state(const SystemSpec& spec, const StateChoice& choice) {
    const std::size_t dim = system_dimension(spec.id);
    detail::require(choice.index < dim, "initial_state: index out of range");
    if (choice.kind == StateChoice::Kind::basis) {
        ComplexVector v(dim, 0.0);
        v[choice.index] = 1.0;
        return v;
    }
    detail::require(spec.id != SystemId::H7,
                    "initial_state: eigenstate selection requires a Hermitian generator");
    const Eigensystem es = eigensystem(build_hamiltonian(spec));
    ComplexVector v(dim);
    for (std::size_t r = 0; r < dim; ++r) v[r] = es.vectors(r, choice.index);
    detail::normalize_phase(v);
    return v;
}

}  // namespace paraqube
