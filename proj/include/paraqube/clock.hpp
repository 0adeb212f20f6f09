#pragma once

// Builds the clock operator whose kernel holds valid propagation histories,
// pins the initial condition to turn it into a definite linear system, and
// embeds the complex problem into the real quadratic objective
// f(x) = 1/2 x^T A x - x^T phi.

#include <cmath>
#include <vector>

#include "paraqube/models.hpp"
#include "paraqube/numerics.hpp"

namespace paraqube {

// Canonical ordering of the 2 L N real components:
// index = part * (L * N) + n * L + l, part 0 = real, part 1 = imaginary.
// This ordering is part of the instance file format contract.
struct ComponentLayout {
    std::size_t L = 0;
    std::size_t N = 0;

    std::size_t dim() const { return 2 * L * N; }

    std::size_t index(std::size_t part, std::size_t n, std::size_t l) const {
        return part * (L * N) + n * L + l;
    }

    struct Coords {
        std::size_t part;
        std::size_t n;
        std::size_t l;
    };

    Coords coords(std::size_t index) const {
        const std::size_t block = L * N;
        return {index / block, (index % block) / L, index % L};
    }
};

struct HistoryState {
    std::vector<ComplexVector> slices;  // one state per grid point
};

// Block-tridiagonal Hermitian operator over the slice chain: diagonal blocks
// w_n I with w_n = 1 at both temporal boundaries and 2 in the interior,
// off-diagonal blocks -U_n / -U_n^dagger. For unitary U_n the valid history
// chains span its kernel. An empty step list yields the zero operator.
inline ComplexMatrix build_clock_operator(const PropagatorSequence& props) {
    detail::require(props.dim >= 1, "build_clock_operator: propagator dimension must be set");
    const std::size_t L = props.dim;
    const std::size_t N = props.steps.size() + 1;
    ComplexMatrix c(L * N, L * N);
    for (std::size_t n = 0; n + 1 < N; ++n) {
        const ComplexMatrix& u = props.steps[n];
        detail::require(u.rows == L && u.cols == L,
                        "build_clock_operator: propagator dimension mismatch");
        for (std::size_t l = 0; l < L; ++l) {
            c(n * L + l, n * L + l) += 1.0;
            c((n + 1) * L + l, (n + 1) * L + l) += 1.0;
        }
        for (std::size_t r = 0; r < L; ++r)
            for (std::size_t s = 0; s < L; ++s) {
                c((n + 1) * L + r, n * L + s) -= u(r, s);
                c(n * L + s, (n + 1) * L + r) -= std::conj(u(r, s));
            }
    }
    c.hermitian = true;
    return c;
}

// Real embedding of the pinned system. A_real is the symmetric matrix
// [[Re A, -Im A], [Im A, Re A]] in component-layout order; phi_real embeds
// |t0> tensor psi0 and is nonzero only in the first slice of each part.
struct ClockSystem {
    std::size_t L = 0;
    std::size_t N = 0;
    RealSymmetricSparse a_real;
    RealVector phi_real;

    ComponentLayout layout() const { return {L, N}; }
};

inline RealVector embed_complex_vector(const ComponentLayout& layout,
                                       const ComplexVector& v) {
    detail::require(v.size() == layout.L * layout.N,
                    "embed_complex_vector: dimension mismatch");
    RealVector out(layout.dim(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = v[k].real();
        out[layout.L * layout.N + k] = v[k].imag();
    }
    return out;
}

inline RealVector embed_history(const ComponentLayout& layout, const HistoryState& history) {
    detail::require(history.slices.size() == layout.N,
                    "embed_history: slice count mismatch");
    ComplexVector flat(layout.L * layout.N);
    for (std::size_t n = 0; n < layout.N; ++n) {
        detail::require(history.slices[n].size() == layout.L,
                        "embed_history: slice dimension mismatch");
        for (std::size_t l = 0; l < layout.L; ++l) flat[n * layout.L + l] = history.slices[n][l];
    }
    return embed_complex_vector(layout, flat);
}

inline HistoryState extract_history(const ComponentLayout& layout, const RealVector& x) {
    detail::require(x.size() == layout.dim(), "extract_history: dimension mismatch");
    HistoryState history;
    history.slices.assign(layout.N, ComplexVector(layout.L));
    const std::size_t block = layout.L * layout.N;
    for (std::size_t n = 0; n < layout.N; ++n)
        for (std::size_t l = 0; l < layout.L; ++l)
            history.slices[n][l] = Complex(x[n * layout.L + l], x[block + n * layout.L + l]);
    return history;
}

// Pins the initial condition by adding the identity on the first slice, then
// embeds. The complex operator stays Hermitian, so the embedded matrix is
// symmetric and the imaginary part contributes antisymmetrically.
inline ClockSystem build_system(const ComplexMatrix& clock, const ComplexVector& psi0) {
    detail::require(clock.square(), "build_system: clock operator must be square");
    detail::require(psi0.size() >= 1 && clock.rows % psi0.size() == 0,
                    "build_system: dimension mismatch");
    detail::require(std::abs(norm2(psi0) - 1.0) < 1e-12,
                    "build_system: initial state must be normalized");
    detail::require(is_hermitian(clock), "build_system: clock operator must be Hermitian");

    const std::size_t L = psi0.size();
    const std::size_t M = clock.rows;
    const std::size_t N = M / L;

    ComplexMatrix pinned = clock;
    for (std::size_t l = 0; l < L; ++l) pinned(l, l) += 1.0;

    ClockSystem sys;
    sys.L = L;
    sys.N = N;
    sys.a_real = RealSymmetricSparse(2 * M);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i; j < M; ++j) {
            const Complex a = pinned(i, j);
            const double p = a.real();
            const double q = a.imag();
            if (p != 0.0) {
                sys.a_real.add(i, j, p);
                sys.a_real.add(M + i, M + j, p);
            }
            if (q != 0.0) {
                // Hermiticity makes diagonal imaginary parts vanish.
                sys.a_real.add(i, M + j, -q);
                sys.a_real.add(j, M + i, q);
            }
        }
    }
    sys.a_real.finalize();

    ComplexVector phi(M, 0.0);
    for (std::size_t l = 0; l < L; ++l) phi[l] = psi0[l];
    sys.phi_real = embed_complex_vector(sys.layout(), phi);
    return sys;
}

// Convenience chain: propagators -> clock operator -> embedded system.
inline ClockSystem make_clock_system(const ComplexMatrix& h, const TimeGrid& grid,
                                     const ComplexVector& psi0) {
    PropagatorSequence props;
    if (grid.n_points >= 2) {
        props = build_propagators(h, grid);
    } else {
        props.dim = psi0.size();
    }
    return build_system(build_clock_operator(props), psi0);
}

inline double quadratic_form(const ClockSystem& sys, const RealVector& x) {
    detail::require(x.size() == sys.a_real.dim, "quadratic_form: dimension mismatch");
    double linear = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) linear += x[k] * sys.phi_real[k];
    return 0.5 * sys.a_real.quadratic(x) - linear;
}

struct ContinuousMinimizer {
    RealVector x;
    HistoryState history;
};

// Unconstrained minimizer of the quadratic objective. For unitary chains the
// embedded matrix is positive definite and the minimizer is the exact
// history; solver breakdown for non-positive-definite systems propagates.
inline ContinuousMinimizer continuous_minimizer(const ClockSystem& sys) {
    ContinuousMinimizer out;
    out.x = solve_spd(sys.a_real, sys.phi_real);
    out.history = extract_history(sys.layout(), out.x);
    return out;
}

}  // namespace paraqube
