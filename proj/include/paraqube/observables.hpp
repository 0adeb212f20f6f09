#pragma once

// Physical read-out from decoded samples: per-qubit magnetization and
// fidelity of reconstructed history slices against a reference evolution.

#include <vector>

#include "paraqube/models.hpp"
#include "paraqube/qubo.hpp"
#include "paraqube/solvers.hpp"

namespace paraqube {

namespace detail {

inline std::size_t log2_exact(std::size_t dim, const char* what) {
    require(dim >= 2 && (dim & (dim - 1)) == 0, what);
    std::size_t k = 0;
    while ((std::size_t(1) << k) < dim) ++k;
    return k;
}

}  // namespace detail

// |<a|b>|^2 normalized by both norms; invariant under rescaling either state.
inline double fidelity(const ComplexVector& a, const ComplexVector& b) {
    detail::require(a.size() == b.size(), "fidelity: dimension mismatch");
    double na = 0.0, nb = 0.0;
    Complex overlap(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
        overlap += std::conj(a[i]) * b[i];
    }
    detail::require(na > 0.0 && nb > 0.0, "fidelity: zero state");
    return std::norm(overlap) / (na * nb);
}

// Magnetization of one qubit in an unnormalized register state. Qubit 0 is
// the leftmost tensor factor, i.e. the most significant bit of the index.
inline double sigma_z_expectation(const ComplexVector& psi, std::size_t qubit) {
    const std::size_t k =
        detail::log2_exact(psi.size(), "sigma_z_expectation: dimension must be a power of two");
    detail::require(qubit < k, "sigma_z_expectation: qubit index out of range");
    double norm = 0.0, signed_sum = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        norm += w;
        signed_sum += ((i >> (k - 1 - qubit)) & 1u) ? -w : w;
    }
    detail::require(norm > 0.0, "sigma_z_expectation: zero state");
    return signed_sum / norm;
}

inline HistoryState history_from_sample(const Bits& bits, const QuboInstance& inst) {
    detail::require(inst.L > 0 && inst.N > 0,
                    "history_from_sample: instance carries no slice layout");
    return decode_solution(bits, inst).history;
}

// Record at the given position in the energy ordering (0 = lowest energy).
inline const SampleRecord& rank_record(const SampleSet& set, std::size_t rank) {
    detail::require(rank < set.records.size(), "rank_record: rank out of range");
    return set.records[rank];
}

struct ObservableRow {
    double t = 0.0;
    std::size_t qubit = 0;
    double sigma_z = 0.0;
    double fidelity = 0.0;
};

// One row per (time point, qubit); the fidelity column compares the whole
// slice against the reference and repeats across that slice's qubit rows.
inline std::vector<ObservableRow> observable_series(const HistoryState& history,
                                                    const TimeGrid& grid,
                                                    const std::vector<ComplexVector>& reference) {
    detail::require(history.slices.size() == grid.n_points,
                    "observable_series: history does not match the time grid");
    detail::require(reference.size() == history.slices.size(),
                    "observable_series: reference does not match the time grid");
    detail::require(!history.slices.empty(), "observable_series: empty history");
    const std::size_t k = detail::log2_exact(
        history.slices[0].size(), "observable_series: slice dimension must be a power of two");

    std::vector<ObservableRow> rows;
    rows.reserve(history.slices.size() * k);
    for (std::size_t n = 0; n < history.slices.size(); ++n) {
        const double fid = fidelity(history.slices[n], reference[n]);
        for (std::size_t q = 0; q < k; ++q)
            rows.push_back(
                {grid.point(n), q, sigma_z_expectation(history.slices[n], q), fid});
    }
    return rows;
}

}  // namespace paraqube
