#pragma once

// Fixed-point binarization of the embedded quadratic objective into a QUBO
// instance, decoding back to amplitudes, the Ising conversion, and the
// closed-form coefficient cross-check.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "paraqube/clock.hpp"
#include "paraqube/numerics.hpp"

namespace paraqube {

using Bits = std::vector<std::uint8_t>;

// R bits per real component on the uniform grid
// x = 2^D (sum_alpha 2^-alpha q^alpha - 1), covering [-2^D, 2^D(1 - 2^(1-R))].
struct FixedPointCode {
    std::size_t R = 2;
    int D = 0;

    double scale() const { return std::ldexp(1.0, D); }
    double min_value() const { return -scale(); }
    double max_value() const { return scale() * (1.0 - std::ldexp(1.0, 1 - static_cast<int>(R))); }
    double step() const { return scale() * std::ldexp(1.0, 1 - static_cast<int>(R)); }
};

// Bit index of component i, bit position alpha.
struct VariableLayout {
    std::size_t R = 2;
    std::size_t bit(std::size_t component, std::size_t alpha) const {
        return component * R + alpha;
    }
    std::size_t component_of(std::size_t bit) const { return bit / R; }
    std::size_t alpha_of(std::size_t bit) const { return bit % R; }
};

struct QuadTerm {
    std::size_t i;
    std::size_t j;
    double value;
};

inline constexpr std::size_t kMaxEncodeBits = std::size_t(1) << 20;

struct QuboInstance {
    std::size_t n_bits = 0;
    RealVector linear;               // one coefficient per bit
    std::vector<QuadTerm> quadratic; // strictly upper triangular (i < j), sorted
    double offset = 0.0;
    FixedPointCode code;
    // Provenance metadata carried into the file format.
    std::string system;
    std::size_t L = 0;
    std::size_t N = 0;

    VariableLayout variable_layout() const { return {code.R}; }
    ComponentLayout component_layout() const { return {L, N}; }
    std::size_t n_components() const { return n_bits / code.R; }
};

// Exact algebraic expansion of f(x(q)) with q^2 = q folding. Diagonal
// bilinear terms migrate into the linear coefficients; couplings are stored
// strictly upper triangular with the symmetric factor absorbed.
inline QuboInstance encode_qubo(const RealSymmetricSparse& a, const RealVector& phi,
                                const FixedPointCode& code) {
    detail::require(code.R >= 1, "encode_qubo: need at least one bit per component");
    detail::require(phi.size() == a.dim, "encode_qubo: dimension mismatch");
    detail::require(a.dim * code.R <= kMaxEncodeBits,
                    "encode_qubo: instance exceeds the configured bit budget");
    require_finite(phi, "encode_qubo");

    const std::size_t R = code.R;
    const double c = code.scale();
    const double c2 = c * c;

    QuboInstance inst;
    inst.code = code;
    inst.n_bits = a.dim * R;
    inst.linear.assign(inst.n_bits, 0.0);

    std::map<std::pair<std::size_t, std::size_t>, double> quad;
    auto add_quad = [&](std::size_t b1, std::size_t b2, double v) {
        if (b1 > b2) std::swap(b1, b2);
        quad[{b1, b2}] += v;
    };

    for (const auto& e : a.entries) {
        if (e.i == e.j) {
            const double w = e.value * c2;
            for (std::size_t al = 0; al < R; ++al) {
                inst.linear[e.i * R + al] +=
                    w * (0.5 * std::ldexp(1.0, -2 * static_cast<int>(al)) -
                         std::ldexp(1.0, -static_cast<int>(al)));
                for (std::size_t be = al + 1; be < R; ++be)
                    add_quad(e.i * R + al, e.i * R + be,
                             w * std::ldexp(1.0, -static_cast<int>(al + be)));
            }
            inst.offset += 0.5 * w;
        } else {
            const double w = e.value * c2;
            for (std::size_t al = 0; al < R; ++al) {
                const double pow_al = std::ldexp(1.0, -static_cast<int>(al));
                inst.linear[e.i * R + al] -= w * pow_al;
                inst.linear[e.j * R + al] -= w * pow_al;
                for (std::size_t be = 0; be < R; ++be)
                    add_quad(e.i * R + al, e.j * R + be,
                             w * std::ldexp(1.0, -static_cast<int>(al + be)));
            }
            inst.offset += w;
        }
    }
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] == 0.0) continue;
        for (std::size_t al = 0; al < R; ++al)
            inst.linear[i * R + al] -= phi[i] * c * std::ldexp(1.0, -static_cast<int>(al));
        inst.offset += phi[i] * c;
    }

    inst.quadratic.reserve(quad.size());
    for (const auto& [key, value] : quad)
        if (value != 0.0) inst.quadratic.push_back({key.first, key.second, value});
    return inst;
}

inline QuboInstance encode_qubo(const ClockSystem& sys, const FixedPointCode& code,
                                const std::string& system_id = "") {
    QuboInstance inst = encode_qubo(sys.a_real, sys.phi_real, code);
    inst.system = system_id;
    inst.L = sys.L;
    inst.N = sys.N;
    return inst;
}

struct DecodedSolution {
    RealVector x;
    HistoryState history;
};

inline RealVector decode_components(const Bits& bits, const FixedPointCode& code) {
    detail::require(bits.size() % code.R == 0, "decode_components: bit count not a multiple of R");
    const std::size_t n = bits.size() / code.R;
    RealVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t al = 0; al < code.R; ++al)
            if (bits[i * code.R + al])
                s += std::ldexp(1.0, -static_cast<int>(al));
        x[i] = code.scale() * (s - 1.0);
    }
    return x;
}

inline DecodedSolution decode_solution(const Bits& bits, const QuboInstance& inst) {
    detail::require(bits.size() == inst.n_bits, "decode_solution: bit count mismatch");
    DecodedSolution out;
    out.x = decode_components(bits, inst.code);
    if (inst.L > 0 && inst.N > 0)
        out.history = extract_history(inst.component_layout(), out.x);
    return out;
}

// Nearest grid point per component; ties round half away from zero on the
// level index, bijective on exact grid values.
inline Bits quantize_to_grid(const RealVector& x, const FixedPointCode& code) {
    const double levels = std::ldexp(1.0, static_cast<int>(code.R)) - 1.0;
    Bits bits(x.size() * code.R, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double level = std::round((x[i] / code.scale() + 1.0) *
                                  std::ldexp(1.0, static_cast<int>(code.R) - 1));
        level = std::min(std::max(level, 0.0), levels);
        const auto m = static_cast<std::uint64_t>(level);
        for (std::size_t al = 0; al < code.R; ++al)
            bits[i * code.R + al] =
                static_cast<std::uint8_t>((m >> (code.R - 1 - al)) & 1u);
    }
    return bits;
}

inline double qubo_energy(const QuboInstance& inst, const Bits& bits) {
    detail::require(bits.size() == inst.n_bits, "qubo_energy: bit count mismatch");
    double e = inst.offset;
    for (std::size_t b = 0; b < inst.n_bits; ++b)
        if (bits[b]) e += inst.linear[b];
    for (const auto& t : inst.quadratic)
        if (bits[t.i] && bits[t.j]) e += t.value;
    return e;
}

struct IsingInstance {
    std::size_t n_spins = 0;
    RealVector h;
    std::vector<QuadTerm> j;  // strictly upper triangular
    double offset = 0.0;
};

// Substitution q = (1 + s)/2; energies agree configuration by configuration.
inline IsingInstance to_ising(const QuboInstance& inst) {
    IsingInstance out;
    out.n_spins = inst.n_bits;
    out.h.assign(inst.n_bits, 0.0);
    out.offset = inst.offset;
    for (std::size_t b = 0; b < inst.n_bits; ++b) {
        out.h[b] += inst.linear[b] / 2.0;
        out.offset += inst.linear[b] / 2.0;
    }
    out.j.reserve(inst.quadratic.size());
    for (const auto& t : inst.quadratic) {
        out.j.push_back({t.i, t.j, t.value / 4.0});
        out.h[t.i] += t.value / 4.0;
        out.h[t.j] += t.value / 4.0;
        out.offset += t.value / 4.0;
    }
    return out;
}

inline double ising_energy(const IsingInstance& inst, const std::vector<int>& spins) {
    detail::require(spins.size() == inst.n_spins, "ising_energy: spin count mismatch");
    double e = inst.offset;
    for (std::size_t b = 0; b < inst.n_spins; ++b) e += inst.h[b] * spins[b];
    for (const auto& t : inst.j) e += t.value * spins[t.i] * spins[t.j];
    return e;
}

// Comparison of the expansion-derived coefficients against the closed forms
// b_ij^{ab} = A_ij 2^(1-a-b+2D), a_i^a = 2^(1-a+D)[A_ii - 2^D(sum_j A_ij - phi_i)],
// f0 = 2^D(2^(D-1) sum A + sum phi). The offset must agree exactly and every
// coupling must carry a uniform factor of two (the half-factor absorbed by
// the quadratic form); the closed-form linear terms are irreconcilable with
// the energy identity and are reported per index rather than trusted.
struct CoefficientCrossCheck {
    bool offset_matches = false;
    bool couplings_uniform_ratio = false;
    std::size_t linear_mismatches = 0;
    std::vector<std::string> notes;

    bool structural_ok() const { return offset_matches && couplings_uniform_ratio; }
};

inline CoefficientCrossCheck cross_check_printed_coefficients(const RealSymmetricSparse& a,
                                                              const RealVector& phi,
                                                              const FixedPointCode& code) {
    const QuboInstance inst = encode_qubo(a, phi, code);
    const std::size_t R = code.R;
    const int D = code.D;
    CoefficientCrossCheck check;

    // Dense symmetric completion for row sums and the total sum.
    std::vector<RealVector> dense(a.dim, RealVector(a.dim, 0.0));
    for (const auto& e : a.entries) {
        dense[e.i][e.j] += e.value;
        if (e.i != e.j) dense[e.j][e.i] += e.value;
    }
    double sum_a = 0.0;
    for (const auto& row : dense)
        for (double v : row) sum_a += v;
    double sum_phi = 0.0;
    for (double v : phi) sum_phi += v;

    const double printed_f0 =
        std::ldexp(1.0, D) * (std::ldexp(1.0, D - 1) * sum_a + sum_phi);
    check.offset_matches = std::abs(printed_f0 - inst.offset) <=
                           1e-12 * std::max(1.0, std::abs(inst.offset));
    if (!check.offset_matches)
        check.notes.push_back("offset: closed form " + std::to_string(printed_f0) +
                              " vs expansion " + std::to_string(inst.offset));

    check.couplings_uniform_ratio = true;
    const VariableLayout vars{R};
    for (const auto& t : inst.quadratic) {
        const std::size_t ci = vars.component_of(t.i);
        const std::size_t cj = vars.component_of(t.j);
        const int al = static_cast<int>(vars.alpha_of(t.i));
        const int be = static_cast<int>(vars.alpha_of(t.j));
        const double a_ij = dense[ci][cj];
        const double printed_b = a_ij * std::ldexp(1.0, 1 - al - be + 2 * D);
        if (std::abs(printed_b - 2.0 * t.value) > 1e-12 * std::max(1.0, std::abs(printed_b))) {
            check.couplings_uniform_ratio = false;
            check.notes.push_back("coupling (" + std::to_string(t.i) + "," +
                                  std::to_string(t.j) + "): closed form " +
                                  std::to_string(printed_b) + " vs 2x expansion " +
                                  std::to_string(2.0 * t.value));
        }
    }

    for (std::size_t i = 0; i < a.dim; ++i) {
        double row_sum = 0.0;
        for (double v : dense[i]) row_sum += v;
        for (std::size_t al = 0; al < R; ++al) {
            const double printed_a =
                std::ldexp(1.0, 1 - static_cast<int>(al) + D) *
                (dense[i][i] - std::ldexp(1.0, D) * (row_sum - phi[i]));
            const double expansion_a = inst.linear[i * R + al];
            if (std::abs(printed_a - expansion_a) > 1e-12 * std::max(1.0, std::abs(expansion_a))) {
                ++check.linear_mismatches;
                if (check.notes.size() < 64)
                    check.notes.push_back("linear (i=" + std::to_string(i) +
                                          ",alpha=" + std::to_string(al) + "): closed form " +
                                          std::to_string(printed_a) + " vs expansion " +
                                          std::to_string(expansion_a));
            }
        }
    }
    return check;
}

inline CoefficientCrossCheck cross_check_printed_coefficients(const ClockSystem& sys,
                                                              const FixedPointCode& code) {
    return cross_check_printed_coefficients(sys.a_real, sys.phi_real, code);
}

}  // namespace paraqube
