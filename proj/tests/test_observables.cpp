#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "paraqube/observables.hpp"

using namespace paraqube;

namespace {

ClockSystem make_sys(SystemId id, std::size_t n_points) {
    SystemSpec spec;
    spec.id = id;
    const ComplexMatrix h = build_hamiltonian(spec);
    TimeGrid grid{0.0, 1.0, n_points};
    ComplexVector psi0(h.rows, Complex(0.0, 0.0));
    psi0[0] = Complex(1.0, 0.0);
    return make_clock_system(h, grid, psi0);
}

}  // namespace

TEST_CASE("fidelity is one for identical and zero for orthogonal states") {
    const ComplexVector a = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const ComplexVector b = {Complex(0.0, 0.0), Complex(1.0, 0.0)};
    CHECK(fidelity(a, a) == Catch::Approx(1.0).margin(1e-15));
    CHECK(fidelity(a, b) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("fidelity ignores normalization and global phase") {
    const ComplexVector a = {Complex(0.6, 0.0), Complex(0.0, 0.8)};
    ComplexVector scaled(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) scaled[i] = Complex(-2.0, 1.5) * a[i];
    CHECK(fidelity(a, scaled) == Catch::Approx(1.0).margin(1e-12));

    const ComplexVector c = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    CHECK(fidelity(a, c) == Catch::Approx(std::norm(Complex(0.6, 0.8)) / 2.0).margin(1e-12));
}

TEST_CASE("fidelity rejects mismatched or zero inputs") {
    const ComplexVector a = {Complex(1.0, 0.0)};
    const ComplexVector zero = {Complex(0.0, 0.0)};
    CHECK_THROWS_AS(fidelity(a, ComplexVector(2)), std::invalid_argument);
    CHECK_THROWS_AS(fidelity(a, zero), std::invalid_argument);
}

TEST_CASE("magnetization of computational basis states") {
    ComplexVector psi(4, Complex(0.0, 0.0));
    psi[1] = Complex(1.0, 0.0);  // |01>: qubit 0 up, qubit 1 down
    CHECK(sigma_z_expectation(psi, 0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(sigma_z_expectation(psi, 1) == Catch::Approx(-1.0).margin(1e-15));
}

TEST_CASE("magnetization of an equal superposition vanishes") {
    const ComplexVector psi = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
    CHECK(sigma_z_expectation(psi, 0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("magnetization is scale invariant") {
    const ComplexVector psi = {Complex(0.3, 0.1), Complex(-0.2, 0.7)};
    ComplexVector scaled(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) scaled[i] = 5.0 * psi[i];
    CHECK(sigma_z_expectation(psi, 0) ==
          Catch::Approx(sigma_z_expectation(scaled, 0)).margin(1e-14));
}

TEST_CASE("magnetization rejects invalid inputs") {
    CHECK_THROWS_AS(sigma_z_expectation(ComplexVector(3, Complex(1.0, 0.0)), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sigma_z_expectation(ComplexVector(4, Complex(0.0, 0.0)), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sigma_z_expectation(ComplexVector(4, Complex(1.0, 0.0)), 2),
                    std::invalid_argument);
}

TEST_CASE("sample decoding reproduces the generic decoder") {
    const ClockSystem sys = make_sys(SystemId::H1, 3);
    const QuboInstance inst = encode_qubo(sys, FixedPointCode{2, 0}, "h1");
    Bits bits(inst.n_bits, 0);
    for (std::size_t b = 0; b < bits.size(); b += 3) bits[b] = 1;
    const HistoryState via_helper = history_from_sample(bits, inst);
    const HistoryState via_decode = decode_solution(bits, inst).history;
    REQUIRE(via_helper.slices.size() == via_decode.slices.size());
    for (std::size_t n = 0; n < via_helper.slices.size(); ++n)
        for (std::size_t l = 0; l < via_helper.slices[n].size(); ++l)
            CHECK(via_helper.slices[n][l] == via_decode.slices[n][l]);

    QuboInstance bare;
    bare.n_bits = bits.size();
    bare.code = inst.code;
    CHECK_THROWS_AS(history_from_sample(bits, bare), std::invalid_argument);
}

TEST_CASE("rank selection walks the energy ordering") {
    SampleSet set;
    set.records = {{{0, 0}, -1.0, 3}, {{1, 0}, 0.5, 2}};
    CHECK(rank_record(set, 0).energy == -1.0);
    CHECK(rank_record(set, 1).energy == 0.5);
    CHECK_THROWS_AS(rank_record(set, 2), std::invalid_argument);
}

TEST_CASE("observable series of the exact single-qubit rotation") {
    SystemSpec spec;
    spec.id = SystemId::H1;
    const ComplexMatrix h = build_hamiltonian(spec);
    const TimeGrid grid{0.0, 1.0, 9};
    ComplexVector psi0 = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const auto states = exact_evolution(h, grid, psi0);

    HistoryState history{states};
    const auto rows = observable_series(history, grid, states);
    REQUIRE(rows.size() == 9);
    for (const auto& row : rows) {
        CHECK(row.qubit == 0);
        CHECK(row.sigma_z == Catch::Approx(std::cos(M_PI * row.t)).margin(1e-12));
        CHECK(row.fidelity == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("observable series of the symmetric three-qubit flip") {
    SystemSpec spec;
    spec.id = SystemId::H6;
    const ComplexMatrix h = build_hamiltonian(spec);
    const TimeGrid grid{0.0, 1.0, 5};
    ComplexVector psi0(8, Complex(0.0, 0.0));
    psi0[0] = Complex(1.0, 0.0);
    const auto states = exact_evolution(h, grid, psi0);

    const auto rows = observable_series(HistoryState{states}, grid, states);
    REQUIRE(rows.size() == 15);
    // The generator treats the three qubits symmetrically, so their
    // magnetizations coincide at every time point.
    for (std::size_t n = 0; n < 5; ++n) {
        const double m0 = rows[3 * n].sigma_z;
        CHECK(rows[3 * n + 1].sigma_z == Catch::Approx(m0).margin(1e-12));
        CHECK(rows[3 * n + 2].sigma_z == Catch::Approx(m0).margin(1e-12));
    }
    // Full population transfer |000> -> |111| at the final point.
    CHECK(rows.back().t == Catch::Approx(1.0).margin(1e-15));
    CHECK(rows.back().sigma_z == Catch::Approx(-1.0).margin(1e-9));
}

TEST_CASE("observable series validates segment shapes") {
    const TimeGrid grid{0.0, 1.0, 2};
    const ComplexVector up = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    HistoryState history{{up, up}};
    CHECK_THROWS_AS(observable_series(history, grid, {up}), std::invalid_argument);
    CHECK_THROWS_AS(observable_series(history, TimeGrid{0.0, 1.0, 3}, {up, up, up}),
                    std::invalid_argument);
}

TEST_CASE("decoded best sample of an annealed instance tracks the rotation") {
    // End-to-end: encode, anneal, decode the best record, read observables.
    const ClockSystem sys = make_sys(SystemId::H1, 3);
    const QuboInstance inst = encode_qubo(sys, FixedPointCode{2, 0}, "h1");
    SaConfig cfg;
    cfg.restarts = 50;
    const SampleSet set = simulated_annealing(inst, cfg, 123);
    const HistoryState history = history_from_sample(set.best().bits, inst);

    SystemSpec spec;
    spec.id = SystemId::H1;
    const TimeGrid grid{0.0, 1.0, 3};
    const auto reference =
        exact_evolution(build_hamiltonian(spec), grid, {Complex(1.0, 0.0), Complex(0.0, 0.0)});
    const auto rows = observable_series(history, grid, reference);
    REQUIRE(rows.size() == 3);
    // Two bits per component quantize the amplitudes coarsely; the trend must
    // still be visible within the grid resolution.
    for (const auto& row : rows)
        CHECK(std::abs(row.sigma_z - std::cos(M_PI * row.t)) <= 0.5);
}
