#include <catch2/catch_amalgamated.hpp>

#include <chrono>

#include <spinent/analytic.hpp>
#include <spinent/eigensolver.hpp>
#include <spinent/observables.hpp>

using namespace spinent;

TEST_CASE("factorizing field closed form") {
    REQUIRE(factorizing_field(0.25) == Catch::Approx(1.5811388300841898).margin(1e-15));
    REQUIRE(factorizing_field(0.0) == Catch::Approx(1.4142135623730951).margin(1e-15));
    REQUIRE(factorizing_field(1.0) == Catch::Approx(2.0).margin(1e-15));
    REQUIRE_THROWS_AS(factorizing_field(1.5), std::invalid_argument);
}

TEST_CASE("factorized ansatz magnetizations") {
    Lattice lat = build_lattice(LatticeKind::Chain, 8);
    FactorizedAnsatz a = build_factorized_state(0.25, lat);
    REQUIRE(std::abs(a.vector.norm() - 1.0) < 1e-12);

    for (int i = 0; i < 8; ++i) {
        REQUIRE(site_magnetization(a.vector, i, Axis::Z) ==
                Catch::Approx(0.39528470752104742).margin(1e-12));
        double mx = site_magnetization(a.vector, i, Axis::X);
        REQUIRE(std::abs(mx) == Catch::Approx(0.30618621784789726).margin(1e-12));
        REQUIRE(std::abs(site_magnetization(a.vector, i, Axis::Y)) < 1e-14);
        // x components perfectly staggered
        if (i > 0)
            REQUIRE(mx * site_magnetization(a.vector, i - 1, Axis::X) < 0.0);
        // the one-site state is pure: Bloch vector of length 1/2 exactly
        double mz = site_magnetization(a.vector, i, Axis::Z);
        REQUIRE(mx * mx + mz * mz == Catch::Approx(0.25).margin(1e-13));
        REQUIRE(std::abs(rdm(a.vector, i).matrix.determinant()) < 1e-14);
    }
}

TEST_CASE("isotropic limit collapses to the all-up state") {
    Lattice lat = build_lattice(LatticeKind::Chain, 4);
    FactorizedAnsatz a = build_factorized_state(1.0, lat);
    REQUIRE(std::abs(std::abs(a.vector[15]) - 1.0) < 1e-14);
}

TEST_CASE("ansatz correlators are flat in magnitude") {
    Lattice lat = build_lattice(LatticeKind::Chain, 12);
    FactorizedAnsatz a = build_factorized_state(0.25, lat);
    for (const auto& pc : pair_classes(lat)) {
        double expect = ((pc.distance % 2 == 0) ? 1.0 : -1.0) * 0.09375;
        REQUIRE(correlator(a.vector, pc, Axis::X) ==
                Catch::Approx(expect).margin(1e-12));
        REQUIRE(std::abs(correlator(a.vector, pc, Axis::Y)) < 1e-13);
    }
    REQUIRE(mx_longrange(a.vector, lat) ==
            Catch::Approx(0.30618621784789726).margin(1e-12));
}

TEST_CASE("ansatz is an exact eigenstate at the factorizing field") {
    // chain, z = 2
    Lattice lat = build_lattice(LatticeKind::Chain, 8);
    ModelParams p{0.25, 1.0, factorizing_field(0.25), Frame::Original};
    FactorizedAnsatz a = build_factorized_state(0.25, lat);
    StateVector hv = apply_hamiltonian(p, lat, a.vector);
    double e = a.vector.dot(hv).real();
    REQUIRE((hv - e * a.vector).norm() < 1e-12);
    REQUIRE(e == Catch::Approx(-8.0 * (2.0 + 0.25) / 4.0).margin(1e-12));

    // ladder, z = 3: the same construction factorizes at (3/2) sqrt(2(1+Dy))
    Lattice lad = build_lattice(LatticeKind::Ladder, 4);
    ModelParams q{0.0, 1.0, 1.5 * factorizing_field(0.0), Frame::Original};
    FactorizedAnsatz b = build_factorized_state(0.0, lad);
    StateVector hw = apply_hamiltonian(q, lad, b.vector);
    double el = b.vector.dot(hw).real();
    REQUIRE((hw - el * b.vector).norm() < 1e-12);
}

TEST_CASE("ED certifies the factorized ground state") {
    Lattice lat = build_lattice(LatticeKind::Chain, 8);
    ModelParams p{0.25, 1.0, factorizing_field(0.25), Frame::Original};
    SolverOptions opts;
    SectorResult even = lanczos_sector(p, lat, +1, 1, opts);
    SectorResult odd = lanczos_sector(p, lat, -1, 1, opts);

    // the two parity sectors cross exactly at h_f
    REQUIRE(std::abs(even.energies[0] - odd.energies[0]) < 1e-10);
    REQUIRE(even.energies[0] == Catch::Approx(-4.5).margin(1e-10));

    // the product state lives inside the degenerate ground doublet
    FactorizedAnsatz a = build_factorized_state(0.25, lat);
    double oe = overlap(a.vector, even.vectors[0].cast<Complex>());
    double oo = overlap(a.vector, odd.vectors[0].cast<Complex>());
    REQUIRE(std::sqrt(oe * oe + oo * oo) >= 1.0 - 1e-9);
}

TEST_CASE("away from h_f the ansatz is not the ground state") {
    Lattice lat = build_lattice(LatticeKind::Chain, 8);
    FactorizedAnsatz a = build_factorized_state(0.25, lat);
    for (double dh : {-0.1, 0.1}) {
        ModelParams p{0.25, 1.0, factorizing_field(0.25) + dh, Frame::Original};
        GroundStateResult g = lanczos_ground(p, lat);
        REQUIRE(overlap(a.vector, g.vector) < 1.0 - 1e-6);
    }
}

TEST_CASE("overlap basics") {
    StateVector u = StateVector::Zero(4), v = StateVector::Zero(4);
    u[0] = 1.0;
    v[3] = 1.0;
    REQUIRE(overlap(u, u) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(overlap(u, v) == 0.0);
    StateVector w = StateVector::Zero(8);
    REQUIRE_THROWS_AS(overlap(u, w), std::invalid_argument);
}

TEST_CASE("free fermions match ED on the solvable line") {
    for (auto [dy, h, L] : {std::tuple{0.0, 0.6, 12}, std::tuple{0.5, 1.0, 10},
                            std::tuple{0.25, 0.3, 8}}) {
        Lattice lat = build_lattice(LatticeKind::Chain, L);
        ModelParams p{dy, 0.0, h, Frame::Original};
        GroundStateResult g = lanczos_ground(p, lat);
        FreeFermionSolution ff = free_fermion_solution(dy, h, L);

        REQUIRE(std::abs(ff.energy - g.energy) < 1e-9);
        REQUIRE(std::abs(ff.mz - magnetization(g.vector, Axis::Z)) < 1e-8);
        REQUIRE(ff.parity_sector == g.parity);
        for (const auto& pc : pair_classes(lat)) {
            double ed = correlator(g.vector, pc, Axis::Z);
            REQUIRE(std::abs(ff.gzz[pc.distance - 1] - ed) < 1e-8);
        }
    }
}

TEST_CASE("XX chain saturates above h = 1") {
    FreeFermionSolution ff = free_fermion_solution(1.0, 1.4, 12);
    REQUIRE(ff.energy == Catch::Approx(-0.5 * 12 * 1.4).margin(1e-12));
    REQUIRE(ff.mz == Catch::Approx(0.5).margin(1e-12));
    for (double g : ff.gzz) REQUIRE(g == Catch::Approx(0.25).margin(1e-12));

    Lattice lat = build_lattice(LatticeKind::Chain, 8);
    ModelParams p{1.0, 0.0, 1.4, Frame::Original};
    GroundStateResult g = lanczos_ground(p, lat);
    FreeFermionSolution ff8 = free_fermion_solution(1.0, 1.4, 8);
    REQUIRE(std::abs(ff8.energy - g.energy) < 1e-9);
}

TEST_CASE("large rings stay cheap and magnetize monotonically") {
    auto t0 = std::chrono::steady_clock::now();
    double prev = -1.0;
    for (double h : {0.2, 0.6, 1.0, 1.4, 1.8}) {
        FreeFermionSolution ff = free_fermion_solution(0.5, h, 1000);
        REQUIRE(ff.mz > prev);
        prev = ff.mz;
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    REQUIRE(dt.count() < 1.0);
}

TEST_CASE("free fermion input validation") {
    REQUIRE_THROWS_AS(free_fermion_solution(0.5, 1.0, 11), std::invalid_argument);
    REQUIRE_THROWS_AS(free_fermion_solution(1.5, 1.0, 12), std::invalid_argument);
    REQUIRE_THROWS_AS(free_fermion_solution(0.5, -1.0, 12), std::invalid_argument);
}
