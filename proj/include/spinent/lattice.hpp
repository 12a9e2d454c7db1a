#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinent {

enum class LatticeKind { Chain, Ladder };

// Site ordering is fixed so basis-state bit positions are reproducible:
// chain sites are 0..L-1 around the ring, ladder sites are 2*rung + leg
// (leg in {0,1}), periodic along the legs only.
struct Lattice {
    LatticeKind kind = LatticeKind::Chain;
    int n_sites = 0;    // N = L (chain) or 2L (ladder)
    int length = 0;     // L = ring length, or number of rungs
    int coordination = 0;
    std::vector<std::pair<int, int>> bonds;  // unordered pairs, i < j
    std::vector<int> sublattice;             // +1 / -1 per site

    int site(int rung, int leg) const { return 2 * rung + leg; }
};

// One translation-equivalence class of unordered site pairs.  On the chain
// the label is the ring distance r in [1, L/2]; on the ladder it is the rung
// displacement plus a same-leg/cross-leg flag.  multiplicity is the number
// of partners any single site has inside the class, so that
// sum_classes multiplicity = N - 1.
struct PairClass {
    int distance = 0;       // chain: r;  ladder: rung displacement
    bool cross_leg = false; // ladder only
    int multiplicity = 0;
    std::vector<std::pair<int, int>> pairs;
    std::string label;      // "r3" on the chain, "d2s"/"d2x" on the ladder
};

inline Lattice build_lattice(LatticeKind kind, int length) {
    if (length < 4)
        throw std::invalid_argument("lattice length must be >= 4");
    if (length % 2 != 0)
        throw std::invalid_argument(
            "odd length breaks bipartiteness on a periodic lattice");

    Lattice lat;
    lat.kind = kind;
    lat.length = length;

    if (kind == LatticeKind::Chain) {
        lat.n_sites = length;
        lat.coordination = 2;
        lat.bonds.reserve(length);
        for (int i = 0; i < length; ++i) {
            int j = (i + 1) % length;
            lat.bonds.emplace_back(std::min(i, j), std::max(i, j));
        }
        lat.sublattice.resize(length);
        for (int i = 0; i < length; ++i) lat.sublattice[i] = (i % 2 == 0) ? 1 : -1;
    } else {
        lat.n_sites = 2 * length;
        lat.coordination = 3;
        lat.bonds.reserve(3 * length);
        for (int r = 0; r < length; ++r) {
            int rn = (r + 1) % length;
            for (int leg = 0; leg < 2; ++leg) {
                int a = lat.site(r, leg), b = lat.site(rn, leg);
                lat.bonds.emplace_back(std::min(a, b), std::max(a, b));
            }
            lat.bonds.emplace_back(lat.site(r, 0), lat.site(r, 1));
        }
        lat.sublattice.resize(2 * length);
        for (int r = 0; r < length; ++r)
            for (int leg = 0; leg < 2; ++leg)
                lat.sublattice[lat.site(r, leg)] = ((r + leg) % 2 == 0) ? 1 : -1;
    }
    return lat;
}

inline std::vector<PairClass> pair_classes(const Lattice& lat) {
    std::vector<PairClass> classes;
    const int L = lat.length;

    if (lat.kind == LatticeKind::Chain) {
        for (int r = 1; r <= L / 2; ++r) {
            PairClass pc;
            pc.distance = r;
            pc.multiplicity = (r < L / 2) ? 2 : 1;
            pc.label = "r" + std::to_string(r);
            int npairs = (r < L / 2) ? L : L / 2;
            for (int i = 0; i < npairs; ++i) {
                int j = (i + r) % L;
                pc.pairs.emplace_back(std::min(i, j), std::max(i, j));
            }
            classes.push_back(std::move(pc));
        }
    } else {
        // d = 0 exists only cross-leg (the rungs); at d = L/2 the r and
        // r + L/2 enumerations hit the same unordered pair, so halve the range.
        for (int d = 0; d <= L / 2; ++d) {
            for (int cross = 0; cross < 2; ++cross) {
                if (d == 0 && cross == 0) continue;
                PairClass pc;
                pc.distance = d;
                pc.cross_leg = (cross == 1);
                pc.label = "d" + std::to_string(d) + (pc.cross_leg ? "x" : "s");
                pc.multiplicity = (d == 0 || d == L / 2) ? 1 : 2;
                int rmax = (d == L / 2 && d > 0) ? L / 2 : L;
                int legmax = (d == 0) ? 1 : 2;
                for (int r = 0; r < rmax; ++r) {
                    int rn = (r + d) % L;
                    for (int leg = 0; leg < legmax; ++leg) {
                        int a = lat.site(r, leg);
                        int b = lat.site(rn, cross ? 1 - leg : leg);
                        pc.pairs.emplace_back(std::min(a, b), std::max(a, b));
                    }
                }
                classes.push_back(std::move(pc));
            }
        }
    }
    return classes;
}

}  // namespace spinent
