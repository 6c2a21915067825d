#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "curvemom/geometry.hpp"

namespace curvemom {

using cplx = std::complex<double>;

struct Frequency {
    double hz = 0;
};

enum class GroundModel { FreeSpace, InfinitePEC };

// One linear piece of a basis function: current a + b*t along segment seg, t in [0,1],
// flowing in the segment direction.
struct BasisPiece {
    std::size_t seg = 0;
    double a = 0;
    double b = 0;
};

// Overlapping triangular basis centered on a wire node. Ground-attached nodes carry a
// half triangle whose other half is supplied by the image; free ends carry none.
struct BasisFunction {
    std::size_t node = 0;
    std::vector<BasisPiece> pieces;
};

struct BasisSet {
    std::vector<BasisFunction> bases;
    // node id -> basis index, or -1.
    std::vector<std::ptrdiff_t> node_basis;
    GroundModel ground = GroundModel::FreeSpace;
};

// Requires head-to-tail chains (each shared node joins one segment end to the next
// segment start), which every builder in this project produces.
BasisSet build_bases(const WireModel& model, GroundModel ground);

struct SolveResult {
    Frequency frequency;
    std::vector<cplx> currents;          // basis coefficients, amperes
    std::vector<cplx> port_voltages;     // gap voltages as driven
    std::vector<cplx> port_currents;     // basis coefficient at each gap node
    std::vector<cplx> port_impedances;   // V/I per port

    // 0.5 * Re(sum V I*): power accepted by the structure from the gaps.
    double input_power() const;
};

// Galerkin impedance matrix of the thin-wire EFIE (reduced kernel), images included
// for InfinitePEC. Symmetric by construction.
Eigen::MatrixXcd fill_impedance_matrix(const WireModel& model, const BasisSet& bases,
                                       Frequency f);

// Delta-gap excitation vector: gap voltage applied at the start node of each fed segment.
Eigen::VectorXcd excitation_vector(const WireModel& model, const BasisSet& bases);

// Dense LU with partial pivoting; fails on condition estimate > 1e12; enforces
// relative residual < 1e-10 and port passivity Re(Z_in) >= -0.01 ohm.
SolveResult solve_currents(const Eigen::MatrixXcd& Z, const WireModel& model,
                           const BasisSet& bases, Frequency f);

// Convenience: bases + fill + solve.
SolveResult solve(const WireModel& model, Frequency f, GroundModel ground);

struct SweepPoint {
    double freq_hz = 0;
    std::vector<cplx> port_z;
    bool ok = false;
    std::string error;
};

// One solve per frequency, parallel across frequencies; per-point failures are
// recorded, not thrown.
std::vector<SweepPoint> input_impedance_sweep(const WireModel& model,
                                              const std::vector<double>& freqs_hz,
                                              GroundModel ground);

// Gauss-Legendre nodes/weights on [0,1]; cached per order.
const std::vector<double>& gauss_nodes(int n);
const std::vector<double>& gauss_weights(int n);

}  // namespace curvemom
