#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace spinamp {

using Complex = std::complex<double>;

// Collective spin algebra on the |j, m> ladder. Sectors are keyed by twoJ = 2j
// so half-integer spins stay exact; within a sector the row index k runs over
// m = j, j-1, ..., -j (descending, k = j - m).

/// Collective spin matrices for one total-spin sector (hbar = 1).
struct OperatorSet {
    int twoJ = 0;
    Eigen::MatrixXcd sp, sm, sx, sy, sz;

    double j() const { return 0.5 * twoJ; }
    int dim() const { return twoJ + 1; }
};

/// Matrix element <j,m-1|S-|j,m> = sqrt((j+m)(j-m+1)).
double lowering_coefficient(double j, double m);

/// Operators for the spin-j sector of N spin-1/2 systems. Throws DomainError
/// unless 0 <= j <= N/2 and 2j has the parity of N.
OperatorSet collective_operators(int N, int twoJ);

/// Multiplicity d_N(j) of the spin-j irreducible sector in (C^2)^{tensor N}.
std::uint64_t block_degeneracy(int N, int twoJ);

/// All valid twoJ for N spins, descending from N to (N mod 2).
std::vector<int> sector_two_js(int N);

/// Permutation-symmetric density matrix, block diagonal over total-spin
/// sectors. Each stored block is the per-copy matrix: the physical state is
/// sum_j block_j (x) I_{d_N(j)}, so trace(rho) = sum_j d_N(j) tr(block_j).
struct DickeBlockState {
    int N = 0;
    std::map<int, Eigen::MatrixXcd, std::greater<int>> blocks; // twoJ -> block

    double trace() const;
    double weight(int twoJ) const { return static_cast<double>(block_degeneracy(N, twoJ)); }

    /// Degeneracy-weighted expectation of per-sector operator matrices.
    Complex expectation(const std::map<int, Eigen::MatrixXcd, std::greater<int>>& op) const;

    /// Smallest eigenvalue over all blocks (soft positivity diagnostic).
    double min_eigenvalue() const;
    double max_hermiticity_defect() const;
};

/// Common collective observables evaluated in one pass.
struct SpinMoments {
    double Sx = 0, Sy = 0, Sz = 0;
    double VarSx = 0, VarSy = 0, VarSz = 0;
    double Cyz = 0;   // symmetrized covariance of S_y, S_z
    double S2 = 0;    // <S^2>
    double trace = 1;
};

SpinMoments spin_moments(const DickeBlockState& state);

/// Amplitudes of the coherent spin state |theta, azimuth> in the j = N/2
/// ladder, index k = 0 at m = N/2. Computed in log space so large N is safe.
Eigen::VectorXcd css_amplitudes(int N, double theta, double azimuth);

/// Fully polarized coherent spin state as a block state (j = N/2 sector only).
DickeBlockState coherent_spin_state(int N, double theta, double azimuth);

/// CSS tipped from the north pole by the signal angle phi toward +y, i.e. the
/// state exp(i phi S_x)|up...up>.
DickeBlockState tipped_css(int N, double phi);

/// Signal-protocol description shared by the evolution front ends.
struct ProtocolConfig {
    double phi = 1e-5;       // signal rotation angle, radians
    double theta0 = 0.0;     // initial CSS polar angle
    double azimuth0 = 0.0;   // initial CSS azimuth
    std::vector<double> grid;

    void validate() const; // throws DomainError
};

/// Uniform time grid helper, t in [0, t_end] with `points` samples.
std::vector<double> uniform_grid(double t_end, std::size_t points);

// ---- Schur-basis utilities (exact, for modest N) ------------------------

/// One multiplicity representative per (j, m): columns of the returned matrix
/// span such representatives, ordered m = j..-j, for the given sector.
/// Dimension 2^N x (2j+1). Used to project full-space states onto blocks.
Eigen::MatrixXcd sector_representative(int N, int twoJ);

/// Project a (possibly numerically approximate) permutation-symmetric full
/// density matrix onto its Dicke block form.
DickeBlockState schur_block_decompose(const Eigen::MatrixXcd& rho_full, int N);

/// Trace distance between two block states: (1/2) sum_j d_j |B1_j - B2_j|_1.
double trace_distance(const DickeBlockState& a, const DickeBlockState& b);

} // namespace spinamp
