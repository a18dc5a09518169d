#pragma once

#include <Eigen/Dense>

#include "spinamp/dicke.hpp"
#include "spinamp/ode.hpp"
#include "spinamp/trajectory.hpp"

namespace spinamp {

/// Open-system model of the spin ensemble: collective decay at rate Gamma
/// against a bath of effective occupation n_th, plus independent per-spin
/// relaxation and dephasing.
struct EnsembleParams {
    int N = 1;
    double Gamma = 1.0;
    double gamma_rel = 0.0;
    double gamma_phi = 0.0;
    double n_th = 0.0;

    void validate() const;
    /// Collective cooperativities C_k = N Gamma / gamma_k (inf when gamma_k = 0).
    double cooperativity_phi() const;
    double cooperativity_rel() const;
};

struct EvolveOptions {
    OdeOptions ode;
    bool store_states = false;
    int max_block_N = 64;     // permutation-invariant solver limit
    int max_brute_N = 12;     // full 2^N solver limit
    double oat_chi = 0.0;     // optional chi S_z^2 Hamiltonian (OAT baseline)
};

/// Collective-only dynamics, confined to the j = N/2 sector:
///   drho/dt = Gamma (n_th+1) D[S-] rho + Gamma n_th D[S+] rho.
/// Rejects nonzero local rates (use evolve_permutation_invariant).
Trajectory evolve_collective(const EnsembleParams& params, const DickeBlockState& state0,
                             const std::vector<double>& grid, const EvolveOptions& opts = {});

/// Full model including local relaxation/dephasing on the block-diagonal
/// permutation-symmetric state space (polynomial in N).
Trajectory evolve_permutation_invariant(const EnsembleParams& params,
                                        const DickeBlockState& state0,
                                        const std::vector<double>& grid,
                                        const EvolveOptions& opts = {});

/// Validation oracle: integrates the same master equation on the full 2^N
/// Hilbert space. N <= 12.
Trajectory evolve_brute_force(const EnsembleParams& params, const Eigen::MatrixXcd& rho0,
                              const std::vector<double>& grid, const EvolveOptions& opts = {});

/// Product coherent spin state as a full 2^N state vector.
Eigen::VectorXcd brute_css(int N, double theta, double azimuth);

/// Observables of a full 2^N density matrix.
SpinMoments full_spin_moments(const Eigen::MatrixXcd& rho, int N);

} // namespace spinamp
