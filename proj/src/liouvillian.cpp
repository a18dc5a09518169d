#include "spinamp/liouvillian.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "spinamp/errors.hpp"

namespace spinamp {

void EnsembleParams::validate() const {
    if (N < 1) throw DomainError("EnsembleParams: N must be >= 1");
    if (Gamma < 0 || gamma_rel < 0 || gamma_phi < 0)
        throw DomainError("EnsembleParams: rates must be >= 0");
    if (n_th < 0) throw DomainError("EnsembleParams: n_th must be >= 0");
}

double EnsembleParams::cooperativity_phi() const {
    return gamma_phi > 0 ? N * Gamma / gamma_phi : std::numeric_limits<double>::infinity();
}

double EnsembleParams::cooperativity_rel() const {
    return gamma_rel > 0 ? N * Gamma / gamma_rel : std::numeric_limits<double>::infinity();
}

namespace {

constexpr Complex I{0.0, 1.0};

// Clebsch-Gordan coefficients <j,m;1,mu|j',m+mu> for coupling a rank-1 tensor.
// Only mu = -1 (lowering) and mu = 0 (dephasing) channels appear in the model.
double cg_lower(double j, double m, int dj) {
    switch (dj) {
        case +1: return std::sqrt((j - m + 1) * (j - m + 2) / ((2 * j + 1) * (2 * j + 2)));
        case 0:
            if (j <= 0) return 0.0;
            return std::sqrt((j - m + 1) * (j + m) / (2 * j * (j + 1)));
        case -1: return std::sqrt((j + m) * (j + m - 1) / (2 * j * (2 * j + 1)));
        default: return 0.0;
    }
}

double cg_zero(double j, double m, int dj) {
    switch (dj) {
        case +1: return std::sqrt((j - m + 1) * (j + m + 1) / ((2 * j + 1) * (j + 1)));
        case 0:
            if (j <= 0) return 0.0;
            return m / std::sqrt(j * (j + 1));
        case -1:
            if (j <= 0) return 0.0;
            return -std::sqrt((j - m) * (j + m) / (j * (2 * j + 1)));
        default: return 0.0;
    }
}

// Multiplicity-summed squared reduced matrix elements of the single-spin
// rank-1 tensor between total-spin sectors (Wigner-Eckart weights; the
// multiplicity sum collapses by Schur's lemma since the S_N multiplicity
// spaces are irreducible).
double transfer_weight(int N, double j, int dj) {
    switch (dj) {
        case -1: return N + 2 * j + 2;
        case 0: return N + 2.0;
        case +1: return N - 2 * j;
        default: return 0.0;
    }
}

struct Sector {
    int twoJ;
    int dim;
    int offset;           // complex offset into the packed state
    double weight;        // d_N(j)
    std::vector<double> m;      // m value per index
    std::vector<double> clower; // <m-1|S-|m> per index
    std::vector<double> craise; // <m+1|S+|m> per index
};

// One cross-sector (or within-sector) jump contribution of a local process:
//   dB'_{k+shift, l+shift} += v[k] v[l] B_{k,l}
struct Transfer {
    int src = 0, dst = 0; // sector array indices
    int shift = 0;        // target index offset
    std::vector<double> v;
};

struct BlockPlan {
    int N;
    EnsembleParams params;
    double chi = 0.0;
    std::vector<Sector> sectors;
    std::vector<Transfer> transfers;
    int total = 0; // complex dimension

    const Sector* find(int twoJ) const {
        for (const auto& s : sectors)
            if (s.twoJ == twoJ) return &s;
        return nullptr;
    }
};

BlockPlan make_plan(const EnsembleParams& p, double chi, const std::vector<int>& twoJs) {
    BlockPlan plan;
    plan.N = p.N;
    plan.params = p;
    plan.chi = chi;
    int off = 0;
    for (int twoJ : twoJs) {
        Sector s;
        s.twoJ = twoJ;
        s.dim = twoJ + 1;
        s.offset = off;
        s.weight = static_cast<double>(block_degeneracy(p.N, twoJ));
        double j = 0.5 * twoJ;
        s.m.resize(s.dim);
        s.clower.resize(s.dim);
        s.craise.resize(s.dim);
        for (int k = 0; k < s.dim; ++k) {
            double m = j - k;
            s.m[k] = m;
            s.clower[k] = lowering_coefficient(j, m);
            s.craise[k] = lowering_coefficient(j, m + 1);
        }
        off += s.dim * s.dim;
        plan.sectors.push_back(std::move(s));
    }
    plan.total = off;

    // Local-dissipator transfer tables. Rates are folded into the vectors so
    // the hot loop is a plain weighted gather.
    auto add_transfers = [&](double rate, bool lowering) {
        if (rate <= 0) return;
        for (std::size_t si = 0; si < plan.sectors.size(); ++si) {
            const Sector& src = plan.sectors[si];
            double j = 0.5 * src.twoJ;
            for (int dj = -1; dj <= 1; ++dj) {
                int twoJd = src.twoJ + 2 * dj;
                const Sector* dstp = plan.find(twoJd);
                if (!dstp) continue;
                if (dstp->weight <= 0) continue;
                double w = transfer_weight(plan.N, j, dj);
                if (w <= 0) continue;
                double pref = rate * w * src.weight / dstp->weight;
                // sigma-minus carries T_{-1}/sqrt(2); sigma_z is T_0 directly.
                if (lowering) pref *= 0.5;
                Transfer tr;
                tr.src = static_cast<int>(si);
                tr.dst = static_cast<int>(dstp - plan.sectors.data());
                tr.shift = lowering ? dj + 1 : dj;
                tr.v.assign(src.dim, 0.0);
                bool any = false;
                for (int k = 0; k < src.dim; ++k) {
                    int kd = k + tr.shift;
                    if (kd < 0 || kd >= dstp->dim) continue;
                    double cg = lowering ? cg_lower(j, src.m[k], dj) : cg_zero(j, src.m[k], dj);
                    if (cg == 0.0) continue;
                    tr.v[k] = std::sqrt(pref) * cg;
                    any = true;
                }
                if (any) plan.transfers.push_back(std::move(tr));
            }
        }
    };
    add_transfers(p.gamma_rel, true);
    add_transfers(0.5 * p.gamma_phi, false); // master equation carries gamma_phi/2 D[sigma_z]
    return plan;
}

void block_rhs(const BlockPlan& plan, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy.setZero();
    const EnsembleParams& p = plan.params;
    const double g_down = p.Gamma * (p.n_th + 1.0);
    const double g_up = p.Gamma * p.n_th;
    const double N = plan.N;

    for (const auto& s : plan.sectors) {
        const int d = s.dim;
        Eigen::Map<const Eigen::MatrixXcd> B(y.data() + s.offset, d, d);
        Eigen::Map<Eigen::MatrixXcd> D(dy.data() + s.offset, d, d);
        for (int l = 0; l < d; ++l) {
            for (int k = 0; k < d; ++k) {
                Complex acc = 0.0;
                const Complex b = B(k, l);
                // collective decay / thermal excitation, within sector
                if (p.Gamma > 0) {
                    if (k > 0 && l > 0) acc += g_down * s.clower[k - 1] * s.clower[l - 1] * B(k - 1, l - 1);
                    acc -= 0.5 * g_down *
                           (s.clower[k] * s.clower[k] + s.clower[l] * s.clower[l]) * b;
                    if (g_up > 0) {
                        if (k + 1 < d && l + 1 < d)
                            acc += g_up * s.craise[k + 1] * s.craise[l + 1] * B(k + 1, l + 1);
                        acc -= 0.5 * g_up *
                               (s.craise[k] * s.craise[k] + s.craise[l] * s.craise[l]) * b;
                    }
                }
                // local anticommutator parts (jump parts live in transfers)
                if (p.gamma_rel > 0)
                    acc -= 0.5 * p.gamma_rel * (N + s.m[k] + s.m[l]) * b;
                if (p.gamma_phi > 0) acc -= 0.5 * p.gamma_phi * N * b;
                // optional one-axis-twist Hamiltonian chi S_z^2
                if (plan.chi != 0.0)
                    acc -= I * plan.chi * (s.m[k] * s.m[k] - s.m[l] * s.m[l]) * b;
                D(k, l) += acc;
            }
        }
    }
    for (const auto& tr : plan.transfers) {
        const Sector& src = plan.sectors[tr.src];
        const Sector& dst = plan.sectors[tr.dst];
        Eigen::Map<const Eigen::MatrixXcd> B(y.data() + src.offset, src.dim, src.dim);
        Eigen::Map<Eigen::MatrixXcd> D(dy.data() + dst.offset, dst.dim, dst.dim);
        for (int l = 0; l < src.dim; ++l) {
            if (tr.v[l] == 0.0) continue;
            for (int k = 0; k < src.dim; ++k) {
                if (tr.v[k] == 0.0) continue;
                D(k + tr.shift, l + tr.shift) += tr.v[k] * tr.v[l] * B(k, l);
            }
        }
    }
}

Eigen::VectorXcd pack_state(const BlockPlan& plan, const DickeBlockState& st) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(plan.total);
    for (const auto& [twoJ, b] : st.blocks) {
        const Sector* s = plan.find(twoJ);
        if (!s) throw DomainError("initial state has unsupported sector 2j=" + std::to_string(twoJ));
        if (b.rows() != s->dim) throw DomainError("block dimension mismatch");
        Eigen::Map<Eigen::MatrixXcd>(y.data() + s->offset, s->dim, s->dim) = b;
    }
    return y;
}

DickeBlockState unpack_state(const BlockPlan& plan, const Eigen::VectorXcd& y) {
    DickeBlockState st;
    st.N = plan.N;
    for (const auto& s : plan.sectors) {
        st.blocks[s.twoJ] =
            Eigen::Map<const Eigen::MatrixXcd>(y.data() + s.offset, s.dim, s.dim);
    }
    return st;
}

Trajectory evolve_blocks(const BlockPlan& plan, const DickeBlockState& state0,
                         const std::vector<double>& grid, const EvolveOptions& opts) {
    Eigen::VectorXcd y0 = pack_state(plan, state0);
    Trajectory traj;
    traj.t.reserve(grid.size());

    OdeRhs rhs = [&plan](double, const Eigen::VectorXd& yr, Eigen::VectorXd& dyr) {
        Eigen::Map<const Eigen::VectorXcd> y(
            reinterpret_cast<const Complex*>(yr.data()), yr.size() / 2);
        Eigen::Map<Eigen::VectorXcd> dy(reinterpret_cast<Complex*>(dyr.data()), dyr.size() / 2);
        // Maps alias the real storage directly.
        Eigen::VectorXcd yc = y;
        Eigen::VectorXcd dyc(yc.size());
        block_rhs(plan, yc, dyc);
        dy = dyc;
    };

    Eigen::VectorXd yr = Eigen::Map<const Eigen::VectorXd>(
        reinterpret_cast<const double*>(y0.data()), 2 * y0.size());

    integrate_grid(rhs, yr, grid, opts.ode,
                   [&](std::size_t, double t, const Eigen::VectorXd& ycur) {
                       Eigen::Map<const Eigen::VectorXcd> yc(
                           reinterpret_cast<const Complex*>(ycur.data()), ycur.size() / 2);
                       DickeBlockState st = unpack_state(plan, Eigen::VectorXcd(yc));
                       traj.push_moments(t, spin_moments(st));
                       if (opts.store_states) traj.block_states.push_back(std::move(st));
                   });
    return traj;
}

} // namespace

Trajectory evolve_collective(const EnsembleParams& params, const DickeBlockState& state0,
                             const std::vector<double>& grid, const EvolveOptions& opts) {
    params.validate();
    if (params.gamma_rel != 0 || params.gamma_phi != 0)
        throw DomainError(
            "evolve_collective requires gamma_rel = gamma_phi = 0; use "
            "evolve_permutation_invariant");
    for (const auto& [twoJ, b] : state0.blocks)
        if (twoJ != params.N && b.cwiseAbs().maxCoeff() > 0)
            throw DomainError("evolve_collective: initial state must live in the j = N/2 sector");
    BlockPlan plan = make_plan(params, opts.oat_chi, {params.N});
    return evolve_blocks(plan, state0, grid, opts);
}

Trajectory evolve_permutation_invariant(const EnsembleParams& params,
                                        const DickeBlockState& state0,
                                        const std::vector<double>& grid,
                                        const EvolveOptions& opts) {
    params.validate();
    if (params.N > opts.max_block_N)
        throw ResourceError("block solver limited to N <= " + std::to_string(opts.max_block_N));
    BlockPlan plan = make_plan(params, opts.oat_chi, sector_two_js(params.N));
    return evolve_blocks(plan, state0, grid, opts);
}

} // namespace spinamp
