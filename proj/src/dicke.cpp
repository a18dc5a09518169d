#include "spinamp/dicke.hpp"

#include <cmath>

#include "spinamp/errors.hpp"

namespace spinamp {

namespace {
constexpr Complex I{0.0, 1.0};

void check_sector(int N, int twoJ) {
    if (N < 1) throw DomainError("N must be >= 1");
    if (twoJ < 0 || twoJ > N) throw DomainError("need 0 <= j <= N/2");
    if ((N - twoJ) % 2 != 0) throw DomainError("2j must have the parity of N");
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}
} // namespace

double lowering_coefficient(double j, double m) {
    return std::sqrt((j + m) * (j - m + 1.0));
}

OperatorSet collective_operators(int N, int twoJ) {
    check_sector(N, twoJ);
    OperatorSet ops;
    ops.twoJ = twoJ;
    const int d = twoJ + 1;
    const double j = 0.5 * twoJ;
    ops.sm = Eigen::MatrixXcd::Zero(d, d);
    ops.sz = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        double m = j - k;
        ops.sz(k, k) = m;
        if (k + 1 < d) ops.sm(k + 1, k) = lowering_coefficient(j, m);
    }
    ops.sp = ops.sm.adjoint();
    ops.sx = 0.5 * (ops.sp + ops.sm);
    ops.sy = -0.5 * I * (ops.sp - ops.sm);
    return ops;
}

std::uint64_t block_degeneracy(int N, int twoJ) {
    check_sector(N, twoJ);
    // d_N(j) = C(N, N/2 - j) - C(N, N/2 - j - 1) in twoJ form.
    int k = (N - twoJ) / 2;
    return binomial(N, k) - binomial(N, k - 1);
}

std::vector<int> sector_two_js(int N) {
    std::vector<int> out;
    for (int twoJ = N; twoJ >= 0; twoJ -= 2) out.push_back(twoJ);
    return out;
}

double DickeBlockState::trace() const {
    double tr = 0.0;
    for (const auto& [twoJ, b] : blocks) tr += weight(twoJ) * b.trace().real();
    return tr;
}

Complex DickeBlockState::expectation(
    const std::map<int, Eigen::MatrixXcd, std::greater<int>>& op) const {
    Complex acc = 0.0;
    for (const auto& [twoJ, b] : blocks) {
        auto it = op.find(twoJ);
        if (it == op.end()) throw DomainError("operator missing sector 2j=" + std::to_string(twoJ));
        if (it->second.rows() != b.rows()) throw DomainError("operator/block dimension mismatch");
        acc += weight(twoJ) * (b * it->second).trace();
    }
    return acc;
}

double DickeBlockState::min_eigenvalue() const {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& [twoJ, b] : blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (b + b.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        mn = std::min(mn, es.eigenvalues().minCoeff());
    }
    return mn;
}

double DickeBlockState::max_hermiticity_defect() const {
    double mx = 0.0;
    for (const auto& [twoJ, b] : blocks)
        mx = std::max(mx, (b - Eigen::MatrixXcd(b.adjoint())).cwiseAbs().maxCoeff());
    return mx;
}

SpinMoments spin_moments(const DickeBlockState& state) {
    SpinMoments mom;
    double sx = 0, sy = 0, sz = 0, sx2 = 0, sy2 = 0, sz2 = 0, syz = 0, s2 = 0, tr = 0;
    for (const auto& [twoJ, b] : state.blocks) {
        const double w = state.weight(twoJ);
        const double j = 0.5 * twoJ;
        const int d = twoJ + 1;
        // Diagonal pieces first.
        for (int k = 0; k < d; ++k) {
            double m = j - k;
            double p = b(k, k).real();
            tr += w * p;
            sz += w * m * p;
            sz2 += w * m * m * p;
            s2 += w * j * (j + 1) * p;
        }
        // One-step coherences: <S+> and <{S+, Sz}>/1.
        Complex spv = 0, spz = 0;
        for (int k = 1; k < d; ++k) {
            double m = j - k; // S+ raises m -> m+1, element sqrt((j-m)(j+m+1))
            double c = lowering_coefficient(j, m + 1); // = <m+1|S+|m>
            Complex r = b(k, k - 1);                   // <m+1| rho |m> within the block
            spv += w * c * r;
            spz += w * c * (2.0 * m + 1.0) * r; // {S+,Sz} matrix element pair
        }
        // Two-step coherences for <S+S+>.
        Complex spp = 0;
        for (int k = 2; k < d; ++k) {
            double m = j - k;
            double c = lowering_coefficient(j, m + 1) * lowering_coefficient(j, m + 2);
            spp += w * c * b(k, k - 2);
        }
        // <S+S-> and <S-S+> are diagonal sums.
        double spm = 0, smp = 0;
        for (int k = 0; k < d; ++k) {
            double m = j - k;
            spm += w * (j * (j + 1) - m * (m - 1)) * b(k, k).real();
            smp += w * (j * (j + 1) - m * (m + 1)) * b(k, k).real();
        }
        sx += spv.real();
        sy += spv.imag();
        sx2 += 0.25 * (spm + smp + 2.0 * spp.real());
        sy2 += 0.25 * (spm + smp - 2.0 * spp.real());
        syz += 0.5 * spz.imag(); // <{Sy,Sz}>/2 = Im<{S+,Sz}>/2
    }
    mom.trace = tr;
    mom.Sx = sx;
    mom.Sy = sy;
    mom.Sz = sz;
    mom.VarSx = sx2 - sx * sx;
    mom.VarSy = sy2 - sy * sy;
    mom.VarSz = sz2 - sz * sz;
    mom.Cyz = syz - sy * sz;
    mom.S2 = s2;
    return mom;
}

Eigen::VectorXcd css_amplitudes(int N, double theta, double azimuth) {
    if (N < 1) throw DomainError("N must be >= 1");
    const int d = N + 1;
    Eigen::VectorXcd c(d);
    double lc = std::log(std::abs(std::cos(0.5 * theta)));
    double ls = std::log(std::abs(std::sin(0.5 * theta)));
    double sgn_c = std::cos(0.5 * theta) < 0 ? -1.0 : 1.0;
    double sgn_s = std::sin(0.5 * theta) < 0 ? -1.0 : 1.0;
    for (int k = 0; k < d; ++k) {
        // k spins flipped: amplitude sqrt(C(N,k)) cos^(N-k) (e^{i az} sin)^k
        double lbin = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0));
        double mag_log;
        if (k == 0)
            mag_log = lbin + (N - k) * lc;
        else if (k == N)
            mag_log = lbin + k * ls;
        else
            mag_log = lbin + (N - k) * lc + k * ls;
        double mag = std::exp(mag_log);
        if (theta == 0.0 && k > 0) mag = 0.0;
        double sgn = std::pow(sgn_c, N - k) * std::pow(sgn_s, k);
        c[k] = sgn * mag * std::exp(I * (azimuth * static_cast<double>(k)));
    }
    c.normalize(); // guard rounding in the log-space magnitudes
    return c;
}

DickeBlockState coherent_spin_state(int N, double theta, double azimuth) {
    Eigen::VectorXcd amps = css_amplitudes(N, theta, azimuth);
    DickeBlockState st;
    st.N = N;
    st.blocks[N] = amps * amps.adjoint();
    return st;
}

DickeBlockState tipped_css(int N, double phi) {
    // exp(i phi S_x)|up..up>: single-spin action cos(phi/2)|up> + i sin(phi/2)|down>,
    // i.e. a CSS at polar angle phi with azimuth pi/2.
    return coherent_spin_state(N, phi, 0.5 * M_PI);
}

void ProtocolConfig::validate() const {
    if (phi < 0) throw DomainError("phi must be >= 0");
    if (grid.size() < 2) throw DomainError("grid needs at least two points");
    if (grid.front() != 0.0) throw DomainError("grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
}

std::vector<double> uniform_grid(double t_end, std::size_t points) {
    if (!(t_end > 0) || points < 2) throw DomainError("bad uniform grid request");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = t_end * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

// ---- Schur-basis utilities ------------------------------------------------

namespace {

// Full-space S+ acting on the S_z = m eigenspace, mapping into S_z = m+1.
// Basis states of each subspace are bitstrings (bit set = spin up) in
// ascending numeric order.
std::vector<std::uint32_t> zsubspace(int N, int ups) {
    std::vector<std::uint32_t> v;
    for (std::uint32_t b = 0; b < (1u << N); ++b)
        if (std::popcount(b) == ups) v.push_back(b);
    return v;
}

} // namespace

Eigen::MatrixXcd sector_representative(int N, int twoJ) {
    check_sector(N, twoJ);
    if (N > 14) throw ResourceError("sector_representative limited to N <= 14");
    const double j = 0.5 * twoJ;
    const int ups_top = (N + twoJ) / 2; // popcount at m = j

    // Highest-weight vectors: kernel of S+ restricted to the m = j subspace.
    auto basis_j = zsubspace(N, ups_top);
    Eigen::MatrixXd sp_block;
    if (ups_top == N) {
        sp_block = Eigen::MatrixXd::Zero(1, basis_j.size()); // S+ annihilates m = N/2
    } else {
        auto basis_up = zsubspace(N, ups_top + 1);
        std::map<std::uint32_t, int> up_index;
        for (std::size_t i = 0; i < basis_up.size(); ++i) up_index[basis_up[i]] = static_cast<int>(i);
        sp_block = Eigen::MatrixXd::Zero(basis_up.size(), basis_j.size());
        for (std::size_t c = 0; c < basis_j.size(); ++c) {
            std::uint32_t b = basis_j[c];
            for (int n = 0; n < N; ++n)
                if (!(b & (1u << n))) sp_block(up_index.at(b | (1u << n)), c) += 1.0;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sp_block);
    lu.setThreshold(1e-9);
    Eigen::MatrixXd ker = lu.kernel();
    if (ker.cols() < 1) throw DomainError("no highest-weight vector found");
    Eigen::VectorXd hw = ker.col(0).normalized();

    // Generate the ladder by repeated lowering in the full space.
    const int dim_full = 1 << N;
    Eigen::MatrixXcd reps = Eigen::MatrixXcd::Zero(dim_full, twoJ + 1);
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(dim_full);
    for (std::size_t i = 0; i < basis_j.size(); ++i) cur[basis_j[i]] = hw[i];
    reps.col(0) = cur.cast<Complex>();
    for (int k = 1; k <= twoJ; ++k) {
        double m = j - (k - 1);
        Eigen::VectorXd next = Eigen::VectorXd::Zero(dim_full);
        for (int b = 0; b < dim_full; ++b) {
            if (cur[b] == 0.0) continue;
            for (int n = 0; n < N; ++n)
                if (b & (1 << n)) next[b & ~(1 << n)] += cur[b];
        }
        next /= lowering_coefficient(j, m);
        reps.col(k) = next.cast<Complex>();
        cur = next;
    }
    return reps;
}

DickeBlockState schur_block_decompose(const Eigen::MatrixXcd& rho_full, int N) {
    if (rho_full.rows() != (1 << N)) throw DomainError("density matrix is not 2^N dimensional");
    DickeBlockState st;
    st.N = N;
    for (int twoJ : sector_two_js(N)) {
        Eigen::MatrixXcd R = sector_representative(N, twoJ);
        st.blocks[twoJ] = R.adjoint() * rho_full * R;
    }
    return st;
}

double trace_distance(const DickeBlockState& a, const DickeBlockState& b) {
    if (a.N != b.N) throw DomainError("trace_distance: states have different N");
    double acc = 0.0;
    for (int twoJ : sector_two_js(a.N)) {
        auto ita = a.blocks.find(twoJ);
        auto itb = b.blocks.find(twoJ);
        const int d = twoJ + 1;
        Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(d, d);
        if (ita != a.blocks.end()) diff += ita->second;
        if (itb != b.blocks.end()) diff -= itb->second;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (diff + diff.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        acc += static_cast<double>(block_degeneracy(a.N, twoJ)) *
               es.eigenvalues().cwiseAbs().sum();
    }
    return 0.5 * acc;
}

} // namespace spinamp
