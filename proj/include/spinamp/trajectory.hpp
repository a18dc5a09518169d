#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spinamp/dicke.hpp"

namespace spinamp {

/// Time series of collective-spin observables. CSV schema (15 significant
/// digits, locale independent):
///   t,Sx,Sy,Sz,VarSx,VarSy,VarSz,Cyz,trace
/// with optional cavity-moment columns Q,P,Cqq,Cpp,Cqy,Cqz,Cpx appended when
/// the producing model carries a bosonic mode.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> Sx, Sy, Sz;
    std::vector<double> VarSx, VarSy, VarSz;
    std::vector<double> Cyz;
    std::vector<double> trace;

    // Cavity-moment block (may be empty).
    std::vector<double> Q, P, Cqq, Cpp, Cqy, Cqz, Cpx;

    // Optional full states for oracle comparisons.
    std::vector<DickeBlockState> block_states;
    std::vector<Eigen::MatrixXcd> full_states;

    std::size_t size() const { return t.size(); }
    bool has_cavity() const { return !Q.empty(); }

    void push_moments(double time, const SpinMoments& m);
    void write_csv(const std::string& path) const;
    std::string to_csv() const;

    /// Linear interpolation of a stored column at time s.
    static double interp(const std::vector<double>& tv, const std::vector<double>& yv, double s);
};

/// Format a double with 15 significant digits, '.' decimal separator.
std::string format_number(double v);

} // namespace spinamp
