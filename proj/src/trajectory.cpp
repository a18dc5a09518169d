#include "spinamp/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "spinamp/errors.hpp"

namespace spinamp {

std::string format_number(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

void Trajectory::push_moments(double time, const SpinMoments& m) {
    t.push_back(time);
    Sx.push_back(m.Sx);
    Sy.push_back(m.Sy);
    Sz.push_back(m.Sz);
    VarSx.push_back(m.VarSx);
    VarSy.push_back(m.VarSy);
    VarSz.push_back(m.VarSz);
    Cyz.push_back(m.Cyz);
    trace.push_back(m.trace);
}

std::string Trajectory::to_csv() const {
    std::ostringstream os;
    os << "t,Sx,Sy,Sz,VarSx,VarSy,VarSz,Cyz,trace";
    if (has_cavity()) os << ",Q,P,Cqq,Cpp,Cqy,Cqz,Cpx";
    os << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << format_number(t[i]) << ',' << format_number(Sx[i]) << ',' << format_number(Sy[i])
           << ',' << format_number(Sz[i]) << ',' << format_number(VarSx[i]) << ','
           << format_number(VarSy[i]) << ',' << format_number(VarSz[i]) << ','
           << format_number(Cyz[i]) << ',' << format_number(trace[i]);
        if (has_cavity()) {
            os << ',' << format_number(Q[i]) << ',' << format_number(P[i]) << ','
               << format_number(Cqq[i]) << ',' << format_number(Cpp[i]) << ','
               << format_number(Cqy[i]) << ',' << format_number(Cqz[i]) << ','
               << format_number(Cpx[i]);
        }
        os << "\n";
    }
    return os.str();
}

void Trajectory::write_csv(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_csv();
}

double Trajectory::interp(const std::vector<double>& tv, const std::vector<double>& yv, double s) {
    if (tv.empty()) throw DomainError("interp on empty trajectory");
    if (s <= tv.front()) return yv.front();
    if (s >= tv.back()) return yv.back();
    auto it = std::upper_bound(tv.begin(), tv.end(), s);
    std::size_t k = static_cast<std::size_t>(std::distance(tv.begin(), it)) - 1;
    double u = (s - tv[k]) / (tv[k + 1] - tv[k]);
    return (1.0 - u) * yv[k] + u * yv[k + 1];
}

} // namespace spinamp
