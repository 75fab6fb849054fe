#include "srn/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace srn {

std::string stamp_line(uint64_t config_hash) {
    std::ostringstream os;
    os << "# srn " << kVersion << " config=" << std::hex << std::setw(16) << std::setfill('0')
       << config_hash;
    return os.str();
}

void write_snapshot(std::ostream& os, const MiniFockState& s, const RadialGrid& grid,
                    double t, uint64_t config_hash) {
    os << stamp_line(config_hash) << '\n';
    os << std::setprecision(17);
    os << "t " << t << '\n';
    os << "grid " << grid.dR << ' ' << grid.N << '\n';
    os << "psi0 " << s.psi0.real() << ' ' << s.psi0.imag() << '\n';
    os << "# k R+ Re(phi+) Im(phi+) R- Re(phi-) Im(phi-)\n";
    for (int k = 0; k < grid.N; ++k)
        os << k << ' ' << grid.Rplus(k) << ' ' << s.phip(k).real() << ' ' << s.phip(k).imag()
           << ' ' << grid.Rminus(k) << ' ' << s.phim(k).real() << ' ' << s.phim(k).imag()
           << '\n';
}

MiniFockState read_snapshot(std::istream& is, const RadialGrid& grid, double* t) {
    MiniFockState s = MiniFockState::vacuum(grid);
    std::string line;
    int got = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "t") {
            double tv;
            ls >> tv;
            if (t) *t = tv;
        } else if (tag == "grid") {
            double dR;
            int N;
            ls >> dR >> N;
            if (N != grid.N) throw std::runtime_error("read_snapshot: grid size mismatch");
        } else if (tag == "psi0") {
            double re, im;
            ls >> re >> im;
            s.psi0 = {re, im};
        } else {
            const int k = std::stoi(tag);
            double Rp, pr, pi, Rm, mr, mi;
            ls >> Rp >> pr >> pi >> Rm >> mr >> mi;
            if (k < 0 || k >= grid.N) throw std::runtime_error("read_snapshot: bad row index");
            s.phip(k) = {pr, pi};
            s.phim(k) = {mr, mi};
            ++got;
        }
    }
    if (got != grid.N) throw std::runtime_error("read_snapshot: truncated file");
    return s;
}

void write_trajectory(std::ostream& os, const TrajectoryResult& tr, uint64_t config_hash) {
    os << stamp_line(config_hash) << '\n';
    os << std::setprecision(17);
    os << "t,r,theta,phi,R\n";
    for (const auto& p : tr.points)
        os << p.t << ',' << p.r << ',' << p.theta << ',' << p.phi << ',' << p.R << '\n';
    if (tr.hit_singularity) os << "# hit_singularity t=" << tr.t_hit << '\n';
    if (tr.density_stop) os << "# density_stop\n";
}

void write_process_record(std::ostream& os, const ProcessRecord& rec, uint64_t config_hash) {
    os << stamp_line(config_hash) << '\n';
    os << std::setprecision(17);
    os << "seed " << rec.seed << '\n';
    for (const auto& e : rec.events)
        os << "event " << e.t << ' ' << e.walker << ' '
           << (e.kind == ProcessEvent::absorption ? "absorption" : "emission") << ' ' << e.theta
           << ' ' << e.phi << '\n';
    for (const auto& sm : rec.samples) {
        os << "sample " << sm.t << ' ' << sm.walker << ' ';
        if (sm.cfg.vacuum)
            os << "vacuum\n";
        else
            os << sm.cfg.pt.r << ' ' << sm.cfg.pt.theta << ' ' << sm.cfg.pt.phi << '\n';
    }
}

void write_equivariance_report(std::ostream& os, const EquivarianceReport& rep,
                               uint64_t config_hash) {
    os << stamp_line(config_hash) << '\n';
    os << std::setprecision(10);
    os << "t,born_p0,emp_p0,z_p0,tv_radial,tv_bound,chi2,chi2_dof\n";
    for (const auto& c : rep.checkpoints)
        os << c.t << ',' << c.born_p0 << ',' << c.emp_p0 << ',' << c.z_p0 << ',' << c.tv_radial
           << ',' << c.tv_bound << ',' << c.chi2 << ',' << c.chi2_dof << '\n';
    os << "# absorptions=" << rep.absorptions << " emissions=" << rep.emissions
       << " pass=" << (rep.pass ? 1 : 0) << '\n';
}

}  // namespace srn
