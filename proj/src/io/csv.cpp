#include "ddecay/io/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddecay/errors.hpp"

namespace dd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write " + tmp);
        f << content;
        if (!f) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, p);
}

std::string theta_csv(const SurvivalTrace& tr) {
    std::string s = kThetaHeader;
    s += '\n';
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const cplx th = tr.theta[i];
        s += format_double(tr.t[i]) + ',' + format_double(th.real()) + ',' + format_double(th.imag()) + ',' +
             format_double(std::norm(th)) + '\n';
    }
    return s;
}

void write_theta_csv(const std::string& path, const SurvivalTrace& tr) { write_text_atomic(path, theta_csv(tr)); }

SurvivalTrace read_theta_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("t,re_theta,im_theta", 0) != 0)
        throw DomainError(path + ": expected header " + std::string(kThetaHeader));
    SurvivalTrace tr;
    int row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw DomainError(path + ": malformed row " + std::to_string(row));
        try {
            tr.t.push_back(std::stod(a));
            tr.theta.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            throw DomainError(path + ": malformed number in row " + std::to_string(row));
        }
    }
    return tr;
}

std::string manifold_csv(const std::vector<StabilizationPoint>& pts) {
    std::string s = kManifoldHeader;
    s += '\n';
    for (const auto& p : pts) {
        s += format_double(p.a) + ',' + format_double(p.omega) + ',' + format_double(p.r_s) + ',' + format_double(p.g0) +
             ',' + std::to_string(p.N) + ',' + format_double(p.residual) + '\n';
    }
    return s;
}

void write_manifold_csv(const std::string& path, const std::vector<StabilizationPoint>& pts) {
    write_text_atomic(path, manifold_csv(pts));
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_double(r[i]);
        s += '\n';
    }
    write_text_atomic(path, s);
}

std::string fit_report_csv(const FitReport& f) {
    std::string s = "kind,lo,hi,slope,intercept,residual,threshold,verdict,smooth_residual,efolds,points\n";
    s += std::string(to_string(f.kind)) + ',' + format_double(f.lo) + ',' + format_double(f.hi) + ',' +
         format_double(f.slope) + ',' + format_double(f.intercept) + ',' + format_double(f.residual) + ',' +
         format_double(f.threshold) + ',' + (f.verdict ? "true" : "false") + ',' + format_double(f.smooth_residual) +
         ',' + format_double(f.efolds) + ',' + std::to_string(f.points) + '\n';
    return s;
}

}  // namespace dd
