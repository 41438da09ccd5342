#include "oversmooth/report_io.hpp"

#include <cstdio>
#include <fstream>

#include "oversmooth/errors.hpp"

namespace oversmooth {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw io_error("write failed: " + path);
}

} // namespace

void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, const std::string& path) {
    auto out = open_out(path);
    out << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        out << i << ',' << format_double(eigenvalues(i)) << '\n';
    finish(out, path);
}

void write_eigenvectors_csv(const Eigen::MatrixXd& vectors, const std::string& path) {
    auto out = open_out(path);
    out << "node";
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) out << ",v" << c;
    out << '\n';
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        out << i;
        for (Eigen::Index c = 0; c < vectors.cols(); ++c)
            out << ',' << format_double(vectors(i, c));
        out << '\n';
    }
    finish(out, path);
}

void write_trace_csv(const EnergyTrace& trace, const std::string& path) {
    auto out = open_out(path);
    out << "layer,energy,rayleigh,bound,factor_used\n";
    for (const auto& row : trace.rows) {
        out << row.layer << ',' << format_double(row.energy) << ','
            << format_double(row.rayleigh) << ',' << format_double(row.bound) << ','
            << trace.factor_used << '\n';
    }
    finish(out, path);
}

void write_report_csv(const VerificationReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "trial,quantity,lhs,rhs,pass\n";
    for (const auto& row : report.rows) {
        out << row.trial << ',' << row.quantity << ',' << format_double(row.lhs) << ','
            << format_double(row.rhs) << ',' << (row.pass ? 1 : 0) << '\n';
    }
    finish(out, path);
}

void write_experiment_csv(const ExperimentResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "ratio,trial,k,e_orig,e_pert\n";
    for (const auto& row : result.rows) {
        out << format_double(row.ratio) << ',' << row.trial << ',' << row.k << ','
            << format_double(row.e_orig) << ',' << format_double(row.e_pert) << '\n';
    }
    finish(out, path);
}

void write_experiment_eigenvalues_csv(const ExperimentResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "ratio,trial,which,index,eigenvalue\n";
    for (const auto& rec : result.spectra) {
        for (Eigen::Index i = 0; i < rec.original.size(); ++i)
            out << format_double(rec.ratio) << ',' << rec.trial << ",orig," << i << ','
                << format_double(rec.original(i)) << '\n';
        for (Eigen::Index i = 0; i < rec.perturbed.size(); ++i)
            out << format_double(rec.ratio) << ',' << rec.trial << ",pert," << i << ','
                << format_double(rec.perturbed(i)) << '\n';
    }
    finish(out, path);
}

void write_summary_csv(const std::vector<SummaryRow>& summary, const std::string& path) {
    auto out = open_out(path);
    out << "ratio,k,mean_delta,median_delta,frac_increased,"
           "eig_q1_orig,eig_med_orig,eig_q3_orig,eig_q1_pert,eig_med_pert,eig_q3_pert\n";
    for (const auto& s : summary) {
        out << format_double(s.ratio) << ',' << s.k << ',' << format_double(s.mean_delta) << ','
            << format_double(s.median_delta) << ',' << format_double(s.frac_increased) << ','
            << format_double(s.eig_q1_orig) << ',' << format_double(s.eig_med_orig) << ','
            << format_double(s.eig_q3_orig) << ',' << format_double(s.eig_q1_pert) << ','
            << format_double(s.eig_med_pert) << ',' << format_double(s.eig_q3_pert) << '\n';
    }
    finish(out, path);
}

} // namespace oversmooth
