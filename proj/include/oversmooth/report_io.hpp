#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oversmooth/gcn.hpp"
#include "oversmooth/perturb.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

/// Shortest round-trip decimal form of v; NaN prints as "nan". All CSV and
/// SVG output goes through this so repeated runs are byte-identical.
std::string format_double(double v);

/// `index,eigenvalue`, ascending.
void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, const std::string& path);

/// One column per eigenvector, row per node.
void write_eigenvectors_csv(const Eigen::MatrixXd& vectors, const std::string& path);

/// `layer,energy,rayleigh,bound,factor_used`.
void write_trace_csv(const EnergyTrace& trace, const std::string& path);

/// `trial,quantity,lhs,rhs,pass`.
void write_report_csv(const VerificationReport& report, const std::string& path);

/// `ratio,trial,k,e_orig,e_pert`.
void write_experiment_csv(const ExperimentResult& result, const std::string& path);

/// `ratio,trial,which,index,eigenvalue` with which in {orig, pert}.
void write_experiment_eigenvalues_csv(const ExperimentResult& result, const std::string& path);

/// Summary table per (ratio, k); see SummaryRow for the column set.
void write_summary_csv(const std::vector<SummaryRow>& summary, const std::string& path);

} // namespace oversmooth
