#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oversmooth/gcn.hpp"
#include "oversmooth/graph.hpp"
#include "oversmooth/perturb.hpp"
#include "oversmooth/report_io.hpp"
#include "oversmooth/svg.hpp"
#include "xml_check.hpp"

using namespace oversmooth;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 995.0, -2.5e300, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv writers emit the documented headers") {
    Eigen::VectorXd ev(2);
    ev << 0.0, 1.0;
    write_spectrum_csv(ev, "test_tmp_s.csv");
    CHECK(slurp("test_tmp_s.csv") == "index,eigenvalue\n0,0\n1,1\n");
    std::remove("test_tmp_s.csv");

    EnergyTrace trace;
    trace.rows.push_back({0, 1.0, 0.5, 1.0});
    write_trace_csv(trace, "test_tmp_t.csv");
    const std::string t = slurp("test_tmp_t.csv");
    CHECK(t.rfind("layer,energy,rayleigh,bound,factor_used\n", 0) == 0);
    CHECK(t.find("0,1,0.5,1,safe\n") != std::string::npos);
    std::remove("test_tmp_t.csv");

    VerificationReport report;
    report.rows.push_back({3, "propagation_safe", 1.0, 2.0, true, true});
    write_report_csv(report, "test_tmp_r.csv");
    CHECK(slurp("test_tmp_r.csv") == "trial,quantity,lhs,rhs,pass\n3,propagation_safe,1,2,1\n");
    std::remove("test_tmp_r.csv");

    ExperimentResult result;
    result.rows.push_back({0.5, 1, 2, 3.0, 4.0});
    result.spectra.push_back({0.5, 1, ev, ev});
    write_experiment_csv(result, "test_tmp_e.csv");
    CHECK(slurp("test_tmp_e.csv") == "ratio,trial,k,e_orig,e_pert\n0.5,1,2,3,4\n");
    std::remove("test_tmp_e.csv");

    write_experiment_eigenvalues_csv(result, "test_tmp_ev.csv");
    const std::string evcsv = slurp("test_tmp_ev.csv");
    CHECK(evcsv.rfind("ratio,trial,which,index,eigenvalue\n", 0) == 0);
    CHECK(evcsv.find("0.5,1,orig,0,0\n") != std::string::npos);
    CHECK(evcsv.find("0.5,1,pert,1,1\n") != std::string::npos);
    std::remove("test_tmp_ev.csv");

    std::vector<SummaryRow> summary(1);
    summary[0] = {0.5, 0, 1.0, 1.0, 0.75, 0, 0, 0, 0, 0, 0};
    write_summary_csv(summary, "test_tmp_sum.csv");
    CHECK(slurp("test_tmp_sum.csv").rfind("ratio,k,mean_delta,median_delta,frac_increased,", 0) ==
          0);
    std::remove("test_tmp_sum.csv");
}

TEST_CASE("io errors surface as io_error") {
    Eigen::VectorXd ev(1);
    ev << 0.0;
    CHECK_THROWS_AS(write_spectrum_csv(ev, "no_such_dir/x.csv"), io_error);
}

TEST_CASE("scatter svg is well-formed xml") {
    std::vector<ScatterSeries> series(2);
    series[0] = {"k=0 <&>", "#1f77b4", {{0.1, 0.2}, {1.5, 1.4}}};
    series[1] = {"k=1", "#ff7f0e", {{0.5, 0.9}}};
    const std::string svg = scatter_svg(series, "drop & ratio 0.3", "E", "E'");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos); // identity line
    CHECK(svg.find("&amp;") != std::string::npos);            // escaping
    CHECK(xml_well_formed(svg));

    // no identity line, empty data: still valid
    const std::string empty_svg = scatter_svg({}, "empty", "x", "y", false);
    CHECK(xml_well_formed(empty_svg));
    CHECK(empty_svg.find("stroke-dasharray") == std::string::npos);

    // degenerate single point
    std::vector<ScatterSeries> one(1);
    one[0] = {"k", "#000", {{2.0, 2.0}}};
    CHECK(xml_well_formed(scatter_svg(one, "one", "x", "y")));
}

TEST_CASE("xml checker rejects malformed documents") {
    CHECK_FALSE(xml_well_formed("<a><b></a></b>"));
    CHECK_FALSE(xml_well_formed("<a>"));
    CHECK_FALSE(xml_well_formed("plain text"));
    CHECK(xml_well_formed("<a><b/></a>"));
}
