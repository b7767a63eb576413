#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srb/config.hpp"
#include "srb/measure.hpp"
#include "srb/serialize.hpp"

namespace srb {

enum class VerdictStatus { Pass, Fail, Unknown };
const char* to_string(VerdictStatus s);

/// One inequality of the certificate with both sides.
struct Verdict {
    std::string name;
    std::string relation;  // "=", "<=" or ">="
    std::optional<double> lhs;
    std::optional<double> rhs;
    double tol = 0.0;
    VerdictStatus status = VerdictStatus::Unknown;
    std::string note;
};

struct CertificateReport {
    std::string model;
    std::string status;  // "complete", "early_exit" or "partial"
    std::string exit_reason;
    std::optional<double> lambda_bar;
    std::optional<double> lambda_hat;
    std::optional<double> beta;
    std::optional<double> phi_integral_mu1;
    std::optional<double> lambda_plus_mu1;
    std::optional<double> counting_rate;
    std::optional<double> h_reference;
    int k = 0;
    int n = 0;
    std::optional<double> rho;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    long long card = 0;
    double chain_tol = 0.0;
    std::vector<Verdict> verdicts;
    /// (m, (1/m) log Card at mark m).
    std::vector<std::pair<int, double>> rate_series;
    NeutralTable neutral_table;
    /// Asserted invariants that failed; any entry makes the run a hard failure.
    std::vector<std::string> asserted_failures;

    /// 0 all pass, 2 soft failures only, 1 asserted invariant failed.
    int exit_code() const;
};

json report_to_json(const CertificateReport& r);
CertificateReport report_from_json(const json& j);

enum class ReportFormat { Json, Csv, PlotData };
/// Writes one file; filesystem errors propagate with the path in the message.
void emit_report(const CertificateReport& r, ReportFormat format, const std::string& path);

/// Stage names in execution order.
const std::vector<std::string>& pipeline_stages();

struct PipelineOptions {
    std::string out_dir = "out";
    /// Stages before this one are loaded from out_dir instead of recomputed.
    std::string from_stage;
    std::string until_stage = "certificate";
};

/// Runs the chain curve -> times -> cluster -> decompose -> classify -> count -> certificate,
/// persisting every stage document in out_dir. Module errors are rethrown as StageError.
CertificateReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& opts);

}  // namespace srb
