#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "srb/config.hpp"
#include "srb/error.hpp"
#include "srb/pipeline.hpp"
#include "srb/serialize.hpp"

using namespace srb;

namespace {

const double kLam = std::log((3.0 + std::sqrt(5.0)) / 2.0);

ExperimentConfig config(const std::string& name) {
    return load_config(std::string(SRB_SOURCE_DIR) + "/configs/" + name + ".cfg");
}

std::string scratch(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("srb_pipeline_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

CertificateReport run(const ExperimentConfig& c, const std::string& dir, const std::string& from = "") {
    return run_pipeline(c, {dir, from, "certificate"});
}

const Verdict& verdict(const CertificateReport& r, const std::string& prefix) {
    for (const auto& v : r.verdicts)
        if (v.name.rfind(prefix, 0) == 0) return v;
    throw std::runtime_error("no verdict " + prefix);
}

}  // namespace

TEST_CASE("cat map certificate") {
    const auto dir = scratch("cat");
    const auto r = run(config("cat"), dir);
    CHECK(r.status == "complete");
    CHECK(r.exit_code() == 0);
    CHECK(*r.beta == 1.0);
    CHECK(std::abs(*r.lambda_bar - kLam) <= 0.05);
    CHECK(std::abs(*r.lambda_plus_mu1 - kLam) <= 1e-4);
    CHECK(*r.h_reference == doctest::Approx(kLam).epsilon(1e-15));
    for (const auto& v : r.verdicts) {
        CHECK_MESSAGE(v.status == VerdictStatus::Pass, v.name);
        if (!v.relation.empty()) {
            CHECK(v.lhs.has_value());
            CHECK(v.rhs.has_value());
        }
    }
    // the neutral part is empty on the whole grid
    for (const auto& row : r.neutral_table.mass)
        for (double m : row) CHECK(m == 0.0);
    // persisted files agree with the in-memory report
    const auto j = json::parse(read_text(dir + "/certificate.json"));
    CHECK(j.dump() == report_to_json(r).dump());
    std::ifstream plot(dir + "/certificate_plot.dat");
    std::string line;
    std::getline(plot, line);
    for (const auto& [m, rate] : r.rate_series) {
        std::getline(plot, line);
        std::istringstream is(line);
        int mm;
        double rr;
        is >> mm >> rr;
        CHECK(mm == m);
        CHECK(rr == rate);
    }
    for (const char* f : {"curve.json", "times.json", "cluster.json", "decompose.json", "classify.json", "count.json",
                          "certificate.csv", "neutral_table.csv", "classification.csv", "config.cfg"})
        CHECK_MESSAGE(std::filesystem::exists(dir + "/" + f), f);
}

TEST_CASE("identity map exits at the hypothesis check") {
    for (int rerun = 0; rerun < 2; ++rerun) {
        const auto r = run(config("identity"), scratch("identity"));
        CHECK(r.status == "early_exit");
        CHECK(r.exit_reason == "no positive exponent on positive measure set");
        CHECK(r.exit_code() == 2);
        REQUIRE(r.verdicts.size() == 1);
        CHECK(r.verdicts[0].status == VerdictStatus::Fail);
    }
}

TEST_CASE("standard map certificate regression") {
    const auto dir = scratch("standard");
    const auto r = run(config("standard"), dir);
    CHECK(r.status == "complete");
    CHECK(r.asserted_failures.empty());
    CHECK(*r.lambda_bar == 0.5008113737126476);
    CHECK(*r.lambda_hat == 1.4407790900294768);
    CHECK(*r.beta == 0.9636664327954295);
    CHECK(*r.lambda_plus_mu1 == 0.18909805248366093);
    CHECK(r.k == 2);
    CHECK(r.n == 12);
    CHECK(r.card == 511);
    CHECK_FALSE(r.h_reference.has_value());
    CHECK(verdict(r, "lambda_bar <= beta").status == VerdictStatus::Unknown);
    CHECK(verdict(r, "log Card <=").status == VerdictStatus::Unknown);
    CHECK(verdict(r, "item (c)").status == VerdictStatus::Pass);
    CHECK(verdict(r, "log Card >=").status == VerdictStatus::Pass);
    // the finite-horizon pilot exponent overshoots the long-orbit one at this scale
    CHECK(verdict(r, "beta * lambda_plus").status == VerdictStatus::Fail);
    CHECK(r.exit_code() == 2);

    // stage isolation: rerunning from any stage reproduces the certificate byte for byte
    const auto ref = read_text(dir + "/certificate.json");
    for (const char* stage : {"times", "decompose", "count"}) {
        run(config("standard"), dir, stage);
        CHECK_MESSAGE(read_text(dir + "/certificate.json") == ref, stage);
    }
}

TEST_CASE("pipeline errors carry the stage name") {
    auto c = config("standard");
    c.stabilization_tol = 1e-9;
    try {
        run(c, scratch("bad"));
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(std::string(e.what()).find("decompose") != std::string::npos);
    }
    CHECK_THROWS_AS(run(c, scratch("missing"), "count"), StageError);
    CHECK_THROWS_AS(run_pipeline(c, {scratch("x"), "nope", "certificate"}), ConfigError);
}
