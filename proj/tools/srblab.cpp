// Command-line front end: single-orbit diagnostics and staged certificate runs.
#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "srb/config.hpp"
#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/orbit_analysis.hpp"
#include "srb/pipeline.hpp"
#include "srb/serialize.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool verify = false;
    int workers = 0;
    std::string from_stage;
};

struct OrbitArgs {
    std::string point = "0.1234,0.5678,0.3";
    int n = 1000;
    double lambda = 0.0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "experiment config file");
    sub->add_option("--out", c.out, "output directory (overrides the config)");
    sub->add_option("--seed", c.seed, "RNG seed (overrides the config)");
    sub->add_flag("--verify", c.verify, "double every sampling grid and re-check");
    sub->add_option("--workers", c.workers, "OpenMP threads (0 = runtime default)");
}

srb::ExperimentConfig resolve(const Common& c) {
    srb::ExperimentConfig cfg = c.config.empty() ? srb::ExperimentConfig{} : srb::load_config(c.config);
    if (!c.out.empty()) cfg.out = c.out;
    if (c.seed) cfg.seed = *c.seed;
    if (c.verify) cfg.verify = true;
    cfg.validate();
    if (c.workers > 0) omp_set_num_threads(c.workers);
    return cfg;
}

srb::ProjectivePoint parse_point(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 3) throw srb::ConfigError("--point expects u,v,theta");
    return {{srb::wrap_unit(v[0]), srb::wrap_unit(v[1])}, {srb::wrap_angle(v[2])}};
}

void save(const srb::ExperimentConfig& cfg, const std::string& name, const srb::json& j) {
    std::filesystem::create_directories(cfg.out);
    srb::write_text(cfg.out + "/" + name, j.dump(1) + "\n");
    std::cout << j.dump(2) << '\n';
}

srb::json orbit_summary(const srb::SurfaceMap& f, const srb::ProjectivePoint& xi, int n) {
    const auto orbit = srb::projective_orbit(f, xi, n);
    const srb::PhiSequence seq{orbit.phi, std::nullopt};
    const auto S = srb::birkhoff_sums(seq);
    return {{"model", f.name()},
            {"start", xi},
            {"n", n},
            {"upper_lyapunov", srb::upper_lyapunov(f, xi.base, n)},
            {"phi_average", S.back() / n},
            {"suffix_positive", srb::suffix_positive(seq)},
            {"end", orbit.points.back()}};
}

int run_stage(const Common& c, const std::string& until) {
    const auto cfg = resolve(c);
    srb::PipelineOptions opts{cfg.out, c.from_stage, until};
    const auto report = srb::run_pipeline(cfg, opts);
    if (until == "certificate") {
        for (const auto& v : report.verdicts)
            std::printf("%-8s %s\n", srb::to_string(v.status), v.name.c_str());
        for (const auto& a : report.asserted_failures) std::printf("ASSERT   %s\n", a.c_str());
        std::printf("status %s%s%s\n", report.status.c_str(), report.exit_reason.empty() ? "" : ": ",
                    report.exit_reason.c_str());
        return report.exit_code();
    }
    std::printf("stages through '%s' written to %s (status %s)\n", until.c_str(), cfg.out.c_str(),
                report.status.c_str());
    return report.asserted_failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"srblab: SRB-measure construction experiments on torus maps"};
    app.require_subcommand(1);
    Common c;
    OrbitArgs o;

    auto* orbit = app.add_subcommand("orbit", "projective orbit statistics from one point");
    auto* pliss = app.add_subcommand("pliss", "hyperbolic times of one orbit");
    auto* neutral = app.add_subcommand("neutral", "neutral segment table of one orbit");
    for (auto* s : {orbit, pliss, neutral}) {
        add_common(s, c);
        s->add_option("--point", o.point, "start point u,v,theta");
        s->add_option("-n,--length", o.n, "orbit length");
    }
    pliss->add_option("--lambda", o.lambda, "slope of the linear lower bound");

    auto* decompose = app.add_subcommand("decompose", "run the pipeline through the measure decomposition");
    auto* curve = app.add_subcommand("curve", "select the transverse curve and good times");
    auto* count = app.add_subcommand("count", "run the pipeline through the reparametrization counts");
    auto* certify = app.add_subcommand("certify", "full certificate run");
    for (auto* s : {decompose, curve, count, certify}) {
        add_common(s, c);
        s->add_option("--from-stage", c.from_stage, "reuse persisted stages before this one");
    }

    CLI11_PARSE(app, argc, argv);
    try {
        if (orbit->parsed() || pliss->parsed() || neutral->parsed()) {
            const auto cfg = resolve(c);
            if (o.n < 1) throw srb::ConfigError("orbit length must be positive");
            const auto f = cfg.make_map();
            const auto xi = parse_point(o.point);
            if (orbit->parsed()) {
                save(cfg, "orbit.json", orbit_summary(f, xi, o.n));
            } else if (pliss->parsed()) {
                const auto orb = srb::projective_orbit(f, xi, o.n);
                const auto times = srb::pliss_times({orb.phi, std::nullopt}, o.lambda);
                save(cfg, "pliss.json",
                     {{"n", o.n}, {"lambda", o.lambda}, {"count", times.size()},
                      {"density", double(times.size()) / o.n}, {"times", times}});
            } else {
                const auto orb = srb::projective_orbit(f, xi, o.n);
                const srb::PhiSequence seq{orb.phi, std::nullopt};
                srb::json rows = srb::json::array();
                for (double a : cfg.alpha_grid)
                    for (int L : cfg.L_grid) {
                        const auto d = srb::maximal_neutral_segments(seq, a, L);
                        rows.push_back({{"alpha", a}, {"L", L}, {"segments", d.maximal_segments.size()},
                                        {"mass", d.mass()}});
                    }
                save(cfg, "neutral.json", {{"n", o.n}, {"table", rows}});
            }
            return 0;
        }
        if (curve->parsed()) return run_stage(c, "times");
        if (decompose->parsed()) return run_stage(c, "decompose");
        if (count->parsed()) return run_stage(c, "count");
        return run_stage(c, "certificate");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
