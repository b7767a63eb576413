#include "srb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/kernels.hpp"
#include "srb/reparam.hpp"
#include "srb/segments.hpp"

namespace srb {

const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Pass: return "pass";
        case VerdictStatus::Fail: return "fail";
        case VerdictStatus::Unknown: return "unknown";
    }
    return "unknown";
}

int CertificateReport::exit_code() const {
    if (!asserted_failures.empty()) return 1;
    for (const auto& v : verdicts)
        if (v.status == VerdictStatus::Fail) return 2;
    return 0;
}

const std::vector<std::string>& pipeline_stages() {
    static const std::vector<std::string> s = {"curve", "times", "cluster", "decompose", "classify", "count",
                                               "certificate"};
    return s;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

struct Ctx {
    const ExperimentConfig& cfg;
    SurfaceMap f;
    TestDictionary dict;
    std::string dir;
    SubdivisionOptions sub;
    int param_grid;
    DilationGrid dilation;
    int phi_grid;
};

json skipped(const std::string& stage) { return {{"stage", stage}, {"status", "skipped"}}; }
bool ok(const json& j) { return j.value("status", "") == "ok"; }

RegularCurve config_curve(const Ctx& c, json& out) {
    if (c.cfg.curve == "auto") {
        const auto sel = select_transverse_curve(c.f, c.cfg.transverse_samples, c.cfg.transverse_horizon,
                                                 c.cfg.curve_length);
        out["selection"] = {{"fraction", sel.fraction}, {"theta", sel.theta}, {"offset", sel.offset},
                            {"fractions", sel.fractions}};
        return sel.curve;
    }
    std::vector<double> v;
    std::stringstream ss(c.cfg.curve);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    out["selection"] = {{"fraction", nullptr}, {"theta", v[2]}, {"offset", SurfacePoint{v[0], v[1]}}};
    return RegularCurve::segment({v[0], v[1]}, v[2], v[3]);
}

json stage_curve(const Ctx& c) {
    json out{{"stage", "curve"}, {"status", "ok"}};
    const RegularCurve curve = config_curve(c, out);
    out["curve"] = curve_to_json(curve);

    const auto grid = ParameterSet::midpoint_grid(c.param_grid);
    auto exps = kernels::curve_exponents(c.f, curve, grid.samples, c.cfg.pilot_horizon);
    int pos = 0;
    for (double e : exps) pos += e > 0.0 ? 1 : 0;
    std::sort(exps.begin(), exps.end());
    const size_t rank = size_t(std::ceil(c.cfg.pilot_quantile * exps.size()));
    const double lambda_bar = exps[std::clamp<size_t>(rank, 1, exps.size()) - 1];
    const double positive_fraction = double(pos) / exps.size();
    out["pilot"] = {{"horizon", c.cfg.pilot_horizon}, {"quantile", c.cfg.pilot_quantile},
                    {"positive_fraction", positive_fraction}};
    out["lambda_bar"] = lambda_bar;
    out["lambda_hat"] = asymptotic_dilation(c.f, c.cfg.dilation_n, c.dilation);
    out["log_dfhat_sup"] = kernels::max_log_projective_norm(c.f, 1, c.dilation);
    out["phi_sup"] = phi_sup(c.f, c.phi_grid);

    const auto& frac = out["selection"]["fraction"];
    if ((!frac.is_null() && !(frac.get<double>() > 0.0)) || !(positive_fraction > 0.0) || !(lambda_bar > 0.0)) {
        out["status"] = "early_exit";
        out["reason"] = "no positive exponent on positive measure set";
    }
    return out;
}

json stage_times(const Ctx& c, const json& cj) {
    if (!ok(cj)) return skipped("times");
    const RegularCurve curve = curve_from_json(cj.at("curve"));
    const double lbar = cj.at("lambda_bar").get<double>();
    json rows = json::array();
    json chosen;
    for (int k : c.cfg.schedule_k) {
        const double rho = 1.0 - std::ldexp(1.0, -k - 1);
        const double lmin = lbar * (1.0 - std::ldexp(1.0, -k));
        const double lmax = lbar * (1.0 + std::ldexp(1.0, -k));
        const auto g = find_good_time(c.f, curve, rho, lmin, lmax, c.cfg.n_min, c.cfg.n_max, c.param_grid);
        json trace = json::array();
        for (const auto& [n, m] : g.trace) trace.push_back({n, m});
        json row{{"k", k}, {"rho", rho}, {"lambda_min", lmin}, {"lambda_max", lmax}, {"found", g.found},
                 {"n", g.found ? json(g.n) : json(nullptr)}, {"measure", g.found ? json(g.T.measure()) : json(nullptr)},
                 {"trace", std::move(trace)}};
        rows.push_back(row);
        if (g.found) {
            chosen = row;
            chosen.erase("trace");
            chosen["T"] = params_to_json(g.T);
        }
    }
    json out{{"stage", "times"}, {"status", "ok"}, {"schedule", std::move(rows)}};
    if (chosen.is_null()) {
        out["status"] = "early_exit";
        out["reason"] = "no good time in [" + std::to_string(c.cfg.n_min) + ", " + std::to_string(c.cfg.n_max) + "]";
    } else {
        out["chosen"] = std::move(chosen);
    }
    return out;
}

json stage_cluster(const Ctx& c, const json& cj, const json& tj) {
    if (!ok(tj)) return skipped("cluster");
    const RegularCurve curve = curve_from_json(cj.at("curve"));
    const auto& chosen = tj.at("chosen");
    const ParameterSet T = params_from_json(chosen.at("T"));
    const int n = chosen.at("n").get<int>();
    std::vector<std::vector<MomentVector>> tracked;
    for (int idx : T.member_indices()) {
        const auto orbit = projective_orbit(c.f, curve.lifted_point(T.samples[idx]), n);
        std::vector<MomentVector> list{moment_vector(empirical_from_orbit(orbit), c.dict)};
        for (double a : c.cfg.alpha_grid)
            for (int L : c.cfg.L_grid) {
                const auto nd = maximal_neutral_segments({orbit.phi, std::nullopt}, a, L);
                list.push_back(moment_vector(neutral_from_orbit(orbit, nd), c.dict));
            }
        tracked.push_back(std::move(list));
    }
    const auto cr = cluster_parameters(T, tracked, c.dict, c.cfg.cluster_delta);
    const int rep = cr.selected.member_indices().front();
    const double s = cr.selected.samples[rep];
    return {{"stage", "cluster"},       {"status", "ok"},
            {"delta", c.cfg.cluster_delta}, {"cover_size", cr.cover_size},
            {"ratio", cr.ratio},          {"T_prime", params_to_json(cr.selected)},
            {"representative", {{"s", s}, {"xi", curve.lifted_point(s)}}}};
}

double shift_distance(const SurfaceMap& f, const EmpiricalMeasure& mu, const TestDictionary& dict) {
    EmpiricalMeasure img = mu;
    for (auto& a : img.atoms) a.point = projective_apply(f, a.point);
    return weak_star_distance(mu, img, dict);
}

json stage_decompose(const Ctx& c, const json& cj, const json& kj) {
    if (!ok(kj)) return skipped("decompose");
    const auto xi = kj.at("representative").at("xi").get<ProjectivePoint>();
    const auto dec = decompose(c.f, xi, c.cfg.decompose_n, c.cfg.alpha_grid, c.cfg.L_grid,
                               {c.cfg.stabilization_tol, true});
    const double phi_bound = std::max(cj.at("phi_sup").get<double>(), dec.orbit_phi_sup);
    const auto ic = check_item_c(dec, phi_bound);
    std::mt19937_64 rng(c.cfg.seed);
    const auto id = check_item_d(c.f, dec, c.cfg.item_d_samples, c.cfg.item_d_horizon, rng);
    const auto scan = periodic_orbit_scan(c.f, c.cfg.periodic_max_period, c.cfg.periodic_grid);

    json out{{"stage", "decompose"}, {"status", "ok"}, {"n_used", dec.n}, {"beta", dec.beta},
             {"suffix_positive", dec.suffix_positive}, {"stabilization_gap", dec.stabilization_gap},
             {"orbit_phi_sup", dec.orbit_phi_sup}, {"phi_bound", phi_bound}};
    out["table"] = table_to_json(dec.table);
    out["item_c"] = item_c_to_json(ic);
    out["item_d"] = item_d_to_json(id);
    out["periodic"] = periodic_to_json(scan);
    out["phi_integral_mu1"] = dec.mu1_hat.empty() ? json(nullptr) : json(dec.mu1_hat.integrate_phi(c.f));
    out["lambda_plus"] = nullptr;
    out["lambda_plus_violation"] = nullptr;
    if (dec.beta > 0.0) {
        try {
            out["lambda_plus"] = lyapunov_of_measure(c.f, dec.mu1_hat, scan);
        } catch (const HypothesisViolation& e) {
            out["lambda_plus_violation"] = e.what();
        }
    } else {
        out["lambda_plus_violation"] = "beta = 0: no hyperbolic part";
    }
    out["entropy_reference"] = opt(entropy_reference(c.f));
    const double algebra = (1.0 - dec.beta) * dec.mu0_hat.total_mass() + dec.beta * dec.mu1_hat.total_mass();
    out["algebra_residual"] = std::abs(algebra - dec.p_n.total_mass());
    out["invariance"] = {
        {"mu0", dec.mu0_hat.empty() ? json(nullptr) : json(shift_distance(c.f, dec.mu0_hat, c.dict))},
        {"mu1", dec.mu1_hat.empty() ? json(nullptr) : json(shift_distance(c.f, dec.mu1_hat, c.dict))}};
    out["mu0_hat"] = measure_to_json(dec.mu0_hat, c.dict.version());
    out["mu1_hat"] = measure_to_json(dec.mu1_hat, c.dict.version());
    write_text(c.dir + "/neutral_table.csv", neutral_table_csv(dec.table));
    return out;
}

json stage_classify(const Ctx& c, const json& cj, const json& tj, const json& kj, const json& dj) {
    if (!ok(dj)) return skipped("classify");
    const RegularCurve curve = curve_from_json(cj.at("curve"));
    const int n = tj.at("chosen").at("n").get<int>();
    const ParameterSet Tp = params_from_json(kj.at("T_prime"));
    const double gamma = c.cfg.gamma;
    const int n1 = c.cfg.resolved_color_length();
    const int capL = c.cfg.resolved_classify_L();
    const double alpha = c.cfg.alpha_grid.front();
    const double beta = dj.at("beta").get<double>();
    const auto& cg = c.cfg.cell_grid;

    const auto mu0 = measure_from_json(dj.at("mu0_hat"), c.dict.version());
    const auto mu1 = measure_from_json(dj.at("mu1_hat"), c.dict.version());
    const CellSet U0 = heavy_cells(mu0, gamma, cg[0], cg[1], cg[2]);
    std::vector<CellSet> colors{heavy_cells(mu1, gamma, cg[0], cg[1], cg[2])};
    const int removed = separate_colors(c.f, colors, {n1});

    std::map<std::vector<int>, std::vector<int>> by_type;
    std::map<std::vector<int>, SegmentClassification> type_cls;
    int budget_pass = 0;
    double worst_blank = INFINITY, worst_filler = INFINITY, worst_color = INFINITY;
    std::string csv;
    bool header = true;
    for (int idx : Tp.member_indices()) {
        const auto orbit = projective_orbit(c.f, curve.lifted_point(Tp.samples[idx]), n);
        std::vector<std::uint8_t> in0(n), in1(n);
        for (int i = 0; i < n; ++i) {
            in0[i] = U0.contains(orbit.points[i]);
            in1[i] = colors[0].contains(orbit.points[i]);
        }
        const auto cls = classify_segments({orbit.phi, std::nullopt}, in0, {in1}, alpha, capL, gamma, {n1});
        by_type[cls.type_theta].push_back(idx);
        type_cls.emplace(cls.type_theta, cls);
        const auto sb = size_budget_check(cls, beta, {1.0}, gamma);
        budget_pass += sb.pass() ? 1 : 0;
        worst_blank = std::min(worst_blank, sb.blank_total - sb.blank_bound);
        worst_filler = std::min(worst_filler, sb.filler_bound - sb.filler_total);
        worst_color = std::min(worst_color, sb.color_bounds[0] - sb.color_totals[0]);
        csv += classification_csv(cls, idx, header);
        header = false;
    }
    write_text(c.dir + "/classification.csv", csv);

    std::set<std::vector<int>> types;
    json tlist = json::array();
    for (const auto& [theta, members] : by_type) {
        types.insert(theta);
        tlist.push_back({{"members", members}, {"classification", classification_to_json(type_cls.at(theta))}});
    }
    const auto tc = count_types(types, n, gamma);
    return {{"stage", "classify"},
            {"status", "ok"},
            {"alpha", alpha},
            {"classify_L", capL},
            {"color_length", n1},
            {"U0_cells", U0.count()},
            {"U1_cells", colors[0].count()},
            {"separation_removed", removed},
            {"types", std::move(tlist)},
            {"type_count", {{"observed", tc.observed}, {"log_bound", tc.log_bound}, {"pass", tc.pass}}},
            {"size_budget",
             {{"members", Tp.count()},
              {"members_passing", budget_pass},
              {"worst_blank_slack", opt(std::isfinite(worst_blank) ? std::optional(worst_blank) : std::nullopt)},
              {"worst_color_slack", opt(std::isfinite(worst_color) ? std::optional(worst_color) : std::nullopt)},
              {"worst_filler_slack", opt(std::isfinite(worst_filler) ? std::optional(worst_filler) : std::nullopt)}}}};
}

json stage_count(const Ctx& c, const json& cj, const json& tj, const json& kj, const json& dj, const json& sj) {
    if (!ok(sj)) return skipped("count");
    const RegularCurve curve = curve_from_json(cj.at("curve"));
    const auto& chosen = tj.at("chosen");
    const int n = chosen.at("n").get<int>();
    const ParameterSet Tp = params_from_json(kj.at("T_prime"));
    const auto h_ref = opt_from(dj, "entropy_reference");
    const auto lplus = opt_from(dj, "lambda_plus");
    const double beta = dj.at("beta").get<double>();

    KappaTable kappa;
    kappa.lambda_hat = cj.at("lambda_hat").get<double>();
    kappa.r = c.cfg.r;
    kappa.eta = c.cfg.eta;
    kappa.colors = {{c.cfg.resolved_color_length(), h_ref.value_or(lplus.value_or(0.0)), 1.0}};
    kappa.filler_constant =
        c.cfg.filler_constant >= 0.0 ? c.cfg.filler_constant : std::max(0.0, cj.at("log_dfhat_sup").get<double>());

    std::vector<TypeFamily> fams;
    json flist = json::array();
    bool all_cover = true, all_certified = true;
    for (const auto& t : sj.at("types")) {
        const auto cls = classification_from_json(t.at("classification"));
        const ParameterSet covered = Tp.restricted(t.at("members").get<std::vector<int>>());
        auto tf = build_family_for_type(cls, curve, c.f, kappa, c.cfg.eps(), c.cfg.eps_hat, c.cfg.N, covered, c.sub);
        const bool cov = tf.family.covers(), cert = tf.family.certified();
        all_cover = all_cover && cov;
        all_certified = all_certified && cert;
        flist.push_back({{"card", tf.family.card()},
                         {"log_budget", tf.log_budget},
                         {"counts_after_segment", tf.counts_after_segment},
                         {"covers", cov},
                         {"certified", cert},
                         {"family", family_to_json(tf.family)}});
        fams.push_back(std::move(tf));
    }

    AdmissibleFamily all;
    all.covered_set = Tp;
    all.schedule = {0, n};
    std::vector<const AdmissibleFamily*> ptrs;
    for (const auto& tf : fams) {
        all.members.insert(all.members.end(), tf.family.members.begin(), tf.family.members.end());
        ptrs.push_back(&tf.family);
    }
    const double lambda_min = chosen.at("lambda_min").get<double>();
    const auto lower = lower_bound_check(all, chosen.at("rho").get<double>(), lambda_min, curve);
    json upper = nullptr;
    if (h_ref)
        upper = bound_to_json(upper_bound_check(ptrs, beta, *h_ref, c.cfg.eta, c.cfg.gamma, c.cfg.r, n,
                                                kappa.lambda_hat));

    // total count after every step, each family read at its last mark <= m
    json series = json::array();
    for (int m = 1; m <= n; ++m) {
        double total = 0.0;
        for (const auto& tf : fams) {
            const auto& s = tf.family.schedule;
            const size_t j = size_t(std::upper_bound(s.begin(), s.end(), m) - s.begin()) - 1;
            total += tf.family.counts_per_mark[j];
        }
        series.push_back({m, total > 0.0 ? std::log(total) / m : 0.0});
    }
    return {{"stage", "count"},
            {"status", "ok"},
            {"n", n},
            {"eps", c.cfg.eps()},
            {"eps_hat", c.cfg.eps_hat},
            {"kappa", {{"lambda_hat", kappa.lambda_hat}, {"filler_constant", kappa.filler_constant}, {"h_c", kappa.colors[0].h}}},
            {"total_card", all.card()},
            {"all_cover", all_cover},
            {"all_certified", all_certified},
            {"lower", bound_to_json(lower)},
            {"upper", upper},
            {"rate_series", std::move(series)},
            {"families", std::move(flist)}};
}

Verdict make_verdict(std::string name, std::string rel, std::optional<double> lhs, std::optional<double> rhs,
                     double tol, std::string note = "") {
    Verdict v{std::move(name), std::move(rel), lhs, rhs, tol, VerdictStatus::Unknown, std::move(note)};
    if (lhs && rhs) {
        bool pass = false;
        if (v.relation == "=") pass = std::abs(*lhs - *rhs) <= tol;
        else if (v.relation == "<=") pass = *lhs <= *rhs + tol;
        else pass = *lhs + tol >= *rhs;
        v.status = pass ? VerdictStatus::Pass : VerdictStatus::Fail;
    }
    return v;
}

CertificateReport assemble(const Ctx& c, const std::map<std::string, json>& docs) {
    CertificateReport r;
    r.model = c.f.name();
    r.chain_tol = c.cfg.chain_tol;
    r.status = "complete";
    auto doc = [&](const std::string& s) -> const json* {
        auto it = docs.find(s);
        return it == docs.end() ? nullptr : &it->second;
    };
    for (const auto& s : pipeline_stages()) {
        const json* d = doc(s);
        if (d && d->value("status", "") == "early_exit") {
            r.status = "early_exit";
            r.exit_reason = d->at("reason").get<std::string>();
            break;
        }
        if (!d && s != "certificate") r.status = "partial";
    }
    if (const json* cj = doc("curve")) {
        r.lambda_bar = opt_from(*cj, "lambda_bar");
        r.lambda_hat = opt_from(*cj, "lambda_hat");
        if (cj->value("status", "") == "early_exit")
            r.verdicts.push_back({"positive exponent on a positive-measure parameter set", ">", r.lambda_bar, 0.0, 0.0,
                                  VerdictStatus::Fail, r.exit_reason});
    }
    if (const json* tj = doc("times"); tj && ok(*tj)) {
        const auto& ch = tj->at("chosen");
        r.k = ch.at("k").get<int>();
        r.n = ch.at("n").get<int>();
        r.rho = ch.at("rho").get<double>();
        r.lambda_min = ch.at("lambda_min").get<double>();
        r.lambda_max = ch.at("lambda_max").get<double>();
    } else if (tj && tj->value("status", "") == "early_exit") {
        r.verdicts.push_back({"good time exists", "", std::nullopt, std::nullopt, 0.0, VerdictStatus::Fail, r.exit_reason});
    }
    const double tol = c.cfg.chain_tol;
    if (const json* dj = doc("decompose"); dj && ok(*dj)) {
        r.beta = dj->at("beta").get<double>();
        r.phi_integral_mu1 = opt_from(*dj, "phi_integral_mu1");
        r.lambda_plus_mu1 = opt_from(*dj, "lambda_plus");
        r.h_reference = opt_from(*dj, "entropy_reference");
        r.neutral_table = table_from_json(dj->at("table"));
        const auto& ic = dj->at("item_c");
        if (ic.at("applicable").get<bool>() && !ic.at("pass").get<bool>())
            r.asserted_failures.push_back("item (c) bound violated on a suffix-positive orbit");
        if (dj->at("algebra_residual").get<double>() > 1e-9)
            r.asserted_failures.push_back("decomposition masses do not add up");

        const auto beta = *r.beta;
        auto times_beta = [&](std::optional<double> v) -> std::optional<double> {
            if (!v) return std::nullopt;
            return beta * *v;
        };
        std::string note;
        if (!dj->at("lambda_plus_violation").is_null()) note = dj->at("lambda_plus_violation").get<std::string>();
        Verdict v1 = make_verdict("beta * lambda_plus(mu1) = lambda_bar", "=", times_beta(r.lambda_plus_mu1),
                                  r.lambda_bar, tol, note);
        if (!r.lambda_plus_mu1) v1.status = VerdictStatus::Fail;
        r.verdicts.push_back(v1);
        r.verdicts.push_back(make_verdict("lambda_bar <= beta * h(mu1)", "<=", r.lambda_bar,
                                          times_beta(r.h_reference), tol, r.h_reference ? "" : "h unknown"));
        r.verdicts.push_back(make_verdict("beta * h(mu1) <= beta * lambda_plus(mu1)", "<=", times_beta(r.h_reference),
                                          times_beta(r.lambda_plus_mu1), tol, r.h_reference ? "" : "h unknown"));
        Verdict vc{"item (c) bound on neutral parts", "", std::nullopt, std::nullopt, 1e-12,
                   ic.at("applicable").get<bool>() ? (ic.at("pass").get<bool>() ? VerdictStatus::Pass : VerdictStatus::Fail)
                                                   : VerdictStatus::Unknown,
                   ic.at("applicable").get<bool>() ? "" : "orbit is not suffix-positive"};
        r.verdicts.push_back(vc);
    }
    if (const json* sj = doc("classify"); sj && ok(*sj)) {
        const auto& tc = sj->at("type_count");
        r.verdicts.push_back(make_verdict("log #types <= H(10 gamma) n", "<=",
                                          std::log(std::max(1, tc.at("observed").get<int>())),
                                          tc.at("log_bound").get<double>(), 0.0));
    }
    if (const json* kj = doc("count"); kj && ok(*kj)) {
        r.card = kj->at("total_card").get<long long>();
        if (r.card > 0 && r.n > 0) r.counting_rate = std::log(double(r.card)) / r.n;
        for (const auto& p : kj->at("rate_series")) r.rate_series.emplace_back(p[0].get<int>(), p[1].get<double>());
        if (!kj->at("all_cover").get<bool>()) r.asserted_failures.push_back("a family does not cover its parameter set");
        if (!kj->at("all_certified").get<bool>()) r.asserted_failures.push_back("a family certificate exceeds (eps, eps_hat)");
        const auto lower = bound_from_json(kj->at("lower"));
        r.verdicts.push_back(make_verdict("log Card >= 2n log rho + lambda_min n + log min|sigma'|", ">=",
                                          lower.log_card, lower.log_bound, 0.0));
        if (kj->at("upper").is_null()) {
            r.verdicts.push_back({"log Card <= beta h n + c n", "<=", std::nullopt, std::nullopt, 0.0,
                                  VerdictStatus::Unknown, "h unknown"});
        } else {
            const auto upper = bound_from_json(kj->at("upper"));
            r.verdicts.push_back(make_verdict("log Card <= beta h n + c n", "<=", upper.log_card, upper.log_bound, 0.0));
        }
    }
    return r;
}

}  // namespace

json report_to_json(const CertificateReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts)
        verdicts.push_back({{"name", v.name}, {"relation", v.relation}, {"lhs", opt(v.lhs)}, {"rhs", opt(v.rhs)},
                            {"tol", v.tol}, {"status", to_string(v.status)}, {"note", v.note}});
    json series = json::array();
    for (const auto& [m, rate] : r.rate_series) series.push_back({m, rate});
    return {{"model", r.model},
            {"status", r.status},
            {"exit_reason", r.exit_reason},
            {"lambda_bar", opt(r.lambda_bar)},
            {"lambda_hat", opt(r.lambda_hat)},
            {"beta", opt(r.beta)},
            {"phi_integral_mu1", opt(r.phi_integral_mu1)},
            {"lambda_plus_mu1", opt(r.lambda_plus_mu1)},
            {"counting_rate", opt(r.counting_rate)},
            {"h_reference", opt(r.h_reference)},
            {"k", r.k},
            {"n", r.n},
            {"rho", opt(r.rho)},
            {"lambda_min", opt(r.lambda_min)},
            {"lambda_max", opt(r.lambda_max)},
            {"card", r.card},
            {"chain_tol", r.chain_tol},
            {"verdicts", std::move(verdicts)},
            {"rate_series", std::move(series)},
            {"neutral_table", table_to_json(r.neutral_table)},
            {"asserted_failures", r.asserted_failures},
            {"exit_code", r.exit_code()}};
}

CertificateReport report_from_json(const json& j) {
    CertificateReport r;
    r.model = j.at("model").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.exit_reason = j.at("exit_reason").get<std::string>();
    r.lambda_bar = opt_from(j, "lambda_bar");
    r.lambda_hat = opt_from(j, "lambda_hat");
    r.beta = opt_from(j, "beta");
    r.phi_integral_mu1 = opt_from(j, "phi_integral_mu1");
    r.lambda_plus_mu1 = opt_from(j, "lambda_plus_mu1");
    r.counting_rate = opt_from(j, "counting_rate");
    r.h_reference = opt_from(j, "h_reference");
    r.k = j.at("k").get<int>();
    r.n = j.at("n").get<int>();
    r.rho = opt_from(j, "rho");
    r.lambda_min = opt_from(j, "lambda_min");
    r.lambda_max = opt_from(j, "lambda_max");
    r.card = j.at("card").get<long long>();
    r.chain_tol = j.at("chain_tol").get<double>();
    for (const auto& v : j.at("verdicts")) {
        Verdict x;
        x.name = v.at("name").get<std::string>();
        x.relation = v.at("relation").get<std::string>();
        x.lhs = opt_from(v, "lhs");
        x.rhs = opt_from(v, "rhs");
        x.tol = v.at("tol").get<double>();
        const auto s = v.at("status").get<std::string>();
        x.status = s == "pass" ? VerdictStatus::Pass : s == "fail" ? VerdictStatus::Fail : VerdictStatus::Unknown;
        x.note = v.at("note").get<std::string>();
        r.verdicts.push_back(std::move(x));
    }
    for (const auto& p : j.at("rate_series")) r.rate_series.emplace_back(p[0].get<int>(), p[1].get<double>());
    r.neutral_table = table_from_json(j.at("neutral_table"));
    r.asserted_failures = j.at("asserted_failures").get<std::vector<std::string>>();
    return r;
}

void emit_report(const CertificateReport& r, ReportFormat format, const std::string& path) {
    std::ostringstream os;
    os.precision(17);
    auto val = [](const std::optional<double>& v) {
        if (!v) return std::string();
        std::ostringstream s;
        s.precision(17);
        s << *v;
        return s.str();
    };
    switch (format) {
        case ReportFormat::Json:
            os << report_to_json(r).dump(2) << '\n';
            break;
        case ReportFormat::Csv:
            os << "name,relation,lhs,rhs,tol,status\n";
            for (const auto& v : r.verdicts)
                os << '"' << v.name << "\"," << v.relation << ',' << val(v.lhs) << ',' << val(v.rhs) << ',' << v.tol
                   << ',' << to_string(v.status) << '\n';
            break;
        case ReportFormat::PlotData:
            os << "# n rate\n";
            for (const auto& [m, rate] : r.rate_series) os << m << ' ' << rate << '\n';
            os << "\n\n# alpha L neutral_mass\n";
            for (size_t a = 0; a < r.neutral_table.alphas.size(); ++a)
                for (size_t l = 0; l < r.neutral_table.Ls.size(); ++l)
                    os << r.neutral_table.alphas[a] << ' ' << r.neutral_table.Ls[l] << ' '
                       << r.neutral_table.mass[a][l] << '\n';
            break;
    }
    write_text(path, os.str());
}

CertificateReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& opts) {
    cfg.validate();
    const auto& stages = pipeline_stages();
    auto pos = [&](const std::string& s) {
        if (s.empty()) return 0;
        const auto it = std::find(stages.begin(), stages.end(), s);
        if (it == stages.end()) throw ConfigError("unknown stage '" + s + "'");
        return int(it - stages.begin());
    };
    const int from = pos(opts.from_stage), until = pos(opts.until_stage);
    std::filesystem::create_directories(opts.out_dir);

    Ctx c{cfg, cfg.make_map(), TestDictionary::trig(), opts.out_dir, {}, cfg.param_grid, {}, cfg.phi_grid};
    c.sub.r = cfg.r;
    c.sub.piece_grid = cfg.piece_grid;
    c.sub.depth_cap = cfg.depth_cap;
    c.sub.verify = cfg.verify;
    c.dilation = {cfg.dilation_grid[0], cfg.dilation_grid[1], cfg.dilation_grid[2]};
    if (cfg.verify) {
        c.param_grid *= 2;
        c.phi_grid *= 2;
        c.dilation = {2 * c.dilation.nu, 2 * c.dilation.nv, 2 * c.dilation.ntheta};
    }
    write_text(opts.out_dir + "/config.cfg", render_config(cfg));

    std::map<std::string, json> docs;
    auto path = [&](const std::string& s) { return opts.out_dir + "/" + s + ".json"; };
    for (int i = 0; i < from; ++i) {
        try {
            docs[stages[i]] = json::parse(read_text(path(stages[i])));
        } catch (const std::exception& e) {
            throw StageError(stages[i], std::string("cannot load persisted stage: ") + e.what());
        }
    }
    for (int i = from; i <= until && i + 1 < int(stages.size()); ++i) {
        const auto& s = stages[i];
        json out;
        try {
            if (s == "curve") out = stage_curve(c);
            else if (s == "times") out = stage_times(c, docs.at("curve"));
            else if (s == "cluster") out = stage_cluster(c, docs.at("curve"), docs.at("times"));
            else if (s == "decompose") out = stage_decompose(c, docs.at("curve"), docs.at("cluster"));
            else if (s == "classify")
                out = stage_classify(c, docs.at("curve"), docs.at("times"), docs.at("cluster"), docs.at("decompose"));
            else if (s == "count")
                out = stage_count(c, docs.at("curve"), docs.at("times"), docs.at("cluster"), docs.at("decompose"),
                                  docs.at("classify"));
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(s, e.what());
        }
        write_text(path(s), out.dump(1) + "\n");
        // later stages always read the persisted form
        docs[s] = json::parse(read_text(path(s)));
    }
    CertificateReport report = assemble(c, docs);
    if (until == int(stages.size()) - 1) {
        emit_report(report, ReportFormat::Json, opts.out_dir + "/certificate.json");
        emit_report(report, ReportFormat::Csv, opts.out_dir + "/certificate.csv");
        emit_report(report, ReportFormat::PlotData, opts.out_dir + "/certificate_plot.dat");
    }
    return report;
}

}  // namespace srb
