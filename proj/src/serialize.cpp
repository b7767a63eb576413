#include "srb/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "srb/error.hpp"

namespace srb {

void to_json(json& j, const SurfacePoint& p) { j = json::array({p.u, p.v}); }
void from_json(const json& j, SurfacePoint& p) { p = {j.at(0).get<double>(), j.at(1).get<double>()}; }
void to_json(json& j, const ProjectivePoint& p) { j = json::array({p.base.u, p.base.v, p.dir.theta}); }
void from_json(const json& j, ProjectivePoint& p) {
    p = {{j.at(0).get<double>(), j.at(1).get<double>()}, {j.at(2).get<double>()}};
}

json measure_to_json(const EmpiricalMeasure& mu, const std::string& dictionary_version) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back({a.point.base.u, a.point.base.v, a.point.dir.theta, a.weight});
    return {{"dictionary", dictionary_version}, {"atoms", std::move(atoms)}};
}

EmpiricalMeasure measure_from_json(const json& j, const std::string& expected_version) {
    if (j.at("dictionary").get<std::string>() != expected_version)
        throw PreconditionError("test dictionary version mismatch");
    EmpiricalMeasure mu;
    for (const auto& a : j.at("atoms"))
        mu.atoms.push_back({{{a[0].get<double>(), a[1].get<double>()}, {a[2].get<double>()}}, a[3].get<double>()});
    return mu;
}

json params_to_json(const ParameterSet& p) {
    return {{"grid", p.samples.size()}, {"spacing", p.spacing}, {"members", p.member_indices()}};
}

ParameterSet params_from_json(const json& j) {
    ParameterSet p = ParameterSet::midpoint_grid(j.at("grid").get<int>());
    return p.restricted(j.at("members").get<std::vector<int>>());
}

json curve_to_json(const RegularCurve& c) { return {{"x", c.x().c}, {"y", c.y().c}}; }

RegularCurve curve_from_json(const json& j) {
    return RegularCurve({j.at("x").get<std::vector<double>>()}, {j.at("y").get<std::vector<double>>()});
}

json family_to_json(const AdmissibleFamily& f) {
    json members = json::array(), sizes = json::array();
    for (const auto& m : f.members) members.push_back({m.a, m.b});
    for (const auto& row : f.sizes) {
        json r = json::array();
        for (const auto& c : row) r.push_back({c.mark, c.eps, c.eps_hat, c.inherited});
        sizes.push_back(std::move(r));
    }
    return {{"eps", f.eps},         {"eps_hat", f.eps_hat},         {"N", f.N},
            {"schedule", f.schedule}, {"counts_per_mark", f.counts_per_mark},
            {"covered_set", params_to_json(f.covered_set)},
            {"members", std::move(members)}, {"sizes", std::move(sizes)}};
}

AdmissibleFamily family_from_json(const json& j) {
    AdmissibleFamily f;
    f.eps = j.at("eps").get<double>();
    f.eps_hat = j.at("eps_hat").get<double>();
    f.N = j.at("N").get<int>();
    f.schedule = j.at("schedule").get<std::vector<int>>();
    f.counts_per_mark = j.at("counts_per_mark").get<std::vector<int>>();
    f.covered_set = params_from_json(j.at("covered_set"));
    for (const auto& m : j.at("members")) f.members.push_back({m[0].get<double>(), m[1].get<double>()});
    for (const auto& row : j.at("sizes")) {
        std::vector<SizeCertificate> r;
        for (const auto& c : row)
            r.push_back({c[0].get<int>(), c[1].get<double>(), c[2].get<double>(), c[3].get<bool>()});
        f.sizes.push_back(std::move(r));
    }
    return f;
}

json table_to_json(const NeutralTable& t) {
    return {{"alphas", t.alphas}, {"Ls", t.Ls}, {"mass", t.mass}, {"phi_integral", t.phi_integral}};
}

NeutralTable table_from_json(const json& j) {
    NeutralTable t;
    t.alphas = j.at("alphas").get<std::vector<double>>();
    t.Ls = j.at("Ls").get<std::vector<int>>();
    t.mass = j.at("mass").get<std::vector<std::vector<double>>>();
    t.phi_integral = j.at("phi_integral").get<std::vector<std::vector<double>>>();
    return t;
}

json item_c_to_json(const ItemCReport& r) {
    json e = json::array();
    for (const auto& x : r.entries)
        e.push_back({{"alpha", x.alpha}, {"L", x.L}, {"integral", x.integral}, {"lower", x.lower},
                     {"upper", x.upper}, {"ok", x.ok}});
    return {{"applicable", r.applicable}, {"pass", r.pass}, {"residual", r.residual}, {"entries", std::move(e)}};
}

json item_d_to_json(const ItemDReport& r) {
    return {{"applicable", r.applicable}, {"samples", r.samples}, {"fraction_positive", r.fraction_positive},
            {"min_average", r.min_average}};
}

json periodic_to_json(const PeriodicScanReport& r) {
    json orbits = json::array();
    for (const auto& o : r.orbits)
        orbits.push_back({{"period", o.period}, {"kind", to_string(o.kind)}, {"modulus_hi", o.modulus_hi},
                          {"modulus_lo", o.modulus_lo}, {"points", o.points}});
    return {{"max_period", r.max_period}, {"grid", r.grid}, {"degenerate_all_periodic", r.degenerate_all_periodic},
            {"orbits", std::move(orbits)}};
}

json bound_to_json(const BoundCheck& b) {
    return {{"pass", b.pass}, {"covering_ok", b.covering_ok}, {"log_card", b.log_card},
            {"log_bound", b.log_bound}, {"margin", b.margin}};
}

BoundCheck bound_from_json(const json& j) {
    BoundCheck b;
    b.pass = j.at("pass").get<bool>();
    b.covering_ok = j.at("covering_ok").get<bool>();
    // infinities are written as null
    auto num = [&](const char* k) { return j.at(k).is_null() ? -INFINITY : j.at(k).get<double>(); };
    b.log_card = num("log_card");
    b.log_bound = num("log_bound");
    b.margin = num("margin");
    return b;
}

SegmentClassification classification_from_json(const json& j) {
    SegmentClassification c;
    c.n = j.at("n").get<int>();
    c.type_theta = j.at("type").get<std::vector<int>>();
    for (const auto& s : j.at("segments")) {
        const auto name = s.at("class").get<std::string>();
        const SegmentClass cls = name == "blank" ? SegmentClass::Blank
                                 : name == "color" ? SegmentClass::Color
                                                   : SegmentClass::Filler;
        c.segments.push_back({{s.at("start").get<int>(), s.at("end").get<int>()}, cls, s.at("color").get<int>()});
    }
    return c;
}

json classification_to_json(const SegmentClassification& c) {
    json segs = json::array();
    for (const auto& s : c.segments)
        segs.push_back({{"start", s.interval.start}, {"end", s.interval.end}, {"class", to_string(s.cls)},
                        {"color", s.color}});
    return {{"n", c.n}, {"type", c.type_theta}, {"segments", std::move(segs)}};
}

std::string neutral_table_csv(const NeutralTable& t) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha,L,mass,phi_integral\n";
    for (size_t a = 0; a < t.alphas.size(); ++a)
        for (size_t l = 0; l < t.Ls.size(); ++l)
            os << t.alphas[a] << ',' << t.Ls[l] << ',' << t.mass[a][l] << ',' << t.phi_integral[a][l] << '\n';
    return os.str();
}

std::string classification_csv(const SegmentClassification& c, int member, bool header) {
    std::ostringstream os;
    if (header) os << "member,index,class,segment\n";
    for (size_t k = 0; k < c.segments.size(); ++k) {
        const auto& s = c.segments[k];
        for (int i = s.interval.start; i < s.interval.end; ++i)
            os << member << ',' << i << ',' << to_string(s.cls) << ',' << k << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace srb
