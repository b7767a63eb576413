#pragma once

#include <string>

#include "json.hpp"
#include "srb/curve.hpp"
#include "srb/measure.hpp"
#include "srb/reparam.hpp"
#include "srb/segments.hpp"

namespace srb {

using json = nlohmann::ordered_json;

void to_json(json& j, const SurfacePoint& p);
void from_json(const json& j, SurfacePoint& p);
void to_json(json& j, const ProjectivePoint& p);
void from_json(const json& j, ProjectivePoint& p);

/// {"dictionary": version, "atoms": [[u, v, theta, weight], ...]}.
json measure_to_json(const EmpiricalMeasure& mu, const std::string& dictionary_version);
EmpiricalMeasure measure_from_json(const json& j, const std::string& expected_version);

/// {"grid": g, "spacing": ds, "members": [sample indices]} on the midpoint grid.
json params_to_json(const ParameterSet& p);
ParameterSet params_from_json(const json& j);

json curve_to_json(const RegularCurve& c);
RegularCurve curve_from_json(const json& j);

json family_to_json(const AdmissibleFamily& f);
AdmissibleFamily family_from_json(const json& j);

json table_to_json(const NeutralTable& t);
NeutralTable table_from_json(const json& j);

json item_c_to_json(const ItemCReport& r);
json item_d_to_json(const ItemDReport& r);
json periodic_to_json(const PeriodicScanReport& r);
json bound_to_json(const BoundCheck& b);
BoundCheck bound_from_json(const json& j);
json classification_to_json(const SegmentClassification& c);
/// Segments and type only; the scalar parameters are not stored.
SegmentClassification classification_from_json(const json& j);

/// alpha,L,mass,phi_integral rows.
std::string neutral_table_csv(const NeutralTable& t);
/// member,index,class,segment rows; `member` labels the orbit.
std::string classification_csv(const SegmentClassification& c, int member, bool header);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace srb
