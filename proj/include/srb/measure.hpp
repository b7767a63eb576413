#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srb/dynamics.hpp"
#include "srb/orbit_analysis.hpp"
#include "srb/surface_map.hpp"

namespace srb {

struct Atom {
    ProjectivePoint point;
    double weight = 0.0;
};

/// Finite weighted atom list on the projective bundle; sub-probability measures are allowed.
struct EmpiricalMeasure {
    std::vector<Atom> atoms;

    double total_mass() const;
    bool empty() const { return atoms.empty(); }
    /// Throws PreconditionError on negative weights or mass above 1 + 1e-12.
    void validate() const;
    EmpiricalMeasure scaled(double factor) const;
    /// Integral of phi for the given map.
    double integrate_phi(const SurfaceMap& f) const;
};

/// Base measure on T^2 (directions dropped).
struct BaseMeasure {
    std::vector<std::pair<SurfacePoint, double>> atoms;
    double total_mass() const;
};

/// One dictionary entry: trig(2 pi (a u + b v)) * trig(2 c theta), with trig = cos or sin.
struct TestFunction {
    int a = 0;
    int b = 0;
    bool base_sin = false;
    int c = 0;
    bool fiber_sin = false;
    double lipschitz = 0.0;

    double operator()(const ProjectivePoint& xi) const;
};

/// Fixed, versioned list of test functions with weights 2^-j (j = 1, 2, ...).
class TestDictionary {
public:
    /// |a|, |b| <= A and 0 <= c <= C, one representative per (a,b) up to sign, zero functions dropped,
    /// ordered by total frequency a^2 + b^2 + c^2.
    static TestDictionary trig(int A = 3, int C = 2);

    const std::string& version() const { return version_; }
    const std::vector<TestFunction>& functions() const { return functions_; }
    const std::vector<double>& weights() const { return weights_; }
    int size() const { return int(functions_.size()); }
    /// Sum of 2^-j Lip(g_j): the Lipschitz constant of the distance to a Dirac mass.
    double lipschitz_sum() const;

    /// Integrals of every function against mu, in dictionary order.
    std::vector<double> moments(const EmpiricalMeasure& mu) const;
    /// All function values at one point; `out` has size() entries.
    void evaluate_all(const ProjectivePoint& xi, double* out) const;

private:
    std::string version_;
    int A_ = 0;
    int C_ = 0;
    std::vector<TestFunction> functions_;
    std::vector<double> weights_;
};

/// Moment vector plus dictionary version, so distances can be taken without the atoms.
struct MomentVector {
    std::string version;
    std::vector<double> values;
};

MomentVector moment_vector(const EmpiricalMeasure& mu, const TestDictionary& dict);
double weak_star_distance(const MomentVector& m, const MomentVector& n, const TestDictionary& dict);
double weak_star_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const TestDictionary& dict);

EmpiricalMeasure empirical_measure(const SurfaceMap& f, const ProjectivePoint& xi, int n);
EmpiricalMeasure empirical_from_orbit(const ProjectiveOrbit& orbit);
/// Atoms at the indices flagged in `dec`, weight 1/n each.
EmpiricalMeasure neutral_from_orbit(const ProjectiveOrbit& orbit, const NeutralDecomposition& dec);
EmpiricalMeasure neutral_empirical(const SurfaceMap& f, const ProjectivePoint& xi, int n, double alpha,
                                   int capL);

/// Neutral masses and phi-integrals of m_{alpha,L} over the grid; [alpha index][L index].
struct NeutralTable {
    std::vector<double> alphas;
    std::vector<int> Ls;
    std::vector<std::vector<double>> mass;
    std::vector<std::vector<double>> phi_integral;
};

struct MeasureDecomposition {
    double beta = 0.0;
    EmpiricalMeasure p_n;
    EmpiricalMeasure m0;       // unnormalized neutral part at the grid corner
    EmpiricalMeasure mu0_hat;  // m0 / (1 - beta), empty if beta = 1
    EmpiricalMeasure mu1_hat;  // (p_n - m0) / beta, empty if beta = 0
    NeutralTable table;
    int n = 0;
    bool suffix_positive = false;
    /// sup |phi| along the orbit, used for the item-(c) bound together with the grid sup.
    double orbit_phi_sup = 0.0;
    /// Largest variation of the neutral mass across the last refinement of the grid.
    double stabilization_gap = 0.0;
};

struct DecomposeOptions {
    /// Maximum allowed change of the corner neutral mass between the last two refinements.
    double stabilization_tol = 0.2;
    /// Shorten the orbit to its last time with all suffix sums >= 0.
    bool truncate_to_suffix_positive = false;
};

/// Neutral/hyperbolic split of the empirical measure along one orbit. Grids must be sorted
/// ascending; the corner is (smallest alpha, largest L). Throws NonStabilization.
MeasureDecomposition decompose(const SurfaceMap& f, const ProjectivePoint& xi, int n,
                               const std::vector<double>& alpha_grid, const std::vector<int>& L_grid,
                               const DecomposeOptions& opts = {});

struct ItemCEntry {
    double alpha = 0.0;
    int L = 0;
    double integral = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool ok = false;
};

struct ItemCReport {
    bool applicable = false;  // orbit passed the suffix-positivity check
    bool pass = false;
    double residual = 0.0;    // integral of phi against m0
    std::vector<ItemCEntry> entries;
};

/// -phi_bound / L <= int phi dm_{alpha,L} <= alpha for every grid pair (tolerance 1e-12).
ItemCReport check_item_c(const MeasureDecomposition& dec, double phi_bound);

struct ItemDReport {
    bool applicable = false;
    int samples = 0;
    double fraction_positive = 0.0;
    double min_average = 0.0;
};

/// Draws atoms of mu1_hat by weight and averages phi forward over `horizon` steps.
ItemDReport check_item_d(const SurfaceMap& f, const MeasureDecomposition& dec, int sample_count,
                         int horizon, std::mt19937_64& rng);

BaseMeasure pushforward(const EmpiricalMeasure& mu_hat);

enum class OrbitKind { Saddle, Repelling, Attracting, Elliptic, Parabolic };
const char* to_string(OrbitKind k);

struct PeriodicOrbit {
    int period = 1;
    std::vector<SurfacePoint> points;
    double modulus_hi = 0.0;  // larger eigenvalue modulus of Df^period
    double modulus_lo = 0.0;
    OrbitKind kind = OrbitKind::Saddle;
};

struct PeriodicScanReport {
    int max_period = 0;
    int grid = 0;
    /// Every seed was already fixed: the map has a continuum of periodic points.
    bool degenerate_all_periodic = false;
    std::vector<PeriodicOrbit> orbits;

    std::vector<SurfacePoint> repelling_points() const;
};

/// Newton refinement of f^p - id from grid seeds, p <= max_period <= 12; orbits of minimal period,
/// deduplicated within 1e-8 and sorted by (period, first point).
PeriodicScanReport periodic_orbit_scan(const SurfaceMap& f, int max_period, int grid);

/// Integral of phi against mu_hat; throws HypothesisViolation if it is not positive or mu_hat
/// puts mass within 1e-3 of a repelling periodic point.
double lyapunov_of_measure(const SurfaceMap& f, const EmpiricalMeasure& mu_hat,
                           const PeriodicScanReport& source_check);

/// Metric entropy of volume for linear models, none otherwise.
std::optional<double> entropy_reference(const SurfaceMap& f);

struct ClusterResult {
    ParameterSet selected;
    int cover_size = 0;
    int largest_cell = 0;
    double ratio = 0.0;  // |T'| / |T|
};

/// Greedy cover of the members by balls of radius delta/2 in the max-over-tracked-measures
/// distance; keeps the most populous ball. measures[i] lists the tracked moment vectors of the
/// i-th member (in member order).
ClusterResult cluster_parameters(const ParameterSet& params,
                                 const std::vector<std::vector<MomentVector>>& measures,
                                 const TestDictionary& dict, double delta);

/// Union of cells of a uniform (u, v, theta) grid.
struct CellSet {
    int nu = 16;
    int nv = 16;
    int ntheta = 8;
    std::vector<std::uint8_t> cells;

    int cell_index(const ProjectivePoint& xi) const;
    ProjectivePoint cell_center(int idx) const;
    bool contains(const ProjectivePoint& xi) const;
    double mass(const EmpiricalMeasure& mu) const;
    int count() const;
};

/// Heaviest cells of mu until the covered mass exceeds (1 - gamma^2) of the total.
CellSet heavy_cells(const EmpiricalMeasure& mu, double gamma, int nu = 16, int nv = 16, int ntheta = 8);

/// Removes from colors[c'] every cell hit by f-hat^j of a cell center of colors[c], c != c',
/// 0 <= j <= lengths[c]. Returns the number of removed cells.
int separate_colors(const SurfaceMap& f, std::vector<CellSet>& colors, const std::vector<int>& lengths);

}  // namespace srb
