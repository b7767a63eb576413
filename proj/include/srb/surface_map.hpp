#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "srb/taylor.hpp"
#include "srb/torus.hpp"

namespace srb {

namespace model {

struct Identity {};

/// Linear automorphism x -> A x with integer entries and det = +-1.
struct Cat {
    Mat2 A{2.0, 1.0, 1.0, 1.0};
};

/// x -> A x + delta * (sin 2 pi v, sin 2 pi u) / 2 pi.
struct PerturbedCat {
    Mat2 A{2.0, 1.0, 1.0, 1.0};
    double delta = 0.02;
};

/// (u,v) -> (u + v + K sin(2 pi u)/2 pi, v + K sin(2 pi u)/2 pi).
struct Standard {
    double kick = 1.2;
};

/// (u,v) -> (u + delta sin(2 pi u)/2 pi, v + delta sin(2 pi v)/2 pi); source at (0,0),
/// sink at (1/2,1/2). Used as a test model for the source exclusion.
struct SourceSink {
    double delta = 0.5;
};

}  // namespace model

/// A diffeomorphism of T^2 with closed-form derivatives of every order up to kMaxOrder.
///
/// Immutable value type; all members are pure functions and safe to call concurrently.
class SurfaceMap {
public:
    using Model = std::variant<model::Identity, model::Cat, model::PerturbedCat, model::Standard,
                               model::SourceSink>;

    /// Validates the parameters; throws ModelError if the map is not a diffeomorphism.
    explicit SurfaceMap(Model m);

    static SurfaceMap identity() { return SurfaceMap(model::Identity{}); }
    static SurfaceMap cat(const Mat2& A = {2.0, 1.0, 1.0, 1.0}) { return SurfaceMap(model::Cat{A}); }
    static SurfaceMap perturbed_cat(double delta, const Mat2& A = {2.0, 1.0, 1.0, 1.0}) {
        return SurfaceMap(model::PerturbedCat{A, delta});
    }
    static SurfaceMap standard(double kick) { return SurfaceMap(model::Standard{kick}); }
    static SurfaceMap source_sink(double delta) { return SurfaceMap(model::SourceSink{delta}); }

    const std::string& name() const { return name_; }
    const Model& model() const { return model_; }
    int order() const { return kMaxOrder; }
    bool is_linear() const;
    /// The linear part for the cat map, nothing otherwise.
    std::optional<Mat2> linear_part() const;

    /// f on the universal cover: no reduction mod 1.
    std::array<double, 2> lifted(double u, double v) const;
    SurfacePoint apply(const SurfacePoint& x) const;
    Mat2 jacobian(double u, double v) const;
    /// Partials up to order r (r <= kMaxOrder) at an arbitrary representative.
    void jet(double u, double v, int r, Jet& out) const;
    /// f^{-1}; closed form where available, Newton iteration otherwise.
    SurfacePoint inverse(const SurfacePoint& y) const;

private:
    Model model_;
    std::string name_;
};

}  // namespace srb
