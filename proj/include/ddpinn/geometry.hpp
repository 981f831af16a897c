#pragma once

#include "ddpinn/common.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>

namespace ddpinn {

enum class Region { Omega1, Omega2, OnInterface };

//! Which side of the interface is labeled Omega1. Inside/Outside apply to
//! closed shapes, PositiveHalf/NegativeHalf to hyperplanes.
enum class Omega1Side { Inside, Outside, PositiveHalf, NegativeHalf };

//! How points are spread along a surface parametrization.
enum class SurfaceSpacing { Random, Stratified, Even };

//! Points closer than this to the interface are labeled OnInterface.
inline constexpr double kClassifyTolerance = 1e-10;
//! Maximum distance from the interface accepted by normal() and jump data.
inline constexpr double kOnInterfaceTolerance = 1e-8;

//---------------------------------------------------------------------------//
// Shape kinds (a snapshot at a single time)
//---------------------------------------------------------------------------//

//! Plane x[axis] = offset. The lower/upper box bounds the patch used for
//! sampling; distance and classification treat the plane as unbounded.
struct Hyperplane
{
    int axis = 0;
    double offset = 0;
    Vec lower;
    Vec upper;
};

struct Sphere
{
    Vec center;
    double radius = 1;
};

struct Ellipsoid
{
    Vec center;
    Vec semi_axes;
};

enum class Harmonic { Sin, Cos };

/*!
 * Closed star-shaped plane curve given in polar form about its center:
 *
 *   r(theta) = r0 + amplitude * h(lobes * (theta - rotation)),  h = sin | cos
 *
 * A positive rotation turns the curve counter-clockwise.
 */
struct PolarCurve
{
    Eigen::Vector2d center{0.0, 0.0};
    double r0 = 1;
    double amplitude = 0;
    int lobes = 1;
    Harmonic harmonic = Harmonic::Cos;
    double rotation = 0;

    double radius(double theta) const;
    double radius_derivative(double theta) const;
    Eigen::Vector2d point(double theta) const;
    Eigen::Vector2d tangent(double theta) const;
};

using ShapeKind = std::variant<Hyperplane, Sphere, Ellipsoid, PolarCurve>;

//---------------------------------------------------------------------------//
// Motion laws
//---------------------------------------------------------------------------//

struct Static
{
};

struct Translate
{
    Vec velocity;
};

//! Ellipsoid translation plus axis deformation a_i(t)^2 = a_i(0)^2 + rate_i t.
struct TranslateAndDeform
{
    Vec velocity;
    Vec squared_axis_rates;
};

//! Polar-curve translation, counter-clockwise rotation by angular_rate * t,
//! and amplitude(t) = amplitude(0) + amplitude_rate * t. The radial
//! deformation is applied in the body frame before rotation.
struct TranslateRotateDeform
{
    Vec velocity;
    double angular_rate = 0;
    double amplitude_rate = 0;
};

using Motion = std::variant<Static, Translate, TranslateAndDeform, TranslateRotateDeform>;

//! Interface Gamma(t): an immutable shape plus its motion law on [0, horizon].
class InterfaceShape
{
  public:
    explicit InterfaceShape(ShapeKind kind, Motion motion = Static{}, double horizon = 0);

    int dim() const { return dim_; }
    bool is_moving() const { return !std::holds_alternative<Static>(motion_); }
    bool is_closed() const { return !std::holds_alternative<Hyperplane>(kind_); }
    double horizon() const { return horizon_; }
    const ShapeKind& kind() const { return kind_; }
    const Motion& motion() const { return motion_; }

    //! Snapshot of the shape at time t. Throws for moving shapes when t is
    //! outside [0, horizon].
    ShapeKind at(double t) const;

  private:
    ShapeKind kind_;
    Motion motion_;
    double horizon_;
    int dim_;
};

//---------------------------------------------------------------------------//
// Queries
//---------------------------------------------------------------------------//

//! Unsigned Euclidean distance from x to Gamma(t).
double distance(const InterfaceShape& shape, const Vec& x, double t = 0);

//! Distance signed negative inside a closed shape (or on the negative side
//! of a hyperplane).
double signed_distance(const InterfaceShape& shape, const Vec& x, double t = 0);

//! True strictly inside a closed shape, or on the positive side of a plane.
bool inside_or_positive(const InterfaceShape& shape, const Vec& x, double t = 0);

//! Unit normal pointing from the inside (or negative half) to the outside.
Vec outward_normal(const InterfaceShape& shape, const Vec& p, double t = 0);

//! Unit normal at p on Gamma(t) pointing from Omega1 into Omega2.
Vec normal(const InterfaceShape& shape, const Vec& p, double t, Omega1Side omega1_side);

Region classify(const InterfaceShape& shape, const Vec& x, double t, Omega1Side omega1_side);

//! n points on Gamma(t) as columns of a (dim x n) matrix.
Mat sample_interface(const InterfaceShape& shape, std::size_t n, double t,
                     std::uint64_t seed, SurfaceSpacing spacing = SurfaceSpacing::Random);

//! Foot point of the closest-point projection onto an ellipsoid surface.
struct EllipsoidProjection
{
    Vec foot;
    double distance = 0;
    int iterations = 0;
    bool used_bisection = false;
};

EllipsoidProjection project_onto_ellipsoid(const Ellipsoid& ellipsoid, const Vec& x);

struct CurveProjection
{
    double theta = 0;
    Eigen::Vector2d foot;
    double distance = 0;
};

CurveProjection project_onto_curve(const PolarCurve& curve, const Eigen::Vector2d& x);

//---------------------------------------------------------------------------//
// Outer domains
//---------------------------------------------------------------------------//

struct BoxDomain
{
    Vec lower;
    Vec upper;
};

//! Region enclosed by a polar curve (2D only).
struct PolarDomain
{
    PolarCurve boundary;
};

class Domain
{
  public:
    Domain(BoxDomain box);
    Domain(PolarDomain region);

    int dim() const;
    bool is_box() const { return std::holds_alternative<BoxDomain>(shape_); }
    const BoxDomain& bounding_box() const { return bbox_; }
    const std::variant<BoxDomain, PolarDomain>& shape() const { return shape_; }

    //! Strictly inside, more than tol away from the boundary.
    bool contains(const Vec& x, double tol = kClassifyTolerance) const;
    double boundary_distance(const Vec& x) const;

    //! m boundary points. Box faces receive counts proportional to their area.
    Mat sample_boundary(std::size_t m, std::uint64_t seed, SurfaceSpacing spacing) const;

  private:
    std::variant<BoxDomain, PolarDomain> shape_;
    BoxDomain bbox_;
};

}  // namespace ddpinn
