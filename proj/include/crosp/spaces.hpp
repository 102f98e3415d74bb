#pragma once

// Catalog and geometry of the compact rank-one symmetric spaces Q(d, d0):
// spheres S^d and the projective spaces RP^n, CP^n, HP^n, OP^2.
//
// Metric normalization: geodesic diameter π, total measure 1.
// Points on S^d are unit vectors in R^{d+1}. Points on FP^n (F = R, C, H)
// are unit representatives in F^{n+1} stored as (n+1)*d0 reals, defined up to
// right multiplication by a unit scalar. Points on OP^2 are stored as the
// 3x3 Hermitian octonionic idempotent itself: three real diagonal entries
// followed by the off-diagonal entries (1,2), (1,3), (2,3), 8 reals each.

#include "crosp/error.hpp"
#include "crosp/octonion.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crosp {

enum class Family { Sphere, RealProj, ComplexProj, QuatProj, OctProj };

struct SpaceSpec {
    Family family = Family::Sphere;
    int n = 2;  ///< projective dimension; equals d for spheres
    int d = 2;  ///< real dimension
    int d0 = 2; ///< dimension of the division algebra; equals d for spheres
    int m = 3;  ///< embedding dimension (d+1 for spheres)

    /// Length of the stored coordinate vector of a Point.
    int coord_size() const;
    /// Catalog name such as "s2", "cp2", "op2".
    std::string name() const;

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

struct Point {
    std::vector<double> coords;
};

struct PointSet {
    SpaceSpec space;
    std::vector<Point> points;
    std::string label;

    std::size_t size() const { return points.size(); }
};

/// Finite measure ξ on radii [0, π].
struct RadiusMeasure {
    enum class Kind { CanonicalSine, Quadrature };
    Kind kind = Kind::CanonicalSine;
    std::vector<double> nodes;
    std::vector<double> weights;

    /// dξ(r) = sin r dr, total mass 2.
    static RadiusMeasure canonical();
    /// Point masses weights[i] at nodes[i].
    static RadiusMeasure quadrature(std::vector<double> nodes, std::vector<double> weights);

    double total_mass() const;
    bool is_canonical() const { return kind == Kind::CanonicalSine; }
};

using RngStream = std::mt19937_64;

/// Independent stream for (seed, stream index).
RngStream make_stream(std::uint64_t seed, std::uint64_t stream);

SpaceSpec make_space(Family family, int n);
/// Parses catalog names: "s<d>", "rp<n>", "cp<n>", "hp<n>", "op2".
SpaceSpec parse_space(std::string_view name);
/// Family codes used in files: "s", "rp", "cp", "hp", "op".
std::string family_code(Family f);
Family parse_family(std::string_view code);

/// S^1, S^2, S^3, RP^2, CP^2, HP^2, OP^2.
std::vector<SpaceSpec> default_catalog();

/// Throws UsageError unless p is a valid point of the space.
void validate_point(const SpaceSpec& space, const Point& p, double tol = 1e-10);

/// Real trace form tr(Π(x)Π(y)) in [0, 1]; for spheres (1 + (x, y)) / 2.
double overlap(const SpaceSpec& space, std::span<const double> x, std::span<const double> y);

/// cos θ(x, y), clamped to [-1, 1].
double cos_geodesic(const SpaceSpec& space, std::span<const double> x, std::span<const double> y);

double geodesic(const SpaceSpec& space, const Point& x, const Point& y);
/// τ = sin(θ/2).
double chordal(const SpaceSpec& space, const Point& x, const Point& y);

/// Flattened Hermitian projection Π(x) in R^m; the unit vector itself on spheres.
std::vector<double> embed(const SpaceSpec& space, const Point& x);

/// Normalized volume v(r) of a ball of radius r.
double ball_volume(const SpaceSpec& space, double r);

/// γ(S^d) = d √π Γ(d/2) / (2 Γ((d+1)/2)).
double gamma_sphere(int d);
/// Invariance-principle constant γ(Q).
double gamma_const(const SpaceSpec& space);

/// Mean chordal distance <τ>.
double avg_chordal(const SpaceSpec& space);

bool supports_sampling(const SpaceSpec& space);
/// i.i.d. uniform points (not available on OP^2).
PointSet sample_uniform(const SpaceSpec& space, std::size_t count, RngStream& rng);
/// Writes one uniform point into out (size coord_size()).
void sample_uniform_into(const SpaceSpec& space, RngStream& rng, std::span<double> out);

/// Jordan idempotent of the representative (c1, c2, 1) / norm on OP^2.
Point chart_point_oct(const Octonion& c1, const Octonion& c2);

/// Octonionic Hermitian 3x3 matrix, row-major.
using OctMatrix3 = std::array<std::array<Octonion, 3>, 3>;
OctMatrix3 oct_matrix(const Point& p);
OctMatrix3 oct_product(const OctMatrix3& a, const OctMatrix3& b);

} // namespace crosp
