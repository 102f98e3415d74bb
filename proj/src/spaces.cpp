#include "crosp/spaces.hpp"

#include "crosp/specfun.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace crosp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int algebra_dim(Family f)
{
    switch (f) {
    case Family::RealProj:
        return 1;
    case Family::ComplexProj:
        return 2;
    case Family::QuatProj:
        return 4;
    case Family::OctProj:
        return 8;
    case Family::Sphere:
        break;
    }
    return 0;
}

// Σ conj(x_i) y_i over F = R, C, H; returns the squared modulus.
double abs2_inner(int d0, std::span<const double> x, std::span<const double> y)
{
    const std::size_t len = x.size();
    switch (d0) {
    case 1: {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            s += x[i] * y[i];
        return s * s;
    }
    case 2: {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < len; i += 2) {
            re += x[i] * y[i] + x[i + 1] * y[i + 1];
            im += x[i] * y[i + 1] - x[i + 1] * y[i];
        }
        return re * re + im * im;
    }
    case 4: {
        Quaternion acc;
        for (std::size_t i = 0; i < len; i += 4) {
            const Quaternion a{{x[i], x[i + 1], x[i + 2], x[i + 3]}};
            const Quaternion b{{y[i], y[i + 1], y[i + 2], y[i + 3]}};
            acc = acc + a.conj() * b;
        }
        return acc.norm2();
    }
    default:
        throw DomainError("abs2_inner: unsupported algebra dimension");
    }
}

Octonion oct_at(std::span<const double> c, std::size_t offset)
{
    Octonion o;
    for (int k = 0; k < 8; ++k)
        o.v[k] = c[offset + k];
    return o;
}

// Offsets of the off-diagonal octonion entries (1,2), (1,3), (2,3).
constexpr std::array<std::size_t, 3> kOctOffDiag = {3, 11, 19};

double oct_trace_form(std::span<const double> p, std::span<const double> q)
{
    double s = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    double off = 0.0;
    for (std::size_t k = 3; k < 27; ++k)
        off += p[k] * q[k];
    return s + 2.0 * off;
}

void check_same_size(const SpaceSpec& space, std::span<const double> x)
{
    if (x.size() != static_cast<std::size_t>(space.coord_size()))
        throw UsageError("point has " + std::to_string(x.size()) + " coordinates, " + space.name() + " needs " +
                         std::to_string(space.coord_size()));
}

// sin(θ/2) and cos(θ/2) from the representatives, avoiding acos near the ends.
std::pair<double, double> half_angle(const SpaceSpec& space, std::span<const double> x, std::span<const double> y)
{
    if (space.family == Family::Sphere) {
        double dm = 0.0, dp = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            dm += (x[i] - y[i]) * (x[i] - y[i]);
            dp += (x[i] + y[i]) * (x[i] + y[i]);
        }
        return {0.5 * std::sqrt(dm), 0.5 * std::sqrt(dp)};
    }
    // sin²(θ/2) = |Π(x) - Π(y)|² / 2 from entrywise differences stays
    // accurate near θ = 0, where 1 - overlap cancels.
    const std::vector<double> ex = embed(space, Point{{x.begin(), x.end()}});
    const std::vector<double> ey = embed(space, Point{{y.begin(), y.end()}});
    double chord2 = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i)
        chord2 += (ex[i] - ey[i]) * (ex[i] - ey[i]);
    const double t = std::clamp(overlap(space, x, y), 0.0, 1.0);
    return {std::sqrt(std::min(0.5 * chord2, 1.0)), std::sqrt(t)};
}

} // namespace

int SpaceSpec::coord_size() const
{
    switch (family) {
    case Family::Sphere:
        return d + 1;
    case Family::OctProj:
        return 27;
    default:
        return (n + 1) * d0;
    }
}

std::string SpaceSpec::name() const
{
    return family_code(family) + std::to_string(family == Family::Sphere ? d : n);
}

RadiusMeasure RadiusMeasure::canonical()
{
    return {};
}

RadiusMeasure RadiusMeasure::quadrature(std::vector<double> nodes, std::vector<double> weights)
{
    if (nodes.size() != weights.size())
        throw UsageError("radius measure: nodes and weights differ in length");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i] >= 0.0 && nodes[i] <= std::numbers::pi))
            throw DomainError("radius measure: node outside [0, pi]");
        if (!(weights[i] >= 0.0))
            throw DomainError("radius measure: negative weight");
    }
    RadiusMeasure m;
    m.kind = Kind::Quadrature;
    m.nodes = std::move(nodes);
    m.weights = std::move(weights);
    return m;
}

double RadiusMeasure::total_mass() const
{
    if (kind == Kind::CanonicalSine)
        return 2.0;
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

RngStream make_stream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9E3779B9u};
    return RngStream(seq);
}

SpaceSpec make_space(Family family, int n)
{
    if (n < 1)
        throw DomainError("make_space: dimension must be positive");
    SpaceSpec s;
    s.family = family;
    if (family == Family::Sphere) {
        s.n = n;
        s.d = n;
        s.d0 = n;
        s.m = n + 1;
        return s;
    }
    if (family == Family::OctProj && n != 2)
        throw UnsupportedError("octonionic projective space exists only for n = 2");
    s.n = n;
    s.d0 = algebra_dim(family);
    s.d = n * s.d0;
    s.m = (n + 1) * (s.d + 2) / 2;
    return s;
}

std::string family_code(Family f)
{
    switch (f) {
    case Family::Sphere:
        return "s";
    case Family::RealProj:
        return "rp";
    case Family::ComplexProj:
        return "cp";
    case Family::QuatProj:
        return "hp";
    case Family::OctProj:
        return "op";
    }
    return "?";
}

Family parse_family(std::string_view code)
{
    if (code == "s")
        return Family::Sphere;
    if (code == "rp")
        return Family::RealProj;
    if (code == "cp")
        return Family::ComplexProj;
    if (code == "hp")
        return Family::QuatProj;
    if (code == "op")
        return Family::OctProj;
    throw UsageError("unknown space family '" + std::string(code) + "'");
}

SpaceSpec parse_space(std::string_view name)
{
    std::size_t split = 0;
    while (split < name.size() && std::isalpha(static_cast<unsigned char>(name[split])))
        ++split;
    const std::string_view code = name.substr(0, split);
    const std::string_view digits = name.substr(split);
    if (code.empty() || digits.empty() ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw UsageError("cannot parse space name '" + std::string(name) + "'");
    return make_space(parse_family(code), std::stoi(std::string(digits)));
}

std::vector<SpaceSpec> default_catalog()
{
    return {make_space(Family::Sphere, 1),      make_space(Family::Sphere, 2),
            make_space(Family::Sphere, 3),      make_space(Family::RealProj, 2),
            make_space(Family::ComplexProj, 2), make_space(Family::QuatProj, 2),
            make_space(Family::OctProj, 2)};
}

void validate_point(const SpaceSpec& space, const Point& p, double tol)
{
    check_same_size(space, p.coords);
    for (double v : p.coords)
        if (!std::isfinite(v))
            throw UsageError("point has non-finite coordinates");
    if (space.family != Family::OctProj) {
        double s = 0.0;
        for (double v : p.coords)
            s += v * v;
        if (std::abs(std::sqrt(s) - 1.0) > tol)
            throw UsageError("point representative is not a unit vector");
        return;
    }
    const double trace = p.coords[0] + p.coords[1] + p.coords[2];
    if (std::abs(trace - 1.0) > tol)
        throw UsageError("OP2 point: trace differs from 1");
    const OctMatrix3 a = oct_matrix(p);
    const OctMatrix3 sq = oct_product(a, a);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if ((sq[i][j] - a[i][j]).norm() > tol)
                throw UsageError("OP2 point: matrix is not a Jordan idempotent");
}

double overlap(const SpaceSpec& space, std::span<const double> x, std::span<const double> y)
{
    switch (space.family) {
    case Family::Sphere: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += x[i] * y[i];
        return 0.5 * (1.0 + s);
    }
    case Family::OctProj:
        return oct_trace_form(x, y);
    default:
        return abs2_inner(space.d0, x, y);
    }
}

double cos_geodesic(const SpaceSpec& space, std::span<const double> x, std::span<const double> y)
{
    return std::clamp(2.0 * overlap(space, x, y) - 1.0, -1.0, 1.0);
}

double geodesic(const SpaceSpec& space, const Point& x, const Point& y)
{
    check_same_size(space, x.coords);
    check_same_size(space, y.coords);
    const auto [s, c] = half_angle(space, x.coords, y.coords);
    return 2.0 * std::atan2(s, c);
}

double chordal(const SpaceSpec& space, const Point& x, const Point& y)
{
    check_same_size(space, x.coords);
    check_same_size(space, y.coords);
    const auto [s, c] = half_angle(space, x.coords, y.coords);
    return s / std::hypot(s, c);
}

std::vector<double> embed(const SpaceSpec& space, const Point& x)
{
    check_same_size(space, x.coords);
    const auto& c = x.coords;
    if (space.family == Family::Sphere)
        return c;
    std::vector<double> out;
    out.reserve(space.m);
    if (space.family == Family::OctProj) {
        out.insert(out.end(), c.begin(), c.begin() + 3);
        for (std::size_t k = 3; k < 27; ++k)
            out.push_back(kSqrt2 * c[k]);
        return out;
    }
    const int d0 = space.d0;
    const int rows = space.n + 1;
    auto entry = [&](int i) { return std::span<const double>(c).subspan(static_cast<std::size_t>(i) * d0, d0); };
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (double v : entry(i))
            s += v * v;
        out.push_back(s);
    }
    for (int i = 0; i < rows; ++i) {
        for (int j = i + 1; j < rows; ++j) {
            const auto xi = entry(i), xj = entry(j);
            // x_i conj(x_j)
            if (d0 == 1) {
                out.push_back(kSqrt2 * xi[0] * xj[0]);
            } else if (d0 == 2) {
                out.push_back(kSqrt2 * (xi[0] * xj[0] + xi[1] * xj[1]));
                out.push_back(kSqrt2 * (xi[1] * xj[0] - xi[0] * xj[1]));
            } else {
                const Quaternion a{{xi[0], xi[1], xi[2], xi[3]}};
                const Quaternion b{{xj[0], xj[1], xj[2], xj[3]}};
                const Quaternion p = a * b.conj();
                for (double v : p.v)
                    out.push_back(kSqrt2 * v);
            }
        }
    }
    return out;
}

double ball_volume(const SpaceSpec& space, double r)
{
    if (!(r >= 0.0 && r <= std::numbers::pi))
        throw DomainError("ball_volume: radius outside [0, pi]");
    const double s = std::sin(0.5 * r);
    return reg_inc_beta(std::clamp(s * s, 0.0, 1.0), 0.5 * space.d, 0.5 * space.d0);
}

double gamma_sphere(int d)
{
    return 0.5 * d * std::exp(0.5 * std::log(std::numbers::pi) + log_gamma(0.5 * d) - log_gamma(0.5 * (d + 1)));
}

double gamma_const(const SpaceSpec& space)
{
    const double d = space.d, d0 = space.d0;
    const double direct =
        0.25 * (d + d0) * std::exp(0.5 * std::log(std::numbers::pi) + log_gamma(0.5 * d0) - log_gamma(0.5 * (d0 + 1)));
    const double via_sphere = (d + d0) / (2.0 * d0) * gamma_sphere(space.d0);
    if (std::abs(direct - via_sphere) > 1e-13 * std::abs(direct))
        throw ConsistencyError("gamma_const: the two closed forms disagree");
    return direct;
}

double avg_chordal(const SpaceSpec& space)
{
    const double d = space.d, d0 = space.d0;
    return std::exp(log_beta(0.5 * (d + 1), 0.5 * d0) - log_beta(0.5 * d, 0.5 * d0));
}

bool supports_sampling(const SpaceSpec& space)
{
    return space.family != Family::OctProj;
}

void sample_uniform_into(const SpaceSpec& space, RngStream& rng, std::span<double> out)
{
    if (!supports_sampling(space))
        throw UnsupportedError("uniform sampling on OP2 is not available; use chart points or a distance matrix");
    std::normal_distribution<double> normal(0.0, 1.0);
    double s = 0.0;
    do {
        s = 0.0;
        for (double& v : out) {
            v = normal(rng);
            s += v * v;
        }
    } while (s == 0.0);
    const double inv = 1.0 / std::sqrt(s);
    for (double& v : out)
        v *= inv;
}

PointSet sample_uniform(const SpaceSpec& space, std::size_t count, RngStream& rng)
{
    if (!supports_sampling(space))
        throw UnsupportedError("uniform sampling on OP2 is not available; use chart points or a distance matrix");
    PointSet set;
    set.space = space;
    set.label = "uniform";
    set.points.resize(count);
    for (auto& p : set.points) {
        p.coords.resize(space.coord_size());
        sample_uniform_into(space, rng, p.coords);
    }
    return set;
}

Point chart_point_oct(const Octonion& c1, const Octonion& c2)
{
    const double norm2 = c1.norm2() + c2.norm2() + 1.0;
    const double inv = 1.0 / norm2;
    Point p;
    p.coords.resize(27);
    p.coords[0] = c1.norm2() * inv;
    p.coords[1] = c2.norm2() * inv;
    p.coords[2] = inv;
    const std::array<Octonion, 3> off = {inv * (c1 * c2.conj()), inv * c1, inv * c2};
    for (std::size_t k = 0; k < 3; ++k)
        for (int j = 0; j < 8; ++j)
            p.coords[kOctOffDiag[k] + j] = off[k].v[j];
    return p;
}

OctMatrix3 oct_matrix(const Point& p)
{
    if (p.coords.size() != 27)
        throw UsageError("OP2 point must have 27 coordinates");
    OctMatrix3 a;
    for (int i = 0; i < 3; ++i)
        a[i][i] = Octonion::real(p.coords[i]);
    const std::array<std::pair<int, int>, 3> idx = {{{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t k = 0; k < 3; ++k) {
        const Octonion o = oct_at(p.coords, kOctOffDiag[k]);
        a[idx[k].first][idx[k].second] = o;
        a[idx[k].second][idx[k].first] = o.conj();
    }
    return a;
}

OctMatrix3 oct_product(const OctMatrix3& a, const OctMatrix3& b)
{
    OctMatrix3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Octonion s;
            for (int k = 0; k < 3; ++k)
                s = s + a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

} // namespace crosp
