#pragma once

// Quaternions and octonions via the Cayley-Dickson doubling
// (a, b)(c, d) = (ac - d*b, da + bc*).

#include <array>
#include <cmath>

namespace crosp {

struct Quaternion {
    std::array<double, 4> v{}; // 1, i, j, k

    friend Quaternion operator*(const Quaternion& p, const Quaternion& q)
    {
        const auto& a = p.v;
        const auto& b = q.v;
        return {{a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                 a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                 a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                 a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]}};
    }
    friend Quaternion operator+(const Quaternion& p, const Quaternion& q)
    {
        return {{p.v[0] + q.v[0], p.v[1] + q.v[1], p.v[2] + q.v[2], p.v[3] + q.v[3]}};
    }
    friend Quaternion operator-(const Quaternion& p, const Quaternion& q)
    {
        return {{p.v[0] - q.v[0], p.v[1] - q.v[1], p.v[2] - q.v[2], p.v[3] - q.v[3]}};
    }
    Quaternion conj() const { return {{v[0], -v[1], -v[2], -v[3]}}; }
    double norm2() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]; }
};

struct Octonion {
    std::array<double, 8> v{};

    static Octonion real(double x)
    {
        Octonion o;
        o.v[0] = x;
        return o;
    }

    Quaternion lo() const { return {{v[0], v[1], v[2], v[3]}}; }
    Quaternion hi() const { return {{v[4], v[5], v[6], v[7]}}; }
    static Octonion join(const Quaternion& a, const Quaternion& b)
    {
        return {{a.v[0], a.v[1], a.v[2], a.v[3], b.v[0], b.v[1], b.v[2], b.v[3]}};
    }

    friend Octonion operator*(const Octonion& x, const Octonion& y)
    {
        const Quaternion a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
        return join(a * c - d.conj() * b, d * a + b * c.conj());
    }
    friend Octonion operator+(const Octonion& x, const Octonion& y)
    {
        Octonion r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = x.v[i] + y.v[i];
        return r;
    }
    friend Octonion operator-(const Octonion& x, const Octonion& y)
    {
        Octonion r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = x.v[i] - y.v[i];
        return r;
    }
    friend Octonion operator*(double s, const Octonion& x)
    {
        Octonion r;
        for (int i = 0; i < 8; ++i)
            r.v[i] = s * x.v[i];
        return r;
    }
    Octonion conj() const
    {
        Octonion r = *this;
        for (int i = 1; i < 8; ++i)
            r.v[i] = -r.v[i];
        return r;
    }
    double norm2() const
    {
        double s = 0.0;
        for (double x : v)
            s += x * x;
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

/// Real inner product <x, y> = Re(x* y) of octonion coordinate vectors.
inline double dot(const Octonion& x, const Octonion& y)
{
    double s = 0.0;
    for (int i = 0; i < 8; ++i)
        s += x.v[i] * y.v[i];
    return s;
}

} // namespace crosp
