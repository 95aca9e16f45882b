#pragma once

#include <array>
#include <cmath>

namespace casq
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

inline Vec3 normalized(const Vec3& a) { return a * (1.0 / norm(a)); }

// Row-major 3x3 matrix.
struct Mat3
{
    std::array<double, 9> m{};

    constexpr double operator()(int i, int j) const { return m[3 * i + j]; }
    constexpr double& operator()(int i, int j) { return m[3 * i + j]; }

    static constexpr Mat3 identity()
    {
        Mat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }

    // Right-handed rotation by `angle` about the unit vector `axis`.
    static Mat3 rotation(const Vec3& axis, double angle)
    {
        const Vec3 u = normalized(axis);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double t = 1.0 - c;
        Mat3 r;
        r(0, 0) = c + u.x * u.x * t;
        r(0, 1) = u.x * u.y * t - u.z * s;
        r(0, 2) = u.x * u.z * t + u.y * s;
        r(1, 0) = u.y * u.x * t + u.z * s;
        r(1, 1) = c + u.y * u.y * t;
        r(1, 2) = u.y * u.z * t - u.x * s;
        r(2, 0) = u.z * u.x * t - u.y * s;
        r(2, 1) = u.z * u.y * t + u.x * s;
        r(2, 2) = c + u.z * u.z * t;
        return r;
    }
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v)
{
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

constexpr Mat3 operator+(Mat3 a, const Mat3& b)
{
    for (int i = 0; i < 9; ++i)
        a.m[i] += b.m[i];
    return a;
}

constexpr Mat3 transpose(const Mat3& a)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(j, i);
    return r;
}

constexpr double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

// Outer product a b^T.
constexpr Mat3 outer(const Vec3& a, const Vec3& b)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a[i] * b[j];
    return r;
}

// Projector onto the plane transverse to the unit vector k.
constexpr Mat3 transverse_projector(const Vec3& k_hat)
{
    Mat3 r = Mat3::identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) -= k_hat[i] * k_hat[j];
    return r;
}

} // namespace casq
