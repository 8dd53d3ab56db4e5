#pragma once

#include <array>
#include <cmath>

namespace irsfso {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Mat3 {
    // row-major
    std::array<std::array<double, 3>, 3> m{};

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transpose() const;
    double det() const;
};

// Rotation about the y-axis, oriented so rot_y(pi/2) maps +x onto +z.
Mat3 rot_y(double phi);
// Rotation about the z-axis, oriented so rot_z(-phi) maps +x toward +y for
// phi > 0 (the companion convention that makes the two frame maps below
// compose to the observation-point coordinates used by the channel model).
Mat3 rot_z(double phi);

// Position of a laser source or photodetector lens relative to the IRS:
// boresight distance d and the two spherical angles of the boresight.
struct OrientedNode {
    double d = 0.0;      // m
    double theta = 0.0;  // polar angle from the IRS plane, rad
    double phi = 0.0;    // azimuth, rad
};

// IRS-plane point -> LS beam frame: rot_y(pi/2 - theta)^T (r - r_l0) + (0,0,d).
Vec3 irs_to_ls_frame(const Vec3& r, const OrientedNode& ls, const Vec3& r_l0);

// Lens-plane point -> IRS frame (the observation map):
// rot_z(-phi) . rot_y(pi/2 - theta) . (r_p + (0,0,d)) + r_p0.
Vec3 lens_to_irs_frame(const Vec3& r_p, const OrientedNode& pd, const Vec3& r_p0);

// One transmitter-receiver hop over the IRS: source node, detector node,
// lens radius, and the footprint / lens-boresight centers on the surface.
struct LinkGeometry {
    OrientedNode ls;
    OrientedNode pd;
    double lens_radius = 0.0;  // a, m
    Vec3 r_l0{};               // beam footprint center on the IRS
    Vec3 r_p0{};               // lens boresight center on the IRS

    double misalignment() const { return (r_l0 - r_p0).norm(); }
};

}  // namespace irsfso
