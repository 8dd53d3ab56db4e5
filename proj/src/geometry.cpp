#include "irsfso/geometry.hpp"

namespace irsfso {

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 rot_y(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return Mat3{{{{c, 0.0, -s}, {0.0, 1.0, 0.0}, {s, 0.0, c}}}};
}

Mat3 rot_z(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return Mat3{{{{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}}}};
}

Vec3 irs_to_ls_frame(const Vec3& r, const OrientedNode& ls, const Vec3& r_l0) {
    Vec3 v = rot_y(M_PI / 2.0 - ls.theta).transpose() * (r - r_l0);
    return {v.x, v.y, v.z + ls.d};
}

Vec3 lens_to_irs_frame(const Vec3& r_p, const OrientedNode& pd, const Vec3& r_p0) {
    Vec3 shifted{r_p.x, r_p.y, r_p.z + pd.d};
    Vec3 v = rot_z(-pd.phi) * (rot_y(M_PI / 2.0 - pd.theta) * shifted);
    return v + r_p0;
}

}  // namespace irsfso
