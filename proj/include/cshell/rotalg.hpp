#pragma once

#include <Eigen/Dense>

namespace cshell {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat2 = Eigen::Matrix2d;

Mat3 sym(const Mat3& X);
Mat3 skew(const Mat3& X);
Mat3 dev(const Mat3& X);
double frob2(const Mat3& X);

// Skew-symmetric 3x3 matrix kept as its axial vector.
class Skew3 {
public:
    Skew3() : w_(Vec3::Zero()) {}
    explicit Skew3(const Vec3& axial) : w_(axial) {}
    static Skew3 from_matrix(const Mat3& A);  // throws NotSkew

    const Vec3& axial() const { return w_; }
    Mat3 matrix() const;

private:
    Vec3 w_;
};

// A proper orthogonal matrix. Construction from an arbitrary matrix checks
// orthogonality and the sign of the determinant.
class Rot3 {
public:
    Rot3() : q_(Mat3::Identity()) {}
    explicit Rot3(const Mat3& q);  // throws NotARotation
    static Rot3 identity() { return Rot3(); }
    static Rot3 unchecked(const Mat3& q);

    const Mat3& m() const { return q_; }
    operator const Mat3&() const { return q_; }
    Rot3 operator*(const Rot3& o) const { return unchecked(q_ * o.q_); }
    Rot3 transpose() const { return unchecked(q_.transpose()); }

private:
    Mat3 q_;
};

double orthogonality_defect(const Mat3& q);

Vec3 axl(const Mat3& A);          // throws NotSkew
Vec3 axl(const Skew3& A);
Vec3 axl_of_skew_part(const Mat3& X);
Mat3 anti(const Vec3& v);

Rot3 exp_so3(const Vec3& w);
Rot3 exp_so3(const Skew3& A);

struct Polar {
    Rot3 R;
    Mat3 U;
};
Polar polar_decompose(const Mat3& F);  // throws NonInvertible

// Nearest rotation to q, used to scrub round-off drift.
Rot3 reorthonormalize(const Mat3& q);

struct Cartan {
    Mat3 dev_sym;
    Skew3 skew;
    double trace;
};
Cartan cartan_split(const Mat3& X);

Mat3 nye_alpha_to_gamma(const Mat3& alpha);
Mat3 nye_gamma_to_alpha(const Mat3& gamma);

}  // namespace cshell
