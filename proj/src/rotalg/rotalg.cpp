#include "cshell/rotalg.hpp"

#include <cmath>

#include "cshell/errors.hpp"
#include "cshell/tolerances.hpp"

namespace cshell {

Mat3 sym(const Mat3& X) { return 0.5 * (X + X.transpose()); }
Mat3 skew(const Mat3& X) { return 0.5 * (X - X.transpose()); }
Mat3 dev(const Mat3& X) { return X - (X.trace() / 3.0) * Mat3::Identity(); }
double frob2(const Mat3& X) { return X.squaredNorm(); }

Skew3 Skew3::from_matrix(const Mat3& A) { return Skew3(axl(A)); }

Mat3 Skew3::matrix() const { return anti(w_); }

double orthogonality_defect(const Mat3& q) {
    return (q.transpose() * q - Mat3::Identity()).norm();
}

Rot3::Rot3(const Mat3& q) : q_(q) {
    if (!q.allFinite() || orthogonality_defect(q) > tol::algebraic || q.determinant() <= 0.0)
        throw NotARotation("matrix is not a proper rotation");
}

Rot3 Rot3::unchecked(const Mat3& q) {
    Rot3 r;
    r.q_ = q;
    return r;
}

Vec3 axl(const Mat3& A) {
    const double asym = (A + A.transpose()).norm();
    if (asym > tol::algebraic * std::max(1.0, A.norm()))
        throw NotSkew("axl: argument is not skew-symmetric");
    return axl_of_skew_part(A);
}

Vec3 axl(const Skew3& A) { return A.axial(); }

Vec3 axl_of_skew_part(const Mat3& X) {
    return Vec3(0.5 * (X(2, 1) - X(1, 2)), 0.5 * (X(0, 2) - X(2, 0)), 0.5 * (X(1, 0) - X(0, 1)));
}

Mat3 anti(const Vec3& v) {
    Mat3 A;
    A << 0.0, -v(2), v(1),
         v(2), 0.0, -v(0),
         -v(1), v(0), 0.0;
    return A;
}

Rot3 exp_so3(const Vec3& w) {
    const double t2 = w.squaredNorm();
    const double t = std::sqrt(t2);
    double a, b;
    if (t < 1e-4) {
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    } else {
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / t2;
    }
    const Mat3 W = anti(w);
    return Rot3::unchecked(Mat3::Identity() + a * W + b * (W * W));
}

Rot3 exp_so3(const Skew3& A) { return exp_so3(A.axial()); }

Polar polar_decompose(const Mat3& F) {
    const double d = F.determinant();
    if (!(d > 0.0) || std::abs(d) < tol::singular_det)
        throw NonInvertible("polar_decompose: det F must be positive");
    Eigen::JacobiSVD<Mat3> svd(F, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 U = svd.matrixU();
    const Mat3 V = svd.matrixV();
    Vec3 s = svd.singularValues();
    if ((U * V.transpose()).determinant() < 0.0) {
        U.col(2) *= -1.0;
        s(2) *= -1.0;
    }
    Polar p;
    p.R = Rot3::unchecked(U * V.transpose());
    p.U = V * s.asDiagonal() * V.transpose();
    p.U = sym(p.U);
    return p;
}

Rot3 reorthonormalize(const Mat3& q) { return polar_decompose(q).R; }

Cartan cartan_split(const Mat3& X) {
    Cartan c;
    c.dev_sym = dev(sym(X));
    c.skew = Skew3(axl_of_skew_part(X));
    c.trace = X.trace();
    return c;
}

Mat3 nye_alpha_to_gamma(const Mat3& alpha) {
    return -alpha.transpose() + 0.5 * alpha.trace() * Mat3::Identity();
}

Mat3 nye_gamma_to_alpha(const Mat3& gamma) {
    return -gamma.transpose() + gamma.trace() * Mat3::Identity();
}

}  // namespace cshell
