#ifndef REGGECURV_TENSOR_HPP
#define REGGECURV_TENSOR_HPP

#include <cmath>
#include <stdexcept>

namespace reggecurv {

struct Vec2 {
  double x = 0.0, y = 0.0;

  double operator[](int i) const { return i == 0 ? x : y; }
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

// Counterclockwise quarter turn; for a unit tangent tau along a counterclockwise
// element boundary this is the inward Euclidean normal.
inline Vec2 rot90(const Vec2& v) { return {-v.y, v.x}; }

struct Mat2 {
  // row-major a[i][j]
  double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  static Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
  double operator()(int i, int j) const { return a[i][j]; }
  double& operator()(int i, int j) { return a[i][j]; }

  Mat2 operator+(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] + o.a[i][j];
    return r;
  }
  Mat2 operator-(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] - o.a[i][j];
    return r;
  }
  Mat2 operator*(double s) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] * s;
    return r;
  }
  Mat2 operator*(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][0] * o.a[0][j] + a[i][1] * o.a[1][j];
    return r;
  }
  Vec2 operator*(const Vec2& v) const {
    return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
  }
};

// Symmetric 2x2; the value type for metrics and Regge tensors.
struct SymMat2 {
  double m11 = 0.0, m12 = 0.0, m22 = 0.0;

  static SymMat2 identity() { return {1.0, 0.0, 1.0}; }

  double operator()(int i, int j) const {
    if (i == 0) return j == 0 ? m11 : m12;
    return j == 0 ? m12 : m22;
  }
  double& entry(int i, int j) {
    if (i == 0 && j == 0) return m11;
    if (i == 1 && j == 1) return m22;
    return m12;
  }

  SymMat2 operator+(const SymMat2& o) const { return {m11 + o.m11, m12 + o.m12, m22 + o.m22}; }
  SymMat2 operator-(const SymMat2& o) const { return {m11 - o.m11, m12 - o.m12, m22 - o.m22}; }
  SymMat2 operator*(double s) const { return {m11 * s, m12 * s, m22 * s}; }
  Vec2 operator*(const Vec2& v) const { return {m11 * v.x + m12 * v.y, m12 * v.x + m22 * v.y}; }

  double det() const { return m11 * m22 - m12 * m12; }
  double trace() const { return m11 + m22; }

  SymMat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::runtime_error("SymMat2: singular matrix");
    return {m22 / d, -m12 / d, m11 / d};
  }

  // g(u, v)
  double apply(const Vec2& u, const Vec2& v) const {
    return u.x * (m11 * v.x + m12 * v.y) + u.y * (m12 * v.x + m22 * v.y);
  }

  bool spd() const { return m11 > 0.0 && det() > 0.0; }

  Mat2 full() const { return {{{m11, m12}, {m12, m22}}}; }
};

inline SymMat2 operator*(double s, const SymMat2& m) { return m * s; }

// Frobenius product of symmetric matrices.
inline double ddot(const SymMat2& a, const SymMat2& b) {
  return a.m11 * b.m11 + 2.0 * a.m12 * b.m12 + a.m22 * b.m22;
}

}  // namespace reggecurv

#endif
