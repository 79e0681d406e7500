#include "reggecurv/geom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reggecurv {

namespace {

constexpr double kEps[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};  // eps^{01} = +1

Mat2 to_mat(const SymMat2& s) { return s.full(); }

SymMat2 to_sym(const Mat2& m) {
  return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

double det_derivative(const MetricJet& g, int q) {
  const SymMat2& d = g.d[q];
  return g.v.m22 * d.m11 + g.v.m11 * d.m22 - 2.0 * g.v.m12 * d.m12;
}

// Jet of the inverse metric. Second derivatives filled only when available.
struct InvJet {
  SymMat2 v;
  SymMat2 d[2];
  bool has_dd = false;
  SymMat2 dd[2][2];
};

InvJet inverse_jet(const MetricJet& g) {
  InvJet inv;
  inv.v = g.v.inverse();
  const Mat2 gi = to_mat(inv.v);
  Mat2 dgi[2];
  for (int k = 0; k < 2; ++k) {
    dgi[k] = gi * to_mat(g.d[k]) * gi * (-1.0);
    inv.d[k] = to_sym(dgi[k]);
  }
  if (g.has_dd) {
    inv.has_dd = true;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        // d_k d_l g^{-1} = -g^{-1} (d_k d_l g) g^{-1}
        //                  - (d_k g^{-1})(d_l g) g^{-1} - g^{-1}(d_l g)(d_k g^{-1})
        Mat2 t = gi * to_mat(g.dd[k][l]) * gi * (-1.0);
        t = t - dgi[k] * to_mat(g.d[l]) * gi;
        t = t - gi * to_mat(g.d[l]) * dgi[k];
        inv.dd[k][l] = to_sym(t);
      }
  }
  return inv;
}

// sigma^{ij} = (g^{-1} sigma g^{-1})^{ij} as a jet.
TensorJet raise_jet(const MetricJet& g, const TensorJet& s, bool want_dd) {
  const InvJet gi = inverse_jet(g);
  const Mat2 A = to_mat(gi.v);
  Mat2 dA[2], S = to_mat(s.v), dS[2];
  for (int k = 0; k < 2; ++k) {
    dA[k] = to_mat(gi.d[k]);
    dS[k] = to_mat(s.d[k]);
  }
  TensorJet out;
  out.v = to_sym(A * S * A);
  for (int k = 0; k < 2; ++k)
    out.d[k] = to_sym(dA[k] * S * A + A * dS[k] * A + A * S * dA[k]);
  if (want_dd) {
    if (!g.has_dd || !s.has_dd || !gi.has_dd)
      throw std::logic_error("raise_jet: second derivatives required");
    out.has_dd = true;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const Mat2 ddA = to_mat(gi.dd[k][l]), ddS = to_mat(s.dd[k][l]);
        Mat2 t = ddA * S * A + A * ddS * A + A * S * ddA;
        t = t + dA[k] * dS[l] * A + dA[l] * dS[k] * A;
        t = t + dA[k] * S * dA[l] + dA[l] * S * dA[k];
        t = t + A * dS[k] * dA[l] + A * dS[l] * dA[k];
        out.dd[k][l] = to_sym(t);
      }
  }
  return out;
}

double gamma_first(const TensorJet& s, int i, int j, int l) {
  return 0.5 * (s.d[i](j, l) + s.d[j](l, i) - s.d[l](i, j));
}

// d_m Gamma_{ijl}; needs second derivatives.
double gamma_first_derivative(const TensorJet& s, int m, int i, int j, int l) {
  return 0.5 * (s.dd[m][i](j, l) + s.dd[m][j](l, i) - s.dd[m][l](i, j));
}

}  // namespace

TensorJet TensorJet::scaled(double s) const {
  TensorJet out = *this;
  out.v = v * s;
  for (int k = 0; k < 2; ++k) out.d[k] = d[k] * s;
  if (has_dd)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) out.dd[k][l] = dd[k][l] * s;
  return out;
}

TensorJet TensorJet::plus(const TensorJet& o, double s) const {
  TensorJet out = *this;
  out.v = v + o.v * s;
  for (int k = 0; k < 2; ++k) out.d[k] = d[k] + o.d[k] * s;
  out.has_dd = has_dd && o.has_dd;
  if (out.has_dd)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) out.dd[k][l] = dd[k][l] + o.dd[k][l] * s;
  return out;
}

EdgeFrame edge_frame(const SymMat2& g, const Vec2& unit_tau) {
  EdgeFrame f;
  f.tau = unit_tau;
  f.nu = rot90(unit_tau);
  f.nu_g = g.inverse() * f.nu;
  f.g_tt = g.apply(f.tau, f.tau);
  const double q = g.apply(f.nu_g, f.nu_g);
  if (f.g_tt <= 0.0 || q <= 0.0) throw std::runtime_error("edge_frame: metric not positive definite");
  f.that = f.tau / std::sqrt(f.g_tt);
  f.nhat = f.nu_g / std::sqrt(q);
  return f;
}

Christoffel1 christoffel_first(const MetricJet& g) {
  Christoffel1 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) c.c[i][j][l] = gamma_first(g, i, j, l);
  return c;
}

Christoffel1 christoffel_first_of(const TensorJet& s) { return christoffel_first(s); }

double christoffel_trace(const MetricJet& g, int q) {
  return det_derivative(g, q) / (2.0 * g.v.det());
}

Christoffel2 christoffel_second(const MetricJet& g) {
  const Christoffel1 c1 = christoffel_first(g);
  const SymMat2 gi = g.v.inverse();
  Christoffel2 c2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += gi(k, l) * c1.c[i][j][l];
        c2.c[i][j][k] = s;
      }
  return c2;
}

double gauss_curvature(const MetricJet& g) {
  if (!g.has_dd) throw std::logic_error("gauss_curvature: second derivatives required");
  const Christoffel1 c1 = christoffel_first(g);
  const Christoffel2 c2 = christoffel_second(g);
  // R_1221 in 1-based indices: (i,j,k,l) = (0,1,1,0)
  double r = gamma_first_derivative(g, 0, 1, 1, 0) - gamma_first_derivative(g, 1, 0, 1, 0);
  for (int p = 0; p < 2; ++p)
    r += -c1.c[0][0][p] * c2.c[1][1][p] + c1.c[1][0][p] * c2.c[0][1][p];
  return r / g.v.det();
}

double geodesic_curvature_weight(const MetricJet& g, const EdgeFrame& f) {
  const Christoffel2 c2 = christoffel_second(g);
  double gamma_nn = 0.0;  // Gamma^nu_{tau tau} = tau^i tau^j Gamma_ij^k delta_kl nu^l
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        gamma_nn += f.tau[i] * f.tau[j] * c2.c[i][j][k] * f.nu[k];
  return std::sqrt(g.v.det()) / f.g_tt * gamma_nn;
}

double geodesic_curvature(const MetricJet& g, const EdgeFrame& f) {
  return geodesic_curvature_weight(g, f) / std::sqrt(f.g_tt);
}

double signed_angle(const SymMat2& g, const Vec2& a, const Vec2& b) {
  const double na = std::sqrt(g.apply(a, a)), nb = std::sqrt(g.apply(b, b));
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("signed_angle: zero vector");
  const double c = g.apply(a, b) / (na * nb);
  const double s = std::sqrt(g.det()) * cross(b, a) / (na * nb);
  const double theta = std::atan2(s, c);
  return theta <= -3.141592653589793 ? 3.141592653589793 : theta;
}

double interior_angle(const SymMat2& g, const Vec2& tau_in, const Vec2& tau_out) {
  const double ni = std::sqrt(g.apply(tau_in, tau_in)), no = std::sqrt(g.apply(tau_out, tau_out));
  if (ni == 0.0 || no == 0.0) throw std::invalid_argument("interior_angle: zero vector");
  const double c = std::clamp(g.apply(-tau_in, tau_out) / (ni * no), -1.0, 1.0);
  return std::acos(c);
}

double principal_angle(double theta) {
  const double two_pi = 6.283185307179586476925286766559;
  double r = std::fmod(theta + 3.14159265358979323846, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - 3.14159265358979323846;
}

SymMat2 spd_sqrt(const SymMat2& g) {
  if (!g.spd()) throw std::runtime_error("spd_sqrt: matrix not positive definite");
  const double s = std::sqrt(g.det());
  const double d = std::sqrt(g.trace() + 2.0 * s);
  return {(g.m11 + s) / d, g.m12 / d, (g.m22 + s) / d};
}

void spd_sqrt_derivative(const MetricJet& g, SymMat2& b, SymMat2 db[2]) {
  const double s = std::sqrt(g.v.det());
  const double t = g.v.trace();
  const double d = std::sqrt(t + 2.0 * s);
  b = spd_sqrt(g.v);
  for (int k = 0; k < 2; ++k) {
    const double ds = det_derivative(g, k) / (2.0 * s);
    const double dt = g.d[k].trace();
    const double dd = (dt + 2.0 * ds) / (2.0 * d);
    SymMat2 num = g.d[k];
    num.m11 += ds;
    num.m22 += ds;
    db[k] = num * (1.0 / d) - b * (dd / d);
  }
}

Frame orthonormal_frame(const MetricJet& g) {
  SymMat2 b, db[2];
  spd_sqrt_derivative(g, b, db);
  const SymMat2 binv = b.inverse();
  Frame f;
  f.e[0] = {binv.m11, binv.m12};
  f.e[1] = {binv.m12, binv.m22};
  const Mat2 bi = to_mat(binv);
  for (int k = 0; k < 2; ++k) {
    const Mat2 dbinv = bi * to_mat(db[k]) * bi * (-1.0);
    f.de[k][0] = {dbinv(0, 0), dbinv(1, 0)};
    f.de[k][1] = {dbinv(0, 1), dbinv(1, 1)};
  }
  return f;
}

Vec2 connection_coefficients(const MetricJet& g) {
  const Frame f = orthonormal_frame(g);
  const Christoffel2 c2 = christoffel_second(g);
  double w[2];
  for (int i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 2; ++j) {
      // nabla_i e_a components: d_i e_a^j + Gamma_{li}^j e_a^l
      double cov2 = f.de[i][1][j];
      double cov1 = f.de[i][0][j];
      for (int l = 0; l < 2; ++l) {
        cov2 += c2.c[l][i][j] * f.e[1][l];
        cov1 += c2.c[l][i][j] * f.e[0][l];
      }
      for (int k = 0; k < 2; ++k)
        acc += g.v(j, k) * (cov2 * f.e[0][k] - cov1 * f.e[1][k]);
    }
    w[i] = 0.5 * acc;
  }
  return {w[0], w[1]};
}

Vec2 curl_g_sigma(const MetricJet& g, const SigmaJet& s) {
  const Christoffel2 c2 = christoffel_second(g);
  const double sd = std::sqrt(g.v.det());
  Vec2 out;
  double comp[2];
  for (int i = 0; i < 2; ++i) {
    double v = s.d[0](i, 1) - s.d[1](i, 0);  // [curl sigma]_i
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (kEps[j][k] == 0.0) continue;
        for (int m = 0; m < 2; ++m) v -= kEps[j][k] * c2.c[j][i][m] * s.v(m, k);
      }
    comp[i] = v / sd;
  }
  out = {comp[0], comp[1]};
  return out;
}

double inc_g_sigma(const MetricJet& g, const SigmaJet& s) {
  if (!g.has_dd || !s.has_dd) throw std::logic_error("inc_g_sigma: second derivatives required");
  const double det = g.v.det();
  const Christoffel1 c1 = christoffel_first(g);
  const InvJet gi = inverse_jet(g);

  // Euclidean inc sigma = eps^{qi} eps^{jk} d_j d_q sigma_{ik}
  const double inc_e = s.dd[0][0](1, 1) - 2.0 * s.dd[0][1](0, 1) + s.dd[1][1](0, 0);

  // eps^{qi} eps^{jk} d_q (Gamma_{ji}^m sigma_{mk})
  double term2 = 0.0;
  for (int q = 0; q < 2; ++q)
    for (int i = 0; i < 2; ++i) {
      if (kEps[q][i] == 0.0) continue;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          if (kEps[j][k] == 0.0) continue;
          for (int m = 0; m < 2; ++m) {
            double dgamma2 = 0.0;  // d_q Gamma_{ji}^m
            for (int l = 0; l < 2; ++l)
              dgamma2 += gi.d[q](m, l) * c1.c[j][i][l] + gi.v(m, l) * gamma_first_derivative(g, q, j, i, l);
            const double gamma2 = [&] {
              double v = 0.0;
              for (int l = 0; l < 2; ++l) v += gi.v(m, l) * c1.c[j][i][l];
              return v;
            }();
            term2 += kEps[q][i] * kEps[j][k] * (dgamma2 * s.v(m, k) + gamma2 * s.d[q](m, k));
          }
        }
    }

  // Gamma^l_{lq} eps^{qi} ([curl sigma]_i - eps^{jk} Gamma_{ji}^m sigma_{mk})
  const Vec2 cg = curl_g_sigma(g, s);  // already divided by sqrt(det)
  const double sd = std::sqrt(det);
  double term3 = 0.0;
  for (int q = 0; q < 2; ++q) {
    const double gllq = det_derivative(g, q) / (2.0 * det);
    for (int i = 0; i < 2; ++i)
      term3 += gllq * kEps[q][i] * (cg[i] * sd);
  }

  return (inc_e - term2 - term3) / det;
}

Vec2 rot_g_scalar(const MetricJet& g, const Vec2& du) {
  const double sd = std::sqrt(g.v.det());
  return {du.y / sd, -du.x / sd};
}

Mat2 rot_g_vector(const MetricJet& g, const Vec2& X, const Mat2& dX) {
  const Christoffel2 c2 = christoffel_second(g);
  const double sd = std::sqrt(g.v.det());
  Mat2 out;
  for (int m = 0; m < 2; ++m)
    for (int p = 0; p < 2; ++p) {
      double v = 0.0;
      for (int i = 0; i < 2; ++i) {
        if (kEps[p][i] == 0.0) continue;
        double cov = dX(m, i);
        for (int k = 0; k < 2; ++k) cov += c2.c[i][k][m] * X[k];
        v += kEps[p][i] * cov;
      }
      out(m, p) = v / sd;
    }
  return out;
}

Vec2 div_g_tensor(const MetricJet& g, const SigmaJet& s) {
  const TensorJet up = raise_jet(g, s, false);
  const Christoffel2 c2 = christoffel_second(g);
  double out[2];
  for (int i = 0; i < 2; ++i) {
    double v = 0.0;
    for (int j = 0; j < 2; ++j) {
      v += up.d[j](i, j);
      for (int l = 0; l < 2; ++l)
        v += c2.c[l][j][i] * up.v(l, j) + c2.c[j][l][j] * up.v(i, l);
    }
    out[i] = v;
  }
  return {out[0], out[1]};
}

double div_g_vector(const MetricJet& g, const Vec2& X, const Mat2& dX) {
  double v = dX(0, 0) + dX(1, 1);
  const double det = g.v.det();
  for (int i = 0; i < 2; ++i) v += det_derivative(g, i) / (2.0 * det) * X[i];
  return v;
}

TensorJet sg_transform(const MetricJet& g, const SigmaJet& s) {
  const InvJet gi = inverse_jet(g);
  const bool dd = g.has_dd && s.has_dd;
  const double tr = ddot(gi.v, s.v);
  double dtr[2];
  for (int k = 0; k < 2; ++k) dtr[k] = ddot(gi.d[k], s.v) + ddot(gi.v, s.d[k]);

  TensorJet out;
  out.v = s.v - tr * g.v;
  for (int k = 0; k < 2; ++k) out.d[k] = s.d[k] - dtr[k] * g.v - tr * g.d[k];
  if (dd) {
    out.has_dd = true;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const double ddtr = ddot(gi.dd[k][l], s.v) + ddot(gi.d[k], s.d[l]) +
                            ddot(gi.d[l], s.d[k]) + ddot(gi.v, s.dd[k][l]);
        out.dd[k][l] = s.dd[k][l] - ddtr * g.v - dtr[k] * g.d[l] - dtr[l] * g.d[k] - tr * g.dd[k][l];
      }
  }
  return out;
}

void div_g_tensor_jet(const MetricJet& g, const TensorJet& s, Vec2& value, Mat2& deriv) {
  if (!g.has_dd || !s.has_dd) throw std::logic_error("div_g_tensor_jet: second derivatives required");
  const TensorJet up = raise_jet(g, s, true);
  const Christoffel1 c1 = christoffel_first(g);
  const InvJet gi = inverse_jet(g);

  auto gamma2 = [&](int i, int j, int k) {
    double v = 0.0;
    for (int l = 0; l < 2; ++l) v += gi.v(k, l) * c1.c[i][j][l];
    return v;
  };
  auto dgamma2 = [&](int q, int i, int j, int k) {
    double v = 0.0;
    for (int l = 0; l < 2; ++l)
      v += gi.d[q](k, l) * c1.c[i][j][l] + gi.v(k, l) * gamma_first_derivative(g, q, i, j, l);
    return v;
  };

  double val[2], der[2][2];
  for (int i = 0; i < 2; ++i) {
    double v = 0.0;
    for (int j = 0; j < 2; ++j) {
      v += up.d[j](i, j);
      for (int l = 0; l < 2; ++l)
        v += gamma2(l, j, i) * up.v(l, j) + gamma2(j, l, j) * up.v(i, l);
    }
    val[i] = v;
    for (int q = 0; q < 2; ++q) {
      double dv = 0.0;
      for (int j = 0; j < 2; ++j) {
        dv += up.dd[q][j](i, j);
        for (int l = 0; l < 2; ++l) {
          dv += dgamma2(q, l, j, i) * up.v(l, j) + gamma2(l, j, i) * up.d[q](l, j);
          dv += dgamma2(q, j, l, j) * up.v(i, l) + gamma2(j, l, j) * up.d[q](i, l);
        }
      }
      der[i][q] = dv;
    }
  }
  value = {val[0], val[1]};
  deriv = {{{der[0][0], der[0][1]}, {der[1][0], der[1][1]}}};
}

Vec2 hodge_star_oneform(const SymMat2& g, const Vec2& mu) {
  const double sd = std::sqrt(g.det());
  const Vec2 w = g.inverse() * mu;  // w^j = g^{ij} mu_i
  return {-sd * w.y, sd * w.x};
}

Vec2 flat(const SymMat2& g, const Vec2& X) { return g * X; }

double sigma_nt_hat(const SymMat2& g, const SymMat2& s, const Vec2& unit_tau) {
  const EdgeFrame f = edge_frame(g, unit_tau);
  return s.apply(f.nhat, f.that);
}

double d_tau_sigma_nt_hat(const MetricJet& g, const SigmaJet& s, const Vec2& unit_tau) {
  const Vec2 tau = unit_tau;
  const Vec2 nu = rot90(tau);
  const InvJet gi = inverse_jet(g);

  // s_hat = U / sqrt(Q P), U = nu' g^{-1} sigma tau, Q = nu' g^{-1} nu, P = tau' g tau
  const Vec2 ginu = gi.v * nu;
  const double U = s.v.apply(ginu, tau);
  const double Q = gi.v.apply(nu, nu) * 1.0;  // nu' g^{-1} nu  (g^{-1} symmetric)
  const double P = g.v.apply(tau, tau);

  double dir = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vec2 dginu = gi.d[i] * nu;
    const double dU = s.v.apply(dginu, tau) + s.d[i].apply(ginu, tau);
    const double dQ = gi.d[i].apply(nu, nu);
    const double dP = g.d[i].apply(tau, tau);
    const double ds = (dU - U * (0.5 * dQ / Q + 0.5 * dP / P)) / std::sqrt(Q * P);
    dir += tau[i] * ds;
  }
  return dir;
}

double curl_boundary_density(const SymMat2& g, const SymMat2& s, const Vec2& unit_tau) {
  const Vec2 nu = rot90(unit_tau);
  const double g_tt = g.apply(unit_tau, unit_tau);
  const double g_nt = g.apply(nu, unit_tau);
  const double s_nt = s.apply(nu, unit_tau);
  const double s_tt = s.apply(unit_tau, unit_tau);
  return (g_tt * s_nt - g_nt * s_tt) / (g_tt * std::sqrt(g.det()));
}

}  // namespace reggecurv
