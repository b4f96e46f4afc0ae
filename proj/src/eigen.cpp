#include "guill/eigen.hpp"

#include <cmath>
#include <stdexcept>

namespace guill {

namespace {

bool strongly_connected(const Eigen::MatrixXd& a) {
  int n = static_cast<int>(a.rows());
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        double e = transpose ? a(v, u) : a(u, v);
        if (e > 0.0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

// Power iteration for the dominant eigen pair of a nonnegative matrix.
// Returns false on a detected period-2 oscillation of the Rayleigh quotient.
bool power_iterate(const Eigen::MatrixXd& a, Eigen::VectorXd& v,
                   double& lambda) {
  const int n = static_cast<int>(a.rows());
  v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  double rho_prev = 0.0, rho_prev2 = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd av = a * v;
    double norm = av.norm();
    if (!(norm > 0.0)) throw std::domain_error("power iteration hit the zero vector");
    Eigen::VectorXd vn = av / norm;
    double rho = vn.dot(a * vn);
    if (it > 0 && std::fabs(rho - rho_prev) <= 1e-13 * std::fabs(rho)) {
      v = vn;
      lambda = rho;
      return true;
    }
    if (it > 2 && std::fabs(rho - rho_prev2) <= 1e-13 * std::fabs(rho) &&
        std::fabs(rho - rho_prev) > 1e-6 * std::fabs(rho)) {
      return false;  // period-2 oscillation
    }
    rho_prev2 = rho_prev;
    rho_prev = rho;
    v = vn;
  }
  lambda = rho_prev;
  return true;
}

}  // namespace

PfPair pf_eigen(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("pf_eigen: matrix must be square");
  }
  if ((a.array() < 0.0).any()) {
    throw std::invalid_argument("pf_eigen: matrix must be nonnegative");
  }
  if (!strongly_connected(a)) {
    throw std::invalid_argument(
        "pf_eigen: positivity pattern is reducible (not strongly connected)");
  }
  return dominant_eigen(a);
}

PfPair dominant_eigen(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("dominant_eigen: matrix must be square");
  }
  Eigen::VectorXd vr, vl;
  double lr = 0.0, ll = 0.0;
  Eigen::MatrixXd m = a;
  double shift = 0.0;
  if (!power_iterate(m, vr, lr)) {
    shift = 1e-9 * a.cwiseAbs().maxCoeff();
    m = a + shift * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    if (!power_iterate(m, vr, lr)) {
      throw std::runtime_error(
          "power iteration oscillates even after spectral shift");
    }
  }
  Eigen::MatrixXd mt = m.transpose();
  if (!power_iterate(mt, vl, ll)) {
    throw std::runtime_error("left power iteration did not converge");
  }
  PfPair r;
  r.lambda = lr - shift;
  if (vr.sum() < 0.0) vr = -vr;
  if (vl.sum() < 0.0) vl = -vl;
  r.v_right = vr / vr.norm();
  double c = vl.dot(r.v_right);
  if (!(std::fabs(c) > 0.0)) {
    throw std::runtime_error("pf_eigen: left/right eigenvectors are orthogonal");
  }
  r.v_left = vl / c;
  return r;
}

Eigen::VectorXd vec_rm(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.rows() * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

Eigen::MatrixXd unvec_rm(const Eigen::VectorXd& v, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

Eigen::MatrixXd HalfStripMorphism::apply(const Eigen::MatrixXd& m) const {
  if (m.rows() != s * d || m.cols() != s * d) {
    throw std::invalid_argument("half-strip morphism: input dimension mismatch");
  }
  return unvec_rm(map * vec_rm(m), d, d);
}

HalfStripMorphism HalfStripMorphism::rank_one_sandwich(
    char side, const Eigen::VectorXd& u_left, const Eigen::VectorXd& v_right,
    int d) {
  if (u_left.size() != v_right.size()) {
    throw std::invalid_argument("sandwich vectors must have equal length");
  }
  HalfStripMorphism phi;
  phi.side = side;
  phi.s = static_cast<int>(u_left.size());
  phi.d = d;
  const int sd = phi.s * d;
  phi.map = Eigen::MatrixXd::Zero(d * d, sd * sd);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int u = 0; u < phi.s; ++u)
        for (int v = 0; v < phi.s; ++v) {
          phi.map(a * d + b, (u * d + a) * sd + (v * d + b)) =
              u_left(u) * v_right(v);
        }
  return phi;
}

Eigen::MatrixXd CornerMorphism::apply(int state, const Eigen::MatrixXd& m) const {
  if (m.rows() != da || m.cols() != db) {
    throw std::invalid_argument("corner morphism: input dimension mismatch");
  }
  return unvec_rm(K[static_cast<std::size_t>(state)] * vec_rm(m), da, db);
}

CornerMorphism CornerMorphism::scalar_family(const std::string& corner,
                                             const std::vector<double>& c,
                                             int da, int db) {
  CornerMorphism k;
  k.corner = corner;
  k.da = da;
  k.db = db;
  for (double v : c) {
    k.K.push_back(v * Eigen::MatrixXd::Identity(da * db, da * db));
  }
  return k;
}

namespace {

double rel_residual(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  double num = (got - want).cwiseAbs().maxCoeff();
  double den = want.cwiseAbs().maxCoeff();
  return den > 0.0 ? num / den : num;
}

// Products of side operators along a digit sequence (first digit most
// significant); `reverse` multiplies the last edge first.
std::vector<Eigen::MatrixXd> sequence_products(
    const std::vector<Eigen::MatrixXd>& A, int base, int len, bool reverse) {
  std::size_t n = ipow(std::size_t(base), len);
  int d = static_cast<int>(A[0].rows());
  std::vector<Eigen::MatrixXd> out(n);
  std::vector<int> digits;
  for (std::size_t i = 0; i < n; ++i) {
    decode_digits(i, base, len, digits);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
    if (reverse) {
      for (int k = len - 1; k >= 0; --k)
        m = m * A[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
    } else {
      for (int k = 0; k < len; ++k)
        m = m * A[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
    }
    out[i] = m;
  }
  return out;
}

}  // namespace

double verify_halfstrip_eigen(const FaceWeight& w, char side,
                              const RopeRep& rep, const HalfStripMorphism& phi,
                              double lambda1, int p_max) {
  const StateSpaces sp = w.spaces();
  double worst = 0.0;
  const bool horizontal = (side == 'S' || side == 'N');
  const std::vector<Eigen::MatrixXd>& A =
      side == 'S' ? rep.A_S : side == 'N' ? rep.A_N : side == 'W' ? rep.A_W
                                                                  : rep.A_E;
  const int d = static_cast<int>(A[0].rows());
  const int s = horizontal ? sp.s2 : sp.s1;
  if (phi.d != d || phi.s != s) {
    throw std::invalid_argument("half-strip morphism dimensions do not match the side");
  }
  for (int len = 1; len <= p_max; ++len) {
    GuillotineTensor Z = horizontal ? partition_tensor(w, len, 1)
                                    : partition_tensor(w, 1, len);
    double scale = std::pow(lambda1, len);
    if (horizontal) {
      std::size_t nx = Z.nx();
      // South: absorb a strip below (sum over x, fixed y); North: above.
      auto prods = sequence_products(A, sp.s1, len, side == 'N');
      std::size_t nfix = nx;
      for (std::size_t fix = 0; fix < nfix; ++fix) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(s * d, s * d);
        for (std::size_t run = 0; run < nx; ++run) {
          std::size_t xi = side == 'S' ? run : fix;
          std::size_t yi = side == 'S' ? fix : run;
          for (int wv = 0; wv < sp.s2; ++wv)
            for (int zv = 0; zv < sp.s2; ++zv) {
              double c = Z.at(xi, yi, std::size_t(wv), std::size_t(zv));
              if (c != 0.0) M.block(wv * d, zv * d, d, d) += c * prods[run];
            }
        }
        Eigen::MatrixXd want = scale * prods[fix];
        worst = std::max(worst, rel_residual(phi.apply(M), want));
      }
    } else {
      std::size_t nw = Z.nw();
      // West: absorb a strip to the left (sum over w, fixed z); East: right.
      auto prods = sequence_products(A, sp.s2, len, side == 'W');
      for (std::size_t fix = 0; fix < nw; ++fix) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(s * d, s * d);
        for (std::size_t run = 0; run < nw; ++run) {
          std::size_t wi = side == 'W' ? run : fix;
          std::size_t zi = side == 'W' ? fix : run;
          for (int x = 0; x < sp.s1; ++x)
            for (int y = 0; y < sp.s1; ++y) {
              double c = Z.at(std::size_t(x), std::size_t(y), wi, zi);
              if (c != 0.0) M.block(x * d, y * d, d, d) += c * prods[run];
            }
        }
        Eigen::MatrixXd want = scale * prods[fix];
        worst = std::max(worst, rel_residual(phi.apply(M), want));
      }
    }
  }
  return worst;
}

double verify_corner_eigen(const FaceWeight& w, const std::string& corner,
                           const RopeRep& rep, const CornerMorphism& K,
                           double lambda1, double sigma) {
  const StateSpaces sp = w.spaces();
  const double scale = sigma * lambda1;
  double worst = 0.0;
  if (corner == "SW") {
    for (int z = 0; z < sp.s2; ++z) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rep.dW(), rep.dS());
      for (int x = 0; x < sp.s1; ++x)
        for (int y = 0; y < sp.s1; ++y)
          for (int wv = 0; wv < sp.s2; ++wv) {
            double c = w(x, y, wv, z);
            if (c != 0.0) {
              lhs += c * rep.A_W[wv] * K.apply(y, rep.U_WS * rep.A_S[x]);
            }
          }
      worst = std::max(worst, rel_residual(lhs, scale * rep.A_W[z] * rep.U_WS));
    }
  } else if (corner == "SE") {
    for (int wv = 0; wv < sp.s2; ++wv) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rep.dS(), rep.dE());
      for (int x = 0; x < sp.s1; ++x)
        for (int y = 0; y < sp.s1; ++y)
          for (int z = 0; z < sp.s2; ++z) {
            double c = w(x, y, wv, z);
            if (c != 0.0) {
              lhs += c * K.apply(y, rep.A_S[x] * rep.U_SE) * rep.A_E[z];
            }
          }
      worst = std::max(worst, rel_residual(lhs, scale * rep.U_SE * rep.A_E[wv]));
    }
  } else if (corner == "EN") {
    for (int wv = 0; wv < sp.s2; ++wv) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rep.dE(), rep.dN());
      for (int x = 0; x < sp.s1; ++x)
        for (int y = 0; y < sp.s1; ++y)
          for (int z = 0; z < sp.s2; ++z) {
            double c = w(x, y, wv, z);
            if (c != 0.0) {
              lhs += c * rep.A_E[z] * K.apply(x, rep.U_EN * rep.A_N[y]);
            }
          }
      worst = std::max(worst, rel_residual(lhs, scale * rep.A_E[wv] * rep.U_EN));
    }
  } else if (corner == "NW") {
    for (int z = 0; z < sp.s2; ++z) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rep.dN(), rep.dW());
      for (int x = 0; x < sp.s1; ++x)
        for (int y = 0; y < sp.s1; ++y)
          for (int wv = 0; wv < sp.s2; ++wv) {
            double c = w(x, y, wv, z);
            if (c != 0.0) {
              lhs += c * K.apply(x, rep.A_N[y] * rep.U_NW) * rep.A_W[wv];
            }
          }
      worst = std::max(worst, rel_residual(lhs, scale * rep.U_NW * rep.A_W[z]));
    }
  } else {
    throw std::invalid_argument("unknown corner tag: " + corner);
  }
  return worst;
}

double verify_fullplane_eigen(const EigenStructure& es, const FaceWeight& w,
                              int p_max, int q_max) {
  double worst = 0.0;
  for (int p = 1; p <= p_max; ++p)
    for (int q = 1; q <= q_max; ++q) {
      double zbw = pair_boundary(eval_tensor(es.rep, p, q),
                                 partition_tensor(w, p, q));
      double want = es.kappa * std::pow(es.lambda, p * q) *
                    std::pow(es.sigma_S, p) * std::pow(es.sigma_N, p) *
                    std::pow(es.sigma_W, q) * std::pow(es.sigma_E, q);
      worst = std::max(worst, std::fabs(zbw - want) / std::fabs(want));
    }
  return worst;
}

double verify_halfstrip_all(const EigenStructure& es, const FaceWeight& w,
                            int p_max) {
  double worst = 0.0;
  for (char side : {'S', 'N', 'W', 'E'}) {
    worst = std::max(worst, verify_halfstrip_eigen(w, side, es.rep,
                                                   es.halfstrip.at(side),
                                                   es.lambda, p_max));
  }
  return worst;
}

double verify_corner_all(const EigenStructure& es, const FaceWeight& w) {
  double worst = 0.0;
  for (const char* c : {"SW", "SE", "EN", "NW"}) {
    double sigma = (std::string(c) == "SW" || std::string(c) == "SE")
                       ? es.sigma_S
                       : es.sigma_N;
    worst = std::max(worst, verify_corner_eigen(w, c, es.rep, es.corners.at(c),
                                                es.lambda, sigma));
  }
  return worst;
}

FaceWeight hv_face_weight(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  StateSpaces sp{static_cast<int>(A.rows()), static_cast<int>(B.rows())};
  return FaceWeight(tensor_from_fn(
      sp, Shape{1, 1},
      [&](const std::vector<int>& x, const std::vector<int>& y,
          const std::vector<int>& w, const std::vector<int>& z) {
        return A(x[0], y[0]) * B(w[0], z[0]);
      }));
}

FaceWeight oblique_face_weight(const Eigen::MatrixXd& C,
                               const Eigen::MatrixXd& D) {
  if (C.rows() != D.cols() || C.cols() != D.rows()) {
    throw std::invalid_argument("oblique couplings must have transposed shapes");
  }
  // C couples the South edge to the West edge of the same face (s1 x s2);
  // D couples the East edge to the North edge (s2 x s1).
  StateSpaces sp{static_cast<int>(C.rows()), static_cast<int>(C.cols())};
  return FaceWeight(tensor_from_fn(
      sp, Shape{1, 1},
      [&](const std::vector<int>& x, const std::vector<int>& y,
          const std::vector<int>& w, const std::vector<int>& z) {
        return C(x[0], w[0]) * D(z[0], y[0]);
      }));
}

EigenStructure build_hv_eigenstructure(const Eigen::MatrixXd& A,
                                       const Eigen::MatrixXd& B) {
  PfPair pa = pf_eigen(A);
  PfPair pb = pf_eigen(B);
  StateSpaces sp{static_cast<int>(A.rows()), static_cast<int>(B.rows())};
  auto to_vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  EigenStructure es;
  es.lambda = pa.lambda * pb.lambda;
  es.kappa = 1.0;
  es.rep = from_factorized(sp, to_vec(pa.v_left), to_vec(pa.v_right),
                           to_vec(pb.v_left), to_vec(pb.v_right));
  for (char side : {'S', 'N'}) {
    es.halfstrip.emplace(side, HalfStripMorphism::rank_one_sandwich(
                                   side, pb.v_left, pb.v_right, 1));
  }
  for (char side : {'W', 'E'}) {
    es.halfstrip.emplace(side, HalfStripMorphism::rank_one_sandwich(
                                   side, pa.v_left, pa.v_right, 1));
  }
  std::vector<double> ar = to_vec(pa.v_right), al = to_vec(pa.v_left);
  es.corners.emplace("SW", CornerMorphism::scalar_family("SW", ar, 1, 1));
  es.corners.emplace("SE", CornerMorphism::scalar_family("SE", ar, 1, 1));
  es.corners.emplace("EN", CornerMorphism::scalar_family("EN", al, 1, 1));
  es.corners.emplace("NW", CornerMorphism::scalar_family("NW", al, 1, 1));
  return es;
}

EigenStructure build_oblique_eigenstructure(const Eigen::MatrixXd& C,
                                            const Eigen::MatrixXd& D,
                                            double* s1_out, double* s2_out) {
  if (C.rows() != D.cols() || C.cols() != D.rows()) {
    throw std::invalid_argument("oblique couplings must have transposed shapes");
  }
  PfPair p1 = pf_eigen(C * D);  // acts on the horizontal-edge state space S1
  PfPair p2 = pf_eigen(D * C);  // acts on the vertical-edge state space S2
  StateSpaces sp{static_cast<int>(C.rows()), static_cast<int>(C.cols())};
  const Eigen::VectorXd vL1 = p1.v_left, vR1 = p1.v_right;  // on S1
  const Eigen::VectorXd vL2 = p2.v_left, vR2 = p2.v_right;  // on S2
  // Oblique transfer scalars: D vR1 = s1c vR2 and C vR2 = s2c vR1,
  // with s1c * s2c equal to the dominant eigenvalue.
  double s1c = vL2.dot(D * vR1);
  double s2c = vL1.dot(C * vR2);
  if (s1_out) *s1_out = s1c;
  if (s2_out) *s2_out = s2c;
  auto to_vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  EigenStructure es;
  es.lambda = p1.lambda;
  es.kappa = 1.0;
  es.rep = from_factorized(sp, to_vec(vL1), to_vec(vR1), to_vec(vR2),
                           to_vec(vL2));
  for (char side : {'S', 'N'}) {
    es.halfstrip.emplace(
        side, HalfStripMorphism::rank_one_sandwich(side, vR2, vL2, 1));
  }
  for (char side : {'W', 'E'}) {
    es.halfstrip.emplace(
        side, HalfStripMorphism::rank_one_sandwich(side, vL1, vR1, 1));
  }
  std::vector<double> r1 = to_vec(vR1), l1 = to_vec(vL1);
  es.corners.emplace("SW", CornerMorphism::scalar_family("SW", r1, 1, 1));
  es.corners.emplace("SE", CornerMorphism::scalar_family("SE", r1, 1, 1));
  es.corners.emplace("EN", CornerMorphism::scalar_family("EN", l1, 1, 1));
  es.corners.emplace("NW", CornerMorphism::scalar_family("NW", l1, 1, 1));
  return es;
}

}  // namespace guill
