// Perron-Frobenius machinery, the half-strip and corner eigen-identities
// "up to morphisms" as numerical checks, and exact eigen-structure builders
// for the two solved benchmark models (horizontal-vertical and oblique).
#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "guill/markov.hpp"
#include "guill/rope.hpp"

namespace guill {

struct PfPair {
  double lambda = 0.0;
  Eigen::VectorXd v_left, v_right;  // <v_left, v_right> = 1, |v_right|_2 = 1
};

// Dominant eigen pair of a nonnegative irreducible matrix by power iteration
// (deterministic uniform start; automatic epsilon shift on period-2
// oscillation).
PfPair pf_eigen(const Eigen::MatrixXd& a);

// Same iteration without the nonnegativity/irreducibility preconditions;
// requires a simple dominant eigenvalue to converge.
PfPair dominant_eigen(const Eigen::MatrixXd& a);

// Row-major vectorization helpers shared by the morphism maps.
Eigen::VectorXd vec_rm(const Eigen::MatrixXd& m);
Eigen::MatrixXd unvec_rm(const Eigen::VectorXd& v, int rows, int cols);

// Linear map from (s*d)x(s*d) matrices (edge-state blocks of side-space
// matrices, block index most significant) to d x d side-space matrices.
struct HalfStripMorphism {
  char side = 'S';
  int s = 1;  // transverse edge-state cardinality
  int d = 1;  // side dimension
  Eigen::MatrixXd map;  // (d*d) x ((s*d)^2), acting on row-major vec

  Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;

  // phi(E_{uv} (x) m) = u_left(u) * v_right(v) * m.
  static HalfStripMorphism rank_one_sandwich(char side,
                                             const Eigen::VectorXd& u_left,
                                             const Eigen::VectorXd& v_right,
                                             int d);
};

// Per-edge-state linear maps on the corner space of d_a x d_b matrices.
struct CornerMorphism {
  std::string corner = "SW";
  int da = 1, db = 1;
  std::vector<Eigen::MatrixXd> K;  // one (da*db)x(da*db) map per edge state

  Eigen::MatrixXd apply(int state, const Eigen::MatrixXd& m) const;

  // K(state) = c[state] * identity.
  static CornerMorphism scalar_family(const std::string& corner,
                                      const std::vector<double>& c, int da,
                                      int db);
};

struct EigenStructure {
  double lambda = 1.0;
  double sigma_S = 1.0, sigma_N = 1.0, sigma_W = 1.0, sigma_E = 1.0;
  double kappa = 1.0;
  RopeRep rep;
  std::map<char, HalfStripMorphism> halfstrip;      // keys S,N,W,E
  std::map<std::string, CornerMorphism> corners;    // keys SW,SE,EN,NW
};

// Maximum relative residual of the half-strip eigen identity on one side,
// over all transverse sequences of length p <= p_max.  For the South side:
//   phi( sum_{x,w,z} Z_{p,1}(x,y,w,z) E_{wz} (x) A_S(x_1)...A_S(x_p) )
//     = lambda1^p A_S(y_1)...A_S(y_p)   for every y.
double verify_halfstrip_eigen(const FaceWeight& w, char side,
                              const RopeRep& rep, const HalfStripMorphism& phi,
                              double lambda1, int p_max);

// Maximum relative residual of the one-face corner eigen identity.  For the
// SW corner:
//   sum_{x,y,w} W(x,y,w,z) A_W(w) K(y)(U_WS A_S(x)) = sigma*lambda1 A_W(z) U_WS
// for every z; the other corners are the dihedral analogues.
double verify_corner_eigen(const FaceWeight& w, const std::string& corner,
                           const RopeRep& rep, const CornerMorphism& K,
                           double lambda1, double sigma);

// Max relative deviation of pair_boundary(eval_tensor(rep,p,q),
// partition_tensor(w,p,q)) from kappa*lambda^{pq}*sigma_S^p sigma_N^p
// sigma_W^q sigma_E^q over the grid 1<=p<=p_max, 1<=q<=q_max.
double verify_fullplane_eigen(const EigenStructure& es, const FaceWeight& w,
                              int p_max, int q_max);

// Convenience: worst residual over the four sides / four corners.
double verify_halfstrip_all(const EigenStructure& es, const FaceWeight& w,
                            int p_max);
double verify_corner_all(const EigenStructure& es, const FaceWeight& w);

// Face weight F(x,y,w,z) = A(x,y) * B(w,z): independent horizontal and
// vertical chains.
FaceWeight hv_face_weight(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Face weight F(x,y,w,z) = C(x,w) * D(z,y): independent oblique chains.
// C (s1 x s2) couples South to West, D (s2 x s1) couples East to North.
FaceWeight oblique_face_weight(const Eigen::MatrixXd& C,
                               const Eigen::MatrixXd& D);

// Exact eigen structure of the horizontal-vertical model:
// lambda = alpha*beta, all side eigenvalues 1, kappa = 1.
EigenStructure build_hv_eigenstructure(const Eigen::MatrixXd& A,
                                       const Eigen::MatrixXd& B);

// Exact eigen structure of the oblique model: lambda = dominant eigenvalue of
// C*D (= that of D*C).  Optionally reports the two oblique transfer scalars
// with s1_out * s2_out = lambda.
EigenStructure build_oblique_eigenstructure(const Eigen::MatrixXd& C,
                                            const Eigen::MatrixXd& D,
                                            double* s1_out = nullptr,
                                            double* s2_out = nullptr);

}  // namespace guill
