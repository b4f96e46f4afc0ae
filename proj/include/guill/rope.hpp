// Rectangular operator product environments: per-side matrix families plus
// four corner matrices evaluating boundary weights as traced matrix products
// around the rectangle.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "guill/markov.hpp"
#include "guill/tensor.hpp"

namespace guill {

// Boundary weight evaluation, counter-clockwise holonomy:
//   eval(x,y,w,z) = Tr[ U_WS A_S(x1)...A_S(xp) U_SE A_E(z1)...A_E(zq)
//                       U_EN A_N(yp)...A_N(y1) U_NW A_W(wq)...A_W(w1) ]
// Corner shapes: U_WS is dW x dS, U_SE is dS x dE, U_EN is dE x dN,
// U_NW is dN x dW.
struct RopeRep {
  StateSpaces spaces;
  std::vector<Eigen::MatrixXd> A_S, A_N;  // one dS x dS / dN x dN matrix per S1 state
  std::vector<Eigen::MatrixXd> A_W, A_E;  // one dW x dW / dE x dE matrix per S2 state
  Eigen::MatrixXd U_WS, U_SE, U_EN, U_NW;

  int dS() const { return static_cast<int>(U_SE.rows()); }
  int dE() const { return static_cast<int>(U_SE.cols()); }
  int dN() const { return static_cast<int>(U_EN.cols()); }
  int dW() const { return static_cast<int>(U_WS.rows()); }

  void validate() const;
};

// Boundary-weight value at one configuration.  Degenerate shapes: when q == 0
// pass the segment as x (y must equal x or be empty); when p == 0 pass it as w.
double eval(const RopeRep& rep, const std::vector<int>& x,
            const std::vector<int>& y, const std::vector<int>& w,
            const std::vector<int>& z);

// Tabulates eval over all boundary configurations of shape (p,q); degenerate
// shapes (p,0)/(0,q) give the diagonal sector.
GuillotineTensor eval_tensor(const RopeRep& rep, int p, int q,
                             std::size_t memory_cap = kDefaultMemoryCap);

// One-dimensional sides: eval is the product of the per-edge values.
RopeRep from_factorized(StateSpaces spaces, const std::vector<double>& u_S,
                        const std::vector<double>& u_N,
                        const std::vector<double>& u_W,
                        const std::vector<double>& u_E);

// One side of a boundary hidden Markov chain: hidden transition weights T
// (m x m) and emission laws nu[x](s,s') with sum_x nu[x](s,s') = 1, both
// given in the left-to-right (horizontal sides) / bottom-to-top (vertical
// sides) orientation.
struct HiddenMarkovSide {
  Eigen::MatrixXd T;
  std::vector<Eigen::MatrixXd> nu;
};

// Boundary weight of a hidden Markov chain running counter-clockwise around
// the rectangle with m hidden states per boundary vertex; the North and West
// data are transposed internally to match the holonomy orientation.
RopeRep from_hidden_markov(StateSpaces spaces, int m,
                           const HiddenMarkovSide& south,
                           const HiddenMarkovSide& north,
                           const HiddenMarkovSide& west,
                           const HiddenMarkovSide& east);

// Kronecker product of environments: eval multiplies pointwise.
RopeRep tensor_product(const RopeRep& r1, const RopeRep& r2);

// Block-diagonal sum of environments: eval adds pointwise.
RopeRep direct_sum(const std::vector<RopeRep>& reps);

// Representation of the marginal boundary weight on the rectangle shrunk by
// the given margins: strips of faces are absorbed into enlarged side
// operators and corner blocks.  eval(restrict(...)) equals
// marginal_boundary_weight(w, eval_tensor(rep), off) entrywise.
RopeRep restrict_rep(const FaceWeight& w, const RopeRep& rep, Offsets off,
                     std::size_t memory_cap = kDefaultMemoryCap);

}  // namespace guill
