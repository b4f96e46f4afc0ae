// Boundary-weight families from eigen structures, Kolmogorov-consistency
// checks, closed-form partition functions, free energy, and the
// matrix-product correlation formulas on a line.
#pragma once

#include <functional>
#include <tuple>
#include <vector>

#include "guill/eigen.hpp"
#include "guill/markov.hpp"
#include "guill/rope.hpp"

namespace guill {

// A boundary weight for every requested rectangle size.
struct BoundaryFamily {
  std::function<GuillotineTensor(int, int)> gen;
};

BoundaryFamily family_from_rep(const RopeRep& rep);
BoundaryFamily uniform_family(StateSpaces spaces);

// Total-variation distance between (a) the marginal of the exact outer-
// rectangle law onto the inner rectangle's edges and (b) the exact law built
// directly on the inner rectangle with the family's own boundary weight.
double check_consistency(const FaceWeight& w, const BoundaryFamily& fam,
                         int outer_p, int outer_q, Offsets off);

// kappa * lambda^{pq} * sigma_S^p sigma_N^p sigma_W^q sigma_E^q.
double partition_closed_form(const EigenStructure& es, int p, int q);

// Corner constant from the smallest rectangle:
// Z^bw(1,1) / (lambda sigma_S sigma_N sigma_W sigma_E).
double measure_kappa(const RopeRep& rep, const FaceWeight& w, double lambda,
                     double sigma_S, double sigma_N, double sigma_W,
                     double sigma_E);

// Per-size free-energy densities (1/pq) log Z^bw.
std::vector<std::tuple<int, int, double>> free_energy(
    const FaceWeight& w, const BoundaryFamily& fam,
    const std::vector<std::pair<int, int>>& sizes);

// Paired South-North kernel governing marginals along a horizontal line:
// A_SN(x) acts on the d_S * d_N product space.
struct CorrelationKernel {
  Eigen::VectorXd u_W, u_E;
  std::vector<Eigen::MatrixXd> A_SN;
  Eigen::MatrixXd C_SN;  // sum over the edge states
};

CorrelationKernel correlation_kernel(const EigenStructure& es);

// Law of L consecutive horizontal edges on a line, indexed like a length-L
// digit sequence over S1 (first edge most significant).
std::vector<double> marginal_segment_law(const EigenStructure& es, int L);

// Joint probability of the two endpoint edge values of an L-segment.
double two_point(const EigenStructure& es, int u, int v, int L);

struct CorrelationLength {
  bool degenerate = false;  // kernel dimension 1: no subleading eigenvalue
  bool infinite = false;    // spectral gap below resolution
  double value = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
};

CorrelationLength correlation_length(const EigenStructure& es);

}  // namespace guill
