// Markov-process semantics on rectangles: face weights, partition functions
// (gluing-based and brute-force), exact joint laws, marginalization onto
// sub-rectangles, edge observables and gauge transforms.
#pragma once

#include <functional>
#include <vector>

#include "guill/tensor.hpp"

namespace guill {

// Hard bound on brute-force enumeration: total edge count of the rectangle.
constexpr int kEnumerationEdgeBound = 26;

// Elementary nonnegative weight W(x_S, x_N, x_W, x_E) on one lattice face,
// stored as a shape-(1,1) tensor.
class FaceWeight {
 public:
  explicit FaceWeight(GuillotineTensor t);

  StateSpaces spaces() const { return t_.spaces(); }
  const GuillotineTensor& tensor() const { return t_; }
  double operator()(int x, int y, int w, int z) const {
    const StateSpaces sp = t_.spaces();
    return t_[((std::size_t(x) * sp.s1 + y) * sp.s2 + w) * sp.s2 + z];
  }

 private:
  GuillotineTensor t_;
};

// Canonical enumeration of the edges of a p x q rectangle: all horizontal
// edges row-by-row bottom-to-top, each row left-to-right; then all vertical
// edges column-by-column left-to-right, each column bottom-to-top.
struct EdgeLayout {
  int p, q;
  StateSpaces spaces;

  int nh() const { return p * (q + 1); }
  int nv() const { return q * (p + 1); }
  int total() const { return nh() + nv(); }
  int h_edge(int row, int col) const { return row * p + col; }
  int v_edge(int col, int row) const { return nh() + col * q + row; }
  bool is_horizontal(int e) const { return e < nh(); }
  int cardinality(int e) const { return is_horizontal(e) ? spaces.s1 : spaces.s2; }

  // Edge ids of face (i,j), i in [0,p), j in [0,q): South, North, West, East.
  void face_edges(int i, int j, int out[4]) const {
    out[0] = h_edge(j, i);
    out[1] = h_edge(j + 1, i);
    out[2] = v_edge(i, j);
    out[3] = v_edge(i + 1, j);
  }

  // Number of full edge configurations (saturates on overflow).
  std::size_t num_configs() const;

  // Flat index of a full configuration, first edge most significant.
  std::size_t config_index(const std::vector<int>& digits) const;

  // Flat boundary-tensor index of the boundary part of a configuration.
  std::size_t boundary_index(const std::vector<int>& digits) const;
};

// Exact joint law over all edges of a p x q rectangle, probabilities indexed
// per EdgeLayout::config_index.
struct RectLaw {
  Shape shape;
  StateSpaces spaces;
  std::vector<double> prob;
  double Z = 0.0;
};

struct Offsets {
  int n1 = 0, n2 = 0, m1 = 0, m2 = 0;  // west, east, south, north margins
};

// Depth-first enumeration of edge configurations.  `free_edge[e]` selects the
// edges to sweep; the remaining digits of `digits` are treated as fixed.
// `faces` lists (i,j) pairs whose weight product is accumulated incrementally;
// the visitor receives the full digit vector and the product over those faces.
void enumerate_edge_configs(
    const FaceWeight& w, const EdgeLayout& layout,
    const std::vector<char>& free_edge,
    const std::vector<std::pair<int, int>>& faces, std::vector<int>& digits,
    const std::function<void(const std::vector<int>&, double)>& visit);

// Partition function of the p x q rectangle as a boundary tensor, via gluing.
GuillotineTensor partition_tensor(const FaceWeight& w, int p, int q,
                                  std::size_t memory_cap = kDefaultMemoryCap);

// Same object by direct summation over all internal edge assignments.
GuillotineTensor partition_tensor_bruteforce(const FaceWeight& w, int p, int q);

// Exact joint law of all edges under boundary weight g (shape (p,q)).
RectLaw exact_law(const FaceWeight& w, const GuillotineTensor& g);

// Unnormalized boundary weight induced on the inner rectangle obtained by
// trimming the given margins, by summing faces and edges of the annulus.
GuillotineTensor marginal_boundary_weight(const FaceWeight& w,
                                          const GuillotineTensor& g,
                                          Offsets off);

// A diagonal observable h on one edge (h has the edge's state cardinality).
struct EdgeObservable {
  int edge = 0;
  std::vector<double> h;
};

// E[prod_e h_e(X_e)] under exact_law(w, g), via gluing with diagonal
// degenerate elements inserted at the observed edges.
double expectation_with_observables(const FaceWeight& w,
                                    const GuillotineTensor& g,
                                    const std::vector<EdgeObservable>& obs);

// Same expectation by direct enumeration of the joint law (oracle path).
double expectation_with_observables_bruteforce(
    const FaceWeight& w, const GuillotineTensor& g,
    const std::vector<EdgeObservable>& obs);

// W'(x,y,w,z) = W(x,y,w,z) * c_h(y)/c_h(x) * c_v(z)/c_v(w).
FaceWeight gauge_transform(const FaceWeight& w, const std::vector<double>& c_h,
                           const std::vector<double>& c_v);

double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b);

}  // namespace guill
