// Colored guillotine tensors: boundary-weight arrays on p x q rectangles
// together with the west-east / south-north gluing products, surface powers,
// boundary pairing and the dihedral symmetries.
#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace guill {

struct StateSpaces {
  int s1 = 1;  // cardinality of the horizontal-edge state set
  int s2 = 1;  // cardinality of the vertical-edge state set
};

inline bool operator==(StateSpaces a, StateSpaces b) {
  return a.s1 == b.s1 && a.s2 == b.s2;
}
inline bool operator!=(StateSpaces a, StateSpaces b) { return !(a == b); }

struct Shape {
  int p = 0;  // horizontal size (>= 0)
  int q = 0;  // vertical size (>= 0)
};

inline bool operator==(Shape a, Shape b) { return a.p == b.p && a.q == b.q; }
inline bool operator!=(Shape a, Shape b) { return !(a == b); }

// Default refusal threshold for dense tensor allocations (entry count).
constexpr std::size_t kDefaultMemoryCap = std::size_t(1) << 28;

// Integer power with overflow saturation to SIZE_MAX.
std::size_t ipow(std::size_t base, int exp);

// Decode a flat index into `len` digits in the given base, first digit most
// significant. `out` is resized to `len`.
void decode_digits(std::size_t idx, int base, int len, std::vector<int>& out);
std::size_t encode_digits(const std::vector<int>& digits, int base);
// Index of the digit-reversed sequence.
std::size_t reverse_index(std::size_t idx, int base, int len);

// Dense array over the boundary configurations of a p x q rectangle.
//
// For p>0 and q>0 the boundary configuration is (x, y, w, z) with
// x,y in S1^p (South, North; read left to right) and w,z in S2^q
// (West, East; read bottom to top).  Flattening is lexicographic with x most
// significant, then y, then w, then z; within each side the first edge
// (leftmost / bottommost) is most significant.
//
// Degenerate shapes store only the diagonal sector: shape (p,0) holds a
// function on S1^p, shape (0,q) a function on S2^q, shape (0,0) a scalar.
class GuillotineTensor {
 public:
  GuillotineTensor(StateSpaces spaces, Shape shape, std::vector<double> data);

  static std::size_t expected_size(StateSpaces spaces, Shape shape);
  static GuillotineTensor zeros(StateSpaces spaces, Shape shape);

  StateSpaces spaces() const { return spaces_; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  // Flat index for a nondegenerate shape, from per-side radix indices.
  std::size_t flat(std::size_t xi, std::size_t yi, std::size_t wi,
                   std::size_t zi) const;
  double at(std::size_t xi, std::size_t yi, std::size_t wi,
            std::size_t zi) const {
    return data_[flat(xi, yi, wi, zi)];
  }

  // Number of configurations per side.
  std::size_t nx() const { return ipow(std::size_t(spaces_.s1), shape_.p); }
  std::size_t nw() const { return ipow(std::size_t(spaces_.s2), shape_.q); }

 private:
  StateSpaces spaces_;
  Shape shape_;
  std::vector<double> data_;
};

// f(x, y, w, z) receives the four side sequences; for degenerate shapes the
// diagonal sequence is passed as both x and y (shape (p,0)) or both w and z
// (shape (0,q)).
using BoundaryFn = std::function<double(
    const std::vector<int>& x, const std::vector<int>& y,
    const std::vector<int>& w, const std::vector<int>& z)>;

GuillotineTensor tensor_from_fn(StateSpaces spaces, Shape shape,
                                const BoundaryFn& f);

// West-east gluing: contracts the shared vertical side.
//   result(x + x', y + y', w, z') = sum_u a(x, y, w, u) * b(x', y', u, z')
// For q == 0 the product is the commutative concatenation a(x) * b(x').
GuillotineTensor m_we(const GuillotineTensor& a, const GuillotineTensor& b);

// South-north gluing: contracts the shared horizontal side.
//   result(x, y', w + w', z + z') = sum_u a(x, u, w, z) * b(u, y', w', z')
GuillotineTensor m_sn(const GuillotineTensor& a, const GuillotineTensor& b);

// Repeated gluing of a single 1x1 block into a p x q rectangle.
GuillotineTensor surface_power(const GuillotineTensor& w, int p, int q,
                               std::size_t memory_cap = kDefaultMemoryCap);

// Full contraction sum_c g(c) * z(c).
double pair_boundary(const GuillotineTensor& g, const GuillotineTensor& z);

enum class DihedralOp { flip_h, flip_v, transpose_diag };

// flip_h swaps W and E and reverses the South/North sequences; flip_v swaps
// S and N and reverses the West/East sequences; transpose_diag exchanges the
// two axes (shape (p,q) -> (q,p); requires s1 == s2).
GuillotineTensor dihedral(const GuillotineTensor& t, DihedralOp op);

}  // namespace guill
