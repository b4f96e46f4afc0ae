#include "guill/tensor.hpp"

#include <limits>

namespace guill {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    r *= base;
  }
  return r;
}

void decode_digits(std::size_t idx, int base, int len, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(idx % base);
    idx /= static_cast<std::size_t>(base);
  }
}

std::size_t encode_digits(const std::vector<int>& digits, int base) {
  std::size_t idx = 0;
  for (int d : digits) idx = idx * static_cast<std::size_t>(base) + static_cast<std::size_t>(d);
  return idx;
}

std::size_t reverse_index(std::size_t idx, int base, int len) {
  std::size_t r = 0;
  for (int i = 0; i < len; ++i) {
    r = r * static_cast<std::size_t>(base) + idx % static_cast<std::size_t>(base);
    idx /= static_cast<std::size_t>(base);
  }
  return r;
}

std::size_t GuillotineTensor::expected_size(StateSpaces sp, Shape sh) {
  if (sp.s1 < 1 || sp.s2 < 1) throw std::invalid_argument("state space cardinalities must be >= 1");
  if (sh.p < 0 || sh.q < 0) throw std::invalid_argument("shape sizes must be >= 0");
  if (sh.p > 0 && sh.q > 0) {
    auto mul_sat = [](std::size_t a, std::size_t b) {
      if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
        return std::numeric_limits<std::size_t>::max();
      }
      return a * b;
    };
    std::size_t nx = ipow(std::size_t(sp.s1), sh.p);
    std::size_t nw = ipow(std::size_t(sp.s2), sh.q);
    return mul_sat(mul_sat(nx, nx), mul_sat(nw, nw));
  }
  if (sh.p > 0) return ipow(std::size_t(sp.s1), sh.p);
  if (sh.q > 0) return ipow(std::size_t(sp.s2), sh.q);
  return 1;
}

GuillotineTensor::GuillotineTensor(StateSpaces spaces, Shape shape,
                                   std::vector<double> data)
    : spaces_(spaces), shape_(shape), data_(std::move(data)) {
  std::size_t want = expected_size(spaces_, shape_);
  if (data_.size() != want) {
    throw std::invalid_argument(
        "tensor data length " + std::to_string(data_.size()) +
        " does not match shape (" + std::to_string(shape_.p) + "," +
        std::to_string(shape_.q) + "): expected " + std::to_string(want));
  }
}

GuillotineTensor GuillotineTensor::zeros(StateSpaces sp, Shape sh) {
  return GuillotineTensor(sp, sh, std::vector<double>(expected_size(sp, sh), 0.0));
}

std::size_t GuillotineTensor::flat(std::size_t xi, std::size_t yi,
                                   std::size_t wi, std::size_t zi) const {
  std::size_t nxv = nx();
  std::size_t nwv = nw();
  return ((xi * nxv + yi) * nwv + wi) * nwv + zi;
}

GuillotineTensor tensor_from_fn(StateSpaces sp, Shape sh, const BoundaryFn& f) {
  GuillotineTensor t = GuillotineTensor::zeros(sp, sh);
  std::vector<int> x, y, w, z;
  if (sh.p > 0 && sh.q > 0) {
    std::size_t nx = t.nx(), nw = t.nw();
    for (std::size_t xi = 0; xi < nx; ++xi) {
      decode_digits(xi, sp.s1, sh.p, x);
      for (std::size_t yi = 0; yi < nx; ++yi) {
        decode_digits(yi, sp.s1, sh.p, y);
        for (std::size_t wi = 0; wi < nw; ++wi) {
          decode_digits(wi, sp.s2, sh.q, w);
          for (std::size_t zi = 0; zi < nw; ++zi) {
            decode_digits(zi, sp.s2, sh.q, z);
            t[t.flat(xi, yi, wi, zi)] = f(x, y, w, z);
          }
        }
      }
    }
  } else if (sh.p > 0) {
    for (std::size_t xi = 0; xi < t.size(); ++xi) {
      decode_digits(xi, sp.s1, sh.p, x);
      t[xi] = f(x, x, w, z);
    }
  } else if (sh.q > 0) {
    for (std::size_t wi = 0; wi < t.size(); ++wi) {
      decode_digits(wi, sp.s2, sh.q, w);
      t[wi] = f(x, y, w, w);
    }
  } else {
    t[0] = f(x, y, w, z);
  }
  return t;
}

namespace {

void require_same_spaces(const GuillotineTensor& a, const GuillotineTensor& b) {
  if (a.spaces() != b.spaces()) {
    throw std::invalid_argument("state spaces of the two operands differ");
  }
}

}  // namespace

GuillotineTensor m_we(const GuillotineTensor& a, const GuillotineTensor& b) {
  require_same_spaces(a, b);
  if (a.shape().q != b.shape().q) {
    throw std::invalid_argument("m_we: vertical sizes differ (" +
                                std::to_string(a.shape().q) + " vs " +
                                std::to_string(b.shape().q) + ")");
  }
  StateSpaces sp = a.spaces();
  int p1 = a.shape().p, p2 = b.shape().p, q = a.shape().q;
  if (q == 0) {
    // Commutative sector: concatenation of diagonal elements.
    GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{p1 + p2, 0});
    std::size_t na = a.size(), nb = b.size();
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) r[i * nb + j] = a[i] * b[j];
    return r;
  }
  std::size_t nw = ipow(std::size_t(sp.s2), q);
  if (p1 == 0 && p2 == 0) {
    GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{0, q});
    for (std::size_t v = 0; v < nw; ++v) r[v] = a[v] * b[v];
    return r;
  }
  if (p1 == 0) {
    // Degenerate diagonal glued to the west of b.
    GuillotineTensor r = b;
    std::size_t nx = r.nx();
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(xi, yi, wi, zi)] *= a[wi];
    return r;
  }
  if (p2 == 0) {
    GuillotineTensor r = a;
    std::size_t nx = r.nx();
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(xi, yi, wi, zi)] *= b[zi];
    return r;
  }
  std::size_t nx1 = a.nx(), nx2 = b.nx();
  GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{p1 + p2, q});
  for (std::size_t x1 = 0; x1 < nx1; ++x1)
    for (std::size_t y1 = 0; y1 < nx1; ++y1)
      for (std::size_t x2 = 0; x2 < nx2; ++x2)
        for (std::size_t y2 = 0; y2 < nx2; ++y2)
          for (std::size_t wi = 0; wi < nw; ++wi)
            for (std::size_t zi = 0; zi < nw; ++zi) {
              double s = 0.0;
              for (std::size_t u = 0; u < nw; ++u)
                s += a.at(x1, y1, wi, u) * b.at(x2, y2, u, zi);
              r[r.flat(x1 * nx2 + x2, y1 * nx2 + y2, wi, zi)] = s;
            }
  return r;
}

GuillotineTensor m_sn(const GuillotineTensor& a, const GuillotineTensor& b) {
  require_same_spaces(a, b);
  if (a.shape().p != b.shape().p) {
    throw std::invalid_argument("m_sn: horizontal sizes differ (" +
                                std::to_string(a.shape().p) + " vs " +
                                std::to_string(b.shape().p) + ")");
  }
  StateSpaces sp = a.spaces();
  int p = a.shape().p, q1 = a.shape().q, q2 = b.shape().q;
  if (p == 0) {
    GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{0, q1 + q2});
    std::size_t na = a.size(), nb = b.size();
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) r[i * nb + j] = a[i] * b[j];
    return r;
  }
  std::size_t nx = ipow(std::size_t(sp.s1), p);
  if (q1 == 0 && q2 == 0) {
    GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{p, 0});
    for (std::size_t v = 0; v < nx; ++v) r[v] = a[v] * b[v];
    return r;
  }
  if (q1 == 0) {
    GuillotineTensor r = b;
    std::size_t nw = r.nw();
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(xi, yi, wi, zi)] *= a[xi];
    return r;
  }
  if (q2 == 0) {
    GuillotineTensor r = a;
    std::size_t nw = r.nw();
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(xi, yi, wi, zi)] *= b[yi];
    return r;
  }
  std::size_t nw1 = a.nw(), nw2 = b.nw();
  GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{p, q1 + q2});
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t yi = 0; yi < nx; ++yi)
      for (std::size_t w1 = 0; w1 < nw1; ++w1)
        for (std::size_t z1 = 0; z1 < nw1; ++z1)
          for (std::size_t w2 = 0; w2 < nw2; ++w2)
            for (std::size_t z2 = 0; z2 < nw2; ++z2) {
              double s = 0.0;
              for (std::size_t u = 0; u < nx; ++u)
                s += a.at(xi, u, w1, z1) * b.at(u, yi, w2, z2);
              r[r.flat(xi, yi, w1 * nw2 + w2, z1 * nw2 + z2)] = s;
            }
  return r;
}

GuillotineTensor surface_power(const GuillotineTensor& w, int p, int q,
                               std::size_t memory_cap) {
  if (w.shape() != Shape{1, 1}) {
    throw std::invalid_argument("surface_power: block must have shape (1,1)");
  }
  if (p < 1 || q < 1) throw std::invalid_argument("surface_power: p,q must be >= 1");
  std::size_t want = GuillotineTensor::expected_size(w.spaces(), Shape{p, q});
  if (want > memory_cap) {
    throw std::length_error(
        "surface_power: result would need " + std::to_string(want) +
        " entries, above the memory cap of " + std::to_string(memory_cap));
  }
  GuillotineTensor row = w;
  for (int i = 2; i <= p; ++i) row = m_we(row, w);
  GuillotineTensor res = row;
  for (int j = 2; j <= q; ++j) res = m_sn(res, row);
  return res;
}

double pair_boundary(const GuillotineTensor& g, const GuillotineTensor& z) {
  if (g.spaces() != z.spaces() || g.shape() != z.shape()) {
    throw std::invalid_argument("pair_boundary: shape or state-space mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * z[i];
  return s;
}

GuillotineTensor dihedral(const GuillotineTensor& t, DihedralOp op) {
  StateSpaces sp = t.spaces();
  Shape sh = t.shape();
  if (op == DihedralOp::transpose_diag && sp.s1 != sp.s2) {
    throw std::invalid_argument("transpose_diag requires s1 == s2");
  }
  if (sh.p == 0 && sh.q == 0) return t;
  if (sh.q == 0) {  // diagonal over S1^p
    GuillotineTensor r = GuillotineTensor::zeros(
        sp, op == DihedralOp::transpose_diag ? Shape{0, sh.p} : sh);
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::size_t j = (op == DihedralOp::flip_h)
                          ? reverse_index(i, sp.s1, sh.p)
                          : i;  // flip_v and transpose leave the index fixed
      r[j] = t[i];
    }
    return r;
  }
  if (sh.p == 0) {  // diagonal over S2^q
    GuillotineTensor r = GuillotineTensor::zeros(
        sp, op == DihedralOp::transpose_diag ? Shape{sh.q, 0} : sh);
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::size_t j = (op == DihedralOp::flip_v)
                          ? reverse_index(i, sp.s2, sh.q)
                          : i;
      r[j] = t[i];
    }
    return r;
  }
  std::size_t nx = t.nx(), nw = t.nw();
  if (op == DihedralOp::flip_h) {
    GuillotineTensor r = GuillotineTensor::zeros(sp, sh);
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(reverse_index(xi, sp.s1, sh.p),
                     reverse_index(yi, sp.s1, sh.p), zi, wi)] =
                t.at(xi, yi, wi, zi);
    return r;
  }
  if (op == DihedralOp::flip_v) {
    GuillotineTensor r = GuillotineTensor::zeros(sp, sh);
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < nx; ++yi)
        for (std::size_t wi = 0; wi < nw; ++wi)
          for (std::size_t zi = 0; zi < nw; ++zi)
            r[r.flat(yi, xi, reverse_index(wi, sp.s2, sh.q),
                     reverse_index(zi, sp.s2, sh.q))] = t.at(xi, yi, wi, zi);
    return r;
  }
  // transpose_diag: reflection across the southwest-northeast diagonal,
  // exchanging (S,N) with (W,E).
  GuillotineTensor r = GuillotineTensor::zeros(sp, Shape{sh.q, sh.p});
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t yi = 0; yi < nx; ++yi)
      for (std::size_t wi = 0; wi < nw; ++wi)
        for (std::size_t zi = 0; zi < nw; ++zi)
          r[r.flat(wi, zi, xi, yi)] = t.at(xi, yi, wi, zi);
  return r;
}

}  // namespace guill
