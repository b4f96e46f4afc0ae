#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "guill/tensor.hpp"

using namespace guill;

namespace {

GuillotineTensor random_tensor(StateSpaces sp, Shape sh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> data(GuillotineTensor::expected_size(sp, sh));
  for (double& v : data) v = u(rng);
  return GuillotineTensor(sp, sh, data);
}

double max_abs_diff(const GuillotineTensor& a, const GuillotineTensor& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("index helpers round-trip") {
  std::vector<int> digits;
  for (std::size_t i = 0; i < 81; ++i) {
    decode_digits(i, 3, 4, digits);
    CHECK(encode_digits(digits, 3) == i);
  }
  // 012 base 3 = 5; reversed 210 = 21.
  CHECK(reverse_index(5, 3, 3) == 21);
  CHECK(ipow(2, 10) == 1024);
  CHECK(ipow(10, 40) == SIZE_MAX);  // saturates
}

TEST_CASE("scalar and degenerate products are pointwise") {
  StateSpaces sp{2, 3};
  GuillotineTensor a(sp, Shape{0, 0}, {2.0});
  GuillotineTensor b(sp, Shape{0, 0}, {3.0});
  CHECK(m_we(a, b)[0] == doctest::Approx(6.0));
  CHECK(m_sn(a, b)[0] == doctest::Approx(6.0));

  // Same-shape (0,q) tensors multiply diagonally under m_we.
  GuillotineTensor c(sp, Shape{0, 1}, {1.0, 2.0, 3.0});
  GuillotineTensor d(sp, Shape{0, 1}, {4.0, 5.0, 6.0});
  GuillotineTensor cd = m_we(c, d);
  CHECK(cd.shape() == Shape{0, 1});
  CHECK(cd[0] == doctest::Approx(4.0));
  CHECK(cd[1] == doctest::Approx(10.0));
  CHECK(cd[2] == doctest::Approx(18.0));

  // (p,0) tensors concatenate under m_we.
  GuillotineTensor e(sp, Shape{1, 0}, {1.0, 2.0});
  GuillotineTensor f(sp, Shape{1, 0}, {3.0, 4.0});
  GuillotineTensor ef = m_we(e, f);
  CHECK(ef.shape() == Shape{2, 0});
  CHECK(ef[0 * 2 + 1] == doctest::Approx(1.0 * 4.0));
  CHECK(ef[1 * 2 + 0] == doctest::Approx(2.0 * 3.0));
}

TEST_CASE("all-ones degenerate element is a unit for gluing") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(7);
  GuillotineTensor t = random_tensor(sp, Shape{2, 2}, rng);
  GuillotineTensor unit_v(sp, Shape{0, 2}, std::vector<double>(4, 1.0));
  GuillotineTensor unit_h(sp, Shape{2, 0}, std::vector<double>(4, 1.0));
  CHECK(max_abs_diff(m_we(unit_v, t), t) == 0.0);
  CHECK(max_abs_diff(m_we(t, unit_v), t) == 0.0);
  CHECK(max_abs_diff(m_sn(unit_h, t), t) == 0.0);
  CHECK(max_abs_diff(m_sn(t, unit_h), t) == 0.0);
}

TEST_CASE("gluing associativity and the interchange law") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(11);
  GuillotineTensor a = random_tensor(sp, Shape{1, 1}, rng);
  GuillotineTensor b = random_tensor(sp, Shape{1, 1}, rng);
  GuillotineTensor c = random_tensor(sp, Shape{1, 1}, rng);
  GuillotineTensor d = random_tensor(sp, Shape{1, 1}, rng);

  CHECK(max_abs_diff(m_we(m_we(a, b), c), m_we(a, m_we(b, c))) < 1e-14);
  CHECK(max_abs_diff(m_sn(m_sn(a, b), c), m_sn(a, m_sn(b, c))) < 1e-14);
  // (a|b) over (c|d) equals (a over c) | (b over d).
  CHECK(max_abs_diff(m_sn(m_we(c, d), m_we(a, b)),
                     m_we(m_sn(c, a), m_sn(d, b))) < 1e-13);
}

TEST_CASE("surface_power is independent of the cut order") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(13);
  GuillotineTensor w = random_tensor(sp, Shape{1, 1}, rng);
  GuillotineTensor rows = surface_power(w, 3, 2);

  // Alternative order: build columns first, then glue west-east.
  GuillotineTensor col = m_sn(w, w);
  GuillotineTensor alt = m_we(m_we(col, col), col);
  CHECK(max_abs_diff(rows, alt) < 1e-12);
}

TEST_CASE("surface_power of a rank-factorized face has a product form") {
  // F(x,y,w,z) = A(x,y) * B(w,z): the (p,q) power factorizes into matrix
  // powers A^q along each column pair and B^p along each row pair.
  StateSpaces sp{2, 2};
  double A[2][2] = {{1.0, 2.0}, {0.5, 1.5}};
  double B[2][2] = {{2.0, 1.0}, {1.0, 3.0}};
  GuillotineTensor f = tensor_from_fn(
      sp, Shape{1, 1},
      [&](const std::vector<int>& x, const std::vector<int>& y,
          const std::vector<int>& w, const std::vector<int>& z) {
        return A[x[0]][y[0]] * B[w[0]][z[0]];
      });
  const int p = 3, q = 2;
  GuillotineTensor t = surface_power(f, p, q);

  auto matpow = [](const double m[2][2], int n) {
    double r[2][2] = {{1, 0}, {0, 1}};
    for (int k = 0; k < n; ++k) {
      double t2[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          t2[i][j] = r[i][0] * m[0][j] + r[i][1] * m[1][j];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = t2[i][j];
    }
    return std::vector<double>{r[0][0], r[0][1], r[1][0], r[1][1]};
  };
  std::vector<double> Aq = matpow(A, q), Bp = matpow(B, p);

  std::vector<int> xs, ys, ws, zs;
  for (std::size_t xi = 0; xi < t.nx(); ++xi)
    for (std::size_t yi = 0; yi < t.nx(); ++yi)
      for (std::size_t wi = 0; wi < t.nw(); ++wi)
        for (std::size_t zi = 0; zi < t.nw(); ++zi) {
          decode_digits(xi, sp.s1, p, xs);
          decode_digits(yi, sp.s1, p, ys);
          decode_digits(wi, sp.s2, q, ws);
          decode_digits(zi, sp.s2, q, zs);
          double want = 1.0;
          for (int i = 0; i < p; ++i)
            want *= Aq[static_cast<std::size_t>(xs[i] * 2 + ys[i])];
          for (int j = 0; j < q; ++j)
            want *= Bp[static_cast<std::size_t>(ws[j] * 2 + zs[j])];
          CHECK(t.at(xi, yi, wi, zi) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("pair_boundary is the full contraction") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(17);
  GuillotineTensor g = random_tensor(sp, Shape{2, 1}, rng);
  GuillotineTensor z = random_tensor(sp, Shape{2, 1}, rng);
  double want = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) want += g[i] * z[i];
  CHECK(pair_boundary(g, z) == doctest::Approx(want));
}

TEST_CASE("dihedral operations are involutions with correct index action") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(19);
  GuillotineTensor t = random_tensor(sp, Shape{2, 2}, rng);

  GuillotineTensor fh = dihedral(t, DihedralOp::flip_h);
  GuillotineTensor fv = dihedral(t, DihedralOp::flip_v);
  GuillotineTensor tr = dihedral(t, DihedralOp::transpose_diag);
  CHECK(max_abs_diff(dihedral(fh, DihedralOp::flip_h), t) == 0.0);
  CHECK(max_abs_diff(dihedral(fv, DihedralOp::flip_v), t) == 0.0);
  CHECK(max_abs_diff(dihedral(tr, DihedralOp::transpose_diag), t) == 0.0);

  // Spot-check the index action at a non-symmetric configuration.
  std::size_t xi = encode_digits({0, 1}, 2), yi = encode_digits({1, 1}, 2);
  std::size_t wi = encode_digits({1, 0}, 2), zi = encode_digits({0, 0}, 2);
  CHECK(fh.at(xi, yi, wi, zi) ==
        t.at(reverse_index(xi, 2, 2), reverse_index(yi, 2, 2), zi, wi));
  CHECK(fv.at(xi, yi, wi, zi) ==
        t.at(yi, xi, reverse_index(wi, 2, 2), reverse_index(zi, 2, 2)));
  CHECK(tr.at(xi, yi, wi, zi) == t.at(wi, zi, xi, yi));
}

TEST_CASE("dihedral operations exchange the two gluing products") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(23);
  GuillotineTensor a = random_tensor(sp, Shape{1, 1}, rng);
  GuillotineTensor b = random_tensor(sp, Shape{1, 1}, rng);

  // Mirroring reverses horizontal composition order.
  CHECK(max_abs_diff(dihedral(m_we(a, b), DihedralOp::flip_h),
                     m_we(dihedral(b, DihedralOp::flip_h),
                          dihedral(a, DihedralOp::flip_h))) < 1e-14);
  CHECK(max_abs_diff(dihedral(m_sn(a, b), DihedralOp::flip_v),
                     m_sn(dihedral(b, DihedralOp::flip_v),
                          dihedral(a, DihedralOp::flip_v))) < 1e-14);
  // Transposition exchanges the two products.
  CHECK(max_abs_diff(dihedral(m_we(a, b), DihedralOp::transpose_diag),
                     m_sn(dihedral(a, DihedralOp::transpose_diag),
                          dihedral(b, DihedralOp::transpose_diag))) < 1e-14);
}

TEST_CASE("degenerate dihedral actions reverse or swap the sequence") {
  StateSpaces sp{2, 2};
  GuillotineTensor h(sp, Shape{2, 0}, {1.0, 2.0, 3.0, 4.0});
  GuillotineTensor hr = dihedral(h, DihedralOp::flip_h);
  CHECK(hr[encode_digits({0, 1}, 2)] == h[encode_digits({1, 0}, 2)]);
  CHECK(max_abs_diff(dihedral(h, DihedralOp::flip_v), h) == 0.0);
  GuillotineTensor ht = dihedral(h, DihedralOp::transpose_diag);
  CHECK(ht.shape() == Shape{0, 2});
  CHECK(max_abs_diff(GuillotineTensor(sp, Shape{0, 2}, h.data()), ht) == 0.0);
}

TEST_CASE("shape and size validation") {
  StateSpaces sp{2, 2};
  CHECK_THROWS_AS(GuillotineTensor(sp, Shape{1, 1}, {1.0, 2.0}),
                  std::invalid_argument);
  GuillotineTensor a(sp, Shape{1, 1}, std::vector<double>(16, 1.0));
  GuillotineTensor b({3, 2}, Shape{1, 1}, std::vector<double>(36, 1.0));
  CHECK_THROWS_AS(m_we(a, b), std::invalid_argument);
  CHECK_THROWS_AS(dihedral(GuillotineTensor({2, 3}, Shape{1, 1},
                                            std::vector<double>(36, 1.0)),
                           DihedralOp::transpose_diag),
                  std::invalid_argument);
}

TEST_CASE("surface_power refuses to exceed the memory cap") {
  StateSpaces sp{4, 4};
  GuillotineTensor w(sp, Shape{1, 1}, std::vector<double>(256, 1.0));
  CHECK_THROWS_AS(surface_power(w, 12, 12, 1 << 20), std::length_error);
}
