#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "guill/markov.hpp"
#include "guill/rope.hpp"

using namespace guill;

namespace {

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

RopeRep random_rep(StateSpaces sp, int dS, int dN, int dW, int dE,
                   std::mt19937_64& rng) {
  RopeRep rep;
  rep.spaces = sp;
  for (int x = 0; x < sp.s1; ++x) {
    rep.A_S.push_back(random_matrix(dS, dS, rng));
    rep.A_N.push_back(random_matrix(dN, dN, rng));
  }
  for (int v = 0; v < sp.s2; ++v) {
    rep.A_W.push_back(random_matrix(dW, dW, rng));
    rep.A_E.push_back(random_matrix(dE, dE, rng));
  }
  rep.U_WS = random_matrix(dW, dS, rng);
  rep.U_SE = random_matrix(dS, dE, rng);
  rep.U_EN = random_matrix(dE, dN, rng);
  rep.U_NW = random_matrix(dN, dW, rng);
  rep.validate();
  return rep;
}

FaceWeight random_face(StateSpaces sp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> data(GuillotineTensor::expected_size(sp, Shape{1, 1}));
  for (double& v : data) v = u(rng);
  return FaceWeight(GuillotineTensor(sp, Shape{1, 1}, data));
}

double max_abs_diff(const GuillotineTensor& a, const GuillotineTensor& b) {
  REQUIRE(a.size() == b.size());
  REQUIRE(a.shape() == b.shape());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_abs(const GuillotineTensor& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i]));
  return worst;
}

}  // namespace

TEST_CASE("factorized environments multiply the per-edge values") {
  StateSpaces sp{2, 3};
  std::vector<double> uS{1.0, 2.0}, uN{0.5, 3.0}, uW{1.5, 0.25, 2.0},
      uE{2.0, 1.0, 0.5};
  RopeRep rep = from_factorized(sp, uS, uN, uW, uE);
  std::vector<int> x{0, 1, 1}, y{1, 0, 1}, w{2, 0}, z{1, 2};
  double want = uS[0] * uS[1] * uS[1] * uN[1] * uN[0] * uN[1] * uW[2] * uW[0] *
                uE[1] * uE[2];
  CHECK(eval(rep, x, y, w, z) == doctest::Approx(want).epsilon(1e-14));
  // Degenerate evaluations multiply along the segment only.
  CHECK(eval(rep, {1, 0}, {1, 0}, {}, {}) ==
        doctest::Approx(uS[1] * uS[0] * uN[1] * uN[0]));
  CHECK(eval(rep, {}, {}, {2, 1}, {2, 1}) ==
        doctest::Approx(uW[2] * uW[1] * uE[2] * uE[1]));
}

TEST_CASE("eval_tensor tabulates eval entrywise") {
  std::mt19937_64 rng(71);
  StateSpaces sp{2, 2};
  RopeRep rep = random_rep(sp, 2, 1, 2, 2, rng);
  GuillotineTensor t = eval_tensor(rep, 2, 1);
  std::vector<int> x, y, w, z;
  for (std::size_t xi = 0; xi < t.nx(); ++xi)
    for (std::size_t yi = 0; yi < t.nx(); ++yi)
      for (std::size_t wi = 0; wi < t.nw(); ++wi)
        for (std::size_t zi = 0; zi < t.nw(); ++zi) {
          decode_digits(xi, sp.s1, 2, x);
          decode_digits(yi, sp.s1, 2, y);
          decode_digits(wi, sp.s2, 1, w);
          decode_digits(zi, sp.s2, 1, z);
          CHECK(t.at(xi, yi, wi, zi) ==
                doctest::Approx(eval(rep, x, y, w, z)).epsilon(1e-13));
        }
}

TEST_CASE("hidden Markov boundary weight matches cycle enumeration") {
  // Oracle: sum over hidden states at the 2(p+q) boundary vertices of the
  // product of per-step transition*emission weights around the cycle.
  StateSpaces sp{2, 2};
  const int m = 2, p = 2, q = 1;
  std::mt19937_64 rng(73);
  auto side = [&](int s) {
    HiddenMarkovSide h;
    h.T = random_matrix(m, m, rng);
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
    for (int x = 0; x < s; ++x) h.nu.push_back(random_matrix(m, m, rng));
    for (const auto& n : h.nu) total += n;
    for (auto& n : h.nu) n = n.cwiseQuotient(total);  // emissions sum to 1
    return h;
  };
  HiddenMarkovSide S = side(sp.s1), N = side(sp.s1), W = side(sp.s2),
                   E = side(sp.s2);
  RopeRep rep = from_hidden_markov(sp, m, S, N, W, E);

  auto oracle = [&](const std::vector<int>& x, const std::vector<int>& y,
                    const std::vector<int>& w, const std::vector<int>& z) {
    // Hidden vertices counter-clockwise from the SW corner: p steps along the
    // South side, q up the East side, p back along the North side, q down the
    // West side; 2(p+q) vertices in total.
    const int n = 2 * (p + q);
    double total = 0.0;
    std::vector<int> h(static_cast<std::size_t>(n), 0);
    while (true) {
      double prod = 1.0;
      auto step = [&](int a, int b, const HiddenMarkovSide& s, int obs) {
        prod *= s.T(h[static_cast<std::size_t>(a)], h[static_cast<std::size_t>(b)]) *
                s.nu[static_cast<std::size_t>(obs)](
                    h[static_cast<std::size_t>(a)], h[static_cast<std::size_t>(b)]);
      };
      for (int i = 0; i < p; ++i) step(i, i + 1, S, x[static_cast<std::size_t>(i)]);
      for (int j = 0; j < q; ++j)
        step(p + j, p + j + 1, E, z[static_cast<std::size_t>(j)]);
      // North traversed right-to-left: chain edge i is (i+1 -> i) in the
      // left-to-right orientation of the given transition matrix.
      for (int i = 0; i < p; ++i) {
        int a = p + q + i, b = p + q + i + 1;  // right to left along N
        int obs = y[static_cast<std::size_t>(p - 1 - i)];
        prod *= N.T(h[static_cast<std::size_t>(b % n)], h[static_cast<std::size_t>(a)]) *
                N.nu[static_cast<std::size_t>(obs)](
                    h[static_cast<std::size_t>(b % n)], h[static_cast<std::size_t>(a)]);
      }
      for (int j = 0; j < q; ++j) {
        int a = 2 * p + q + j, b = (2 * p + q + j + 1) % n;  // top to bottom along W
        int obs = w[static_cast<std::size_t>(q - 1 - j)];
        prod *= W.T(h[static_cast<std::size_t>(b)], h[static_cast<std::size_t>(a)]) *
                W.nu[static_cast<std::size_t>(obs)](
                    h[static_cast<std::size_t>(b)], h[static_cast<std::size_t>(a)]);
      }
      total += prod;
      int k = n - 1;
      while (k >= 0 && h[static_cast<std::size_t>(k)] == m - 1) {
        h[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
      h[static_cast<std::size_t>(k)]++;
    }
    return total;
  };

  std::vector<int> x, y, w, z;
  GuillotineTensor t = eval_tensor(rep, p, q);
  for (std::size_t xi = 0; xi < t.nx(); ++xi)
    for (std::size_t yi = 0; yi < t.nx(); ++yi)
      for (std::size_t wi = 0; wi < t.nw(); ++wi)
        for (std::size_t zi = 0; zi < t.nw(); ++zi) {
          decode_digits(xi, sp.s1, p, x);
          decode_digits(yi, sp.s1, p, y);
          decode_digits(wi, sp.s2, q, w);
          decode_digits(zi, sp.s2, q, z);
          CHECK(t.at(xi, yi, wi, zi) ==
                doctest::Approx(oracle(x, y, w, z)).epsilon(1e-11));
        }
}

TEST_CASE("one hidden state reduces to a factorized environment") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(79);
  auto side = [&](int s, std::vector<double>& emit) {
    HiddenMarkovSide h;
    h.T = Eigen::MatrixXd::Constant(1, 1, 1.0);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    emit.clear();
    double tot = 0.0;
    for (int x = 0; x < s; ++x) emit.push_back(u(rng));
    for (double v : emit) tot += v;
    for (double& v : emit) v /= tot;
    for (double v : emit) h.nu.push_back(Eigen::MatrixXd::Constant(1, 1, v));
    return h;
  };
  std::vector<double> eS, eN, eW, eE;
  RopeRep hm = from_hidden_markov(sp, 1, side(2, eS), side(2, eN), side(2, eW),
                                  side(2, eE));
  RopeRep fac = from_factorized(sp, eS, eN, eW, eE);
  CHECK(max_abs_diff(eval_tensor(hm, 2, 2), eval_tensor(fac, 2, 2)) < 1e-14);
}

TEST_CASE("tensor products multiply and direct sums add boundary weights") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(83);
  RopeRep r1 = random_rep(sp, 2, 2, 1, 2, rng);
  RopeRep r2 = random_rep(sp, 1, 2, 2, 1, rng);
  GuillotineTensor t1 = eval_tensor(r1, 2, 2);
  GuillotineTensor t2 = eval_tensor(r2, 2, 2);

  GuillotineTensor tp = eval_tensor(tensor_product(r1, r2), 2, 2);
  GuillotineTensor ds = eval_tensor(direct_sum({r1, r2}), 2, 2);
  double scale = std::max(max_abs(t1), max_abs(t2));
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(std::abs(tp[i] - t1[i] * t2[i]) < 1e-12 * scale * scale);
    CHECK(std::abs(ds[i] - (t1[i] + t2[i])) < 1e-12 * scale);
  }
}

TEST_CASE("restriction with zero margins is the identity") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(89);
  RopeRep rep = random_rep(sp, 2, 1, 2, 1, rng);
  FaceWeight w = random_face(sp, rng);
  RopeRep same = restrict_rep(w, rep, Offsets{0, 0, 0, 0});
  CHECK(max_abs_diff(eval_tensor(same, 2, 2), eval_tensor(rep, 2, 2)) < 1e-12);
}

TEST_CASE("restriction realizes the marginal boundary weight") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(97);
  for (Offsets off : {Offsets{1, 0, 1, 0}, Offsets{0, 1, 0, 1},
                      Offsets{1, 1, 0, 0}, Offsets{0, 0, 1, 1}}) {
    RopeRep rep = random_rep(sp, 2, 2, 2, 2, rng);
    FaceWeight w = random_face(sp, rng);
    const int P = 3, Q = 3;
    int pi = P - off.n1 - off.n2, qi = Q - off.m1 - off.m2;
    GuillotineTensor want =
        marginal_boundary_weight(w, eval_tensor(rep, P, Q), off);
    RopeRep res = restrict_rep(w, rep, off);
    GuillotineTensor got = eval_tensor(res, pi, qi);
    CHECK(max_abs_diff(got, want) < 1e-10 * std::max(1.0, max_abs(want)));
  }
}

TEST_CASE("two single-margin restrictions compose into one double margin") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(101);
  RopeRep rep = random_rep(sp, 1, 2, 2, 1, rng);
  FaceWeight w = random_face(sp, rng);
  RopeRep once = restrict_rep(w, rep, Offsets{1, 1, 0, 0});
  RopeRep twice =
      restrict_rep(w, restrict_rep(w, rep, Offsets{1, 0, 0, 0}),
                   Offsets{0, 1, 0, 0});
  GuillotineTensor a = eval_tensor(once, 2, 2);
  GuillotineTensor b = eval_tensor(twice, 2, 2);
  CHECK(max_abs_diff(a, b) < 1e-10 * std::max(1.0, max_abs(a)));
}

TEST_CASE("environment validation catches dimension mismatches") {
  StateSpaces sp{2, 2};
  std::mt19937_64 rng(103);
  RopeRep rep = random_rep(sp, 2, 2, 2, 2, rng);
  rep.A_S[0] = random_matrix(3, 3, rng);
  CHECK_THROWS_AS(rep.validate(), std::invalid_argument);
}
