#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "guill/gibbs.hpp"

using namespace guill;

namespace {

Eigen::MatrixXd random_positive(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace

TEST_CASE("closed-form partition function matches the paired value") {
  std::mt19937_64 rng(139);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  EigenStructure es = build_hv_eigenstructure(A, B);
  FaceWeight w = hv_face_weight(A, B);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      double direct =
          pair_boundary(eval_tensor(es.rep, p, q), partition_tensor(w, p, q));
      CHECK(direct == doctest::Approx(partition_closed_form(es, p, q))
                          .epsilon(1e-9));
    }
  CHECK(measure_kappa(es.rep, w, es.lambda, es.sigma_S, es.sigma_N, es.sigma_W,
                      es.sigma_E) == doctest::Approx(es.kappa).epsilon(1e-10));
}

TEST_CASE("free-energy densities converge to log lambda for sigma = kappa = 1") {
  std::mt19937_64 rng(149);
  Eigen::MatrixXd C = random_positive(2, rng);
  Eigen::MatrixXd D = random_positive(2, rng);
  EigenStructure es = build_oblique_eigenstructure(C, D);
  FaceWeight w = oblique_face_weight(C, D);
  auto fes = free_energy(w, family_from_rep(es.rep), {{1, 1}, {2, 2}, {3, 3}});
  // sigma and kappa are exactly 1, so every density equals log lambda.
  for (auto [p, q, f] : fes) {
    CHECK(f == doctest::Approx(std::log(es.lambda)).epsilon(1e-9));
  }
}

TEST_CASE("eigen-family boundary weights are exactly consistent") {
  std::mt19937_64 rng(151);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  EigenStructure hv = build_hv_eigenstructure(A, B);
  FaceWeight w_hv = hv_face_weight(A, B);
  CHECK(check_consistency(w_hv, family_from_rep(hv.rep), 3, 3,
                          Offsets{1, 0, 1, 0}) < 1e-10);
  CHECK(check_consistency(w_hv, family_from_rep(hv.rep), 3, 2,
                          Offsets{0, 1, 0, 1}) < 1e-10);

  Eigen::MatrixXd C = random_positive(2, rng);
  Eigen::MatrixXd D = random_positive(2, rng);
  EigenStructure ob = build_oblique_eigenstructure(C, D);
  FaceWeight w_ob = oblique_face_weight(C, D);
  CHECK(check_consistency(w_ob, family_from_rep(ob.rep), 3, 3,
                          Offsets{1, 1, 0, 0}) < 1e-10);
}

TEST_CASE("uniform boundary weights are generically inconsistent") {
  std::mt19937_64 rng(157);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  FaceWeight w = hv_face_weight(A, B);
  double tv = check_consistency(w, uniform_family(w.spaces()), 3, 3,
                                Offsets{1, 0, 1, 0});
  CHECK(tv > 1e-4);
}

TEST_CASE("correlation kernel sums to a stochastic-like transfer operator") {
  std::mt19937_64 rng(163);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  EigenStructure es = build_hv_eigenstructure(A, B);
  CorrelationKernel k = correlation_kernel(es);
  // Factorized sides have dS = dN = 1, so the kernel is scalar with
  // C_SN = sum_x u_S(x) u_N(x) = 1 by the eigen normalization.
  REQUIRE(k.C_SN.rows() == 1);
  CHECK(k.C_SN(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("segment laws are probabilities and nest correctly") {
  std::mt19937_64 rng(167);
  Eigen::MatrixXd C = random_positive(2, rng);
  Eigen::MatrixXd D = random_positive(2, rng);
  EigenStructure es = build_oblique_eigenstructure(C, D);

  for (int L = 1; L <= 3; ++L) {
    std::vector<double> law = marginal_segment_law(es, L);
    double sum = 0.0;
    for (double v : law) {
      CHECK(v >= -1e-14);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Summing out the last edge of the (L+1)-law gives the L-law.
  std::vector<double> law3 = marginal_segment_law(es, 3);
  std::vector<double> law2 = marginal_segment_law(es, 2);
  const int s1 = es.rep.spaces.s1;
  for (std::size_t i = 0; i < law2.size(); ++i) {
    double m = 0.0;
    for (int x = 0; x < s1; ++x)
      m += law3[i * static_cast<std::size_t>(s1) + static_cast<std::size_t>(x)];
    CHECK(m == doctest::Approx(law2[i]).epsilon(1e-10));
  }
  // And summing out the first edge as well.
  std::vector<double> law1 = marginal_segment_law(es, 1);
  for (int x = 0; x < s1; ++x) {
    double m = 0.0;
    for (int u = 0; u < s1; ++u)
      m += law2[static_cast<std::size_t>(u * s1 + x)];
    CHECK(m == doctest::Approx(law1[static_cast<std::size_t>(x)]).epsilon(1e-10));
  }
}

TEST_CASE("two-point values aggregate the segment law endpoints") {
  std::mt19937_64 rng(173);
  Eigen::MatrixXd C = random_positive(2, rng);
  Eigen::MatrixXd D = random_positive(2, rng);
  EigenStructure es = build_oblique_eigenstructure(C, D);
  const int L = 3, s1 = 2;
  std::vector<double> law = marginal_segment_law(es, L);
  for (int u = 0; u < s1; ++u)
    for (int v = 0; v < s1; ++v) {
      double want = 0.0;
      std::vector<int> digits;
      for (std::size_t i = 0; i < law.size(); ++i) {
        decode_digits(i, s1, L, digits);
        if (digits.front() == u && digits.back() == v) want += law[i];
      }
      CHECK(two_point(es, u, v, L) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("independent-edge models have exactly factorizing two-point laws") {
  std::mt19937_64 rng(179);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  EigenStructure es = build_hv_eigenstructure(A, B);
  std::vector<double> one = marginal_segment_law(es, 1);
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      CHECK(two_point(es, u, v, 4) ==
            doctest::Approx(one[static_cast<std::size_t>(u)] *
                            one[static_cast<std::size_t>(v)])
                .epsilon(1e-10));
    }
}

TEST_CASE("correlation length degenerates for one-dimensional kernels") {
  std::mt19937_64 rng(181);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  EigenStructure es = build_hv_eigenstructure(A, B);
  CorrelationLength cl = correlation_length(es);
  CHECK(cl.degenerate);
}

TEST_CASE("correlation length matches the known gap of a mixture model") {
  // Direct sum of two factorized eigen families for the same uniform face
  // weight: C_SN is diagonal with entries being the two normalization rates;
  // the decay rate of correlations is their ratio.
  StateSpaces sp{2, 2};
  RopeRep r1 = from_factorized(sp, {0.8, 0.2}, {1.0, 1.0}, {1, 1}, {1, 1});
  RopeRep r2 = from_factorized(sp, {0.3, 0.2}, {0.5, 0.5}, {1, 1}, {1, 1});
  EigenStructure es;
  es.rep = direct_sum({r1, r2});
  CorrelationKernel k = correlation_kernel(es);
  // Pairing the two summed S- and N-sides gives a diagonal 4x4 kernel with
  // entries mu_ab = sum_x uS_a(x) * uN_b(x): here {1.0, 0.5, 0.5, 0.25}.
  REQUIRE(k.C_SN.rows() == 4);
  CorrelationLength cl = correlation_length(es);
  CHECK(cl.lambda1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cl.lambda2 == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(cl.value == doctest::Approx(-1.0 / std::log(0.5)).epsilon(1e-6));
}

TEST_CASE("simplex structure: direct sums average the exact laws") {
  std::mt19937_64 rng(191);
  Eigen::MatrixXd A = random_positive(2, rng);
  Eigen::MatrixXd B = random_positive(2, rng);
  FaceWeight w = hv_face_weight(A, B);
  EigenStructure es = build_hv_eigenstructure(A, B);
  // Mixing the family with a scaled copy of itself: the induced law is an
  // average of the two components' laws, here equal to either component.
  RopeRep scaled = es.rep;
  scaled.U_WS *= 2.0;
  RopeRep mix = direct_sum({es.rep, scaled});
  RectLaw base = exact_law(w, eval_tensor(es.rep, 2, 2));
  RectLaw mixed = exact_law(w, eval_tensor(mix, 2, 2));
  CHECK(total_variation(base.prob, mixed.prob) < 1e-12);
}
