#include "guill/gibbs.hpp"

#include <cmath>
#include <stdexcept>

namespace guill {

BoundaryFamily family_from_rep(const RopeRep& rep) {
  RopeRep r = rep;
  return BoundaryFamily{[r](int p, int q) { return eval_tensor(r, p, q); }};
}

BoundaryFamily uniform_family(StateSpaces sp) {
  return BoundaryFamily{[sp](int p, int q) {
    return GuillotineTensor(
        sp, Shape{p, q},
        std::vector<double>(GuillotineTensor::expected_size(sp, Shape{p, q}),
                            1.0));
  }};
}

double check_consistency(const FaceWeight& w, const BoundaryFamily& fam,
                         int outer_p, int outer_q, Offsets off) {
  if (off.n1 < 0 || off.n2 < 0 || off.m1 < 0 || off.m2 < 0) {
    throw std::invalid_argument("offsets must be >= 0");
  }
  const int pi = outer_p - off.n1 - off.n2;
  const int qi = outer_q - off.m1 - off.m2;
  if (pi < 1 || qi < 1) {
    throw std::invalid_argument("offsets leave no inner rectangle");
  }
  EdgeLayout outer{outer_p, outer_q, w.spaces()};
  EdgeLayout inner{pi, qi, w.spaces()};
  if (outer.total() > kEnumerationEdgeBound) {
    throw std::length_error("outer rectangle exceeds the enumeration bound");
  }
  GuillotineTensor g_outer = fam.gen(outer_p, outer_q);

  // Outer edge id carrying each inner edge, in the inner canonical order.
  std::vector<int> carrier(static_cast<std::size_t>(inner.total()));
  for (int r = 0; r <= qi; ++r)
    for (int i = 0; i < pi; ++i)
      carrier[static_cast<std::size_t>(inner.h_edge(r, i))] =
          outer.h_edge(r + off.m1, i + off.n1);
  for (int c = 0; c <= pi; ++c)
    for (int j = 0; j < qi; ++j)
      carrier[static_cast<std::size_t>(inner.v_edge(c, j))] =
          outer.v_edge(c + off.n1, j + off.m1);

  std::vector<double> marginal(inner.num_configs(), 0.0);
  std::vector<char> free_edge(static_cast<std::size_t>(outer.total()), 1);
  std::vector<int> digits(static_cast<std::size_t>(outer.total()), 0);
  std::vector<std::pair<int, int>> faces;
  for (int i = 0; i < outer_p; ++i)
    for (int j = 0; j < outer_q; ++j) faces.push_back({i, j});
  double Z = 0.0;
  enumerate_edge_configs(
      w, outer, free_edge, faces, digits,
      [&](const std::vector<int>& d, double prod) {
        double v = prod * g_outer[outer.boundary_index(d)];
        if (v == 0.0) return;
        std::size_t idx = 0;
        for (int e = 0; e < inner.total(); ++e) {
          idx = idx * static_cast<std::size_t>(inner.cardinality(e)) +
                static_cast<std::size_t>(
                    d[static_cast<std::size_t>(carrier[static_cast<std::size_t>(e)])]);
        }
        marginal[idx] += v;
        Z += v;
      });
  if (!(Z > 0.0)) throw std::domain_error("zero partition function on the outer rectangle");
  for (double& v : marginal) v /= Z;

  RectLaw direct = exact_law(w, fam.gen(pi, qi));
  return total_variation(marginal, direct.prob);
}

double partition_closed_form(const EigenStructure& es, int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("shape must be >= 1 in each direction");
  return es.kappa * std::pow(es.lambda, p * q) * std::pow(es.sigma_S, p) *
         std::pow(es.sigma_N, p) * std::pow(es.sigma_W, q) *
         std::pow(es.sigma_E, q);
}

double measure_kappa(const RopeRep& rep, const FaceWeight& w, double lambda,
                     double sigma_S, double sigma_N, double sigma_W,
                     double sigma_E) {
  double z11 = pair_boundary(eval_tensor(rep, 1, 1), partition_tensor(w, 1, 1));
  return z11 / (lambda * sigma_S * sigma_N * sigma_W * sigma_E);
}

std::vector<std::tuple<int, int, double>> free_energy(
    const FaceWeight& w, const BoundaryFamily& fam,
    const std::vector<std::pair<int, int>>& sizes) {
  std::vector<std::tuple<int, int, double>> out;
  for (auto [p, q] : sizes) {
    double z = pair_boundary(fam.gen(p, q), partition_tensor(w, p, q));
    if (!(z > 0.0)) throw std::domain_error("zero partition function");
    out.push_back({p, q, std::log(z) / (double(p) * double(q))});
  }
  return out;
}

CorrelationKernel correlation_kernel(const EigenStructure& es) {
  const RopeRep& rep = es.rep;
  const int dS = rep.dS(), dN = rep.dN();
  const int D = dS * dN;
  CorrelationKernel k;
  // Row-major pairing (a,b) -> a*dN + b of the South and North side spaces;
  // A_SN(x) acting on this pairing reproduces the traced double row.
  k.A_SN.reserve(rep.A_S.size());
  k.C_SN = Eigen::MatrixXd::Zero(D, D);
  for (std::size_t x = 0; x < rep.A_S.size(); ++x) {
    Eigen::MatrixXd m(D, D);
    const Eigen::MatrixXd& As = rep.A_S[x];
    const Eigen::MatrixXd& An = rep.A_N[x];
    for (int a = 0; a < dS; ++a)
      for (int b = 0; b < dN; ++b)
        for (int c = 0; c < dS; ++c)
          for (int e = 0; e < dN; ++e)
            m(a * dN + b, c * dN + e) = As(a, c) * An(e, b);
    k.A_SN.push_back(m);
    k.C_SN += m;
  }
  Eigen::MatrixXd ge = rep.U_SE * rep.U_EN;          // dS x dN
  Eigen::MatrixXd gw = (rep.U_NW * rep.U_WS).transpose();  // dS x dN
  k.u_E.resize(D);
  k.u_W.resize(D);
  for (int a = 0; a < dS; ++a)
    for (int b = 0; b < dN; ++b) {
      k.u_E(a * dN + b) = ge(a, b);
      k.u_W(a * dN + b) = gw(a, b);
    }
  return k;
}

std::vector<double> marginal_segment_law(const EigenStructure& es, int L) {
  if (L < 1) throw std::invalid_argument("segment length must be >= 1");
  const StateSpaces sp = es.rep.spaces;
  std::size_t n = ipow(std::size_t(sp.s1), L);
  if (n > kDefaultMemoryCap) {
    throw std::length_error("segment law table exceeds the memory cap");
  }
  CorrelationKernel k = correlation_kernel(es);
  double norm = es.kappa * std::pow(es.sigma_S, L) * std::pow(es.sigma_N, L);
  std::vector<double> law(n);
  std::vector<int> digits;
  for (std::size_t i = 0; i < n; ++i) {
    decode_digits(i, sp.s1, L, digits);
    Eigen::VectorXd v = k.u_E;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      v = k.A_SN[static_cast<std::size_t>(*it)] * v;
    }
    law[i] = k.u_W.dot(v) / norm;
  }
  return law;
}

double two_point(const EigenStructure& es, int u, int v, int L) {
  if (L < 2) throw std::invalid_argument("two_point requires L >= 2");
  CorrelationKernel k = correlation_kernel(es);
  Eigen::VectorXd rhs = k.A_SN[static_cast<std::size_t>(v)] * k.u_E;
  for (int i = 0; i < L - 2; ++i) rhs = k.C_SN * rhs;
  rhs = k.A_SN[static_cast<std::size_t>(u)] * rhs;
  double norm = es.kappa * std::pow(es.sigma_S, L) * std::pow(es.sigma_N, L);
  return k.u_W.dot(rhs) / norm;
}

CorrelationLength correlation_length(const EigenStructure& es) {
  CorrelationKernel k = correlation_kernel(es);
  CorrelationLength out;
  const int D = static_cast<int>(k.C_SN.rows());
  if (D == 1) {
    out.degenerate = true;
    out.lambda1 = k.C_SN(0, 0);
    return out;
  }
  PfPair top = dominant_eigen(k.C_SN);
  out.lambda1 = top.lambda;
  // Deflated power iteration for the subleading eigenvalue magnitude.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(D);
  for (int i = 0; i < D; ++i) v(i) = 1.0 + 0.5 * std::cos(double(i + 1));
  auto deflate = [&](Eigen::VectorXd& x) {
    x -= top.v_left.dot(x) * top.v_right;
  };
  deflate(v);
  double norm0 = v.norm();
  if (!(norm0 > 1e-14)) {
    out.infinite = false;
    out.lambda2 = 0.0;
    out.value = 0.0;
    return out;
  }
  v /= norm0;
  double mu = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd nv = k.C_SN * v;
    deflate(nv);
    double nn = nv.norm();
    if (!(nn > 1e-300 * out.lambda1)) {
      mu = 0.0;
      break;
    }
    nv /= nn;
    double next = nn;
    if (it > 0 && std::fabs(next - mu) <= 1e-12 * std::fabs(next)) {
      mu = next;
      v = nv;
      break;
    }
    mu = next;
    v = nv;
  }
  out.lambda2 = mu;
  double ratio = mu / out.lambda1;
  if (ratio >= 1.0 - 1e-10) {
    out.infinite = true;
  } else if (ratio <= 0.0) {
    out.value = 0.0;
  } else {
    out.value = -1.0 / std::log(ratio);
  }
  return out;
}

}  // namespace guill
