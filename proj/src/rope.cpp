#include "guill/rope.hpp"

#include <optional>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace guill {

void RopeRep::validate() const {
  if (spaces.s1 < 1 || spaces.s2 < 1) {
    throw std::invalid_argument("rope rep: invalid state spaces");
  }
  if (static_cast<int>(A_S.size()) != spaces.s1 ||
      static_cast<int>(A_N.size()) != spaces.s1 ||
      static_cast<int>(A_W.size()) != spaces.s2 ||
      static_cast<int>(A_E.size()) != spaces.s2) {
    throw std::invalid_argument("rope rep: side family sizes must match the state sets");
  }
  const int ds = dS(), dn = dN(), dw = dW(), de = dE();
  if (U_WS.cols() != ds || U_SE.rows() != ds || U_SE.cols() != de ||
      U_EN.rows() != de || U_EN.cols() != dn || U_NW.rows() != dn ||
      U_NW.cols() != dw || U_WS.rows() != dw) {
    throw std::invalid_argument("rope rep: corner matrix shapes are inconsistent");
  }
  auto check_family = [](const std::vector<Eigen::MatrixXd>& fam, int d,
                         const char* name) {
    for (const auto& m : fam) {
      if (m.rows() != d || m.cols() != d) {
        throw std::invalid_argument(std::string("rope rep: ") + name +
                                    " operators must be square of the side dimension");
      }
    }
  };
  check_family(A_S, ds, "South");
  check_family(A_N, dn, "North");
  check_family(A_W, dw, "West");
  check_family(A_E, de, "East");
}

namespace {

Eigen::MatrixXd chain(const std::vector<Eigen::MatrixXd>& A,
                      const std::vector<int>& seq, bool reverse, int d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  if (reverse) {
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
      m = m * A[static_cast<std::size_t>(*it)];
  } else {
    for (int s : seq) m = m * A[static_cast<std::size_t>(s)];
  }
  return m;
}

}  // namespace

double eval(const RopeRep& rep, const std::vector<int>& x,
            const std::vector<int>& y, const std::vector<int>& w,
            const std::vector<int>& z) {
  const bool degen_q = w.empty() && z.empty();
  const bool degen_p = x.empty() && y.empty();
  if (!degen_q && !degen_p) {
    if (x.size() != y.size() || w.size() != z.size()) {
      throw std::invalid_argument("eval: opposite sides must have equal length");
    }
  }
  const std::vector<int>& xs = x;
  const std::vector<int>& ys = degen_q ? x : y;  // diagonal sector
  const std::vector<int>& ws = w;
  const std::vector<int>& zs = degen_p ? w : z;
  if (degen_q && !y.empty() && y != x) {
    throw std::invalid_argument("eval: degenerate horizontal segment requires y == x");
  }
  if (degen_p && !z.empty() && z != w) {
    throw std::invalid_argument("eval: degenerate vertical segment requires z == w");
  }
  Eigen::MatrixXd m = rep.U_WS;                         // dW x dS
  m = m * chain(rep.A_S, xs, false, rep.dS());          // south, left to right
  m = m * rep.U_SE;                                     // -> dW x dE
  m = m * chain(rep.A_E, zs, false, rep.dE());          // east, bottom to top
  m = m * rep.U_EN;                                     // -> dW x dN
  m = m * chain(rep.A_N, ys, true, rep.dN());           // north, right to left
  m = m * rep.U_NW;                                     // -> dW x dW
  m = m * chain(rep.A_W, ws, true, rep.dW());           // west, top to bottom
  return m.trace();
}

GuillotineTensor eval_tensor(const RopeRep& rep, int p, int q,
                             std::size_t memory_cap) {
  std::size_t want = GuillotineTensor::expected_size(rep.spaces, Shape{p, q});
  if (want > memory_cap) {
    throw std::length_error("eval_tensor: result would need " +
                            std::to_string(want) +
                            " entries, above the memory cap of " +
                            std::to_string(memory_cap));
  }
  return tensor_from_fn(rep.spaces, Shape{p, q},
                        [&](const std::vector<int>& x, const std::vector<int>& y,
                            const std::vector<int>& w, const std::vector<int>& z) {
                          if (q == 0) return eval(rep, x, {}, {}, {});
                          if (p == 0) return eval(rep, {}, {}, w, {});
                          return eval(rep, x, y, w, z);
                        });
}

RopeRep from_factorized(StateSpaces spaces, const std::vector<double>& u_S,
                        const std::vector<double>& u_N,
                        const std::vector<double>& u_W,
                        const std::vector<double>& u_E) {
  if (static_cast<int>(u_S.size()) != spaces.s1 ||
      static_cast<int>(u_N.size()) != spaces.s1 ||
      static_cast<int>(u_W.size()) != spaces.s2 ||
      static_cast<int>(u_E.size()) != spaces.s2) {
    throw std::invalid_argument("factorized side tables must match the state sets");
  }
  RopeRep r;
  r.spaces = spaces;
  auto scalars = [](const std::vector<double>& u) {
    std::vector<Eigen::MatrixXd> fam;
    for (double v : u) {
      Eigen::MatrixXd m(1, 1);
      m(0, 0) = v;
      fam.push_back(m);
    }
    return fam;
  };
  r.A_S = scalars(u_S);
  r.A_N = scalars(u_N);
  r.A_W = scalars(u_W);
  r.A_E = scalars(u_E);
  r.U_WS = r.U_SE = r.U_EN = r.U_NW = Eigen::MatrixXd::Ones(1, 1);
  r.validate();
  return r;
}

RopeRep from_hidden_markov(StateSpaces spaces, int m,
                           const HiddenMarkovSide& south,
                           const HiddenMarkovSide& north,
                           const HiddenMarkovSide& west,
                           const HiddenMarkovSide& east) {
  auto check_side = [&](const HiddenMarkovSide& side, int card, const char* name) {
    if (side.T.rows() != m || side.T.cols() != m || (side.T.array() < 0).any()) {
      throw std::invalid_argument(std::string(name) +
                                  ": hidden transition matrix must be m x m nonnegative");
    }
    if (static_cast<int>(side.nu.size()) != card) {
      throw std::invalid_argument(std::string(name) +
                                  ": emission family size must match the edge state set");
    }
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
    for (const auto& nu : side.nu) {
      if (nu.rows() != m || nu.cols() != m || (nu.array() < 0).any()) {
        throw std::invalid_argument(std::string(name) + ": invalid emission table");
      }
      total += nu;
    }
    if ((total.array() - 1.0).abs().maxCoeff() > 1e-12) {
      throw std::invalid_argument(std::string(name) +
                                  ": emission laws must sum to 1 over the edge states");
    }
  };
  check_side(south, spaces.s1, "south");
  check_side(north, spaces.s1, "north");
  check_side(west, spaces.s2, "west");
  check_side(east, spaces.s2, "east");
  RopeRep r;
  r.spaces = spaces;
  for (int x = 0; x < spaces.s1; ++x) {
    r.A_S.push_back(south.nu[static_cast<std::size_t>(x)].cwiseProduct(south.T));
    r.A_N.push_back(
        north.nu[static_cast<std::size_t>(x)].cwiseProduct(north.T).transpose());
  }
  for (int v = 0; v < spaces.s2; ++v) {
    r.A_W.push_back(
        west.nu[static_cast<std::size_t>(v)].cwiseProduct(west.T).transpose());
    r.A_E.push_back(east.nu[static_cast<std::size_t>(v)].cwiseProduct(east.T));
  }
  r.U_WS = r.U_SE = r.U_EN = r.U_NW = Eigen::MatrixXd::Identity(m, m);
  r.validate();
  return r;
}

RopeRep tensor_product(const RopeRep& r1, const RopeRep& r2) {
  if (r1.spaces != r2.spaces) {
    throw std::invalid_argument("tensor_product: state spaces differ");
  }
  RopeRep r;
  r.spaces = r1.spaces;
  auto kron_family = [](const std::vector<Eigen::MatrixXd>& a,
                        const std::vector<Eigen::MatrixXd>& b) {
    std::vector<Eigen::MatrixXd> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.push_back(Eigen::kroneckerProduct(a[i], b[i]).eval());
    }
    return out;
  };
  r.A_S = kron_family(r1.A_S, r2.A_S);
  r.A_N = kron_family(r1.A_N, r2.A_N);
  r.A_W = kron_family(r1.A_W, r2.A_W);
  r.A_E = kron_family(r1.A_E, r2.A_E);
  r.U_WS = Eigen::kroneckerProduct(r1.U_WS, r2.U_WS).eval();
  r.U_SE = Eigen::kroneckerProduct(r1.U_SE, r2.U_SE).eval();
  r.U_EN = Eigen::kroneckerProduct(r1.U_EN, r2.U_EN).eval();
  r.U_NW = Eigen::kroneckerProduct(r1.U_NW, r2.U_NW).eval();
  r.validate();
  return r;
}

RopeRep direct_sum(const std::vector<RopeRep>& reps) {
  if (reps.empty()) throw std::invalid_argument("direct_sum: empty summand list");
  for (const auto& r : reps) {
    if (r.spaces != reps[0].spaces) {
      throw std::invalid_argument("direct_sum: state spaces differ");
    }
  }
  auto block_diag = [](const std::vector<Eigen::MatrixXd>& blocks) {
    int rows = 0, cols = 0;
    for (const auto& b : blocks) {
      rows += static_cast<int>(b.rows());
      cols += static_cast<int>(b.cols());
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    int r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
      m.block(r0, c0, b.rows(), b.cols()) = b;
      r0 += static_cast<int>(b.rows());
      c0 += static_cast<int>(b.cols());
    }
    return m;
  };
  RopeRep r;
  r.spaces = reps[0].spaces;
  auto gather_side = [&](auto member, int card) {
    std::vector<Eigen::MatrixXd> fam;
    for (int s = 0; s < card; ++s) {
      std::vector<Eigen::MatrixXd> blocks;
      for (const auto& rep : reps)
        blocks.push_back((rep.*member)[static_cast<std::size_t>(s)]);
      fam.push_back(block_diag(blocks));
    }
    return fam;
  };
  r.A_S = gather_side(&RopeRep::A_S, r.spaces.s1);
  r.A_N = gather_side(&RopeRep::A_N, r.spaces.s1);
  r.A_W = gather_side(&RopeRep::A_W, r.spaces.s2);
  r.A_E = gather_side(&RopeRep::A_E, r.spaces.s2);
  auto gather_corner = [&](auto member) {
    std::vector<Eigen::MatrixXd> blocks;
    for (const auto& rep : reps) blocks.push_back(rep.*member);
    return block_diag(blocks);
  };
  r.U_WS = gather_corner(&RopeRep::U_WS);
  r.U_SE = gather_corner(&RopeRep::U_SE);
  r.U_EN = gather_corner(&RopeRep::U_EN);
  r.U_NW = gather_corner(&RopeRep::U_NW);
  r.validate();
  return r;
}

namespace {

// Value accessor for strip/corner partition tensors allowing zero extent:
// a zero-width or zero-height block contributes the identity (diagonal) on
// its remaining pair of sides.
double block_value(const std::optional<GuillotineTensor>& Z, int n, int m,
                   std::size_t xr, std::size_t yr, std::size_t wc,
                   std::size_t zc) {
  if (n == 0 && m == 0) return 1.0;
  if (n == 0) return wc == zc ? 1.0 : 0.0;
  if (m == 0) return xr == yr ? 1.0 : 0.0;
  return Z->at(xr, yr, wc, zc);
}

}  // namespace

RopeRep restrict_rep(const FaceWeight& w, const RopeRep& rep, Offsets off,
                     std::size_t memory_cap) {
  rep.validate();
  if (rep.spaces != w.spaces()) {
    throw std::invalid_argument("restrict: rep and face weight state spaces differ");
  }
  if (off.n1 < 0 || off.n2 < 0 || off.m1 < 0 || off.m2 < 0) {
    throw std::invalid_argument("restrict: offsets must be >= 0");
  }
  if (off.n1 == 0 && off.n2 == 0 && off.m1 == 0 && off.m2 == 0) return rep;
  const StateSpaces sp = rep.spaces;
  const int n1 = off.n1, n2 = off.n2, m1 = off.m1, m2 = off.m2;
  const std::size_t cs = ipow(std::size_t(sp.s2), m1);  // south strip columns
  const std::size_t cn = ipow(std::size_t(sp.s2), m2);
  const std::size_t rw = ipow(std::size_t(sp.s1), n1);  // west strip rows
  const std::size_t re = ipow(std::size_t(sp.s1), n2);
  const int dS = rep.dS(), dN = rep.dN(), dW = rep.dW(), dE = rep.dE();
  const std::size_t dSp = cs * static_cast<std::size_t>(dS);
  const std::size_t dNp = cn * static_cast<std::size_t>(dN);
  const std::size_t dWp = rw * static_cast<std::size_t>(dW);
  const std::size_t dEp = re * static_cast<std::size_t>(dE);
  for (std::size_t d : {dSp, dNp, dWp, dEp}) {
    if (d * d > memory_cap) {
      throw std::length_error("restrict: enlarged side dimension " +
                              std::to_string(d) + " exceeds the memory cap");
    }
  }

  auto strip = [&](int p, int q) -> std::optional<GuillotineTensor> {
    if (p == 0 || q == 0) return std::nullopt;
    return partition_tensor(w, p, q, memory_cap);
  };
  const auto Zs = strip(1, m1), Zn = strip(1, m2);
  const auto Zw = strip(n1, 1), Ze = strip(n2, 1);
  const auto Zws = strip(n1, m1), Zse = strip(n2, m1);
  const auto Zen = strip(n2, m2), Znw = strip(n1, m2);

  auto prods = [&](const std::vector<Eigen::MatrixXd>& A, int base, int len,
                   bool reverse) {
    std::size_t n = ipow(std::size_t(base), len);
    std::vector<Eigen::MatrixXd> out(n);
    std::vector<int> digits;
    for (std::size_t i = 0; i < n; ++i) {
      decode_digits(i, base, len, digits);
      out[i] = chain(A, digits, reverse, static_cast<int>(A[0].rows()));
    }
    return out;
  };
  // South/North strip rows run left to right; West/East columns bottom to top.
  const auto prodS1 = prods(rep.A_S, sp.s1, n1, false);   // for the SW block
  const auto prodS2 = prods(rep.A_S, sp.s1, n2, false);   // for the SE block
  const auto prodN1 = prods(rep.A_N, sp.s1, n1, true);    // NW block
  const auto prodN2 = prods(rep.A_N, sp.s1, n2, true);    // EN block
  const auto prodW1 = prods(rep.A_W, sp.s2, m1, true);    // SW block
  const auto prodW2 = prods(rep.A_W, sp.s2, m2, true);    // NW block
  const auto prodE1 = prods(rep.A_E, sp.s2, m1, false);   // SE block
  const auto prodE2 = prods(rep.A_E, sp.s2, m2, false);   // EN block

  RopeRep out;
  out.spaces = sp;

  // Enlarged side operators: one transverse strip of faces is absorbed into
  // each side operator.
  for (int x = 0; x < sp.s1; ++x) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dSp, dSp);
    for (std::size_t wc = 0; wc < cs; ++wc)
      for (std::size_t zc = 0; zc < cs; ++zc) {
        for (int u = 0; u < sp.s1; ++u) {
          double c = block_value(Zs, 1, m1, std::size_t(u), std::size_t(x), wc, zc);
          if (m1 == 0) c = (u == x) ? 1.0 : 0.0;
          if (c != 0.0)
            B.block(wc * dS, zc * dS, dS, dS) +=
                c * rep.A_S[static_cast<std::size_t>(u)];
        }
      }
    out.A_S.push_back(B);
  }
  for (int y = 0; y < sp.s1; ++y) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dNp, dNp);
    for (std::size_t wc = 0; wc < cn; ++wc)
      for (std::size_t zc = 0; zc < cn; ++zc) {
        for (int v = 0; v < sp.s1; ++v) {
          double c = block_value(Zn, 1, m2, std::size_t(y), std::size_t(v), wc, zc);
          if (m2 == 0) c = (v == y) ? 1.0 : 0.0;
          if (c != 0.0)
            B.block(zc * dN, wc * dN, dN, dN) +=
                c * rep.A_N[static_cast<std::size_t>(v)];
        }
      }
    out.A_N.push_back(B);
  }
  for (int wv = 0; wv < sp.s2; ++wv) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dWp, dWp);
    for (std::size_t yr = 0; yr < rw; ++yr)
      for (std::size_t xr = 0; xr < rw; ++xr) {
        for (int u = 0; u < sp.s2; ++u) {
          double c = block_value(Zw, n1, 1, xr, yr, std::size_t(u), std::size_t(wv));
          if (n1 == 0) c = (u == wv) ? 1.0 : 0.0;
          if (c != 0.0)
            B.block(yr * dW, xr * dW, dW, dW) +=
                c * rep.A_W[static_cast<std::size_t>(u)];
        }
      }
    out.A_W.push_back(B);
  }
  for (int zv = 0; zv < sp.s2; ++zv) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dEp, dEp);
    for (std::size_t xr = 0; xr < re; ++xr)
      for (std::size_t yr = 0; yr < re; ++yr) {
        for (int u = 0; u < sp.s2; ++u) {
          double c = block_value(Ze, n2, 1, xr, yr, std::size_t(zv), std::size_t(u));
          if (n2 == 0) c = (u == zv) ? 1.0 : 0.0;
          if (c != 0.0)
            B.block(xr * dE, yr * dE, dE, dE) +=
                c * rep.A_E[static_cast<std::size_t>(u)];
        }
      }
    out.A_E.push_back(B);
  }

  // Corner blocks: the n_i x m_j rectangle of faces in each corner of the
  // annulus is contracted against the original side operators and corner.
  out.U_WS = Eigen::MatrixXd::Zero(dWp, dSp);
  for (std::size_t yr = 0; yr < rw; ++yr)
    for (std::size_t zc = 0; zc < cs; ++zc) {
      Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(dW, dS);
      for (std::size_t u = 0; u < rw; ++u)
        for (std::size_t v = 0; v < cs; ++v) {
          double c = block_value(Zws, n1, m1, u, yr, v, zc);
          if (c != 0.0) blk += c * prodW1[v] * rep.U_WS * prodS1[u];
        }
      out.U_WS.block(yr * dW, zc * dS, dW, dS) = blk;
    }
  out.U_SE = Eigen::MatrixXd::Zero(dSp, dEp);
  for (std::size_t wc = 0; wc < cs; ++wc)
    for (std::size_t xr = 0; xr < re; ++xr) {
      Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(dS, dE);
      for (std::size_t u = 0; u < re; ++u)
        for (std::size_t v = 0; v < cs; ++v) {
          double c = block_value(Zse, n2, m1, u, xr, wc, v);
          if (c != 0.0) blk += c * prodS2[u] * rep.U_SE * prodE1[v];
        }
      out.U_SE.block(wc * dS, xr * dE, dS, dE) = blk;
    }
  out.U_EN = Eigen::MatrixXd::Zero(dEp, dNp);
  for (std::size_t xr = 0; xr < re; ++xr)
    for (std::size_t wc = 0; wc < cn; ++wc) {
      Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(dE, dN);
      for (std::size_t u = 0; u < re; ++u)
        for (std::size_t v = 0; v < cn; ++v) {
          double c = block_value(Zen, n2, m2, xr, u, wc, v);
          if (c != 0.0) blk += c * prodE2[v] * rep.U_EN * prodN2[u];
        }
      out.U_EN.block(xr * dE, wc * dN, dE, dN) = blk;
    }
  out.U_NW = Eigen::MatrixXd::Zero(dNp, dWp);
  for (std::size_t zc = 0; zc < cn; ++zc)
    for (std::size_t xr = 0; xr < rw; ++xr) {
      Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(dN, dW);
      for (std::size_t u = 0; u < rw; ++u)
        for (std::size_t v = 0; v < cn; ++v) {
          double c = block_value(Znw, n1, m2, xr, u, v, zc);
          if (c != 0.0) blk += c * prodN1[u] * rep.U_NW * prodW2[v];
        }
      out.U_NW.block(zc * dN, xr * dW, dN, dW) = blk;
    }
  out.validate();
  return out;
}

}  // namespace guill
