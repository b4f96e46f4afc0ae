#include "guill/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace guill {

FaceWeight::FaceWeight(GuillotineTensor t) : t_(std::move(t)) {
  if (t_.shape() != Shape{1, 1}) {
    throw std::invalid_argument("face weight must have shape (1,1)");
  }
  bool any = false;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] >= 0.0) || !std::isfinite(t_[i])) {
      throw std::invalid_argument("face weight entries must be finite and >= 0");
    }
    if (t_[i] > 0.0) any = true;
  }
  if (!any) throw std::invalid_argument("face weight must not be identically zero");
}

std::size_t EdgeLayout::num_configs() const {
  std::size_t n = 1;
  for (int e = 0; e < total(); ++e) {
    std::size_t c = static_cast<std::size_t>(cardinality(e));
    if (n > std::numeric_limits<std::size_t>::max() / c) {
      return std::numeric_limits<std::size_t>::max();
    }
    n *= c;
  }
  return n;
}

std::size_t EdgeLayout::config_index(const std::vector<int>& digits) const {
  std::size_t idx = 0;
  for (int e = 0; e < total(); ++e) {
    idx = idx * static_cast<std::size_t>(cardinality(e)) +
          static_cast<std::size_t>(digits[static_cast<std::size_t>(e)]);
  }
  return idx;
}

std::size_t EdgeLayout::boundary_index(const std::vector<int>& digits) const {
  std::size_t xi = 0, yi = 0, wi = 0, zi = 0;
  for (int i = 0; i < p; ++i) {
    xi = xi * spaces.s1 + digits[static_cast<std::size_t>(h_edge(0, i))];
    yi = yi * spaces.s1 + digits[static_cast<std::size_t>(h_edge(q, i))];
  }
  for (int j = 0; j < q; ++j) {
    wi = wi * spaces.s2 + digits[static_cast<std::size_t>(v_edge(0, j))];
    zi = zi * spaces.s2 + digits[static_cast<std::size_t>(v_edge(p, j))];
  }
  std::size_t nx = ipow(std::size_t(spaces.s1), p);
  std::size_t nw = ipow(std::size_t(spaces.s2), q);
  return ((xi * nx + yi) * nw + wi) * nw + zi;
}

namespace {

struct SweepPlan {
  std::vector<int> order;  // free edges in ascending id order
  // faces completed once the k-th free edge is assigned (plus slot 0 for
  // faces whose edges are all fixed).
  std::vector<std::vector<std::pair<int, int>>> completed;
};

SweepPlan make_plan(const EdgeLayout& layout, const std::vector<char>& free_edge,
                    const std::vector<std::pair<int, int>>& faces) {
  SweepPlan plan;
  std::vector<int> pos(static_cast<std::size_t>(layout.total()), -1);
  for (int e = 0; e < layout.total(); ++e) {
    if (free_edge[static_cast<std::size_t>(e)]) {
      pos[static_cast<std::size_t>(e)] = static_cast<int>(plan.order.size());
      plan.order.push_back(e);
    }
  }
  plan.completed.assign(plan.order.size() + 1, {});
  for (auto [i, j] : faces) {
    int fe[4];
    layout.face_edges(i, j, fe);
    int last = -1;
    for (int k = 0; k < 4; ++k) {
      int pk = pos[static_cast<std::size_t>(fe[k])];
      last = std::max(last, pk);
    }
    plan.completed[static_cast<std::size_t>(last + 1)].push_back({i, j});
  }
  return plan;
}

void sweep(const FaceWeight& w, const EdgeLayout& layout, const SweepPlan& plan,
           std::size_t depth, double partial, std::vector<int>& digits,
           const std::function<void(const std::vector<int>&, double)>& visit) {
  if (depth == plan.order.size()) {
    visit(digits, partial);
    return;
  }
  int e = plan.order[depth];
  int card = layout.cardinality(e);
  for (int v = 0; v < card; ++v) {
    digits[static_cast<std::size_t>(e)] = v;
    double prod = partial;
    for (auto [i, j] : plan.completed[depth + 1]) {
      int fe[4];
      layout.face_edges(i, j, fe);
      prod *= w(digits[static_cast<std::size_t>(fe[0])],
                digits[static_cast<std::size_t>(fe[1])],
                digits[static_cast<std::size_t>(fe[2])],
                digits[static_cast<std::size_t>(fe[3])]);
      if (prod == 0.0) break;
    }
    if (prod != 0.0 || depth + 1 == plan.order.size()) {
      sweep(w, layout, plan, depth + 1, prod, digits, visit);
    }
  }
}

}  // namespace

void enumerate_edge_configs(
    const FaceWeight& w, const EdgeLayout& layout,
    const std::vector<char>& free_edge,
    const std::vector<std::pair<int, int>>& faces, std::vector<int>& digits,
    const std::function<void(const std::vector<int>&, double)>& visit) {
  SweepPlan plan = make_plan(layout, free_edge, faces);
  double base = 1.0;
  for (auto [i, j] : plan.completed[0]) {
    int fe[4];
    layout.face_edges(i, j, fe);
    base *= w(digits[static_cast<std::size_t>(fe[0])],
              digits[static_cast<std::size_t>(fe[1])],
              digits[static_cast<std::size_t>(fe[2])],
              digits[static_cast<std::size_t>(fe[3])]);
  }
  sweep(w, layout, plan, 0, base, digits, visit);
}

namespace {

EdgeLayout make_layout(const FaceWeight& w, int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("rectangle sizes must be >= 1");
  return EdgeLayout{p, q, w.spaces()};
}

void check_edge_bound(const EdgeLayout& layout, int nedges) {
  if (nedges > kEnumerationEdgeBound) {
    throw std::length_error(
        "enumeration over " + std::to_string(nedges) +
        " edges exceeds the brute-force bound of " +
        std::to_string(kEnumerationEdgeBound) + " (rectangle " +
        std::to_string(layout.p) + "x" + std::to_string(layout.q) + ")");
  }
}

std::vector<std::pair<int, int>> all_faces(int p, int q) {
  std::vector<std::pair<int, int>> faces;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) faces.push_back({i, j});
  return faces;
}

}  // namespace

GuillotineTensor partition_tensor(const FaceWeight& w, int p, int q,
                                  std::size_t memory_cap) {
  return surface_power(w.tensor(), p, q, memory_cap);
}

GuillotineTensor partition_tensor_bruteforce(const FaceWeight& w, int p, int q) {
  EdgeLayout layout = make_layout(w, p, q);
  check_edge_bound(layout, layout.total());
  GuillotineTensor res = GuillotineTensor::zeros(w.spaces(), Shape{p, q});
  std::vector<char> free_edge(static_cast<std::size_t>(layout.total()), 1);
  std::vector<int> digits(static_cast<std::size_t>(layout.total()), 0);
  enumerate_edge_configs(w, layout, free_edge, all_faces(p, q), digits,
                         [&](const std::vector<int>& d, double prod) {
                           res[layout.boundary_index(d)] += prod;
                         });
  return res;
}

RectLaw exact_law(const FaceWeight& w, const GuillotineTensor& g) {
  int p = g.shape().p, q = g.shape().q;
  EdgeLayout layout = make_layout(w, p, q);
  check_edge_bound(layout, layout.total());
  std::size_t n = layout.num_configs();
  if (n > kDefaultMemoryCap) {
    throw std::length_error("exact_law: configuration table of " +
                            std::to_string(n) + " entries exceeds the cap");
  }
  RectLaw law;
  law.shape = g.shape();
  law.spaces = w.spaces();
  law.prob.assign(n, 0.0);
  std::vector<char> free_edge(static_cast<std::size_t>(layout.total()), 1);
  std::vector<int> digits(static_cast<std::size_t>(layout.total()), 0);
  double Z = 0.0;
  enumerate_edge_configs(w, layout, free_edge, all_faces(p, q), digits,
                         [&](const std::vector<int>& d, double prod) {
                           double v = prod * g[layout.boundary_index(d)];
                           law.prob[layout.config_index(d)] = v;
                           Z += v;
                         });
  if (!(Z > 0.0)) throw std::domain_error("exact_law: zero partition function");
  for (double& v : law.prob) {
    v /= Z;
    if (v < 0.0 && v > -1e-15) v = 0.0;
  }
  law.Z = Z;
  return law;
}

GuillotineTensor marginal_boundary_weight(const FaceWeight& w,
                                          const GuillotineTensor& g,
                                          Offsets off) {
  int P = g.shape().p, Q = g.shape().q;
  if (off.n1 < 0 || off.n2 < 0 || off.m1 < 0 || off.m2 < 0) {
    throw std::invalid_argument("offsets must be >= 0");
  }
  int pi = P - off.n1 - off.n2, qi = Q - off.m1 - off.m2;
  if (pi < 1 || qi < 1) {
    throw std::invalid_argument("inner rectangle is degenerate or empty");
  }
  if (pi == P && qi == Q) return g;
  EdgeLayout layout = make_layout(w, P, Q);
  // Sweep every outer edge except the inner rectangle's internal edges.
  std::vector<char> free_edge(static_cast<std::size_t>(layout.total()), 1);
  for (int r = off.m1 + 1; r <= off.m1 + qi - 1; ++r)
    for (int i = off.n1; i < off.n1 + pi; ++i)
      free_edge[static_cast<std::size_t>(layout.h_edge(r, i))] = 0;
  for (int c = off.n1 + 1; c <= off.n1 + pi - 1; ++c)
    for (int j = off.m1; j < off.m1 + qi; ++j)
      free_edge[static_cast<std::size_t>(layout.v_edge(c, j))] = 0;
  int nfree = 0;
  for (char f : free_edge) nfree += f;
  check_edge_bound(layout, nfree);

  std::vector<std::pair<int, int>> annulus_faces;
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < Q; ++j) {
      bool inner = i >= off.n1 && i < off.n1 + pi && j >= off.m1 && j < off.m1 + qi;
      if (!inner) annulus_faces.push_back({i, j});
    }

  GuillotineTensor res = GuillotineTensor::zeros(w.spaces(), Shape{pi, qi});
  StateSpaces sp = w.spaces();
  std::size_t nxi = ipow(std::size_t(sp.s1), pi);
  std::size_t nwi = ipow(std::size_t(sp.s2), qi);
  std::vector<int> digits(static_cast<std::size_t>(layout.total()), 0);
  enumerate_edge_configs(
      w, layout, free_edge, annulus_faces, digits,
      [&](const std::vector<int>& d, double prod) {
        std::size_t xi = 0, yi = 0, wi = 0, zi = 0;
        for (int i = 0; i < pi; ++i) {
          xi = xi * sp.s1 + d[static_cast<std::size_t>(layout.h_edge(off.m1, off.n1 + i))];
          yi = yi * sp.s1 + d[static_cast<std::size_t>(layout.h_edge(off.m1 + qi, off.n1 + i))];
        }
        for (int j = 0; j < qi; ++j) {
          wi = wi * sp.s2 + d[static_cast<std::size_t>(layout.v_edge(off.n1, off.m1 + j))];
          zi = zi * sp.s2 + d[static_cast<std::size_t>(layout.v_edge(off.n1 + pi, off.m1 + j))];
        }
        res[((xi * nxi + yi) * nwi + wi) * nwi + zi] +=
            prod * g[layout.boundary_index(d)];
      });
  return res;
}

namespace {

void validate_observables(const EdgeLayout& layout,
                          const std::vector<EdgeObservable>& obs) {
  std::vector<char> seen(static_cast<std::size_t>(layout.total()), 0);
  for (const auto& o : obs) {
    if (o.edge < 0 || o.edge >= layout.total()) {
      throw std::invalid_argument("observable edge id out of range");
    }
    if (seen[static_cast<std::size_t>(o.edge)]) {
      throw std::invalid_argument("at most one observable per edge");
    }
    seen[static_cast<std::size_t>(o.edge)] = 1;
    if (static_cast<int>(o.h.size()) != layout.cardinality(o.edge)) {
      throw std::invalid_argument("observable table size does not match the edge state set");
    }
  }
}

}  // namespace

double expectation_with_observables(const FaceWeight& w,
                                    const GuillotineTensor& g,
                                    const std::vector<EdgeObservable>& obs) {
  int p = g.shape().p, q = g.shape().q;
  EdgeLayout layout = make_layout(w, p, q);
  validate_observables(layout, obs);
  StateSpaces sp = w.spaces();
  std::vector<const std::vector<double>*> on_edge(
      static_cast<std::size_t>(layout.total()), nullptr);
  for (const auto& o : obs) on_edge[static_cast<std::size_t>(o.edge)] = &o.h;

  auto vdiag = [&](const std::vector<double>& h) {
    return GuillotineTensor(sp, Shape{0, 1}, h);
  };
  // Row strips with vertical-edge observables inserted as degenerate (0,1)
  // diagonal elements between the faces.
  std::vector<GuillotineTensor> rows;
  for (int j = 0; j < q; ++j) {
    std::optional<GuillotineTensor> cur;
    auto glue = [&](const GuillotineTensor& t) {
      cur = cur ? m_we(*cur, t) : t;
    };
    if (const auto* h = on_edge[static_cast<std::size_t>(layout.v_edge(0, j))]) {
      glue(vdiag(*h));
    }
    for (int i = 0; i < p; ++i) {
      glue(w.tensor());
      if (const auto* h = on_edge[static_cast<std::size_t>(layout.v_edge(i + 1, j))]) {
        glue(vdiag(*h));
      }
    }
    rows.push_back(*cur);
  }
  // Horizontal-edge observables become degenerate (p,0) diagonal elements
  // between row strips.
  auto hdiag = [&](int r) -> std::optional<GuillotineTensor> {
    bool any = false;
    for (int i = 0; i < p; ++i) {
      if (on_edge[static_cast<std::size_t>(layout.h_edge(r, i))]) any = true;
    }
    if (!any) return std::nullopt;
    GuillotineTensor d = GuillotineTensor::zeros(sp, Shape{p, 0});
    std::vector<int> x;
    for (std::size_t xi = 0; xi < d.size(); ++xi) {
      decode_digits(xi, sp.s1, p, x);
      double v = 1.0;
      for (int i = 0; i < p; ++i) {
        if (const auto* h = on_edge[static_cast<std::size_t>(layout.h_edge(r, i))]) {
          v *= (*h)[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
        }
      }
      d[xi] = v;
    }
    return d;
  };
  std::optional<GuillotineTensor> total;
  auto glue_sn = [&](const GuillotineTensor& t) {
    total = total ? m_sn(*total, t) : t;
  };
  if (auto d = hdiag(0)) glue_sn(*d);
  for (int j = 0; j < q; ++j) {
    glue_sn(rows[static_cast<std::size_t>(j)]);
    if (auto d = hdiag(j + 1)) glue_sn(*d);
  }
  double num = pair_boundary(g, *total);
  double den = pair_boundary(g, partition_tensor(w, p, q));
  if (!(den > 0.0)) throw std::domain_error("zero partition function");
  return num / den;
}

double expectation_with_observables_bruteforce(
    const FaceWeight& w, const GuillotineTensor& g,
    const std::vector<EdgeObservable>& obs) {
  int p = g.shape().p, q = g.shape().q;
  EdgeLayout layout = make_layout(w, p, q);
  check_edge_bound(layout, layout.total());
  validate_observables(layout, obs);
  std::vector<char> free_edge(static_cast<std::size_t>(layout.total()), 1);
  std::vector<int> digits(static_cast<std::size_t>(layout.total()), 0);
  double num = 0.0, den = 0.0;
  enumerate_edge_configs(
      w, layout, free_edge, all_faces(p, q), digits,
      [&](const std::vector<int>& d, double prod) {
        double v = prod * g[layout.boundary_index(d)];
        den += v;
        for (const auto& o : obs) {
          v *= o.h[static_cast<std::size_t>(d[static_cast<std::size_t>(o.edge)])];
        }
        num += v;
      });
  if (!(den > 0.0)) throw std::domain_error("zero partition function");
  return num / den;
}

FaceWeight gauge_transform(const FaceWeight& w, const std::vector<double>& c_h,
                           const std::vector<double>& c_v) {
  StateSpaces sp = w.spaces();
  if (static_cast<int>(c_h.size()) != sp.s1 ||
      static_cast<int>(c_v.size()) != sp.s2) {
    throw std::invalid_argument("gauge table sizes must match the state sets");
  }
  for (double v : c_h)
    if (!(v > 0.0)) throw std::invalid_argument("gauge values must be > 0");
  for (double v : c_v)
    if (!(v > 0.0)) throw std::invalid_argument("gauge values must be > 0");
  GuillotineTensor t = w.tensor();
  for (int x = 0; x < sp.s1; ++x)
    for (int y = 0; y < sp.s1; ++y)
      for (int wv = 0; wv < sp.s2; ++wv)
        for (int z = 0; z < sp.s2; ++z) {
          std::size_t idx = ((std::size_t(x) * sp.s1 + y) * sp.s2 + wv) * sp.s2 + z;
          t[idx] *= c_h[static_cast<std::size_t>(y)] / c_h[static_cast<std::size_t>(x)] *
                    c_v[static_cast<std::size_t>(z)] / c_v[static_cast<std::size_t>(wv)];
        }
  return FaceWeight(t);
}

double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("total_variation: table sizes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace guill
