// Command-line driver: partition functions, consistency checks, eigen
// verification and correlation functions for lattice face-weight models.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "guill/eigen.hpp"
#include "guill/gibbs.hpp"
#include "guill/markov.hpp"
#include "guill/model_io.hpp"
#include "guill/rope.hpp"

namespace {

using namespace guill;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Matrix literal: "onesN" for the N x N all-ones matrix, or rows separated by
// ';' with entries separated by ','.
Eigen::MatrixXd parse_matrix(const std::string& text) {
  if (text.rfind("ones", 0) == 0) {
    int n = std::stoi(text.substr(4));
    if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    return Eigen::MatrixXd::Ones(n, n);
  }
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(';', pos);
    std::string row = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::vector<double> vals;
    std::size_t rp = 0;
    while (rp <= row.size()) {
      std::size_t rn = row.find(',', rp);
      std::string tok = row.substr(rp, rn == std::string::npos ? std::string::npos : rn - rp);
      if (!tok.empty()) vals.push_back(std::stod(tok));
      if (rn == std::string::npos) break;
      rp = rn + 1;
    }
    if (!vals.empty()) rows.push_back(vals);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix literal");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw std::invalid_argument("ragged matrix literal");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

struct BuiltinSpec {
  std::string kind;  // "hv" or "oblique"
  std::string a, b, c, d;
};

struct LoadedModel {
  FaceWeight w;
  std::optional<RopeRep> rope;
  std::optional<EigenStructure> es;
};

LoadedModel resolve_model(const std::string& model_path, const BuiltinSpec& builtin) {
  if (!builtin.kind.empty()) {
    if (builtin.kind == "hv") {
      Eigen::MatrixXd A = parse_matrix(builtin.a.empty() ? "ones2" : builtin.a);
      Eigen::MatrixXd B = parse_matrix(builtin.b.empty() ? "ones2" : builtin.b);
      EigenStructure es = build_hv_eigenstructure(A, B);
      return {hv_face_weight(A, B), es.rep, es};
    }
    if (builtin.kind == "oblique") {
      Eigen::MatrixXd C = parse_matrix(builtin.c.empty() ? "ones2" : builtin.c);
      Eigen::MatrixXd D = parse_matrix(builtin.d.empty() ? "ones2" : builtin.d);
      EigenStructure es = build_oblique_eigenstructure(C, D);
      return {oblique_face_weight(C, D), es.rep, es};
    }
    throw std::invalid_argument("unknown builtin model: " + builtin.kind);
  }
  if (model_path.empty()) {
    throw std::invalid_argument("either --model or --builtin is required");
  }
  ModelFile m = load_model(model_path);
  LoadedModel out{m.face_weight(), m.rope, std::nullopt};
  if (m.rope && m.halfstrip && m.corners && m.eigen) {
    out.es = m.eigen_structure();
  }
  return out;
}

std::vector<int> parse_offsets(const std::string& text) {
  std::vector<int> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    vals.push_back(std::stoi(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (vals.size() != 4) throw std::invalid_argument("--offsets needs n1,n2,m1,m2");
  return vals;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guillotine-calculus toolkit for 2D lattice Markov processes"};
  app.require_subcommand(1);

  std::string model_path;
  BuiltinSpec builtin;
  int p = 1, q = 1;
  std::string offsets_text;
  double tol = 1e-8;
  bool bruteforce = false;
  int L = 2, ustate = 0, vstate = 0;
  unsigned long seed = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", model_path, "path to a JSON model document");
    sub->add_option("--builtin", builtin.kind, "builtin solved model: hv or oblique");
    sub->add_option("--a", builtin.a, "horizontal coupling matrix (builtin hv)");
    sub->add_option("--b", builtin.b, "vertical coupling matrix (builtin hv)");
    sub->add_option("--c", builtin.c, "south-west coupling matrix (builtin oblique)");
    sub->add_option("--d", builtin.d, "east-north coupling matrix (builtin oblique)");
    sub->add_option("--seed", seed, "random seed (reserved for self-tests)");
  };

  CLI::App* cmd_partition = app.add_subcommand("partition", "boundary-paired partition function");
  add_common(cmd_partition);
  cmd_partition->add_option("--p", p, "rectangle width")->required();
  cmd_partition->add_option("--q", q, "rectangle height")->required();
  cmd_partition->add_flag("--bruteforce", bruteforce, "also print the enumeration oracle");

  CLI::App* cmd_consistency = app.add_subcommand("check-consistency", "marginal consistency of the boundary family");
  add_common(cmd_consistency);
  cmd_consistency->add_option("--p", p, "outer rectangle width")->required();
  cmd_consistency->add_option("--q", q, "outer rectangle height")->required();
  cmd_consistency->add_option("--offsets", offsets_text, "n1,n2,m1,m2 margins")->required();
  cmd_consistency->add_option("--tol", tol, "pass/fail threshold (default 1e-8)");

  CLI::App* cmd_eigen = app.add_subcommand("eigen-verify", "half-strip, corner and full-plane eigen residuals");
  add_common(cmd_eigen);
  cmd_eigen->add_option("--p", p, "verification grid width (default 3)");
  cmd_eigen->add_option("--q", q, "verification grid height (default 3)");

  CLI::App* cmd_correlate = app.add_subcommand("correlate", "segment marginals and two-point function on a line");
  add_common(cmd_correlate);
  cmd_correlate->add_option("--L", L, "segment length (default 2)");
  cmd_correlate->add_option("--u", ustate, "left endpoint edge state");
  cmd_correlate->add_option("--v", vstate, "right endpoint edge state");
  cmd_correlate->add_flag("--bruteforce", bruteforce, "cross-check on an L x 2 rectangle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_partition->parsed()) {
      LoadedModel m = resolve_model(model_path, builtin);
      GuillotineTensor zt = partition_tensor(m.w, p, q);
      GuillotineTensor g = m.rope ? eval_tensor(*m.rope, p, q)
                                  : uniform_family(m.w.spaces()).gen(p, q);
      double zbw = pair_boundary(g, zt);
      std::printf("Z_bw(%d,%d) = %s\n", p, q, fmt(zbw).c_str());
      if (bruteforce) {
        double oracle = pair_boundary(g, partition_tensor_bruteforce(m.w, p, q));
        double dev = std::abs(zbw - oracle) / std::max(std::abs(oracle), 1e-300);
        std::printf("oracle = %s\n", fmt(oracle).c_str());
        std::printf("relative_deviation = %s\n", fmt(dev).c_str());
      }
      return 0;
    }
    if (cmd_consistency->parsed()) {
      LoadedModel m = resolve_model(model_path, builtin);
      if (!m.rope) throw std::invalid_argument("check-consistency requires a rope section or builtin model");
      std::vector<int> off = parse_offsets(offsets_text);
      double tv = check_consistency(m.w, family_from_rep(*m.rope), p, q,
                                    Offsets{off[0], off[1], off[2], off[3]});
      bool pass = tv <= tol;
      std::printf("TV = %s\n", fmt(tv).c_str());
      std::printf("%s (threshold %s)\n", pass ? "PASS" : "FAIL", fmt(tol).c_str());
      return pass ? 0 : 1;
    }
    if (cmd_eigen->parsed()) {
      if (!cmd_eigen->count("--p")) p = 3;
      if (!cmd_eigen->count("--q")) q = 3;
      LoadedModel m = resolve_model(model_path, builtin);
      if (!m.es) {
        throw std::invalid_argument(
            "eigen-verify requires rope, morphisms and eigen sections (or a builtin model)");
      }
      std::printf("lambda = %s\n", fmt(m.es->lambda).c_str());
      for (char side : {'S', 'N', 'W', 'E'}) {
        double r = verify_halfstrip_eigen(m.w, side, m.es->rep,
                                          m.es->halfstrip.at(side), m.es->lambda, 2);
        std::printf("halfstrip_%c residual = %s\n", side, fmt(r).c_str());
      }
      for (const char* c : {"SW", "SE", "EN", "NW"}) {
        double sigma = (std::string(c) == "SW" || std::string(c) == "SE")
                           ? m.es->sigma_S
                           : m.es->sigma_N;
        double r = verify_corner_eigen(m.w, c, m.es->rep, m.es->corners.at(c),
                                       m.es->lambda, sigma);
        std::printf("corner_%s residual = %s\n", c, fmt(r).c_str());
      }
      double grid = verify_fullplane_eigen(*m.es, m.w, p, q);
      std::printf("fullplane grid deviation (up to %dx%d) = %s\n", p, q,
                  fmt(grid).c_str());
      return 0;
    }
    if (cmd_correlate->parsed()) {
      LoadedModel m = resolve_model(model_path, builtin);
      if (!m.es) {
        throw std::invalid_argument(
            "correlate requires rope, morphisms and eigen sections (or a builtin model)");
      }
      std::vector<double> law1 = marginal_segment_law(*m.es, 1);
      for (std::size_t x = 0; x < law1.size(); ++x) {
        std::printf("one_point[%zu] = %s\n", x, fmt(law1[x]).c_str());
      }
      if (L >= 2) {
        double tp = two_point(*m.es, ustate, vstate, L);
        std::printf("two_point(u=%d,v=%d,L=%d) = %s\n", ustate, vstate, L,
                    fmt(tp).c_str());
      }
      CorrelationLength cl = correlation_length(*m.es);
      if (cl.degenerate) {
        std::printf("correlation_length = degenerate: dimension 1\n");
      } else {
        std::printf("C_SN lambda1 = %s\n", fmt(cl.lambda1).c_str());
        std::printf("C_SN lambda2 = %s\n", fmt(cl.lambda2).c_str());
        if (cl.infinite) {
          std::printf("correlation_length = inf\n");
        } else {
          std::printf("correlation_length = %s\n", fmt(cl.value).c_str());
        }
      }
      if (bruteforce && L >= 2) {
        // Exact law on an L x 2 rectangle with the family boundary weight;
        // the middle-row segment marginal is compared with the line formula.
        GuillotineTensor g = eval_tensor(m.es->rep, L, 2);
        RectLaw law = exact_law(m.w, g);
        EdgeLayout layout{L, 2, m.w.spaces()};
        std::size_t nseg = ipow(std::size_t(m.w.spaces().s1), L);
        std::vector<double> seg(nseg, 0.0);
        std::vector<int> digits;
        for (std::size_t cfg = 0; cfg < law.prob.size(); ++cfg) {
          if (law.prob[cfg] == 0.0) continue;
          // Decode mixed-radix digits of the configuration.
          digits.assign(static_cast<std::size_t>(layout.total()), 0);
          std::size_t rest = cfg;
          for (int e = layout.total() - 1; e >= 0; --e) {
            int card = layout.cardinality(e);
            digits[static_cast<std::size_t>(e)] = static_cast<int>(rest % card);
            rest /= static_cast<std::size_t>(card);
          }
          std::size_t idx = 0;
          for (int i = 0; i < L; ++i) {
            idx = idx * m.w.spaces().s1 +
                  static_cast<std::size_t>(digits[static_cast<std::size_t>(layout.h_edge(1, i))]);
          }
          seg[idx] += law.prob[cfg];
        }
        std::vector<double> lawL = marginal_segment_law(*m.es, L);
        double worst = 0.0;
        for (std::size_t i = 0; i < nseg; ++i) {
          worst = std::max(worst, std::abs(seg[i] - lawL[i]));
        }
        std::printf("bruteforce max abs deviation (L x 2 middle row) = %s\n",
                    fmt(worst).c_str());
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::length_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
