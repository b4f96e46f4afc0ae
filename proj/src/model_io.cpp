#include "guill/model_io.hpp"

#include <fstream>

namespace guill {

using nlohmann::json;

namespace {

std::vector<double> as_doubles(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(what + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd as_matrix(const json& j, int rows, int cols,
                          const std::string& what) {
  std::vector<double> flat = as_doubles(j, what);
  if (static_cast<int>(flat.size()) != rows * cols) {
    throw std::invalid_argument(what + " must have " + std::to_string(rows) +
                                "*" + std::to_string(cols) + " = " +
                                std::to_string(rows * cols) + " entries, got " +
                                std::to_string(flat.size()));
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = flat[static_cast<std::size_t>(i * cols + c)];
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) arr.push_back(m(i, c));
  return arr;
}

std::vector<Eigen::MatrixXd> as_family(const json& j, int count, int d,
                                       const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != count) {
    throw std::invalid_argument(what + " must be an array of " +
                                std::to_string(count) + " matrices");
  }
  std::vector<Eigen::MatrixXd> fam;
  for (int i = 0; i < count; ++i) {
    fam.push_back(as_matrix(j[static_cast<std::size_t>(i)], d, d,
                            what + "[" + std::to_string(i) + "]"));
  }
  return fam;
}

json family_to_json(const std::vector<Eigen::MatrixXd>& fam) {
  json arr = json::array();
  for (const auto& m : fam) arr.push_back(matrix_to_json(m));
  return arr;
}

}  // namespace

FaceWeight ModelFile::face_weight() const {
  std::size_t want = static_cast<std::size_t>(spaces.s1) * spaces.s1 *
                     spaces.s2 * spaces.s2;
  if (weight.size() != want) {
    throw std::invalid_argument("weight array has " +
                                std::to_string(weight.size()) +
                                " entries, expected s1^2*s2^2 = " +
                                std::to_string(want));
  }
  return FaceWeight(GuillotineTensor(spaces, Shape{1, 1}, weight));
}

EigenStructure ModelFile::eigen_structure() const {
  if (!rope) throw std::invalid_argument("model is missing the \"rope\" section");
  if (!halfstrip || !corners) {
    throw std::invalid_argument("model is missing the \"morphisms\" section");
  }
  if (!eigen) throw std::invalid_argument("model is missing the \"eigen\" section");
  EigenStructure es;
  es.rep = *rope;
  es.halfstrip = *halfstrip;
  es.corners = *corners;
  es.lambda = eigen->lambda;
  es.sigma_S = eigen->sigma_S;
  es.sigma_N = eigen->sigma_N;
  es.sigma_W = eigen->sigma_W;
  es.sigma_E = eigen->sigma_E;
  es.kappa = eigen->kappa;
  return es;
}

ModelFile parse_model(const json& doc) {
  ModelFile m;
  if (!doc.contains("s1") || !doc.contains("s2")) {
    throw std::invalid_argument("model must define s1 and s2");
  }
  m.spaces.s1 = doc.at("s1").get<int>();
  m.spaces.s2 = doc.at("s2").get<int>();
  if (m.spaces.s1 < 1 || m.spaces.s2 < 1) {
    throw std::invalid_argument("s1 and s2 must be >= 1");
  }
  if (!doc.contains("weight")) throw std::invalid_argument("model must define weight");
  m.weight = as_doubles(doc.at("weight"), "weight");
  m.face_weight();  // validates length and nonnegativity

  if (doc.contains("rope")) {
    const json& r = doc.at("rope");
    const json& dims = r.at("dims");
    int dS = dims.at("S").get<int>(), dN = dims.at("N").get<int>();
    int dW = dims.at("W").get<int>(), dE = dims.at("E").get<int>();
    RopeRep rep;
    rep.spaces = m.spaces;
    rep.A_S = as_family(r.at("A_S"), m.spaces.s1, dS, "rope.A_S");
    rep.A_N = as_family(r.at("A_N"), m.spaces.s1, dN, "rope.A_N");
    rep.A_W = as_family(r.at("A_W"), m.spaces.s2, dW, "rope.A_W");
    rep.A_E = as_family(r.at("A_E"), m.spaces.s2, dE, "rope.A_E");
    rep.U_WS = as_matrix(r.at("U_WS"), dW, dS, "rope.U_WS");
    rep.U_SE = as_matrix(r.at("U_SE"), dS, dE, "rope.U_SE");
    rep.U_EN = as_matrix(r.at("U_EN"), dE, dN, "rope.U_EN");
    rep.U_NW = as_matrix(r.at("U_NW"), dN, dW, "rope.U_NW");
    rep.validate();
    m.rope = rep;
  }
  if (doc.contains("morphisms")) {
    if (!m.rope) {
      throw std::invalid_argument("morphisms section requires a rope section");
    }
    const json& mo = doc.at("morphisms");
    std::map<char, HalfStripMorphism> hs;
    const json& hj = mo.at("halfstrip");
    for (char side : {'S', 'N', 'W', 'E'}) {
      std::string key(1, side);
      bool horizontal = side == 'S' || side == 'N';
      int d = side == 'S'   ? m.rope->dS()
              : side == 'N' ? m.rope->dN()
              : side == 'W' ? m.rope->dW()
                            : m.rope->dE();
      int s = horizontal ? m.spaces.s2 : m.spaces.s1;
      HalfStripMorphism phi;
      phi.side = side;
      phi.s = s;
      phi.d = d;
      phi.map = as_matrix(hj.at(key), d * d, s * d * s * d,
                          "morphisms.halfstrip." + key);
      hs.emplace(side, phi);
    }
    std::map<std::string, CornerMorphism> cs;
    const json& cj = mo.at("corner");
    auto corner_dims = [&](const std::string& c) -> std::pair<int, int> {
      if (c == "SW") return {m.rope->dW(), m.rope->dS()};
      if (c == "SE") return {m.rope->dS(), m.rope->dE()};
      if (c == "EN") return {m.rope->dE(), m.rope->dN()};
      return {m.rope->dN(), m.rope->dW()};
    };
    for (const char* c : {"SW", "SE", "EN", "NW"}) {
      auto [da, db] = corner_dims(c);
      // All four corner families are indexed by the horizontal state set.
      int count = m.spaces.s1;
      CornerMorphism k;
      k.corner = c;
      k.da = da;
      k.db = db;
      const json& kj = cj.at(c).at("K");
      if (static_cast<int>(kj.size()) != count) {
        throw std::invalid_argument(std::string("morphisms.corner.") + c +
                                    ".K must have one map per edge state");
      }
      for (const auto& mj : kj) {
        k.K.push_back(as_matrix(mj, da * db, da * db,
                                std::string("morphisms.corner.") + c + ".K"));
      }
      cs.emplace(c, k);
    }
    m.halfstrip = hs;
    m.corners = cs;
  }
  if (doc.contains("eigen")) {
    const json& e = doc.at("eigen");
    ModelEigenData d;
    d.lambda = e.at("lambda").get<double>();
    const json& s = e.at("sigma");
    d.sigma_S = s.at("S").get<double>();
    d.sigma_N = s.at("N").get<double>();
    d.sigma_W = s.at("W").get<double>();
    d.sigma_E = s.at("E").get<double>();
    d.kappa = e.at("kappa").get<double>();
    m.eigen = d;
  }
  return m;
}

json model_to_json(const ModelFile& m) {
  json doc;
  doc["s1"] = m.spaces.s1;
  doc["s2"] = m.spaces.s2;
  doc["weight"] = m.weight;
  if (m.rope) {
    json r;
    r["dims"] = {{"S", m.rope->dS()},
                 {"N", m.rope->dN()},
                 {"W", m.rope->dW()},
                 {"E", m.rope->dE()}};
    r["A_S"] = family_to_json(m.rope->A_S);
    r["A_N"] = family_to_json(m.rope->A_N);
    r["A_W"] = family_to_json(m.rope->A_W);
    r["A_E"] = family_to_json(m.rope->A_E);
    r["U_WS"] = matrix_to_json(m.rope->U_WS);
    r["U_SE"] = matrix_to_json(m.rope->U_SE);
    r["U_EN"] = matrix_to_json(m.rope->U_EN);
    r["U_NW"] = matrix_to_json(m.rope->U_NW);
    doc["rope"] = r;
  }
  if (m.halfstrip && m.corners) {
    json mo;
    for (const auto& [side, phi] : *m.halfstrip) {
      mo["halfstrip"][std::string(1, side)] = matrix_to_json(phi.map);
    }
    for (const auto& [c, k] : *m.corners) {
      mo["corner"][c]["K"] = family_to_json(k.K);
    }
    doc["morphisms"] = mo;
  }
  if (m.eigen) {
    doc["eigen"] = {{"lambda", m.eigen->lambda},
                    {"sigma",
                     {{"S", m.eigen->sigma_S},
                      {"N", m.eigen->sigma_N},
                      {"W", m.eigen->sigma_W},
                      {"E", m.eigen->sigma_E}}},
                    {"kappa", m.eigen->kappa}};
  }
  return doc;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("failed to parse " + path + ": " + e.what());
  }
  return parse_model(doc);
}

void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(m).dump(2) << "\n";
}

}  // namespace guill
