// JSON model document: state spaces + face weight, with optional rope,
// morphism and eigen-constant sections.  One format shared by the CLI and
// the test fixtures.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "guill/eigen.hpp"
#include "guill/markov.hpp"
#include "guill/rope.hpp"

#include "json.hpp"

namespace guill {

struct ModelEigenData {
  double lambda = 1.0;
  double sigma_S = 1.0, sigma_N = 1.0, sigma_W = 1.0, sigma_E = 1.0;
  double kappa = 1.0;
};

struct ModelFile {
  StateSpaces spaces;
  std::vector<double> weight;  // s1^2 * s2^2 entries, ((x*s1+y)*s2+w)*s2+z
  std::optional<RopeRep> rope;
  std::optional<std::map<char, HalfStripMorphism>> halfstrip;
  std::optional<std::map<std::string, CornerMorphism>> corners;
  std::optional<ModelEigenData> eigen;

  FaceWeight face_weight() const;
  // Requires all of rope, morphisms and eigen sections; throws naming the
  // missing section otherwise.
  EigenStructure eigen_structure() const;
};

ModelFile parse_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelFile& m);
ModelFile load_model(const std::string& path);
void save_model(const ModelFile& m, const std::string& path);

}  // namespace guill
