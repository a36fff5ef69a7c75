#include "levershap/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

namespace {

constexpr int kMlpFormatVersion = 1;

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kLinear:
      return "linear";
  }
  throw UnsupportedModelError("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw LoadError("checkpoint: unknown activation '" + name + "'");
}

}  // namespace

std::string mlp_to_json(const Mlp& mlp) {
  json doc;
  doc["format_version"] = kMlpFormatVersion;
  doc["layer_sizes"] = mlp.layer_sizes();
  doc["hidden_activation"] = activation_name(mlp.hidden_activation());
  doc["output_activation"] = activation_name(mlp.output_activation());
  json weights = json::array();
  for (const auto& w : mlp.weights()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < w.cols(); ++j) row.push_back(w(i, j));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  doc["weights"] = std::move(weights);
  json biases = json::array();
  for (const auto& b : mlp.biases()) {
    json vec = json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) vec.push_back(b(i));
    biases.push_back(std::move(vec));
  }
  doc["biases"] = std::move(biases);
  return doc.dump();
}

Mlp mlp_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("checkpoint: parse failed: ") + e.what());
  }
  try {
    if (!doc.contains("format_version"))
      throw LoadError("checkpoint: missing format_version");
    if (doc["format_version"].get<int>() != kMlpFormatVersion)
      throw LoadError("checkpoint: unsupported format_version " +
                      doc["format_version"].dump());

    const auto sizes = doc.at("layer_sizes").get<std::vector<int>>();
    Mlp mlp(sizes, activation_from_name(doc.at("hidden_activation")),
            activation_from_name(doc.at("output_activation")), 0);

    const json& weights = doc.at("weights");
    const json& biases = doc.at("biases");
    if (weights.size() != mlp.weights().size() ||
        biases.size() != mlp.biases().size())
      throw LoadError("checkpoint: layer count disagrees with layer_sizes");
    for (std::size_t l = 0; l < weights.size(); ++l) {
      Eigen::MatrixXd& w = mlp.weights()[l];
      const json& rows = weights[l];
      if (static_cast<Eigen::Index>(rows.size()) != w.rows())
        throw LoadError("checkpoint: weight row count mismatch");
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const json& row = rows[i];
        if (static_cast<Eigen::Index>(row.size()) != w.cols())
          throw LoadError("checkpoint: weight column count mismatch");
        for (Eigen::Index j = 0; j < w.cols(); ++j)
          w(i, j) = row[j].get<double>();
      }
      Eigen::VectorXd& b = mlp.biases()[l];
      const json& vec = biases[l];
      if (static_cast<Eigen::Index>(vec.size()) != b.size())
        throw LoadError("checkpoint: bias length mismatch");
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = vec[i].get<double>();
    }
    return mlp;
  } catch (const json::exception& e) {
    throw LoadError(std::string("checkpoint: malformed record: ") + e.what());
  }
}

void save_mlp(const Mlp& mlp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << mlp_to_json(mlp) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

Mlp load_mlp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open checkpoint " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.empty()) throw LoadError("checkpoint " + path.string() + " is empty");
  return mlp_from_json(text);
}

}  // namespace levershap
