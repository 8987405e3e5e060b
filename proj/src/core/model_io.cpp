#include "core/model_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace cxrsev {

using nlohmann::json;

const char* classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::Svm ? "svm" : "rf";
}

std::size_t TrainedModel::input_dim() const {
    if (standardizer)
        return standardizer->mean.size();
    return kind == ClassifierKind::Svm ? svm.dim : forest.dim;
}

int TrainedModel::predict(std::span<const double> raw_features) const {
    if (!standardizer) {
        return kind == ClassifierKind::Svm ? svm_predict(svm, raw_features)
                                           : rf_predict(forest, raw_features);
    }
    require(raw_features.size() == standardizer->mean.size(), ErrorKind::InvalidArgument,
            "input dimension does not match the model's standardizer");
    std::vector<double> z(raw_features.size());
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double scale = standardizer->stdev[c] < 1e-12 ? 0.0 : 1.0 / standardizer->stdev[c];
        z[c] = (raw_features[c] - standardizer->mean[c]) * scale;
    }
    return kind == ClassifierKind::Svm ? svm_predict(svm, z) : rf_predict(forest, z);
}

namespace {

json matrix_to_json(const FeatureMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (double v : m.row(r))
            row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

FeatureMatrix matrix_from_json(const json& rows, std::size_t cols_hint) {
    FeatureMatrix m(0, cols_hint);
    for (const auto& row : rows) {
        std::vector<double> values;
        values.reserve(row.size());
        for (const auto& v : row)
            values.push_back(v.get<double>());
        m.append_row(values);
    }
    return m;
}

json svm_to_json(const MultiClassSvm& m) {
    json j;
    j["classes"] = m.classes;
    j["dim"] = m.dim;
    j["pairs"] = json::array();
    for (const auto& pair : m.pairs) {
        json p;
        p["class_a"] = pair.class_a;
        p["class_b"] = pair.class_b;
        p["C"] = pair.model.C;
        p["gamma"] = pair.model.gamma;
        p["bias"] = pair.model.bias;
        p["converged"] = pair.model.converged;
        p["dual_coef"] = pair.model.dual_coef;
        p["support_vectors"] = matrix_to_json(pair.model.support_vectors);
        j["pairs"].push_back(std::move(p));
    }
    return j;
}

MultiClassSvm svm_from_json(const json& j) {
    MultiClassSvm m;
    m.classes = j.at("classes").get<std::vector<int>>();
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& p : j.at("pairs")) {
        PairwiseSvm pair;
        pair.class_a = p.at("class_a").get<int>();
        pair.class_b = p.at("class_b").get<int>();
        pair.model.C = p.at("C").get<double>();
        pair.model.gamma = p.at("gamma").get<double>();
        pair.model.bias = p.at("bias").get<double>();
        pair.model.converged = p.at("converged").get<bool>();
        pair.model.dual_coef = p.at("dual_coef").get<std::vector<double>>();
        pair.model.support_vectors = matrix_from_json(p.at("support_vectors"), m.dim);
        m.pairs.push_back(std::move(pair));
    }
    return m;
}

json forest_to_json(const ForestModel& m) {
    json j;
    j["n_classes"] = m.n_classes;
    j["dim"] = m.dim;
    j["n_trees"] = m.params.n_trees;
    j["max_depth"] = m.params.max_depth;
    j["m_try"] = m.params.m_try;
    j["min_samples_leaf"] = m.params.min_samples_leaf;
    j["seed"] = m.params.seed;
    j["trees"] = json::array();
    for (const auto& tree : m.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            if (n.feature < 0) {
                nodes.push_back(json{{"leaf", n.label}});
            } else {
                nodes.push_back(json{{"feature", n.feature},
                                     {"threshold", n.threshold},
                                     {"left", n.left},
                                     {"right", n.right}});
            }
        }
        j["trees"].push_back(std::move(nodes));
    }
    return j;
}

ForestModel forest_from_json(const json& j) {
    ForestModel m;
    m.n_classes = j.at("n_classes").get<int>();
    m.dim = j.at("dim").get<std::size_t>();
    m.params.n_trees = j.at("n_trees").get<int>();
    m.params.max_depth = j.at("max_depth").get<int>();
    m.params.m_try = j.at("m_try").get<int>();
    m.params.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    m.params.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& nodes : j.at("trees")) {
        DecisionTree tree;
        for (const auto& n : nodes) {
            TreeNode node;
            if (n.contains("leaf")) {
                node.label = n.at("leaf").get<int>();
            } else {
                node.feature = n.at("feature").get<int>();
                node.threshold = n.at("threshold").get<double>();
                node.left = n.at("left").get<int>();
                node.right = n.at("right").get<int>();
            }
            tree.nodes.push_back(node);
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

} // namespace

void save_model_json(const TrainedModel& model, const std::string& path) {
    json j;
    j["format"] = "cxrsev-model";
    j["version"] = 1;
    j["kind"] = classifier_name(model.kind);
    if (model.standardizer) {
        j["standardizer"] = {{"mean", model.standardizer->mean},
                             {"stdev", model.standardizer->stdev}};
    }
    if (model.kind == ClassifierKind::Svm)
        j["svm"] = svm_to_json(model.svm);
    else
        j["rf"] = forest_to_json(model.forest);

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot write model file: " + path);
    out << j.dump(2) << '\n';
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

TrainedModel load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::NotFound, "model file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::CorruptData, "invalid model JSON (" + std::string(e.what()) + "): " + path);
    }
    TrainedModel model;
    try {
        require(j.at("format").get<std::string>() == "cxrsev-model", ErrorKind::CorruptData,
                "not a model file: " + path);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "svm")
            model.kind = ClassifierKind::Svm;
        else if (kind == "rf")
            model.kind = ClassifierKind::Forest;
        else
            fail(ErrorKind::CorruptData, "unknown classifier kind '" + kind + "': " + path);
        if (j.contains("standardizer")) {
            Standardizer s;
            s.mean = j["standardizer"].at("mean").get<std::vector<double>>();
            s.stdev = j["standardizer"].at("stdev").get<std::vector<double>>();
            model.standardizer = std::move(s);
        }
        if (model.kind == ClassifierKind::Svm)
            model.svm = svm_from_json(j.at("svm"));
        else
            model.forest = forest_from_json(j.at("rf"));
    } catch (const json::exception& e) {
        fail(ErrorKind::CorruptData, "invalid model JSON (" + std::string(e.what()) + "): " + path);
    }
    return model;
}

} // namespace cxrsev
