#pragma once

#include <optional>
#include <string>

#include "core/features.hpp"
#include "core/forest.hpp"
#include "core/svm.hpp"

namespace cxrsev {

enum class ClassifierKind { Svm, Forest };

const char* classifier_name(ClassifierKind kind);

// A trained classifier together with the standardizer fitted on its training
// split, so prediction takes raw (unstandardized) feature vectors.
struct TrainedModel {
    ClassifierKind kind = ClassifierKind::Svm;
    std::optional<Standardizer> standardizer;
    MultiClassSvm svm;
    ForestModel forest;

    std::size_t input_dim() const;
    int predict(std::span<const double> raw_features) const;
};

// JSON round-trips are exact: nlohmann serializes doubles with a
// shortest-round-trip representation, so reloaded models predict
// bit-identically.
void save_model_json(const TrainedModel& model, const std::string& path);
TrainedModel load_model_json(const std::string& path);

} // namespace cxrsev
