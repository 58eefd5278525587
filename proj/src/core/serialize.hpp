#pragma once

#include <string>

#include "data.hpp"
#include "model.hpp"

namespace advae {

// A trained model plus everything needed to score new data exactly as at
// training time: the fitted scaler, the split spec, and the seeds.
struct ModelArtifact {
    AdvaeModel model;
    Scaler scaler;
    SplitSpec split;
    std::string dataset_name;
    std::uint64_t train_seed = 0;
    std::uint64_t score_seed = 0;
};

void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

} // namespace advae
