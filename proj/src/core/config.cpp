#include "config.hpp"

#include <fstream>

#include "errors.hpp"

namespace advae {

RunConfig default_run_config(const std::string& dataset_name) {
    RunConfig config;
    config.dataset = dataset_name;
    Hyperparams& hp = config.hyper;
    hp.margin_mse = 2.0;
    hp.gamma = 0.001;
    hp.latent_dim = 0;  // from data dim
    hp.hidden_width = 0;
    hp.hidden_depth = 3;
    hp.mc_samples = 1000;
    hp.batch_size = 128;
    hp.max_iters = 20000;
    if (dataset_name == "letter") {
        hp.lambda = 0.003;
        hp.margin_kld = 40.0;
    } else if (dataset_name == "cardio") {
        hp.lambda = 0.1;
        hp.margin_kld = 20.0;
    } else if (dataset_name == "satellite") {
        hp.lambda = 0.01;
        hp.margin_kld = 40.0;
    } else if (dataset_name == "optical") {
        hp.lambda = 0.03;
        hp.margin_kld = 40.0;
    } else if (dataset_name == "pen") {
        hp.lambda = 0.01;
        hp.margin_kld = 20.0;
    } else {
        hp.lambda = 0.01;
        hp.margin_kld = 20.0;
    }
    config.train.batch_size = hp.batch_size;
    config.train.max_iters = hp.max_iters;
    config.train.optimizer.learning_rate = 0.001;
    config.train.seed = 1;
    config.split.seed = 1;
    return config;
}

static double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw UsageError("config: bad numeric value '" + value + "' for " + key);
    }
}

static std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw UsageError("config: bad integer value '" + value + "' for " + key);
    }
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "dataset") config.dataset = value;
    else if (key == "variant") config.variant = parse_variant(value);
    else if (key == "lambda") config.hyper.lambda = to_double(key, value);
    else if (key == "gamma") config.hyper.gamma = to_double(key, value);
    else if (key == "m_x" || key == "margin_mse") config.hyper.margin_mse = to_double(key, value);
    else if (key == "m_z" || key == "margin_kld") config.hyper.margin_kld = to_double(key, value);
    else if (key == "latent_dim") config.hyper.latent_dim = to_u64(key, value);
    else if (key == "L" || key == "mc_samples") config.hyper.mc_samples = to_u64(key, value);
    else if (key == "batch_size") {
        config.hyper.batch_size = to_u64(key, value);
        config.train.batch_size = config.hyper.batch_size;
    } else if (key == "max_iters") {
        config.hyper.max_iters = to_u64(key, value);
        config.train.max_iters = config.hyper.max_iters;
    } else if (key == "hidden_width" || key == "width") config.hyper.hidden_width = to_u64(key, value);
    else if (key == "hidden_depth" || key == "depth") config.hyper.hidden_depth = to_u64(key, value);
    else if (key == "seed") config.train.seed = to_u64(key, value);
    else if (key == "split_seed") config.split.seed = to_u64(key, value);
    else if (key == "score_seed") config.score_seed = to_u64(key, value);
    else if (key == "lr" || key == "learning_rate") config.train.optimizer.learning_rate = to_double(key, value);
    else if (key == "log_every") config.train.log_every = to_u64(key, value);
    else if (key == "train_fraction") config.split.train_fraction = to_double(key, value);
    else if (key == "contamination") config.split.contamination_ratio = to_double(key, value);
    else if (key == "alpha") {
        config.alpha = to_double(key, value);
        if (!(config.alpha > 0.0 && config.alpha < 1.0))
            throw UsageError("alpha must lie in (0, 1)");
    } else
        throw UsageError("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t");
        line = line.substr(begin, end - begin + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const std::size_t b = s.find_first_not_of(" \t");
            if (b == std::string::npos) { s.clear(); return; }
            const std::size_t e = s.find_last_not_of(" \t");
            s = s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        pairs.emplace_back(std::move(key), std::move(value));
    }
    return pairs;
}

RunConfig resolve_run_config(const std::string& dataset_name,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig config = default_run_config(dataset_name);
    for (const auto& [key, value] : overrides) apply_override(config, key, value);
    return config;
}

} // namespace advae
