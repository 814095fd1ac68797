#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtm/eval/sweep.hpp"
#include "qtm/feedback/pipeline.hpp"
#include "qtm/lm/document_model.hpp"

namespace qtm::cli {

/// Everything an experiment depends on. Stored as flat `key = value` text; the keys are
/// also the long command-line flags, so a flag given on the command line overrides the
/// same key from a config file.
struct ExperimentConfig {
    std::vector<std::string> docs;
    std::string index;
    std::string topics;
    std::string qrels;
    std::string stoplist;  // empty: the built-in list

    lm::ModelKind model = lm::ModelKind::spud;
    double omega = 0.8;
    double mu = 1000.0;
    std::optional<double> mc;  // unset: the value stored in the index

    feedback::Method method = feedback::Method::none;
    double pi = 0.5;
    std::size_t fb_docs = 10;
    std::size_t fb_terms = 30;
    double smm_lambda = 0.2;
    std::optional<double> fb_omega;
    std::optional<double> fb_mu;
    std::optional<double> topical_threshold;
    std::size_t depth = 1000;

    std::vector<double> grid_pi;
    std::vector<std::size_t> grid_docs;
    std::vector<std::size_t> grid_terms;
    std::vector<std::optional<double>> grid_smoothing;

    std::string run;
    std::string out;
    std::string tag = "qtmlab";
    std::string collection = "collection";
    std::uint64_t seed = 1;
    unsigned threads = 0;

    /// Sets one key from its text form. Throws ConfigError naming the key.
    void set(std::string_view key, std::string_view value);
    /// Every key with its current value, one `key = value` line each, in a fixed order.
    std::string to_text() const;
    static ExperimentConfig from_text(std::string_view text);
    static ExperimentConfig from_file(const std::filesystem::path& path);

    /// Range checks of every parameter; throws ConfigError naming the key.
    void validate() const;

    feedback::FeedbackParams feedback_params() const;
    /// The configured grid; empty axes fall back to the defaults, except that smoothing
    /// defaults to the single automatic value.
    eval::SweepGrid sweep_grid() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigKey {
    std::string_view name;
    std::string_view help;
};

/// All keys accepted by ExperimentConfig::set, in to_text order.
const std::vector<ConfigKey>& config_keys();

}  // namespace qtm::cli
