#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/tokenizer.hpp"
#include "qtm/corpus/trec.hpp"
#include "qtm/eval/cross_validation.hpp"
#include "qtm/feedback/pipeline.hpp"
#include "qtm/lm/document_model.hpp"

namespace qtm::eval {

struct GridPoint {
    double pi = 0.0;
    std::size_t documents = 0;
    std::size_t terms = 0;
    std::optional<double> smoothing;  // feedback omega or mu, depending on the method
};

/// Axes are nested smoothing > |F| > |T| > pi, pi varying fastest.
struct SweepGrid {
    std::vector<double> pi;
    std::vector<std::size_t> documents;
    std::vector<std::size_t> terms;
    std::vector<std::optional<double>> smoothing{std::nullopt};

    /// pi 0.1..0.9, |F| {5,10,20,30,50}, |T| {10,20,30,50,75,100}.
    static SweepGrid defaults();
    std::size_t size() const;
    GridPoint at(std::size_t index) const;
    /// Throws ConfigError when an axis is empty.
    void validate() const;
};

/// Applies a grid point to a parameter set; the smoothing value goes to omega or mu
/// according to the method and the retrieval model.
feedback::FeedbackParams apply(const feedback::FeedbackParams& base, const GridPoint& point, lm::ModelKind kind);

struct SweepResult {
    SweepGrid grid;
    std::vector<int> topics;
    Eigen::MatrixXd ap;    // grid points x topics
    Eigen::MatrixXd ndcg;
    CrossValidation cv;
};

/// Evaluates every grid point on every judged topic, then cross-validates. Method::none
/// collapses the grid to a single point. Results do not depend on `threads`.
SweepResult run_sweep(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                      const std::vector<corpus::TopicQuery>& topics, const corpus::Judgments& judgments,
                      const feedback::FeedbackParams& base, const SweepGrid& grid,
                      std::size_t depth = kEvaluationDepth, const corpus::Stoplist* stoplist = nullptr,
                      unsigned threads = 0);

struct SummaryRow {
    std::string method;
    std::string collection;
    double map = 0.0;
    double ndcg10 = 0.0;
};

/// Methods down, collections across, cells "MAP (NDCG@10)" with 3 decimals.
void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace qtm::eval
