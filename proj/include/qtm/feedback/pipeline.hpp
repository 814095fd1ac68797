#pragma once

#include <cstddef>
#include <optional>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/trec.hpp"
#include "qtm/feedback/expansion.hpp"
#include "qtm/feedback/methods.hpp"
#include "qtm/lm/document_model.hpp"
#include "qtm/retrieval/search.hpp"

namespace qtm::feedback {

struct FeedbackParams {
    Method method = Method::none;
    std::size_t documents = 10;  // |F|
    std::size_t terms = 30;      // |T|
    double pi = 0.5;
    double smm_lambda = 0.2;
    // Smoothing of the feedback representation. Unset: qtm_spud/qtm_dir reuse the retrieval
    // omega/mu, rm3 uses the unsmoothed c/|d|.
    std::optional<double> omega;
    std::optional<double> mu;
    std::optional<double> topical_threshold;
};

/// Validates ranges; throws ConfigError naming the offending parameter.
void validate(const FeedbackParams& params);

/// Term selection for one feedback set. `retrieval` supplies the background and the default
/// smoothing. Method::none is rejected.
ExpansionModel expand(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                      const lm::LanguageModel& retrieval, const FeedbackParams& params);

struct FeedbackRun {
    retrieval::Ranking first_pass;
    std::optional<ExpansionModel> expansion;  // empty for Method::none
    ExpandedQuery query;
    retrieval::Ranking ranking;
};

/// First pass, feedback, interpolation and second pass for one topic. With Method::none the
/// first pass is the result.
FeedbackRun run_feedback(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                         const corpus::TopicQuery& topic, const FeedbackParams& params, std::size_t depth,
                         const corpus::Stoplist* stoplist = nullptr);

/// Second pass for an already built expansion (sweeps reuse one model across pi and |T|).
retrieval::Ranking search_expanded(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                                   const ExpandedQuery& query, std::size_t depth);

}  // namespace qtm::feedback
