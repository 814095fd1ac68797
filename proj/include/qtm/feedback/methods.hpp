#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/tokenizer.hpp"
#include "qtm/feedback/expansion.hpp"
#include "qtm/lm/background.hpp"
#include "qtm/lm/document_model.hpp"
#include "qtm/retrieval/search.hpp"

namespace qtm::feedback {

/// What every selection method needs besides the feedback set itself.
struct FeedbackContext {
    const corpus::Lexicon* lexicon = nullptr;
    const lm::BackgroundModel* background = nullptr;
    const corpus::Stoplist* stoplist = nullptr;  // optional extra filter on candidates
};

/// Sorted union of the feedback documents' terms, minus stopwords.
/// Throws InputError when the pool is empty.
std::vector<TermId> candidate_pool(const retrieval::FeedbackSet& feedback, const FeedbackContext& context);

/// p(topical | t, d) for a term with count c in a feedback document.
using TopicalFn = std::function<double(const retrieval::FeedbackDocument&, TermId, std::uint32_t)>;

TopicalFn spud_topical(const lm::BackgroundModel& background, double omega);
TopicalFn dirichlet_topical(const lm::BackgroundModel& background, double mu);

/// Raw score sum_d topical(t, d) w_d.
ExpansionModel build_qtm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                         const TopicalFn& topical, std::size_t terms, Method tag,
                         std::optional<double> threshold = std::nullopt);

/// Raw score sum_d p(t|d) w_d, with p(t|d) = c/|d| when `smoothing` is null and the model's
/// expected term probability otherwise.
ExpansionModel build_rm1(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                         const lm::LanguageModel* smoothing, std::size_t terms);

struct FitTrace {
    int iterations = 0;
    bool converged = false;
    std::vector<double> log_likelihood;
};

/// Topic multinomial of the pooled feedback counts under a fixed collection component of
/// weight lambda. Document weights are ignored. Throws ConfigError unless 0 <= lambda < 1.
ExpansionModel build_smm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context, double lambda,
                         std::size_t terms, FitTrace* trace = nullptr);

/// DCM parameters fitted to the feedback documents; raw score is alpha_t. Document weights
/// are ignored. With a single document the scale is unidentifiable: the fit stops at the cap
/// with a warning and the ranking follows the term proportions.
ExpansionModel build_pdcm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context, std::size_t terms,
                          FitTrace* trace = nullptr);

inline constexpr double kSmmTolerance = 1e-8;
inline constexpr int kSmmMaxIterations = 500;
inline constexpr double kDcmTolerance = 1e-7;
inline constexpr int kDcmMaxIterations = 1000;

}  // namespace qtm::feedback
