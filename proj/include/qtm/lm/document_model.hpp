#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/lm/background.hpp"

namespace qtm::lm {

enum class ModelKind { spud, dirichlet };

struct SpudConfig {
    double omega = 0.8;  // background weight, in [0, 1]
};

struct DirichletConfig {
    double mu = 1000.0;  // prior mass, >= 0
};

class DocumentModel;

/// A smoothed document model family bound to a background.
///
/// Both kinds share the form p(t|d) = w_d * c(t,d)/|d| + (1 - w_d) * b_t:
///   SPUD:      w_d = (1-omega) m_d / ((1-omega) m_d + omega m_c),  b_t = df_t / sum df
///   Dirichlet: w_d = |d| / (|d| + mu),                              b_t = ctf_t / tokens
/// which is the expectation of the SPUD Polya mixture and the usual Dirichlet-smoothed
/// estimate respectively. Immutable; scoring calls are safe from many threads.
class LanguageModel {
  public:
    static LanguageModel spud(std::shared_ptr<const BackgroundModel> background, SpudConfig config);
    static LanguageModel dirichlet(std::shared_ptr<const BackgroundModel> background, DirichletConfig config);

    ModelKind kind() const { return kind_; }
    double omega() const { return omega_; }
    double mu() const { return mu_; }
    const BackgroundModel& background() const { return *background_; }
    std::shared_ptr<const BackgroundModel> background_ptr() const { return background_; }

    /// Weight w_d of the document's own maximum-likelihood estimate.
    double topic_weight(std::uint32_t length, std::uint32_t distinct) const;
    double background_prob(TermId t) const;
    double expected_term_prob(std::uint32_t count, std::uint32_t length, std::uint32_t distinct, TermId t) const;
    double expected_term_prob(const corpus::DocumentRecord& doc, TermId t) const;

    DocumentModel document(const corpus::DocumentRecord& doc) const;

  private:
    LanguageModel(ModelKind kind, std::shared_ptr<const BackgroundModel> background, double omega, double mu);

    ModelKind kind_;
    std::shared_ptr<const BackgroundModel> background_;
    double omega_ = 0.0;
    double mu_ = 0.0;
};

/// One document viewed through a LanguageModel. Holds references; must not outlive either.
class DocumentModel {
  public:
    DocumentModel(const LanguageModel& model, const corpus::DocumentRecord& doc) : model_(&model), doc_(&doc) {}

    double expected_term_prob(TermId t) const { return model_->expected_term_prob(*doc_, t); }
    double topic_weight() const { return model_->topic_weight(doc_->token_count, doc_->distinct_count); }
    const corpus::DocumentRecord& record() const { return *doc_; }
    const LanguageModel& model() const { return *model_; }

  private:
    const LanguageModel* model_;
    const corpus::DocumentRecord* doc_;
};

/// Query as (term id, weight) pairs. Weights are counts for title queries and
/// probabilities for expanded queries.
struct WeightedQuery {
    int topic_id = 0;
    std::vector<std::pair<TermId, double>> terms;

    double total_weight() const;
};

/// Maps query terms onto the lexicon, dropping out-of-vocabulary terms and terms with zero
/// weight (with a warning for the former). Throws InputError("query unscorable") if nothing
/// survives.
WeightedQuery resolve_query(const corpus::Lexicon& lexicon, int topic_id, const std::map<std::string, double>& terms);
WeightedQuery resolve_query(const corpus::Lexicon& lexicon, const corpus::TopicQuery& query);

/// sum_t weight(t) * log p(t|d).
double query_log_likelihood(const WeightedQuery& query, const DocumentModel& doc);

}  // namespace qtm::lm
