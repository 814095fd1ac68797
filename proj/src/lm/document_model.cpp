#include "qtm/lm/document_model.hpp"

#include <cmath>

namespace qtm::lm {

LanguageModel::LanguageModel(ModelKind kind, std::shared_ptr<const BackgroundModel> background, double omega,
                             double mu)
    : kind_(kind), background_(std::move(background)), omega_(omega), mu_(mu) {
    if (!background_) throw ConfigError("language model needs a background model");
}

LanguageModel LanguageModel::spud(std::shared_ptr<const BackgroundModel> background, SpudConfig config) {
    if (!(config.omega >= 0.0 && config.omega <= 1.0)) throw ConfigError("omega must lie in [0, 1]");
    if (config.omega > 0.0 && !(background && background->mass > 0.0)) {
        throw ConfigError("SPUD smoothing needs a positive background mass m_c");
    }
    return LanguageModel(ModelKind::spud, std::move(background), config.omega, 0.0);
}

LanguageModel LanguageModel::dirichlet(std::shared_ptr<const BackgroundModel> background, DirichletConfig config) {
    if (!(config.mu >= 0.0) || !std::isfinite(config.mu)) throw ConfigError("mu must be a finite value >= 0");
    return LanguageModel(ModelKind::dirichlet, std::move(background), 0.0, config.mu);
}

double LanguageModel::topic_weight(std::uint32_t length, std::uint32_t distinct) const {
    if (length == 0) return 0.0;
    if (kind_ == ModelKind::spud) {
        const double topic = (1.0 - omega_) * distinct;
        const double bg = omega_ * background_->mass;
        return topic / (topic + bg);
    }
    return length / (length + mu_);
}

double LanguageModel::background_prob(TermId t) const {
    return kind_ == ModelKind::spud ? background_->proportion(t) : background_->ml(t);
}

double LanguageModel::expected_term_prob(std::uint32_t count, std::uint32_t length, std::uint32_t distinct,
                                         TermId t) const {
    const double w = topic_weight(length, distinct);
    const double ml = length ? static_cast<double>(count) / length : 0.0;
    return w * ml + (1.0 - w) * background_prob(t);
}

double LanguageModel::expected_term_prob(const corpus::DocumentRecord& doc, TermId t) const {
    return expected_term_prob(doc.count(t), doc.token_count, doc.distinct_count, t);
}

DocumentModel LanguageModel::document(const corpus::DocumentRecord& doc) const { return DocumentModel(*this, doc); }

double WeightedQuery::total_weight() const {
    double total = 0.0;
    for (const auto& [t, w] : terms) total += w;
    return total;
}

WeightedQuery resolve_query(const corpus::Lexicon& lexicon, int topic_id, const std::map<std::string, double>& terms) {
    WeightedQuery q;
    q.topic_id = topic_id;
    for (const auto& [term, weight] : terms) {
        if (weight == 0.0) continue;
        if (auto id = lexicon.find(term)) {
            q.terms.emplace_back(*id, weight);
        } else {
            warn("topic " + std::to_string(topic_id) + ": dropping out-of-vocabulary term '" + term + "'");
        }
    }
    if (q.terms.empty()) throw InputError("topic " + std::to_string(topic_id) + ": query unscorable");
    return q;
}

WeightedQuery resolve_query(const corpus::Lexicon& lexicon, const corpus::TopicQuery& query) {
    std::map<std::string, double> weights;
    for (const auto& [term, count] : query.terms) weights.emplace(term, count);
    return resolve_query(lexicon, query.topic_id, weights);
}

double query_log_likelihood(const WeightedQuery& query, const DocumentModel& doc) {
    double score = 0.0;
    for (const auto& [t, w] : query.terms) score += w * std::log(doc.expected_term_prob(t));
    return score;
}

}  // namespace qtm::lm
