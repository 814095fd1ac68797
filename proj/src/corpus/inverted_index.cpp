#include "qtm/corpus/inverted_index.hpp"

#include <algorithm>
#include <unordered_set>

namespace qtm::corpus {

Lexicon::Lexicon(std::vector<std::string> terms) : terms_(std::move(terms)) {
    ids_.reserve(terms_.size());
    for (TermId id = 0; id < terms_.size(); ++id) {
        if (!ids_.emplace(terms_[id], id).second) {
            throw InputError("duplicate lexicon term '" + terms_[id] + "'");
        }
    }
}

std::optional<TermId> Lexicon::find(std::string_view term) const {
    const auto it = ids_.find(std::string(term));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

TermId Lexicon::add(std::string term) {
    if (auto existing = find(term)) return *existing;
    const auto id = static_cast<TermId>(terms_.size());
    ids_.emplace(term, id);
    terms_.push_back(std::move(term));
    return id;
}

std::uint32_t DocumentRecord::count(TermId term) const {
    const auto it = std::lower_bound(terms.begin(), terms.end(), term,
                                     [](const TermCount& tc, TermId t) { return tc.term < t; });
    return (it != terms.end() && it->term == term) ? it->count : 0;
}

InvertedIndex InvertedIndex::build(std::vector<Document> documents) {
    if (documents.empty()) throw InputError("empty corpus");

    std::vector<std::string> vocabulary;
    {
        std::unordered_set<std::string_view> seen;
        std::unordered_set<std::string_view> terms;
        for (const auto& doc : documents) {
            if (!seen.insert(doc.doc_id).second) {
                throw InputError("duplicate doc_id '" + doc.doc_id + "'");
            }
            for (const auto& [term, count] : doc.term_counts) terms.insert(term);
        }
        vocabulary.assign(terms.begin(), terms.end());
    }
    std::sort(vocabulary.begin(), vocabulary.end());
    Lexicon lexicon(std::move(vocabulary));

    const auto vocab_size = lexicon.size();
    std::vector<std::vector<Posting>> postings(vocab_size);
    CollectionStats stats;
    stats.df.assign(vocab_size, 0);
    stats.ctf.assign(vocab_size, 0);

    std::vector<DocumentRecord> records;
    records.reserve(documents.size());
    for (auto& doc : documents) {
        DocumentRecord record;
        record.doc_id = std::move(doc.doc_id);
        record.token_count = doc.token_count;
        record.distinct_count = doc.distinct_count;
        record.terms.reserve(doc.term_counts.size());
        const auto id = static_cast<DocId>(records.size());
        // term_counts is ordered by string, which matches lexicon id order.
        for (const auto& [term, count] : doc.term_counts) {
            const TermId t = *lexicon.find(term);
            record.terms.push_back({t, count});
            if (!record.empty()) {
                postings[t].push_back({id, count});
                ++stats.df[t];
                stats.ctf[t] += count;
            }
        }
        if (!record.empty()) {
            ++stats.doc_count;
            stats.token_total += record.token_count;
        }
        records.push_back(std::move(record));
    }
    for (auto df : stats.df) stats.df_total += df;
    return InvertedIndex(std::move(lexicon), std::move(postings), std::move(records), std::move(stats));
}

InvertedIndex::InvertedIndex(Lexicon lexicon, std::vector<std::vector<Posting>> postings,
                             std::vector<DocumentRecord> documents, CollectionStats stats,
                             std::map<std::string, std::string> metadata)
    : lexicon_(std::move(lexicon)),
      postings_(std::move(postings)),
      documents_(std::move(documents)),
      stats_(std::move(stats)),
      metadata_(std::move(metadata)) {
    doc_ids_.reserve(documents_.size());
    for (DocId id = 0; id < documents_.size(); ++id) doc_ids_.emplace(documents_[id].doc_id, id);
}

std::optional<DocId> InvertedIndex::find_document(std::string_view doc_id) const {
    const auto it = doc_ids_.find(std::string(doc_id));
    if (it == doc_ids_.end()) return std::nullopt;
    return it->second;
}

bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
    return a.lexicon_ == b.lexicon_ && a.postings_ == b.postings_ && a.documents_ == b.documents_ &&
           a.stats_ == b.stats_ && a.metadata_ == b.metadata_;
}

}  // namespace qtm::corpus
